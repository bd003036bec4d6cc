use thiserror::Error;

use crate::geometry::CellId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("domain has no root cells")]
    EmptyDomain,
    #[error("depth {depth} exceeds the supported lattice depth {limit}")]
    DepthLimit { depth: u32, limit: u32 },
    #[error("slit is invalid: {0}")]
    InvalidSlit(String),
    #[error("cell {0} is not a current leaf")]
    NotALeaf(CellId),
    #[error("refinement beyond max depth {max_depth} requested for cells {cells:?}")]
    MaxDepthExceeded { max_depth: u32, cells: Vec<CellId> },
    #[error("point ({x}, {y}) lies outside the meshed domain")]
    PointOutside { x: f64, y: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error("degenerate polygon (area {area:e})")]
    DegeneratePolygon { area: f64 },
    #[error("polygon is not simple and counter-clockwise")]
    NotSimple,
    #[error("evaluation point ({x}, {y}) is on or outside the polygon boundary")]
    PointOnBoundary { x: f64, y: f64 },
    #[error("unsupported quadrature order {0}")]
    UnsupportedOrder(usize),
    #[error("non-finite basis values in element {0}")]
    NonFinite(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("matrix is not positive definite (pivot {pivot} at column {column})")]
    NotPositiveDefinite { column: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("constraint on nonexistent dof {dof} (system has {n} dofs)")]
    UnknownDof { dof: usize, n: usize },
    #[error("non-finite value in element {element} during assembly")]
    NonFinite { element: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecoveryError {
    #[error("singular moment matrix at ({x}, {y}); support radius too small")]
    SingularMoment { x: f64, y: f64 },
    #[error("point location failed for node {node} at ({x}, {y})")]
    PointLocation { node: usize, x: f64, y: f64 },
}

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
    #[error("staggered iteration diverged at step {step} (u = {displacement:e} mm) after {iterations} iterations, residual {residual:e}")]
    Diverged {
        step: usize,
        displacement: f64,
        iterations: usize,
        residual: f64,
    },
    #[error("invalid setup: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config {path}: {message}")]
    Read { path: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}` in section [{section}]")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: invalid value for `{key}`: {message}")]
    Value {
        line: usize,
        key: String,
        message: String,
    },
    #[error("unknown scenario `{0}` (expected tension, shear or lshape)")]
    UnknownScenario(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}
