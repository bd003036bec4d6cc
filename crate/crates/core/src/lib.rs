//! Adaptive phase-field simulation of quasi-static brittle fracture in 2D.
//!
//! Quadtree meshes are refined where a recovery-based error indicator asks
//! for it; cells with hanging nodes become polygonal elements whose shape
//! functions are mean value coordinates, so no constraint equations are
//! needed. Displacement and phase field are solved in a staggered loop.

pub mod assembly;
pub mod basis;
pub mod error;
pub mod geometry;
pub mod material;
pub mod recovery;
pub mod scenario;
pub mod scalar;
pub mod solver;

pub use scalar::{Point2, Real};

/// `f64` instantiations of the generic types.
pub type Mesh = geometry::QuadtreeMesh<f64>;
pub type ElementBasis = basis::ElementBasis<f64>;
pub type Material = material::MaterialParams<f64>;
pub type Fields = recovery::FieldState<f64>;
pub type Simulation = solver::Simulation<f64>;
pub type StepRecord = solver::StepRecord<f64>;
pub type Scenario = scenario::Scenario<f64>;
pub type RunConfig = scenario::RunConfig<f64>;
