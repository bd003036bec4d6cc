//! Sparse assembly of the elasticity and phase-field systems, Dirichlet
//! elimination and a direct SPD solver.

mod cholesky;
mod dirichlet;
mod ordering;
mod sparse;
mod system;

pub use cholesky::{solve_spd, CholeskyFactor, SpdSolver, SymbolicCholesky};
pub use dirichlet::{apply_dirichlet, DirichletPlan, ReducedSystem};
pub use ordering::{minimum_degree, nested_dissection};
pub use sparse::{CsrMatrix, SparsityPattern};
pub use system::{
    add_edge_traction, assemble_elasticity, assemble_phase, reaction_force, Assembler, DofMap,
    SparseSystem,
};
