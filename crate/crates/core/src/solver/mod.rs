//! Staggered displacement / phase-field driver with mesh adaptation.

mod checkpoint;
mod driver;
mod fields;
mod problem;

pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use driver::{convergence_norm, relative_change, run_simulation, Simulation, SimulationResult, StepRecord};
pub use fields::{element_von_mises, quadrature_energies, von_mises};
pub use problem::{BcValue, DirichletSpec, LoadStage, Problem, Region, SolverControls};
