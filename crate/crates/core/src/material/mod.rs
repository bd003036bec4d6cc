//! Plane-strain constitutive law for the phase-field model.

mod history;
mod params;
mod split;

pub use history::{apply_hybrid_constraint, nodal_average, update_history, HistoryField};
pub use params::{degradation, stress_voigt, MaterialParams};
pub use split::{isotropic_energy, principal, spectral_split, SplitResult, SymTensor2};
