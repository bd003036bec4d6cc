//! Recovery-based error estimation and adaptive refinement.
//!
//! Nodal displacements are refitted by moving least squares; the gap between
//! the recovered and the compatible strain, measured in the undamaged energy
//! norm, is the per-element indicator.

mod estimate;
mod mls;
mod transfer;

pub use estimate::{
    element_error, error_report, mark_bulk, mark_with_tolerance, select_cells, AdaptControls,
    ErrorReport,
};
pub use mls::{spline_weight, MlsModel, MlsShape};
pub use transfer::{refine_and_transfer, FieldState, Transferred};

use crate::basis::{build_element_bases, BasisOptions, ElementBasis};
use crate::error::SimulationError;
use crate::geometry::{PolygonElement, QuadtreeMesh};
use crate::scalar::Real;

/// Refines `mesh` until the estimator marks nothing refinable. `solve`
/// returns the nodal displacement of the elastic problem on a given mesh.
/// Returns the number of refinement passes.
pub fn initial_mesh_convergence<T, F>(
    mesh: &mut QuadtreeMesh<T>,
    options: BasisOptions,
    d: &[[T; 3]; 3],
    controls: &AdaptControls<T>,
    mut solve: F,
) -> Result<usize, SimulationError>
where
    T: Real,
    F: FnMut(&QuadtreeMesh<T>, &[PolygonElement], &[ElementBasis<T>]) -> Result<Vec<T>, SimulationError>,
{
    let mut passes = 0;
    if !controls.enabled {
        return Ok(passes);
    }
    loop {
        let elements = mesh.extract_elements();
        let bases = build_element_bases(&elements, mesh.nodes(), options)?;
        let u = solve(mesh, &elements, &bases)?;
        let model = MlsModel::from_mesh(mesh, &elements, controls.support_factor);
        let report = error_report(&bases, &u, &model, d)?;
        let mut cells: Vec<_> = mark_with_tolerance(&report, controls)
            .into_iter()
            .map(|e| elements[e].cell)
            .filter(|&c| mesh.cell(c).level < mesh.max_depth())
            .collect();
        cells.sort_unstable();
        cells.dedup();
        if cells.is_empty() {
            return Ok(passes);
        }
        log::debug!(
            "initial refinement pass {}: {} elements, eta {:e}, {} marked",
            passes + 1,
            elements.len(),
            report.total.to_f64_lossy(),
            cells.len()
        );
        mesh.refine_cells(&cells)?;
        passes += 1;
    }
}
