use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mls::{strain_from_shape, MlsModel};
use crate::basis::ElementBasis;
use crate::error::RecoveryError;
use crate::geometry::{CellId, PolygonElement, QuadtreeMesh};
use crate::scalar::Real;

/// Per-element error indicator in the energy norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T> {
    pub eta: Vec<T>,
    /// `sqrt(sum eta_e^2)`.
    pub total: T,
    /// Energy norm of the compatible solution, same units as `total`.
    pub energy: T,
}

fn energy_density<T: Real>(d: &[[T; 3]; 3], e: [T; 3]) -> T {
    let mut s = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            s += e[i] * d[i][j] * e[j];
        }
    }
    s
}

/// `(eta_e^2, |u_h|_E^2)` restricted to one element.
fn element_terms<T: Real>(
    basis: &ElementBasis<T>,
    u: &[T],
    model: &MlsModel<T>,
    d: &[[T; 3]; 3],
) -> Result<(T, T), RecoveryError> {
    let ue = basis.gather_displacement(u);
    let mut err = T::zero();
    let mut norm = T::zero();
    for q in 0..basis.num_points() {
        let eh = basis.strain(q, &ue);
        let es = strain_from_shape(&model.shape(basis.points[q])?, u);
        let diff = [es[0] - eh[0], es[1] - eh[1], es[2] - eh[2]];
        err += energy_density(d, diff) * basis.weights[q];
        norm += energy_density(d, eh) * basis.weights[q];
    }
    Ok((err, norm))
}

/// `sqrt(sum_q (e_s - e_h)^T D (e_s - e_h) w_q)` over the element's rule.
pub fn element_error<T: Real>(
    basis: &ElementBasis<T>,
    u: &[T],
    model: &MlsModel<T>,
    d: &[[T; 3]; 3],
) -> Result<T, RecoveryError> {
    Ok(element_terms(basis, u, model, d)?.0.sqrt())
}

pub fn error_report<T: Real>(
    bases: &[ElementBasis<T>],
    u: &[T],
    model: &MlsModel<T>,
    d: &[[T; 3]; 3],
) -> Result<ErrorReport<T>, RecoveryError> {
    let terms: Vec<(T, T)> = bases
        .par_iter()
        .map(|b| element_terms(b, u, model, d))
        .collect::<Result<_, _>>()?;
    let total = terms.iter().map(|t| t.0).sum::<T>().sqrt();
    let energy = terms.iter().map(|t| t.1).sum::<T>().sqrt();
    Ok(ErrorReport {
        eta: terms.iter().map(|t| t.0.sqrt()).collect(),
        total,
        energy,
    })
}

/// Element ids sorted by decreasing error, ties by ascending id.
fn ranking<T: Real>(eta: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..eta.len()).collect();
    order.sort_by(|&a, &b| {
        eta[b]
            .partial_cmp(&eta[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Smallest prefix of the ranking carrying a fraction `theta` of `eta^2`.
pub fn mark_bulk<T: Real>(report: &ErrorReport<T>, theta: T) -> Vec<usize> {
    if theta <= T::zero() {
        return Vec::new();
    }
    let order = ranking(&report.eta);
    let total: T = order.iter().map(|&e| report.eta[e] * report.eta[e]).sum();
    if total == T::zero() {
        return Vec::new();
    }
    let goal = theta.min(T::one()) * total;
    let mut acc = T::zero();
    let mut out = Vec::new();
    for e in order {
        if acc >= goal {
            break;
        }
        acc += report.eta[e] * report.eta[e];
        out.push(e);
    }
    out
}

/// Refinement controls shared by the initial mesh loop and the load steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptControls<T> {
    pub enabled: bool,
    /// Bulk fraction of the squared error that is marked.
    pub theta_bulk: T,
    /// Elements whose error is below `tolerance * |u|_E / sqrt(N)` are never
    /// marked by the estimator.
    pub tolerance: T,
    /// Phase-field level that forces refinement down to half the length scale.
    pub phi_mark: T,
    /// MLS support radius in leaf sizes.
    pub support_factor: T,
    /// Load steps between post-step mesh updates; zero leaves only the
    /// updates inside the staggered loop.
    pub adapt_every: usize,
}

impl<T: Real> Default for AdaptControls<T> {
    fn default() -> Self {
        Self {
            enabled: true,
            theta_bulk: T::lit(0.3),
            tolerance: T::lit(0.1),
            phi_mark: T::lit(0.4),
            support_factor: T::lit(2.5),
            adapt_every: 1,
        }
    }
}

/// Elements of the bulk prefix that also exceed the per-element tolerance.
pub fn mark_with_tolerance<T: Real>(report: &ErrorReport<T>, controls: &AdaptControls<T>) -> Vec<usize> {
    let n = T::from_usize_lossy(report.eta.len().max(1));
    let floor = controls.tolerance * report.energy / n.sqrt();
    mark_bulk(report, controls.theta_bulk)
        .into_iter()
        .filter(|&e| report.eta[e] > floor)
        .collect()
}

/// Leaf cells to split: estimator marks plus every element touching
/// `phi >= phi_mark` that is still coarser than `lo / 2`. Cells already at
/// the depth limit are dropped.
pub fn select_cells<T: Real>(
    mesh: &QuadtreeMesh<T>,
    elements: &[PolygonElement],
    report: Option<&ErrorReport<T>>,
    phi: &[T],
    lo: T,
    controls: &AdaptControls<T>,
) -> Vec<CellId> {
    let mut cells: Vec<CellId> = Vec::new();
    if let Some(r) = report {
        cells.extend(mark_with_tolerance(r, controls).into_iter().map(|e| elements[e].cell));
    }
    for e in elements {
        let c = mesh.cell(e.cell);
        if c.size > lo * T::half() && e.nodes.iter().any(|&n| phi[n] >= controls.phi_mark) {
            cells.push(e.cell);
        }
    }
    cells.retain(|&c| mesh.cell(c).level < mesh.max_depth());
    cells.sort_unstable();
    cells.dedup();
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(eta: Vec<f64>) -> ErrorReport<f64> {
        let total = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
        ErrorReport {
            eta,
            total,
            energy: 1.0,
        }
    }

    #[test]
    fn bulk_marking() {
        let r = report(vec![1.0; 10]);
        assert_eq!(mark_bulk(&r, 0.35), vec![0, 1, 2, 3]);
        let r = report(vec![0.1, 0.5, 0.0, 0.3]);
        assert_eq!(mark_bulk(&r, 1.0), vec![1, 3, 0]);
        assert_eq!(mark_bulk(&r, 1e-9), vec![1]);
        assert!(mark_bulk(&r, 0.0).is_empty());
    }
}
