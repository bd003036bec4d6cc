use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::basis::{build_element_bases, mvc_eval, BasisOptions, ElementBasis};
use crate::error::{RecoveryError, SimulationError};
use crate::geometry::{CellId, NodeOrigin, PolygonElement, QuadtreeMesh, RefineReport};
use crate::material::HistoryField;
use crate::scalar::{Point2, Real};

/// Nodal displacement and phase field plus the committed history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FieldState<T> {
    /// `[u_x(0), u_y(0), u_x(1), ...]` in mm.
    pub u: Vec<T>,
    pub phi: Vec<T>,
    pub history: HistoryField<T>,
}

impl<T: Real> FieldState<T> {
    pub fn zeros(num_nodes: usize, bases: &[ElementBasis<T>]) -> Self {
        Self {
            u: vec![T::zero(); 2 * num_nodes],
            phi: vec![T::zero(); num_nodes],
            history: HistoryField::for_bases(bases),
        }
    }
}

/// Mesh data after a refinement pass.
#[derive(Debug, Clone)]
pub struct Transferred<T> {
    pub elements: Vec<PolygonElement>,
    pub bases: Vec<ElementBasis<T>>,
    pub fields: FieldState<T>,
    pub report: RefineReport,
}

fn dist2<T: Real>(a: Point2<T>, b: Point2<T>) -> T {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}

/// Splits `cells` (clamped at the depth limit) and carries the fields over:
/// nodal values through the old interpolant, history by a neighbourhood
/// maximum inside the old host leaf.
pub fn refine_and_transfer<T: Real>(
    mesh: &mut QuadtreeMesh<T>,
    old_elements: &[PolygonElement],
    old_bases: &[ElementBasis<T>],
    fields: &FieldState<T>,
    cells: &[CellId],
    options: BasisOptions,
) -> Result<Transferred<T>, SimulationError> {
    let report = mesh.refine_cells_clamped(cells)?;
    let old_by_cell: HashMap<CellId, usize> = old_elements.iter().map(|e| (e.cell, e.id)).collect();

    let mut u = fields.u.clone();
    let mut phi = fields.phi.clone();
    let n_new = mesh.num_nodes();
    u.resize(2 * n_new, T::zero());
    phi.resize(n_new, T::zero());
    for &(node, origin) in &report.new_nodes {
        match origin {
            NodeOrigin::EdgeMidpoint { a, b } => {
                let h = T::half();
                u[2 * node] = h * (u[2 * a] + u[2 * b]);
                u[2 * node + 1] = h * (u[2 * a + 1] + u[2 * b + 1]);
                phi[node] = h * (phi[a] + phi[b]);
            }
            NodeOrigin::Center { cell } => {
                let p = mesh.node(node);
                let fail = || RecoveryError::PointLocation {
                    node,
                    x: p[0].to_f64_lossy(),
                    y: p[1].to_f64_lossy(),
                };
                let e = *old_by_cell.get(&cell).ok_or_else(fail)?;
                let loop_nodes = &old_elements[e].nodes;
                let verts: Vec<Point2<T>> = loop_nodes.iter().map(|&n| mesh.node(n)).collect();
                let ev = mvc_eval(&verts, p).map_err(|_| fail())?;
                let (mut ux, mut uy, mut ph) = (T::zero(), T::zero(), T::zero());
                for (&n, &w) in loop_nodes.iter().zip(&ev.values) {
                    ux += w * u[2 * n];
                    uy += w * u[2 * n + 1];
                    ph += w * phi[n];
                }
                u[2 * node] = ux;
                u[2 * node + 1] = uy;
                phi[node] = ph;
            }
        }
    }
    for v in phi.iter_mut() {
        *v = v.max(T::zero()).min(T::one());
    }

    let elements = mesh.extract_elements();
    let bases = build_element_bases(&elements, mesh.nodes(), options)?;
    let mut history = HistoryField::for_bases(&bases);

    // host old element of every new element
    let mut host = Vec::with_capacity(elements.len());
    for e in &elements {
        let h = old_by_cell
            .get(&e.cell)
            .or_else(|| mesh.cell(e.cell).parent.and_then(|p| old_by_cell.get(&p)))
            .copied();
        let h = h.ok_or_else(|| {
            let c = mesh.cell(e.cell).center();
            RecoveryError::PointLocation {
                node: e.id,
                x: c[0].to_f64_lossy(),
                y: c[1].to_f64_lossy(),
            }
        })?;
        host.push(h);
    }
    let mut children_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, &h) in host.iter().enumerate() {
        children_of.entry(h).or_default().push(e);
    }

    for (e, nb) in bases.iter().enumerate() {
        let h = host[e];
        let ob = &old_bases[h];
        let old_h = fields.history.element(h);
        if elements[e].cell == old_elements[h].cell && elements[e].nodes == old_elements[h].nodes {
            history.element_mut(e).copy_from_slice(old_h);
            continue;
        }
        let r = mesh.cell(elements[e].cell).size * T::half();
        let r2 = r * r;
        let vals = history.element_mut(e);
        for (q, &x) in nb.points.iter().enumerate() {
            let mut best = None;
            let mut nearest = (T::infinity(), T::zero());
            for (&y, &v) in ob.points.iter().zip(old_h) {
                let d = dist2(x, y);
                if d <= r2 {
                    best = Some(best.map_or(v, |b: T| b.max(v)));
                }
                if d < nearest.0 {
                    nearest = (d, v);
                }
            }
            vals[q] = best.unwrap_or(nearest.1);
        }
    }
    // every old point also lands on its nearest new point
    for (h, news) in &children_of {
        let ob = &old_bases[*h];
        for (&y, &v) in ob.points.iter().zip(fields.history.element(*h)) {
            let mut target = (T::infinity(), 0usize, 0usize);
            for &e in news {
                for (q, &x) in bases[e].points.iter().enumerate() {
                    let d = dist2(x, y);
                    if d < target.0 {
                        target = (d, e, q);
                    }
                }
            }
            let slot = &mut history.element_mut(target.1)[target.2];
            *slot = slot.max(v);
        }
    }

    Ok(Transferred {
        elements,
        bases,
        fields: FieldState { u, phi, history },
        report,
    })
}
