//! Per-element basis caches and strain-displacement matrices.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mvc::mvc_eval;
use super::polygon::polygon_area;
use super::quadrature::{polygon_quadrature, DEFAULT_ORDER};
use crate::error::BasisError;
use crate::geometry::{NodeId, PolygonElement};
use crate::scalar::{Point2, Real};

/// Treatment of shape function gradients at quadrature points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradientCorrection {
    /// Raw analytic mean-value gradients.
    None,
    /// Adds a constant per-element shift to each gradient so the quadrature
    /// sum of `grad N_i` equals the exact boundary integral of `N_i n`. Keeps
    /// partition of unity and linear consistency and makes the patch test
    /// pass to round-off on any quadrature.
    Consistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisOptions {
    pub order: usize,
    pub correction: GradientCorrection,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            correction: GradientCorrection::Consistent,
        }
    }
}

/// Quadrature points and basis data of one polygonal element.
#[derive(Debug, Clone)]
pub struct ElementBasis<T> {
    pub element: usize,
    pub nodes: Vec<NodeId>,
    pub area: T,
    pub points: Vec<Point2<T>>,
    pub weights: Vec<T>,
    /// `points.len() * nodes.len()` values, one row per quadrature point.
    values: Vec<T>,
    gradients: Vec<[T; 2]>,
}

/// Strain-displacement data at one quadrature point.
#[derive(Debug, Clone, PartialEq)]
pub struct BMatrices<T> {
    /// Voigt rows (exx, eyy, gxy); one column per displacement dof, ordered
    /// `u_x(0), u_y(0), u_x(1), ...`.
    pub b: Vec<[T; 3]>,
    /// Scalar gradient matrix, one column per node.
    pub b_phi: Vec<[T; 2]>,
    pub n: Vec<T>,
}

impl<T: Real> BMatrices<T> {
    /// `B u` in Voigt order.
    pub fn strain(&self, u_local: &[T]) -> [T; 3] {
        let mut e = [T::zero(); 3];
        for (col, &u) in self.b.iter().zip(u_local) {
            for k in 0..3 {
                e[k] += col[k] * u;
            }
        }
        e
    }
}

impl<T: Real> ElementBasis<T> {
    pub fn new(
        element: &PolygonElement,
        coords: &[Point2<T>],
        options: BasisOptions,
    ) -> Result<Self, BasisError> {
        let verts: Vec<Point2<T>> = element.nodes.iter().map(|&n| coords[n]).collect();
        Self::from_vertices(element.id, element.nodes.clone(), &verts, options)
    }

    pub fn from_vertices(
        element: usize,
        nodes: Vec<NodeId>,
        verts: &[Point2<T>],
        options: BasisOptions,
    ) -> Result<Self, BasisError> {
        let quad = polygon_quadrature(verts, options.order)?;
        let n = verts.len();
        let area = polygon_area(verts);
        let mut values = Vec::with_capacity(quad.len() * n);
        let mut gradients = Vec::with_capacity(quad.len() * n);
        for &p in &quad.points {
            let ev = mvc_eval(verts, p)?;
            values.extend(ev.values);
            gradients.extend(ev.gradients);
        }
        if values.iter().any(|v| !v.is_finite())
            || gradients.iter().any(|g| !g[0].is_finite() || !g[1].is_finite())
        {
            return Err(BasisError::NonFinite(element));
        }
        if options.correction == GradientCorrection::Consistent {
            // exact boundary moments: N_i is linear along each edge
            let mut target = vec![[T::zero(); 2]; n];
            for k in 0..n {
                let (a, b) = (verts[k], verts[(k + 1) % n]);
                let half_normal = [(b[1] - a[1]) * T::half(), -(b[0] - a[0]) * T::half()];
                for i in [k, (k + 1) % n] {
                    target[i][0] += half_normal[0];
                    target[i][1] += half_normal[1];
                }
            }
            for (q, &w) in quad.weights.iter().enumerate() {
                for i in 0..n {
                    let g = gradients[q * n + i];
                    target[i][0] -= g[0] * w;
                    target[i][1] -= g[1] * w;
                }
            }
            for g in gradients.chunks_exact_mut(n) {
                for i in 0..n {
                    g[i][0] += target[i][0] / area;
                    g[i][1] += target[i][1] / area;
                }
            }
        }
        Ok(Self {
            element,
            nodes,
            area,
            points: quad.points,
            weights: quad.weights,
            values,
            gradients,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn shape(&self, q: usize) -> &[T] {
        let n = self.nodes.len();
        &self.values[q * n..(q + 1) * n]
    }

    pub fn grads(&self, q: usize) -> &[[T; 2]] {
        let n = self.nodes.len();
        &self.gradients[q * n..(q + 1) * n]
    }

    /// Interpolates a nodal scalar field at quadrature point `q`.
    pub fn interpolate(&self, q: usize, nodal: &[T]) -> T {
        self.shape(q)
            .iter()
            .zip(&self.nodes)
            .map(|(&n, &i)| n * nodal[i])
            .sum()
    }

    /// Gathers `[u_x, u_y]` pairs of the element nodes from a global vector.
    pub fn gather_displacement(&self, u: &[T]) -> Vec<T> {
        self.nodes
            .iter()
            .flat_map(|&i| [u[2 * i], u[2 * i + 1]])
            .collect()
    }

    /// Compatible strain `B u_e` (Voigt) at quadrature point `q`.
    pub fn strain(&self, q: usize, u_local: &[T]) -> [T; 3] {
        let mut e = [T::zero(); 3];
        for (g, u) in self.grads(q).iter().zip(u_local.chunks_exact(2)) {
            e[0] += g[0] * u[0];
            e[1] += g[1] * u[1];
            e[2] += g[1] * u[0] + g[0] * u[1];
        }
        e
    }
}

/// Strain-displacement matrix `B`, scalar gradient matrix and shape row at
/// quadrature point `q` of an element.
pub fn element_bmatrices<T: Real>(basis: &ElementBasis<T>, q: usize) -> BMatrices<T> {
    let grads = basis.grads(q);
    let mut b = Vec::with_capacity(2 * grads.len());
    for g in grads {
        b.push([g[0], T::zero(), g[1]]);
        b.push([T::zero(), g[1], g[0]]);
    }
    BMatrices {
        b,
        b_phi: grads.to_vec(),
        n: basis.shape(q).to_vec(),
    }
}

/// Basis caches for every element of a mesh, computed in parallel.
pub fn build_element_bases<T: Real>(
    elements: &[PolygonElement],
    coords: &[Point2<T>],
    options: BasisOptions,
) -> Result<Vec<ElementBasis<T>>, BasisError> {
    elements
        .par_iter()
        .map(|e| ElementBasis::new(e, coords, options))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pentagon() -> Vec<[f64; 2]> {
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.5], [1.0, 1.0], [0.0, 1.0]]
    }

    #[test]
    fn affine_field_gives_constant_strain() {
        let v = pentagon();
        for correction in [GradientCorrection::None, GradientCorrection::Consistent] {
            let eb = ElementBasis::from_vertices(
                0,
                (0..5).collect(),
                &v,
                BasisOptions {
                    order: 2,
                    correction,
                },
            )
            .unwrap();
            // u = a + C x with C = [[0.3, -0.7], [0.2, 0.5]]
            let u: Vec<f64> = v
                .iter()
                .flat_map(|p| [1.0 + 0.3 * p[0] - 0.7 * p[1], -2.0 + 0.2 * p[0] + 0.5 * p[1]])
                .collect();
            for q in 0..eb.num_points() {
                let bm = element_bmatrices(&eb, q);
                let e = bm.strain(&u);
                assert_relative_eq!(e[0], 0.3, epsilon = 1e-12);
                assert_relative_eq!(e[1], 0.5, epsilon = 1e-12);
                assert_relative_eq!(e[2], -0.5, epsilon = 1e-12);
                let e2 = eb.strain(q, &u);
                for k in 0..3 {
                    assert_relative_eq!(e[k], e2[k], epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn corrected_gradients_integrate_boundary_moments() {
        let v = pentagon();
        let eb = ElementBasis::from_vertices(0, (0..5).collect(), &v, BasisOptions::default())
            .unwrap();
        let mut s = vec![[0.0; 2]; 5];
        for q in 0..eb.num_points() {
            for (i, g) in eb.grads(q).iter().enumerate() {
                s[i][0] += g[0] * eb.weights[q];
                s[i][1] += g[1] * eb.weights[q];
            }
        }
        // node 2 is the hanging node at (1, 0.5) on the east edge of length 1
        assert_relative_eq!(s[2][0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(s[2][1], 0.0, epsilon = 1e-14);
        // node 0 at the origin: half of the south and west edges
        assert_relative_eq!(s[0][0], -0.5, epsilon = 1e-14);
        assert_relative_eq!(s[0][1], -0.5, epsilon = 1e-14);
    }
}
