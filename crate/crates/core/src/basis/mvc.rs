//! Mean value coordinates on simple polygons.
//!
//! For a point `x` strictly inside a counter-clockwise polygon with vertices
//! `x_i`, the unnormalised weight of vertex `i` is
//!
//! ```text
//! w_i = (tan(a_{i-1}/2) + tan(a_i/2)) / |x - x_i|
//! ```
//!
//! where `a_i` is the angle at `x` subtended by the edge `(x_i, x_{i+1})`. The
//! half-angle tangent is evaluated as `cross / (r_i r_{i+1} + dot)`, which stays
//! finite for reflex configurations and needs no trigonometric calls.

use super::polygon::{polygon_area, polygon_diameter, segment_distance};
use crate::error::BasisError;
use crate::scalar::{cross, dot, norm, sub, Point2, Real};

/// Shape function values and Cartesian gradients at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval<T> {
    pub values: Vec<T>,
    /// `d N_i / dx`, `d N_i / dy` in 1/mm.
    pub gradients: Vec<[T; 2]>,
}

fn point_in_polygon<T: Real>(vertices: &[Point2<T>], p: Point2<T>) -> bool {
    let n = vertices.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0];
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Evaluates mean value coordinates and their analytic gradients.
pub fn mvc_eval<T: Real>(vertices: &[Point2<T>], point: Point2<T>) -> Result<BasisEval<T>, BasisError> {
    let n = vertices.len();
    if n < 3 {
        return Err(BasisError::DegeneratePolygon { area: 0.0 });
    }
    let area = polygon_area(vertices);
    let diam = polygon_diameter(vertices);
    if area <= T::lit(1e-14) * diam * diam {
        return Err(if area < T::zero() {
            BasisError::NotSimple
        } else {
            BasisError::DegeneratePolygon {
                area: area.to_f64_lossy(),
            }
        });
    }
    let on_boundary = || BasisError::PointOnBoundary {
        x: point[0].to_f64_lossy(),
        y: point[1].to_f64_lossy(),
    };
    let tol = T::lit(1e-12) * diam;
    for i in 0..n {
        if segment_distance(point, vertices[i], vertices[(i + 1) % n]) <= tol {
            return Err(on_boundary());
        }
    }
    if !point_in_polygon(vertices, point) {
        return Err(on_boundary());
    }

    let d: Vec<Point2<T>> = vertices.iter().map(|&v| sub(v, point)).collect();
    let r: Vec<T> = d.iter().map(|&v| norm(v)).collect();
    // gradients with respect to the evaluation point; d_i = x_i - x
    let grad_r: Vec<[T; 2]> = d
        .iter()
        .zip(&r)
        .map(|(v, &ri)| [-v[0] / ri, -v[1] / ri])
        .collect();

    let mut tan_half = vec![T::zero(); n];
    let mut grad_tan = vec![[T::zero(); 2]; n];
    for i in 0..n {
        let j = (i + 1) % n;
        let a = cross(d[i], d[j]);
        let dd = dot(d[i], d[j]);
        let s = r[i] * r[j] + dd;
        let t = a / s;
        let grad_a = [d[i][1] - d[j][1], d[j][0] - d[i][0]];
        let grad_d = [-(d[i][0] + d[j][0]), -(d[i][1] + d[j][1])];
        let mut grad_s = [T::zero(); 2];
        for k in 0..2 {
            grad_s[k] = r[j] * grad_r[i][k] + r[i] * grad_r[j][k] + grad_d[k];
        }
        tan_half[i] = t;
        grad_tan[i] = [(grad_a[0] - t * grad_s[0]) / s, (grad_a[1] - t * grad_s[1]) / s];
    }

    let mut w = vec![T::zero(); n];
    let mut grad_w = vec![[T::zero(); 2]; n];
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let num = tan_half[prev] + tan_half[i];
        w[i] = num / r[i];
        for k in 0..2 {
            grad_w[i][k] = (grad_tan[prev][k] + grad_tan[i][k]) / r[i] - w[i] * grad_r[i][k] / r[i];
        }
    }
    let total: T = w.iter().copied().sum();
    let grad_total = [
        grad_w.iter().map(|g| g[0]).sum::<T>(),
        grad_w.iter().map(|g| g[1]).sum::<T>(),
    ];
    let values: Vec<T> = w.iter().map(|&wi| wi / total).collect();
    let gradients = grad_w
        .iter()
        .zip(&values)
        .map(|(g, &ni)| {
            [
                (g[0] - ni * grad_total[0]) / total,
                (g[1] - ni * grad_total[1]) / total,
            ]
        })
        .collect();
    Ok(BasisEval { values, gradients })
}
