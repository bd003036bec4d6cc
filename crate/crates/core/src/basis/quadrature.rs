//! Quadrature over polygons by fanning into triangles from the area centroid.

use super::polygon::{is_simple_ccw, polygon_centroid};
use crate::error::BasisError;
use crate::scalar::{cross, sub, Point2, Real};

pub const DEFAULT_ORDER: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub points: Vec<Point2<T>>,
    /// Weights in mm²; they sum to the polygon area.
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(Point2<T>) -> T) -> T {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| f(p) * w)
            .sum()
    }
}

/// Symmetric rule on the reference triangle: barycentric coordinates and
/// weights summing to one. Orders 3 and 4 share the six-point degree-4 rule.
fn triangle_rule(order: usize) -> Option<Vec<([f64; 3], f64)>> {
    fn orbit(a: f64, w: f64, out: &mut Vec<([f64; 3], f64)>) {
        let b = 1.0 - 2.0 * a;
        out.push(([b, a, a], w));
        out.push(([a, b, a], w));
        out.push(([a, a, b], w));
    }
    let third = 1.0 / 3.0;
    let mut r = Vec::new();
    match order {
        1 => r.push(([third, third, third], 1.0)),
        2 => orbit(1.0 / 6.0, third, &mut r),
        3 | 4 => {
            orbit(0.445_948_490_915_965, 0.223_381_589_678_011, &mut r);
            orbit(0.091_576_213_509_771, 0.109_951_743_655_322, &mut r);
        }
        5 => {
            r.push(([third, third, third], 0.225));
            orbit(0.470_142_064_105_115, 0.132_394_152_788_506, &mut r);
            orbit(0.101_286_507_323_456, 0.125_939_180_544_827, &mut r);
        }
        _ => return None,
    }
    Some(r)
}

/// Centroid-fan triangulation with a symmetric Gauss rule of `order` (1 to 5)
/// on each triangle.
pub fn polygon_quadrature<T: Real>(
    vertices: &[Point2<T>],
    order: usize,
) -> Result<QuadratureRule<T>, BasisError> {
    let rule = triangle_rule(order).ok_or(BasisError::UnsupportedOrder(order))?;
    if !is_simple_ccw(vertices) {
        return Err(BasisError::NotSimple);
    }
    let c = polygon_centroid(vertices);
    let n = vertices.len();
    let mut points = Vec::with_capacity(n * rule.len());
    let mut weights = Vec::with_capacity(n * rule.len());
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        let area = cross(sub(a, c), sub(b, c)) * T::half();
        if area <= T::zero() {
            // centroid does not see this edge: polygon is not star-shaped from it
            return Err(BasisError::NotSimple);
        }
        for &(l, w) in &rule {
            let (l0, l1, l2) = (T::lit(l[0]), T::lit(l[1]), T::lit(l[2]));
            points.push([
                l0 * c[0] + l1 * a[0] + l2 * b[0],
                l0 * c[1] + l1 * a[1] + l2 * b[1],
            ]);
            weights.push(T::lit(w) * area);
        }
    }
    Ok(QuadratureRule { points, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const SQUARE: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    const PENTAGON: [[f64; 2]; 5] = [[0.0, 0.0], [1.0, 0.0], [1.0, 0.5], [1.0, 1.0], [0.0, 1.0]];

    #[test]
    fn unit_square_order_two() {
        let q = polygon_quadrature(&SQUARE, 2).unwrap();
        assert_eq!(q.len(), 12);
        assert_relative_eq!(q.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert!(q.weights.iter().all(|&w| w > 0.0));
        assert_relative_eq!(q.integrate(|p| p[0]), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn pentagon_quartic_exact_from_order_four() {
        // The pentagon is the unit square; a midpoint-subdivision rule with
        // 2000x2000 cells approximates 1/9 to about 1e-7 relative.
        let m = 2000;
        let h = 1.0 / m as f64;
        let mut brute = 0.0;
        for i in 0..m {
            for j in 0..m {
                let x = (i as f64 + 0.5) * h;
                let y = (j as f64 + 0.5) * h;
                brute += x * x * y * y * h * h;
            }
        }
        for order in [4, 5] {
            let q = polygon_quadrature(&PENTAGON, order).unwrap();
            let v = q.integrate(|p| p[0] * p[0] * p[1] * p[1]);
            assert_relative_eq!(v, brute, max_relative = 1e-6);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            polygon_quadrature(&SQUARE, 9),
            Err(BasisError::UnsupportedOrder(9))
        );
        let bow = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert_eq!(polygon_quadrature(&bow, 2), Err(BasisError::NotSimple));
    }
}
