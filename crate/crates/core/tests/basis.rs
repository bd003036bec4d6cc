use approx::assert_relative_eq;
use pfquad::basis::polygon::{is_simple_ccw, polygon_area, polygon_centroid};
use pfquad::basis::{mvc_eval, polygon_quadrature, BasisOptions, GradientCorrection};
use pfquad::ElementBasis;
use proptest::prelude::*;

/// Convex polygon: points on a circle at sorted random angles.
fn convex(angles: &[f64], cx: f64, cy: f64, r: f64) -> Vec<[f64; 2]> {
    let mut a = angles.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    a.iter().map(|t| [cx + r * t.cos(), cy + r * t.sin()]).collect()
}

fn min_gap(angles: &[f64]) -> f64 {
    let mut a = angles.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let n = a.len();
    (0..n)
        .map(|i| if i + 1 < n { a[i + 1] - a[i] } else { a[0] + std::f64::consts::TAU - a[i] })
        .fold(f64::INFINITY, f64::min)
}

/// The polygons a quadtree leaf can turn into: square with any subset of
/// edge midpoints.
fn leaf_polygon(mask: u8) -> Vec<[f64; 2]> {
    let corners = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let mut v = Vec::new();
    for k in 0..4 {
        v.push(corners[k]);
        if mask & (1 << k) != 0 {
            let b = corners[(k + 1) % 4];
            v.push([0.5 * (corners[k][0] + b[0]), 0.5 * (corners[k][1] + b[1])]);
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mvc_reproduces_linear_fields(
        angles in prop::collection::vec(0.0..std::f64::consts::TAU, 3..9),
        s in 0.05f64..0.7,
        t in 0.0..std::f64::consts::TAU,
    ) {
        prop_assume!(min_gap(&angles) > 0.1);
        let v = convex(&angles, 0.3, -0.2, 2.0);
        let c = polygon_centroid(&v);
        let p = [c[0] + s * t.cos() * 0.5, c[1] + s * t.sin() * 0.5];
        prop_assume!(v.iter().all(|q| (q[0] - p[0]).hypot(q[1] - p[1]) > 1e-3));
        let ev = mvc_eval(&v, p);
        prop_assume!(ev.is_ok());
        let ev = ev.unwrap();
        prop_assert!(ev.values.iter().all(|&w| w >= -1e-12));
        let sum: f64 = ev.values.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        for a in 0..2 {
            let x: f64 = ev.values.iter().zip(&v).map(|(w, q)| w * q[a]).sum();
            prop_assert!((x - p[a]).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_is_exact_for_quadratics(
        angles in prop::collection::vec(0.0..std::f64::consts::TAU, 3..9),
        c in prop::array::uniform3(-1.0f64..1.0),
    ) {
        prop_assume!(min_gap(&angles) > 0.1);
        let v = convex(&angles, 0.0, 0.0, 1.0);
        let rule = polygon_quadrature(&v, 2).unwrap();
        let w: f64 = rule.weights.iter().sum();
        prop_assert!((w - polygon_area(&v)).abs() < 1e-13);
        // x^2, xy, y^2 against a high order rule on the same fan
        let f = |p: [f64; 2]| c[0] * p[0] * p[0] + c[1] * p[0] * p[1] + c[2] * p[1] * p[1];
        let fine = polygon_quadrature(&v, 5).unwrap();
        prop_assert!((rule.integrate(f) - fine.integrate(f)).abs() < 1e-12);
    }
}

#[test]
fn every_leaf_shape_passes_the_element_checks() {
    for mask in 0..16u8 {
        let v = leaf_polygon(mask);
        assert!(is_simple_ccw(&v));
        for correction in [GradientCorrection::None, GradientCorrection::Consistent] {
            let opts = BasisOptions { order: 2, correction };
            let eb = ElementBasis::from_vertices(0, (0..v.len()).collect(), &v, opts).unwrap();
            let w: f64 = eb.weights.iter().sum();
            assert_relative_eq!(w, 1.0, epsilon = 1e-14);
            for q in 0..eb.num_points() {
                let s: f64 = eb.shape(q).iter().sum();
                assert_relative_eq!(s, 1.0, epsilon = 1e-13);
                let g = eb.grads(q);
                for a in 0..2 {
                    let gs: f64 = g.iter().map(|d| d[a]).sum();
                    assert!(gs.abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn consistent_gradients_match_boundary_moments() {
    let v = leaf_polygon(0b0101);
    let n = v.len();
    let eb = ElementBasis::from_vertices(0, (0..n).collect(), &v, BasisOptions::default()).unwrap();
    for i in 0..n {
        let mut gx = 0.0;
        let mut gy = 0.0;
        for q in 0..eb.num_points() {
            gx += eb.grads(q)[i][0] * eb.weights[q];
            gy += eb.grads(q)[i][1] * eb.weights[q];
        }
        // boundary integral of N_i n over the two edges touching vertex i
        let prev = v[(i + n - 1) % n];
        let next = v[(i + 1) % n];
        let ex = 0.5 * ((next[1] - v[i][1]) + (v[i][1] - prev[1]));
        let ey = -0.5 * ((next[0] - v[i][0]) + (v[i][0] - prev[0]));
        assert_relative_eq!(gx, ex, epsilon = 1e-13);
        assert_relative_eq!(gy, ey, epsilon = 1e-13);
    }
}

#[test]
fn vertex_and_boundary_points_are_rejected() {
    let v = leaf_polygon(0);
    assert!(mvc_eval(&v, [0.0, 0.0]).is_err());
    assert!(mvc_eval(&v, [0.5, 0.0]).is_err());
    assert!(mvc_eval(&v, [2.0, 0.5]).is_err());
    assert!(mvc_eval(&[[0.0, 0.0], [1.0, 0.0]], [0.5, 0.5]).is_err());
    assert!(polygon_quadrature(&v, 9).is_err());
}

#[test]
fn single_precision_agrees_with_double() {
    let v64 = leaf_polygon(0b0011);
    let v32: Vec<[f32; 2]> = v64.iter().map(|p| [p[0] as f32, p[1] as f32]).collect();
    let a = mvc_eval(&v64, [0.3, 0.6]).unwrap();
    let b = mvc_eval(&v32, [0.3f32, 0.6f32]).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - f64::from(*y)).abs() < 1e-5);
    }
}
