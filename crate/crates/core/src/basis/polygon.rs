//! Small planar polygon utilities.

use crate::scalar::{cross, dist, dot, sub, Point2, Real};

/// Signed shoelace area; positive for counter-clockwise loops.
pub fn polygon_area<T: Real>(v: &[Point2<T>]) -> T {
    let n = v.len();
    let mut a = T::zero();
    for i in 0..n {
        a += cross(v[i], v[(i + 1) % n]);
    }
    a * T::half()
}

/// Area centroid of a simple polygon.
pub fn polygon_centroid<T: Real>(v: &[Point2<T>]) -> Point2<T> {
    let n = v.len();
    let mut c = [T::zero(); 2];
    let mut a = T::zero();
    for i in 0..n {
        let (p, q) = (v[i], v[(i + 1) % n]);
        let w = cross(p, q);
        a += w;
        c[0] += (p[0] + q[0]) * w;
        c[1] += (p[1] + q[1]) * w;
    }
    let s = T::lit(3.0) * a;
    [c[0] / s, c[1] / s]
}

pub fn polygon_diameter<T: Real>(v: &[Point2<T>]) -> T {
    let mut d = T::zero();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            d = d.max(dist(v[i], v[j]));
        }
    }
    d
}

/// Distance from `p` to the segment `a`-`b`.
pub fn segment_distance<T: Real>(p: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == T::zero() {
        return dist(p, a);
    }
    let t = (dot(sub(p, a), ab) / len2).max(T::zero()).min(T::one());
    dist(p, [a[0] + ab[0] * t, a[1] + ab[1] * t])
}

fn orient<T: Real>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> T {
    cross(sub(b, a), sub(c, a))
}

fn segments_intersect<T: Real>(a: Point2<T>, b: Point2<T>, c: Point2<T>, d: Point2<T>) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > T::zero()) != (d2 > T::zero()))
        && d1 != T::zero()
        && d2 != T::zero()
        && ((d3 > T::zero()) != (d4 > T::zero()))
        && d3 != T::zero()
        && d4 != T::zero()
    {
        return true;
    }
    let on = |p: Point2<T>, q: Point2<T>, r: Point2<T>| {
        orient(p, q, r) == T::zero()
            && r[0] >= p[0].min(q[0])
            && r[0] <= p[0].max(q[0])
            && r[1] >= p[1].min(q[1])
            && r[1] <= p[1].max(q[1])
    };
    on(c, d, a) || on(c, d, b) || on(a, b, c) || on(a, b, d)
}

/// True for a counter-clockwise loop whose edges meet only at shared vertices.
pub fn is_simple_ccw<T: Real>(v: &[Point2<T>]) -> bool {
    let n = v.len();
    if n < 3 || polygon_area(v) <= T::zero() {
        return false;
    }
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, d) = (v[j], v[(j + 1) % n]);
            if adjacent {
                // consecutive edges may be collinear but must not fold back
                let shared = if j == i + 1 { b } else { a };
                let (p, q) = if j == i + 1 { (a, d) } else { (c, b) };
                if orient(p, shared, q) == T::zero() && dot(sub(p, shared), sub(q, shared)) > T::zero() {
                    return false;
                }
            } else if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
