//! Moving least squares fit with a linear basis and quartic spline weights.

use crate::error::RecoveryError;
use crate::geometry::{PolygonElement, QuadtreeMesh, Slit};
use crate::scalar::{Point2, Real};

/// `w(s) = 1 - 6 s^2 + 8 s^3 - 3 s^4` on `[0, 1]`, zero beyond; returns
/// `(w, dw/ds)`.
pub fn spline_weight<T: Real>(s: T) -> (T, T) {
    if s >= T::one() {
        return (T::zero(), T::zero());
    }
    let s2 = s * s;
    let w = T::one() - T::lit(6.0) * s2 + T::lit(8.0) * s2 * s - T::lit(3.0) * s2 * s2;
    let om = T::one() - s;
    (w, -T::lit(12.0) * s * om * om)
}

/// Shape function values and gradients of the supporting nodes at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MlsShape<T> {
    pub nodes: Vec<usize>,
    pub values: Vec<T>,
    pub gradients: Vec<[T; 2]>,
}

#[derive(Debug, Clone)]
struct BucketGrid<T> {
    origin: Point2<T>,
    size: T,
    dims: [usize; 2],
    buckets: Vec<Vec<usize>>,
}

impl<T: Real> BucketGrid<T> {
    fn cell_of(&self, p: Point2<T>) -> Option<usize> {
        let mut ij = [0usize; 2];
        for a in 0..2 {
            let v = ((p[a] - self.origin[a]) / self.size).floor();
            if v < T::zero() {
                return None;
            }
            let v = v.to_usize()?;
            if v >= self.dims[a] {
                return None;
            }
            ij[a] = v;
        }
        Some(ij[1] * self.dims[0] + ij[0])
    }
}

/// Node cloud with per-node circular supports. Nodes on opposite faces of a
/// geometric slit do not see each other.
#[derive(Debug, Clone)]
pub struct MlsModel<T> {
    points: Vec<Point2<T>>,
    radius: Vec<T>,
    faces: Vec<i8>,
    slit: Option<Slit<T>>,
    grid: BucketGrid<T>,
}

impl<T: Real> MlsModel<T> {
    pub fn new(points: Vec<Point2<T>>, radius: Vec<T>, faces: Vec<i8>, slit: Option<Slit<T>>) -> Self {
        assert_eq!(points.len(), radius.len());
        assert_eq!(points.len(), faces.len());
        let mut lo = [T::infinity(); 2];
        let mut hi = [T::neg_infinity(); 2];
        let mut rmin = T::infinity();
        for (p, &r) in points.iter().zip(&radius) {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a] - r);
                hi[a] = hi[a].max(p[a] + r);
            }
            rmin = rmin.min(r);
        }
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let size = rmin.max(extent / T::lit(256.0));
        let dims = [
            ((hi[0] - lo[0]) / size).ceil().to_usize().unwrap_or(1).max(1) + 1,
            ((hi[1] - lo[1]) / size).ceil().to_usize().unwrap_or(1).max(1) + 1,
        ];
        let mut grid = BucketGrid {
            origin: lo,
            size,
            dims,
            buckets: vec![Vec::new(); dims[0] * dims[1]],
        };
        for (k, (p, &r)) in points.iter().zip(&radius).enumerate() {
            let idx = |v: T, a: usize| {
                ((v - lo[a]) / size)
                    .floor()
                    .to_usize()
                    .unwrap_or(0)
                    .min(dims[a] - 1)
            };
            let (i0, i1) = (idx(p[0] - r, 0), idx(p[0] + r, 0));
            let (j0, j1) = (idx(p[1] - r, 1), idx(p[1] + r, 1));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    grid.buckets[j * dims[0] + i].push(k);
                }
            }
        }
        Self {
            points,
            radius,
            faces,
            slit,
            grid,
        }
    }

    /// Nodes of the mesh with support radius `factor` times the smallest
    /// leaf touching each node.
    pub fn from_mesh(mesh: &QuadtreeMesh<T>, elements: &[PolygonElement], factor: T) -> Self {
        let mut size = vec![T::infinity(); mesh.num_nodes()];
        for e in elements {
            let h = mesh.cell(e.cell).size;
            for &n in &e.nodes {
                size[n] = size[n].min(h);
            }
        }
        let radius = size.iter().map(|&h| h * factor).collect();
        Self::new(
            mesh.nodes().to_vec(),
            radius,
            mesh.slit_faces(),
            mesh.slit().cloned(),
        )
    }

    pub fn num_nodes(&self) -> usize {
        self.points.len()
    }

    pub fn radius(&self, k: usize) -> T {
        self.radius[k]
    }

    fn visible(&self, x: Point2<T>, k: usize) -> bool {
        let Some(slit) = &self.slit else {
            return true;
        };
        let horizontal = slit.mouth[1] == slit.tip[1];
        let (along, across) = if horizontal { (0, 1) } else { (1, 0) };
        let line = slit.tip[across];
        let side = |p: Point2<T>| {
            let d = p[across] - line;
            if d > T::zero() {
                1
            } else if d < T::zero() {
                -1
            } else {
                0
            }
        };
        let face = self.faces[k];
        if face != 0 {
            return side(x) == face as i32;
        }
        let xk = self.points[k];
        let (sx, sk) = (side(x), side(xk));
        if sx * sk >= 0 {
            return true;
        }
        let t = (line - x[across]) / (xk[across] - x[across]);
        let hit = x[along] + t * (xk[along] - x[along]);
        let (a, b) = (slit.mouth[along], slit.tip[along]);
        let inside = if a < b { hit >= a && hit < b } else { hit > b && hit <= a };
        !inside
    }

    fn supports(&self, x: Point2<T>, growth: T) -> Vec<usize> {
        let in_support = |k: usize| {
            let p = self.points[k];
            let r = (p[0] - x[0]).hypot(p[1] - x[1]);
            r < self.radius[k] * growth && self.visible(x, k)
        };
        if growth == T::one() {
            if let Some(b) = self.grid.cell_of(x) {
                return self.grid.buckets[b].iter().copied().filter(|&k| in_support(k)).collect();
            }
        }
        (0..self.points.len()).filter(|&k| in_support(k)).collect()
    }

    /// Shape functions at `x`; supports grow by 1.5 until the moment matrix
    /// is regular.
    pub fn shape(&self, x: Point2<T>) -> Result<MlsShape<T>, RecoveryError> {
        let mut growth = T::one();
        for _ in 0..8 {
            let nodes = self.supports(x, growth);
            if let Some(s) = self.shape_with(x, nodes, growth) {
                return Ok(s);
            }
            growth *= T::lit(1.5);
        }
        Err(RecoveryError::SingularMoment {
            x: x[0].to_f64_lossy(),
            y: x[1].to_f64_lossy(),
        })
    }

    fn shape_with(&self, x: Point2<T>, nodes: Vec<usize>, growth: T) -> Option<MlsShape<T>> {
        if nodes.len() < 3 {
            return None;
        }
        let h = nodes
            .iter()
            .map(|&k| self.radius[k] * growth)
            .fold(T::infinity(), |a, b| a.min(b));
        let m = nodes.len();
        let mut pk = Vec::with_capacity(m);
        let mut w = Vec::with_capacity(m);
        let mut dw = Vec::with_capacity(m);
        let mut a = [[T::zero(); 3]; 3];
        let mut da = [[[T::zero(); 3]; 3]; 2];
        for &k in &nodes {
            let xk = self.points[k];
            let d = self.radius[k] * growth;
            let r = (xk[0] - x[0]).hypot(xk[1] - x[1]);
            let (wk, _) = spline_weight(r / d);
            // dw/dx = w'(s) / r * (x - x_k) / d, with w'(s)/s finite at 0
            let om = T::one() - r / d;
            let c = -T::lit(12.0) * om * om / (d * d);
            let dwk = [c * (x[0] - xk[0]), c * (x[1] - xk[1])];
            let p = [T::one(), (xk[0] - x[0]) / h, (xk[1] - x[1]) / h];
            for i in 0..3 {
                for j in 0..3 {
                    a[i][j] += wk * p[i] * p[j];
                    da[0][i][j] += dwk[0] * p[i] * p[j];
                    da[1][i][j] += dwk[1] * p[i] * p[j];
                }
            }
            pk.push(p);
            w.push(wk);
            dw.push(dwk);
        }
        let inv = invert3(&a)?;
        let px = [T::one(), T::zero(), T::zero()];
        let gamma = mul3(&inv, px);
        let mut dgamma = [[T::zero(); 3]; 2];
        for i in 0..2 {
            let mut rhs = [T::zero(), T::zero(), T::zero()];
            rhs[i + 1] = T::one() / h;
            let ag = mul3(&da[i], gamma);
            for j in 0..3 {
                rhs[j] -= ag[j];
            }
            dgamma[i] = mul3(&inv, rhs);
        }
        let dot = |u: [T; 3], v: [T; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        let mut values = Vec::with_capacity(m);
        let mut gradients = Vec::with_capacity(m);
        for k in 0..m {
            let gp = dot(gamma, pk[k]);
            values.push(gp * w[k]);
            gradients.push([
                dot(dgamma[0], pk[k]) * w[k] + gp * dw[k][0],
                dot(dgamma[1], pk[k]) * w[k] + gp * dw[k][1],
            ]);
        }
        Some(MlsShape {
            nodes,
            values,
            gradients,
        })
    }

    /// Symmetrised MLS derivative of the nodal displacement field (Voigt).
    pub fn recovered_strain(&self, u: &[T], x: Point2<T>) -> Result<[T; 3], RecoveryError> {
        let s = self.shape(x)?;
        Ok(strain_from_shape(&s, u))
    }
}

pub(crate) fn strain_from_shape<T: Real>(s: &MlsShape<T>, u: &[T]) -> [T; 3] {
    let mut e = [T::zero(); 3];
    for (&k, g) in s.nodes.iter().zip(&s.gradients) {
        let (ux, uy) = (u[2 * k], u[2 * k + 1]);
        e[0] += g[0] * ux;
        e[1] += g[1] * uy;
        e[2] += g[1] * ux + g[0] * uy;
    }
    e
}

fn mul3<T: Real>(m: &[[T; 3]; 3], v: [T; 3]) -> [T; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Inverse of a symmetric positive semi-definite 3x3 matrix, `None` when
/// nearly singular.
fn invert3<T: Real>(a: &[[T; 3]; 3]) -> Option<[[T; 3]; 3]> {
    let c = |i: usize, j: usize| {
        let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
        let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
        a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1]
    };
    let det = a[0][0] * c(0, 0) + a[0][1] * c(0, 1) + a[0][2] * c(0, 2);
    let scale = a[0][0].max(a[1][1]).max(a[2][2]);
    if !(det > T::lit(1e-10) * scale * scale * scale) {
        return None;
    }
    let mut inv = [[T::zero(); 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = c(j, i) / det;
        }
    }
    Some(inv)
}
