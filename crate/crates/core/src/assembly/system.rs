use std::sync::Arc;

use rayon::prelude::*;

use super::sparse::{CsrMatrix, SparsityPattern};
use crate::basis::ElementBasis;
use crate::error::SolveError;
use crate::geometry::NodeId;
use crate::material::{degradation, HistoryField, MaterialParams};
use crate::scalar::{Point2, Real};

/// Dof numbering: displacement dofs `2n, 2n + 1` in the elasticity system and
/// phase dof `n` in the phase system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofMap {
    pub num_nodes: usize,
}

impl DofMap {
    pub fn new(num_nodes: usize) -> Self {
        Self { num_nodes }
    }

    #[inline]
    pub fn ux(&self, node: NodeId) -> usize {
        2 * node
    }

    #[inline]
    pub fn uy(&self, node: NodeId) -> usize {
        2 * node + 1
    }

    #[inline]
    pub fn phi(&self, node: NodeId) -> usize {
        node
    }

    pub fn num_u(&self) -> usize {
        2 * self.num_nodes
    }

    pub fn num_phi(&self) -> usize {
        self.num_nodes
    }

    /// Displacement plus phase dofs.
    pub fn total(&self) -> usize {
        3 * self.num_nodes
    }

    pub fn element_u_dofs(&self, nodes: &[NodeId]) -> Vec<usize> {
        nodes.iter().flat_map(|&n| [2 * n, 2 * n + 1]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SparseSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
}

/// Sparsity patterns of both systems for one mesh.
#[derive(Debug, Clone)]
pub struct Assembler {
    pub dofs: DofMap,
    u_pattern: Arc<SparsityPattern>,
    phi_pattern: Arc<SparsityPattern>,
}

impl Assembler {
    pub fn new<T: Real>(bases: &[ElementBasis<T>], num_nodes: usize) -> Self {
        let dofs = DofMap::new(num_nodes);
        let u_groups: Vec<Vec<usize>> = bases.iter().map(|b| dofs.element_u_dofs(&b.nodes)).collect();
        let u_pattern = SparsityPattern::from_groups(dofs.num_u(), u_groups.iter().map(|g| g.as_slice()));
        let phi_pattern = SparsityPattern::from_groups(num_nodes, bases.iter().map(|b| b.nodes.as_slice()));
        Self {
            dofs,
            u_pattern: Arc::new(u_pattern),
            phi_pattern: Arc::new(phi_pattern),
        }
    }

    pub fn u_pattern(&self) -> &Arc<SparsityPattern> {
        &self.u_pattern
    }

    pub fn phi_pattern(&self) -> &Arc<SparsityPattern> {
        &self.phi_pattern
    }

    /// Degraded elasticity stiffness `sum g(phi_q) B^T D B w t`; zero load.
    pub fn elasticity<T: Real>(
        &self,
        bases: &[ElementBasis<T>],
        phi: &[T],
        params: &MaterialParams<T>,
        thickness: T,
    ) -> Result<SparseSystem<T>, SolveError> {
        let d = params.constitutive_matrix();
        let blocks: Vec<Vec<T>> = bases
            .par_iter()
            .map(|b| elasticity_element(b, phi, &d, params.kp, thickness))
            .collect::<Result<_, _>>()?;
        let mut matrix = CsrMatrix::zeros(Arc::clone(&self.u_pattern));
        for (b, m) in bases.iter().zip(&blocks) {
            matrix.add_block(&self.dofs.element_u_dofs(&b.nodes), m);
        }
        Ok(SparseSystem {
            matrix,
            rhs: vec![T::zero(); self.dofs.num_u()],
        })
    }

    /// Phase-field system with history `h` as driving force.
    pub fn phase<T: Real>(
        &self,
        bases: &[ElementBasis<T>],
        h: &HistoryField<T>,
        params: &MaterialParams<T>,
    ) -> Result<SparseSystem<T>, SolveError> {
        let blocks: Vec<(Vec<T>, Vec<T>)> = bases
            .par_iter()
            .enumerate()
            .map(|(e, b)| phase_element(b, h.element(e), params))
            .collect::<Result<_, _>>()?;
        let mut matrix = CsrMatrix::zeros(Arc::clone(&self.phi_pattern));
        let mut rhs = vec![T::zero(); self.dofs.num_phi()];
        for (b, (m, f)) in bases.iter().zip(&blocks) {
            matrix.add_block(&b.nodes, m);
            for (&n, &v) in b.nodes.iter().zip(f) {
                rhs[n] += v;
            }
        }
        Ok(SparseSystem { matrix, rhs })
    }
}

fn elasticity_element<T: Real>(
    b: &ElementBasis<T>,
    phi: &[T],
    d: &[[T; 3]; 3],
    kp: T,
    thickness: T,
) -> Result<Vec<T>, SolveError> {
    let n = b.num_nodes();
    let m = 2 * n;
    let mut k = vec![T::zero(); m * m];
    for q in 0..b.num_points() {
        let phi_q = b.interpolate(q, phi);
        let scale = degradation(phi_q, kp) * b.weights[q] * thickness;
        let g = b.grads(q);
        // D B for every column
        let db: Vec<[T; 3]> = g
            .iter()
            .flat_map(|gb| {
                let cx = [gb[0], T::zero(), gb[1]];
                let cy = [T::zero(), gb[1], gb[0]];
                [mat3(d, cx), mat3(d, cy)]
            })
            .collect();
        for (a, ga) in g.iter().enumerate() {
            for col in 0..m {
                let s = db[col];
                k[(2 * a) * m + col] += scale * (ga[0] * s[0] + ga[1] * s[2]);
                k[(2 * a + 1) * m + col] += scale * (ga[1] * s[1] + ga[0] * s[2]);
            }
        }
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(SolveError::NonFinite { element: b.element });
    }
    Ok(k)
}

#[inline]
fn mat3<T: Real>(d: &[[T; 3]; 3], v: [T; 3]) -> [T; 3] {
    [
        d[0][0] * v[0] + d[0][1] * v[1] + d[0][2] * v[2],
        d[1][0] * v[0] + d[1][1] * v[1] + d[1][2] * v[2],
        d[2][0] * v[0] + d[2][1] * v[1] + d[2][2] * v[2],
    ]
}

fn phase_element<T: Real>(
    b: &ElementBasis<T>,
    h: &[T],
    params: &MaterialParams<T>,
) -> Result<(Vec<T>, Vec<T>), SolveError> {
    let n = b.num_nodes();
    let mut k = vec![T::zero(); n * n];
    let mut f = vec![T::zero(); n];
    let diffusion = params.gc * params.lo;
    for q in 0..b.num_points() {
        let hq = h[q];
        if !hq.is_finite() {
            return Err(SolveError::NonFinite { element: b.element });
        }
        let w = b.weights[q];
        let reaction = (params.gc / params.lo + T::two() * hq) * w;
        let (nv, g) = (b.shape(q), b.grads(q));
        for a in 0..n {
            f[a] += T::two() * hq * nv[a] * w;
            for c in 0..n {
                k[a * n + c] +=
                    diffusion * w * (g[a][0] * g[c][0] + g[a][1] * g[c][1]) + reaction * nv[a] * nv[c];
            }
        }
    }
    if k.iter().chain(&f).any(|v| !v.is_finite()) {
        return Err(SolveError::NonFinite { element: b.element });
    }
    Ok((k, f))
}

pub fn assemble_elasticity<T: Real>(
    bases: &[ElementBasis<T>],
    num_nodes: usize,
    phi: &[T],
    params: &MaterialParams<T>,
    thickness: T,
) -> Result<SparseSystem<T>, SolveError> {
    Assembler::new(bases, num_nodes).elasticity(bases, phi, params, thickness)
}

pub fn assemble_phase<T: Real>(
    bases: &[ElementBasis<T>],
    num_nodes: usize,
    h: &HistoryField<T>,
    params: &MaterialParams<T>,
) -> Result<SparseSystem<T>, SolveError> {
    Assembler::new(bases, num_nodes).phase(bases, h, params)
}

/// Consistent nodal loads of a uniform traction on the straight edge `a -> b`
/// (kN/mm² times thickness); shape functions are linear along edges.
pub fn add_edge_traction<T: Real>(
    rhs: &mut [T],
    dofs: &DofMap,
    (na, pa): (NodeId, Point2<T>),
    (nb, pb): (NodeId, Point2<T>),
    traction: [T; 2],
    thickness: T,
) {
    let len = (pb[0] - pa[0]).hypot(pb[1] - pa[1]);
    let share = len * thickness * T::half();
    for n in [na, nb] {
        rhs[dofs.ux(n)] += traction[0] * share;
        rhs[dofs.uy(n)] += traction[1] * share;
    }
}

/// `K u - f` summed per direction over `nodes`.
pub fn reaction_force<T: Real>(k: &CsrMatrix<T>, u: &[T], f: &[T], nodes: &[NodeId]) -> [T; 2] {
    let p = &k.pattern;
    let row = |i: usize| {
        let mut s = -f[i];
        for idx in p.row_ptr[i]..p.row_ptr[i + 1] {
            s += k.values[idx] * u[p.col_idx[idx]];
        }
        s
    };
    let mut r = [T::zero(); 2];
    for &n in nodes {
        r[0] += row(2 * n);
        r[1] += row(2 * n + 1);
    }
    r
}
