use std::sync::Arc;

use super::sparse::{CsrMatrix, SparsityPattern};
use crate::error::SolveError;
use crate::scalar::Real;

/// Index bookkeeping for eliminating a fixed set of constrained dofs from
/// matrices sharing one pattern.
#[derive(Debug, Clone)]
pub struct DirichletPlan {
    full: Arc<SparsityPattern>,
    constrained: Vec<usize>,
    free: Vec<usize>,
    reduced: Arc<SparsityPattern>,
    /// Full value index of each reduced entry.
    value_map: Vec<usize>,
}

impl DirichletPlan {
    pub fn new(full: Arc<SparsityPattern>, constrained: &[usize]) -> Result<Self, SolveError> {
        let n = full.n;
        let mut is_fixed = vec![false; n];
        for &d in constrained {
            if d >= n {
                return Err(SolveError::UnknownDof { dof: d, n });
            }
            is_fixed[d] = true;
        }
        let mut index = vec![usize::MAX; n];
        let mut free = Vec::new();
        for d in 0..n {
            if !is_fixed[d] {
                index[d] = free.len();
                free.push(d);
            }
        }
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut value_map = Vec::new();
        for &r in &free {
            for k in full.row_ptr[r]..full.row_ptr[r + 1] {
                let c = full.col_idx[k];
                if !is_fixed[c] {
                    col_idx.push(index[c]);
                    value_map.push(k);
                }
            }
            row_ptr.push(col_idx.len());
        }
        let constrained: Vec<usize> = (0..n).filter(|&d| is_fixed[d]).collect();
        Ok(Self {
            reduced: Arc::new(SparsityPattern {
                n: free.len(),
                row_ptr,
                col_idx,
            }),
            full,
            constrained,
            free,
            value_map,
        })
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn constrained(&self) -> &[usize] {
        &self.constrained
    }

    pub fn applies_to(&self, pattern: &Arc<SparsityPattern>) -> bool {
        Arc::ptr_eq(&self.full, pattern) || *self.full == **pattern
    }

    /// Reduced matrix and right-hand side `f_f - K_fc u_c`; `prescribed` is a
    /// full-length vector whose constrained entries hold the imposed values.
    pub fn reduce<T: Real>(&self, k: &CsrMatrix<T>, f: &[T], prescribed: &[T]) -> (CsrMatrix<T>, Vec<T>) {
        let values = self.value_map.iter().map(|&i| k.values[i]).collect();
        let mut rhs = Vec::with_capacity(self.free.len());
        let mut fixed = vec![false; self.full.n];
        for &d in &self.constrained {
            fixed[d] = true;
        }
        for &r in &self.free {
            let mut v = f[r];
            for idx in self.full.row_ptr[r]..self.full.row_ptr[r + 1] {
                let c = self.full.col_idx[idx];
                if fixed[c] {
                    v -= k.values[idx] * prescribed[c];
                }
            }
            rhs.push(v);
        }
        (
            CsrMatrix {
                pattern: Arc::clone(&self.reduced),
                values,
            },
            rhs,
        )
    }

    /// Full vector from the reduced solution and prescribed values.
    pub fn expand<T: Real>(&self, reduced: &[T], prescribed: &[T]) -> Vec<T> {
        let mut u = vec![T::zero(); self.full.n];
        for &d in &self.constrained {
            u[d] = prescribed[d];
        }
        for (&d, &v) in self.free.iter().zip(reduced) {
            u[d] = v;
        }
        u
    }
}

/// Symmetric elimination of `(dof, value)` constraints.
#[derive(Debug, Clone)]
pub struct ReducedSystem<T> {
    pub plan: DirichletPlan,
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
    pub prescribed: Vec<T>,
}

impl<T: Real> ReducedSystem<T> {
    pub fn expand(&self, reduced: &[T]) -> Vec<T> {
        self.plan.expand(reduced, &self.prescribed)
    }
}

pub fn apply_dirichlet<T: Real>(
    k: &CsrMatrix<T>,
    f: &[T],
    constraints: &[(usize, T)],
) -> Result<ReducedSystem<T>, SolveError> {
    let n = k.n();
    if f.len() != n {
        return Err(SolveError::Dimension {
            expected: n,
            got: f.len(),
        });
    }
    let dofs: Vec<usize> = constraints.iter().map(|c| c.0).collect();
    let plan = DirichletPlan::new(Arc::clone(&k.pattern), &dofs)?;
    let mut prescribed = vec![T::zero(); n];
    for &(d, v) in constraints {
        prescribed[d] = v;
    }
    let (matrix, rhs) = plan.reduce(k, f, &prescribed);
    Ok(ReducedSystem {
        plan,
        matrix,
        rhs,
        prescribed,
    })
}
