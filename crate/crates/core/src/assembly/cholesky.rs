//! Up-looking sparse Cholesky `P A P^T = L L^T` with cached symbolic analysis.

use std::sync::Arc;

use super::ordering::minimum_degree;
use super::sparse::{CsrMatrix, SparsityPattern};
use crate::error::SolveError;
use crate::scalar::Real;

const NONE: usize = usize::MAX;

/// Ordering, elimination tree and column structure of `L` for one pattern.
#[derive(Debug, Clone)]
pub struct SymbolicCholesky {
    pattern: Arc<SparsityPattern>,
    perm: Vec<usize>,
    /// Upper triangle of the permuted matrix by columns.
    ap: Vec<usize>,
    ai: Vec<usize>,
    /// Source index into the CSR value array for each `ai` entry.
    amap: Vec<usize>,
    parent: Vec<usize>,
    lp: Vec<usize>,
}

impl SymbolicCholesky {
    pub fn analyze(pattern: Arc<SparsityPattern>) -> Self {
        let perm = minimum_degree(&pattern);
        Self::with_ordering(pattern, perm)
    }

    /// `perm[new] = old` must be a permutation of `0..n`.
    pub fn with_ordering(pattern: Arc<SparsityPattern>, perm: Vec<usize>) -> Self {
        let n = pattern.n;
        assert_eq!(perm.len(), n, "ordering length");
        let mut iperm = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            iperm[old] = new;
        }
        let mut counts = vec![0usize; n + 1];
        for r in 0..n {
            for &c in pattern.row(r) {
                let (i, j) = (iperm[r], iperm[c]);
                if i <= j {
                    counts[j + 1] += 1;
                }
            }
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let ap = counts.clone();
        let mut next = counts;
        let mut ai = vec![0; ap[n]];
        let mut amap = vec![0; ap[n]];
        for r in 0..n {
            for k in pattern.row_ptr[r]..pattern.row_ptr[r + 1] {
                let (i, j) = (iperm[r], iperm[pattern.col_idx[k]]);
                if i <= j {
                    ai[next[j]] = i;
                    amap[next[j]] = k;
                    next[j] += 1;
                }
            }
        }

        let mut parent = vec![NONE; n];
        let mut ancestor = vec![NONE; n];
        for k in 0..n {
            for &start in &ai[ap[k]..ap[k + 1]] {
                let mut i = start;
                while i != NONE && i < k {
                    let inext = ancestor[i];
                    ancestor[i] = k;
                    if inext == NONE {
                        parent[i] = k;
                    }
                    i = inext;
                }
            }
        }

        let mut colcount = vec![1usize; n];
        let mut mark = vec![NONE; n];
        let mut stack = Vec::new();
        for k in 0..n {
            mark[k] = k;
            for &start in &ai[ap[k]..ap[k + 1]] {
                let mut i = start;
                stack.clear();
                while i != NONE && mark[i] != k {
                    mark[i] = k;
                    stack.push(i);
                    i = parent[i];
                }
                for &i in &stack {
                    colcount[i] += 1;
                }
            }
        }
        let mut lp = vec![0; n + 1];
        for j in 0..n {
            lp[j + 1] = lp[j] + colcount[j];
        }
        Self {
            pattern,
            perm,
            ap,
            ai,
            amap,
            parent,
            lp,
        }
    }

    pub fn n(&self) -> usize {
        self.pattern.n
    }

    pub fn nnz_l(&self) -> usize {
        self.lp[self.n()]
    }

    pub fn matches(&self, pattern: &Arc<SparsityPattern>) -> bool {
        Arc::ptr_eq(&self.pattern, pattern) || *self.pattern == **pattern
    }

    /// Pattern of row `k` of `L` (excluding the diagonal), topologically
    /// ordered, written to `s[top..]`.
    fn ereach(&self, k: usize, mark: &mut [usize], s: &mut [usize], stack: &mut Vec<usize>) -> usize {
        let n = self.n();
        let mut top = n;
        mark[k] = k;
        for &start in &self.ai[self.ap[k]..self.ap[k + 1]] {
            let mut i = start;
            if i > k {
                continue;
            }
            stack.clear();
            while mark[i] != k {
                stack.push(i);
                mark[i] = k;
                i = self.parent[i];
            }
            while let Some(v) = stack.pop() {
                top -= 1;
                s[top] = v;
            }
        }
        top
    }

    pub fn factor<T: Real>(self: &Arc<Self>, a: &CsrMatrix<T>) -> Result<CholeskyFactor<T>, SolveError> {
        let n = self.n();
        if a.n() != n {
            return Err(SolveError::Dimension {
                expected: n,
                got: a.n(),
            });
        }
        let mut li = vec![0usize; self.nnz_l()];
        let mut lx = vec![T::zero(); self.nnz_l()];
        let mut c = self.lp[..n].to_vec();
        let mut x = vec![T::zero(); n];
        let mut mark = vec![NONE; n];
        let mut s = vec![0usize; n];
        let mut stack = Vec::new();
        for k in 0..n {
            let top = self.ereach(k, &mut mark, &mut s, &mut stack);
            x[k] = T::zero();
            for p in self.ap[k]..self.ap[k + 1] {
                x[self.ai[p]] += a.values[self.amap[p]];
            }
            let mut d = x[k];
            x[k] = T::zero();
            for &i in &s[top..n] {
                let lki = x[i] / lx[self.lp[i]];
                x[i] = T::zero();
                for p in self.lp[i] + 1..c[i] {
                    x[li[p]] -= lx[p] * lki;
                }
                d -= lki * lki;
                let p = c[i];
                c[i] += 1;
                li[p] = k;
                lx[p] = lki;
            }
            if !(d > T::zero()) {
                return Err(SolveError::NotPositiveDefinite {
                    column: self.perm[k],
                    pivot: d.to_f64_lossy(),
                });
            }
            let p = c[k];
            c[k] += 1;
            li[p] = k;
            lx[p] = d.sqrt();
        }
        Ok(CholeskyFactor {
            symbolic: Arc::clone(self),
            li,
            lx,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CholeskyFactor<T> {
    symbolic: Arc<SymbolicCholesky>,
    li: Vec<usize>,
    lx: Vec<T>,
}

impl<T: Real> CholeskyFactor<T> {
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let sym = &self.symbolic;
        let n = sym.n();
        let mut x: Vec<T> = sym.perm.iter().map(|&o| b[o]).collect();
        for j in 0..n {
            x[j] /= self.lx[sym.lp[j]];
            let xj = x[j];
            for p in sym.lp[j] + 1..sym.lp[j + 1] {
                x[self.li[p]] -= self.lx[p] * xj;
            }
        }
        for j in (0..n).rev() {
            let mut v = x[j];
            for p in sym.lp[j] + 1..sym.lp[j + 1] {
                v -= self.lx[p] * x[self.li[p]];
            }
            x[j] = v / self.lx[sym.lp[j]];
        }
        let mut out = vec![T::zero(); n];
        for (new, &old) in sym.perm.iter().enumerate() {
            out[old] = x[new];
        }
        out
    }
}

/// Direct SPD solver that reuses its symbolic analysis while the pattern
/// stays the same.
#[derive(Debug, Default)]
pub struct SpdSolver {
    symbolic: Option<Arc<SymbolicCholesky>>,
}

impl SpdSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn factor<T: Real>(&mut self, a: &CsrMatrix<T>) -> Result<CholeskyFactor<T>, SolveError> {
        let sym = match &self.symbolic {
            Some(s) if s.matches(&a.pattern) => Arc::clone(s),
            _ => {
                let s = Arc::new(SymbolicCholesky::analyze(Arc::clone(&a.pattern)));
                self.symbolic = Some(Arc::clone(&s));
                s
            }
        };
        sym.factor(a)
    }

    pub fn solve<T: Real>(&mut self, a: &CsrMatrix<T>, b: &[T]) -> Result<Vec<T>, SolveError> {
        if b.len() != a.n() {
            return Err(SolveError::Dimension {
                expected: a.n(),
                got: b.len(),
            });
        }
        Ok(self.factor(a)?.solve(b))
    }
}

/// One-off factorization and solve.
pub fn solve_spd<T: Real>(a: &CsrMatrix<T>, b: &[T]) -> Result<Vec<T>, SolveError> {
    SpdSolver::new().solve(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(m: usize) -> CsrMatrix<f64> {
        let n = m * m;
        let mut a = vec![vec![0.0; n]; n];
        for j in 0..m {
            for i in 0..m {
                let k = j * m + i;
                a[k][k] = 4.0;
                if i > 0 {
                    a[k][k - 1] = -1.0;
                }
                if i + 1 < m {
                    a[k][k + 1] = -1.0;
                }
                if j > 0 {
                    a[k][k - m] = -1.0;
                }
                if j + 1 < m {
                    a[k][k + m] = -1.0;
                }
            }
        }
        CsrMatrix::from_dense(&a)
    }

    #[test]
    fn solves_grid_laplacian() {
        let a = laplacian(20);
        let b: Vec<f64> = (0..400).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = solve_spd(&a, &b).unwrap();
        let r = a.matvec(&x);
        let err: f64 = r.iter().zip(&b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(err / nb < 1e-12, "{}", err / nb);
    }

    #[test]
    fn detects_indefinite() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(matches!(
            solve_spd(&a, &[1.0, 1.0]),
            Err(SolveError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn reuses_symbolic() {
        let a = laplacian(10);
        let mut s = SpdSolver::new();
        s.solve(&a, &[1.0; 100]).unwrap();
        let first = Arc::clone(s.symbolic.as_ref().unwrap());
        let mut a2 = a.clone();
        a2.scale(2.0);
        s.solve(&a2, &[1.0; 100]).unwrap();
        assert!(Arc::ptr_eq(&first, s.symbolic.as_ref().unwrap()));
    }
}

