use std::sync::Arc;

use crate::scalar::Real;

/// Row-compressed sparsity pattern with sorted column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
}

impl SparsityPattern {
    /// Pattern of a matrix whose rows couple every pair of dofs within each
    /// group (element dof lists). Diagonal entries are always present.
    pub fn from_groups<'a>(n: usize, groups: impl IntoIterator<Item = &'a [usize]>) -> Self {
        let mut rows: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for g in groups {
            for &i in g {
                rows[i].extend_from_slice(g);
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for mut r in rows {
            r.sort_unstable();
            r.dedup();
            col_idx.extend(r);
            row_ptr.push(col_idx.len());
        }
        Self { n, row_ptr, col_idx }
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    /// Position of `(i, j)` in the value array.
    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        self.row(i).binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }
}

/// Square sparse matrix storing both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    pub pattern: Arc<SparsityPattern>,
    pub values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    pub fn zeros(pattern: Arc<SparsityPattern>) -> Self {
        let values = vec![T::zero(); pattern.nnz()];
        Self { pattern, values }
    }

    pub fn from_dense(a: &[Vec<T>]) -> Self {
        let n = a.len();
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for (i, row) in a.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != T::zero() || i == j {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            pattern: Arc::new(SparsityPattern { n, row_ptr, col_idx }),
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.pattern.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.pattern.find(i, j).map_or(T::zero(), |k| self.values[k])
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let k = self
            .pattern
            .find(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) not in pattern"));
        self.values[k] += v;
    }

    /// Adds a dense block `m` at dofs `dofs x dofs`.
    pub fn add_block(&mut self, dofs: &[usize], m: &[T]) {
        let n = dofs.len();
        for (a, &i) in dofs.iter().enumerate() {
            let start = self.pattern.row_ptr[i];
            let row = self.pattern.row(i);
            for (b, &j) in dofs.iter().enumerate() {
                let k = start + row.binary_search(&j).expect("block entry in pattern");
                self.values[k] += m[a * n + b];
            }
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let p = &self.pattern;
        (0..p.n)
            .map(|i| {
                let mut s = T::zero();
                for k in p.row_ptr[i]..p.row_ptr[i + 1] {
                    s += self.values[k] * x[p.col_idx[k]];
                }
                s
            })
            .collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n()).map(|i| self.get(i, i)).collect()
    }

    pub fn scale(&mut self, c: T) {
        self.values.iter_mut().for_each(|v| *v *= c);
    }

    /// Largest `|a_ij - a_ji|` relative to the largest entry.
    pub fn asymmetry(&self) -> T {
        let p = &self.pattern;
        let mut big = T::zero();
        let mut diff = T::zero();
        for i in 0..p.n {
            for k in p.row_ptr[i]..p.row_ptr[i + 1] {
                let j = p.col_idx[k];
                big = big.max(self.values[k].abs());
                diff = diff.max((self.values[k] - self.get(j, i)).abs());
            }
        }
        if big == T::zero() {
            T::zero()
        } else {
            diff / big
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.n();
        let mut a = vec![vec![T::zero(); n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            for k in self.pattern.row_ptr[i]..self.pattern.row_ptr[i + 1] {
                row[self.pattern.col_idx[k]] = self.values[k];
            }
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_from_groups() {
        let g1 = [0usize, 2];
        let g2 = [2usize, 3];
        let p = SparsityPattern::from_groups(4, [&g1[..], &g2[..]]);
        assert_eq!(p.row(0), &[0, 2]);
        assert_eq!(p.row(1), &[1]);
        assert_eq!(p.row(2), &[0, 2, 3]);
        assert_eq!(p.find(3, 0), None);
    }

    #[test]
    fn block_scatter_and_matvec() {
        let g = [0usize, 1];
        let p = Arc::new(SparsityPattern::from_groups(2, [&g[..]]));
        let mut m = CsrMatrix::<f64>::zeros(p);
        m.add_block(&g, &[2.0, -1.0, -1.0, 2.0]);
        assert_eq!(m.matvec(&[1.0, 1.0]), vec![1.0, 1.0]);
        assert_eq!(m.asymmetry(), 0.0);
    }
}
