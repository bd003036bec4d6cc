//! Fill-reducing orderings: approximate minimum degree, and recursive graph
//! bisection with level-structure separators.

use std::collections::VecDeque;

use super::sparse::SparsityPattern;

const LEAF_SIZE: usize = 64;
const NONE: usize = usize::MAX;

struct Work<'a> {
    pattern: &'a SparsityPattern,
    /// Subset membership stamp per vertex.
    stamp: Vec<usize>,
    level: Vec<usize>,
    next_stamp: usize,
}

impl Work<'_> {
    fn mark(&mut self, set: &[usize]) -> usize {
        self.next_stamp += 1;
        for &v in set {
            self.stamp[v] = self.next_stamp;
        }
        self.next_stamp
    }

    /// BFS inside the stamped subset; returns visit order, levels are left in
    /// `self.level`.
    fn bfs(&mut self, start: usize, s: usize) -> Vec<usize> {
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        self.level[start] = 0;
        let visited = s + 1;
        // visited vertices are re-stamped to `s + 1`; callers restore
        self.stamp[start] = visited;
        while let Some(v) = queue.pop_front() {
            for &w in self.pattern.row(v) {
                if self.stamp[w] == s {
                    self.stamp[w] = visited;
                    self.level[w] = self.level[v] + 1;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        order
    }

    fn dissect(&mut self, set: Vec<usize>, out: &mut Vec<usize>) {
        if set.len() <= LEAF_SIZE {
            out.extend(set);
            return;
        }
        let s = self.mark(&set);
        self.next_stamp += 1;
        let first = self.bfs(set[0], s);
        if first.len() < set.len() {
            let mut comps = vec![first];
            for &v in &set {
                if self.stamp[v] == s {
                    comps.push(self.bfs(v, s));
                }
            }
            for c in comps {
                self.dissect(c, out);
            }
            return;
        }
        // pseudo-peripheral vertex
        let mut root = *first.last().unwrap();
        let mut depth = 0;
        for _ in 0..4 {
            let s = self.mark(&set);
            self.next_stamp += 1;
            let order = self.bfs(root, s);
            let far = *order.last().unwrap();
            if self.level[far] <= depth {
                break;
            }
            depth = self.level[far];
            root = far;
        }
        let s = self.mark(&set);
        self.next_stamp += 1;
        let order = self.bfs(root, s);
        let depth = self.level[*order.last().unwrap()];
        if depth < 2 {
            out.extend(set);
            return;
        }
        let mut counts = vec![0usize; depth + 1];
        for &v in &order {
            counts[self.level[v]] += 1;
        }
        let mut acc = 0;
        let mut mid = 1;
        for (l, &c) in counts.iter().enumerate() {
            acc += c;
            if 2 * acc >= order.len() {
                mid = l.clamp(1, depth - 1);
                break;
            }
        }
        let (mut a, mut b, mut sep) = (Vec::new(), Vec::new(), Vec::new());
        for &v in &order {
            let l = self.level[v];
            if l < mid {
                a.push(v);
            } else if l > mid {
                b.push(v);
            } else if self.pattern.row(v).iter().any(|&w| self.level[w] == mid + 1 && self.stamp[w] == s + 1) {
                sep.push(v);
            } else {
                a.push(v);
            }
        }
        self.dissect(a, out);
        self.dissect(b, out);
        out.extend(sep);
    }
}

/// Approximate minimum degree permutation `perm[new] = old`. Falls back to
/// nested dissection if the pattern is rejected.
pub fn minimum_degree(pattern: &SparsityPattern) -> Vec<usize> {
    let ap: Vec<i64> = pattern.row_ptr.iter().map(|&x| x as i64).collect();
    let ai: Vec<i64> = pattern.col_idx.iter().map(|&x| x as i64).collect();
    match amd::order(pattern.n as i64, &ap, &ai, &amd::Control::default()) {
        Ok((p, _, _)) => p.into_iter().map(|x| x as usize).collect(),
        Err(status) => {
            log::warn!("minimum degree ordering failed ({status:?}); using nested dissection");
            nested_dissection(pattern)
        }
    }
}

/// Permutation `perm[new] = old` for a symmetric pattern.
pub fn nested_dissection(pattern: &SparsityPattern) -> Vec<usize> {
    let n = pattern.n;
    let mut work = Work {
        pattern,
        stamp: vec![0; n],
        level: vec![NONE; n],
        next_stamp: 0,
    };
    let mut out = Vec::with_capacity(n);
    work.dissect((0..n).collect(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(m: usize) -> SparsityPattern {
        let mut groups = Vec::new();
        for j in 0..m - 1 {
            for i in 0..m - 1 {
                let a = j * m + i;
                groups.push(vec![a, a + 1, a + m, a + m + 1]);
            }
        }
        SparsityPattern::from_groups(m * m, groups.iter().map(|g| g.as_slice()))
    }

    #[test]
    fn is_permutation() {
        let p = grid(30);
        let perm = nested_dissection(&p);
        let mut s = perm.clone();
        s.sort_unstable();
        assert_eq!(s, (0..900).collect::<Vec<_>>());
    }

    #[test]
    fn minimum_degree_beats_natural_order_on_grid() {
        use crate::assembly::SymbolicCholesky;
        use std::sync::Arc;
        let p = Arc::new(grid(30));
        let md = SymbolicCholesky::with_ordering(p.clone(), minimum_degree(&p));
        let natural = SymbolicCholesky::with_ordering(p.clone(), (0..900).collect());
        assert!(md.nnz_l() < natural.nnz_l());
    }

    #[test]
    fn disconnected_graph() {
        let g1 = [0usize, 1];
        let p = SparsityPattern::from_groups(200, [&g1[..]]);
        let perm = nested_dissection(&p);
        assert_eq!(perm.len(), 200);
    }
}
