use serde::{Deserialize, Serialize};

use crate::basis::ElementBasis;
use crate::scalar::Real;

#[inline]
pub fn update_history<T: Real>(h_old: T, psi_pos: T) -> T {
    h_old.max(psi_pos)
}

/// Per-quadrature-point scalar stored flat, element by element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryField<T> {
    offsets: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> HistoryField<T> {
    pub fn zeros(points_per_element: impl IntoIterator<Item = usize>) -> Self {
        let mut offsets = vec![0];
        for n in points_per_element {
            offsets.push(offsets.last().unwrap() + n);
        }
        let total = *offsets.last().unwrap();
        Self {
            offsets,
            values: vec![T::zero(); total],
        }
    }

    pub fn from_elements(per_element: Vec<Vec<T>>) -> Self {
        let mut offsets = vec![0];
        let mut values = Vec::new();
        for v in per_element {
            values.extend(v);
            offsets.push(values.len());
        }
        Self { offsets, values }
    }

    pub fn for_bases(bases: &[ElementBasis<T>]) -> Self {
        Self::zeros(bases.iter().map(|b| b.num_points()))
    }

    pub fn num_elements(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn element(&self, e: usize) -> &[T] {
        &self.values[self.offsets[e]..self.offsets[e + 1]]
    }

    pub fn element_mut(&mut self, e: usize) -> &mut [T] {
        let (a, b) = (self.offsets[e], self.offsets[e + 1]);
        &mut self.values[a..b]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a.max(b))
    }

    /// Pointwise `max(self, psi)`; `psi` must have the same layout.
    pub fn raise_to(&mut self, psi: &HistoryField<T>) {
        assert_eq!(self.offsets, psi.offsets, "history layout mismatch");
        for (h, &p) in self.values.iter_mut().zip(&psi.values) {
            *h = update_history(*h, p);
        }
    }

    /// Same layout filled with values from `f(element, point)`.
    pub fn map_points(&self, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = self.clone();
        for e in 0..self.num_elements() {
            for (q, v) in out.element_mut(e).iter_mut().enumerate() {
                *v = f(e, q);
            }
        }
        out
    }
}

/// Weighted average of quadrature values onto nodes: each node receives the
/// quadrature-weight-weighted mean of the values in all elements around it.
pub fn nodal_average<T: Real>(bases: &[ElementBasis<T>], field: &HistoryField<T>, num_nodes: usize) -> Vec<T> {
    let mut sum = vec![T::zero(); num_nodes];
    let mut vol = vec![T::zero(); num_nodes];
    for (e, b) in bases.iter().enumerate() {
        let vals = field.element(e);
        let mut integral = T::zero();
        for (&v, &w) in vals.iter().zip(&b.weights) {
            integral += v * w;
        }
        for &n in &b.nodes {
            sum[n] += integral;
            vol[n] += b.area;
        }
    }
    sum.iter()
        .zip(&vol)
        .map(|(&s, &v)| if v > T::zero() { s / v } else { T::zero() })
        .collect()
}

/// Zeroes `phi` at every node whose tensile energy is below its compressive
/// energy. Returns the number of nodes changed.
pub fn apply_hybrid_constraint<T: Real>(phi: &mut [T], psi_pos: &[T], psi_neg: &[T]) -> usize {
    let mut changed = 0;
    for ((p, &a), &b) in phi.iter_mut().zip(psi_pos).zip(psi_neg) {
        if a < b {
            if *p != T::zero() {
                changed += 1;
            }
            *p = T::zero();
        }
    }
    changed
}
