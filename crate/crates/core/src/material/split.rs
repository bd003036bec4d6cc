//! Spectral decomposition of the plane strain tensor into tensile and
//! compressive parts and the matching energy densities.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Symmetric 2x2 tensor with tensor (not engineering) shear component.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SymTensor2<T> {
    pub xx: T,
    pub yy: T,
    pub xy: T,
}

impl<T: Real> SymTensor2<T> {
    pub fn new(xx: T, yy: T, xy: T) -> Self {
        Self { xx, yy, xy }
    }

    /// From Voigt strain `(exx, eyy, gxy)` with engineering shear.
    pub fn from_voigt_strain(e: [T; 3]) -> Self {
        Self::new(e[0], e[1], e[2] * T::half())
    }

    pub fn to_voigt_strain(self) -> [T; 3] {
        [self.xx, self.yy, self.xy * T::two()]
    }

    pub fn trace(self) -> T {
        self.xx + self.yy
    }

    /// `A : B`.
    pub fn contract(self, o: Self) -> T {
        self.xx * o.xx + self.yy * o.yy + T::two() * self.xy * o.xy
    }

    pub fn norm(self) -> T {
        self.contract(self).sqrt()
    }

    fn from_dyad(value: T, n: [T; 2]) -> Self {
        Self::new(value * n[0] * n[0], value * n[1] * n[1], value * n[0] * n[1])
    }
}

impl<T: Real> std::ops::Add for SymTensor2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.xx + o.xx, self.yy + o.yy, self.xy + o.xy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitResult<T> {
    pub psi_pos: T,
    pub psi_neg: T,
    pub strain_pos: SymTensor2<T>,
    pub strain_neg: SymTensor2<T>,
    /// Principal strains, largest first.
    pub principal: [T; 2],
    pub directions: [[T; 2]; 2],
    trace_pos: T,
    trace_neg: T,
}

impl<T: Real> SplitResult<T> {
    /// `dPsi+/de` and `dPsi-/de` as tensors.
    pub fn stresses(&self, lambda: T, mu: T) -> (SymTensor2<T>, SymTensor2<T>) {
        let part = |tr: T, e: SymTensor2<T>| {
            let two_mu = T::two() * mu;
            SymTensor2::new(
                lambda * tr + two_mu * e.xx,
                lambda * tr + two_mu * e.yy,
                two_mu * e.xy,
            )
        };
        (
            part(self.trace_pos, self.strain_pos),
            part(self.trace_neg, self.strain_neg),
        )
    }
}

#[inline]
fn pos<T: Real>(x: T) -> T {
    x.max(T::zero())
}

#[inline]
fn neg<T: Real>(x: T) -> T {
    x.min(T::zero())
}

/// Principal values and directions of a symmetric tensor. Repeated values
/// (gap below `1e-12 |e|`) use the coordinate axes.
pub fn principal<T: Real>(e: SymTensor2<T>) -> ([T; 2], [[T; 2]; 2]) {
    let m = e.trace() * T::half();
    let d = (e.xx - e.yy) * T::half();
    let r = d.hypot(e.xy);
    let scale = e.norm();
    if r <= T::lit(1e-12) * scale || r == T::zero() {
        return (
            [m + r, m - r],
            [[T::one(), T::zero()], [T::zero(), T::one()]],
        );
    }
    let theta = e.xy.atan2(d) * T::half();
    let (s, c) = theta.sin_cos();
    ([m + r, m - r], [[c, s], [-s, c]])
}

/// Splits a plane strain into tensile and compressive parts; the out-of-plane
/// principal strain is zero and contributes nothing.
pub fn spectral_split<T: Real>(e: SymTensor2<T>, lambda: T, mu: T) -> SplitResult<T> {
    let (p, n) = principal(e);
    let tr = e.trace();
    let strain_pos = SymTensor2::from_dyad(pos(p[0]), n[0]) + SymTensor2::from_dyad(pos(p[1]), n[1]);
    let strain_neg = SymTensor2::from_dyad(neg(p[0]), n[0]) + SymTensor2::from_dyad(neg(p[1]), n[1]);
    let (tp, tn) = (pos(tr), neg(tr));
    let half = T::half();
    let psi_pos = half * lambda * tp * tp + mu * (pos(p[0]).powi(2) + pos(p[1]).powi(2));
    let psi_neg = half * lambda * tn * tn + mu * (neg(p[0]).powi(2) + neg(p[1]).powi(2));
    SplitResult {
        psi_pos,
        psi_neg,
        strain_pos,
        strain_neg,
        principal: p,
        directions: n,
        trace_pos: tp,
        trace_neg: tn,
    }
}

/// Undamaged isotropic energy `1/2 lambda tr(e)^2 + mu tr(e^2)`.
pub fn isotropic_energy<T: Real>(e: SymTensor2<T>, lambda: T, mu: T) -> T {
    let tr = e.trace();
    T::half() * lambda * tr * tr + mu * e.contract(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn all_tensile_has_no_negative_part() {
        let s = spectral_split(SymTensor2::new(2e-3, 1e-3, 0.0), 121.15, 80.77);
        assert_eq!(s.psi_neg, 0.0);
        assert_eq!(s.strain_neg, SymTensor2::default());
        assert_relative_eq!(
            s.psi_pos,
            isotropic_energy(SymTensor2::new(2e-3, 1e-3, 0.0), 121.15, 80.77),
            max_relative = 1e-14
        );
    }

    #[test]
    fn zero_strain() {
        let s = spectral_split(SymTensor2::<f64>::default(), 1.0, 1.0);
        assert_eq!((s.psi_pos, s.psi_neg), (0.0, 0.0));
    }

    #[test]
    fn pure_shear_splits_evenly() {
        // principal strains +g, -g with zero trace
        let s = spectral_split(SymTensor2::new(0.0, 0.0, 1e-3), 100.0, 50.0);
        assert_relative_eq!(s.psi_pos, 50.0 * 1e-6, max_relative = 1e-12);
        assert_relative_eq!(s.psi_neg, 50.0 * 1e-6, max_relative = 1e-12);
        assert_relative_eq!(s.principal[0], 1e-3, max_relative = 1e-12);
    }

    #[test]
    fn repeated_eigenvalues_use_axes() {
        let (p, n) = principal(SymTensor2::new(1.0, 1.0, 0.0));
        assert_eq!(p, [1.0, 1.0]);
        assert_eq!(n, [[1.0, 0.0], [0.0, 1.0]]);
    }
}
