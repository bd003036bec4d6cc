use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Isotropic plane-strain material with phase-field fracture parameters.
///
/// Units: Lamé constants in kN/mm², `gc` in kN/mm, `lo` in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams<T> {
    pub lambda: T,
    pub mu: T,
    /// Critical energy release rate.
    pub gc: T,
    /// Regularisation length of the diffuse crack.
    pub lo: T,
    /// Residual stiffness of fully broken material.
    pub kp: T,
}

impl<T: Real> MaterialParams<T> {
    pub fn from_young(young: T, poisson: T, gc: T, lo: T, kp: T) -> Self {
        let one = T::one();
        let two = T::two();
        Self {
            lambda: young * poisson / ((one + poisson) * (one - two * poisson)),
            mu: young / (two * (one + poisson)),
            gc,
            lo,
            kp,
        }
    }

    pub fn young(&self) -> T {
        self.mu * (T::lit(3.0) * self.lambda + T::two() * self.mu) / (self.lambda + self.mu)
    }

    pub fn poisson(&self) -> T {
        self.lambda / (T::two() * (self.lambda + self.mu))
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok = |c: bool, m: &str| if c { Ok(()) } else { Err(m.to_string()) };
        ok(self.mu > T::zero(), "shear modulus must be positive")?;
        ok(
            self.lambda > -T::two() / T::lit(3.0) * self.mu,
            "lambda must exceed -2/3 mu",
        )?;
        ok(self.gc > T::zero(), "gc must be positive")?;
        ok(self.lo > T::zero(), "length scale must be positive")?;
        ok(
            self.kp > T::zero() && self.kp < T::lit(0.01),
            "residual stiffness must lie in (0, 0.01)",
        )
    }

    /// Plane-strain constitutive matrix in Voigt notation (exx, eyy, gxy).
    pub fn constitutive_matrix(&self) -> [[T; 3]; 3] {
        let (l, m) = (self.lambda, self.mu);
        let d = l + T::two() * m;
        [[d, l, T::zero()], [l, d, T::zero()], [T::zero(), T::zero(), m]]
    }
}

/// `(1 - phi)^2 + kp`.
#[inline]
pub fn degradation<T: Real>(phi: T, kp: T) -> T {
    let a = T::one() - phi;
    a * a + kp
}

/// `D e` for a Voigt strain.
#[inline]
pub fn stress_voigt<T: Real>(d: &[[T; 3]; 3], e: [T; 3]) -> [T; 3] {
    let mut s = [T::zero(); 3];
    for i in 0..3 {
        for j in 0..3 {
            s[i] += d[i][j] * e[j];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn degradation_values() {
        assert_eq!(degradation(0.0, 1e-6), 1.0 + 1e-6);
        assert_eq!(degradation(1.0, 1e-6), 1e-6);
        assert_relative_eq!(degradation(0.5, 1e-6), 0.250001, epsilon = 1e-15);
    }

    #[test]
    fn constitutive_matrix_values() {
        let p = MaterialParams {
            lambda: 121.15,
            mu: 80.77,
            gc: 2.7e-3,
            lo: 0.015,
            kp: 1e-6,
        };
        let d = p.constitutive_matrix();
        assert_relative_eq!(d[0][0], 282.69, epsilon = 1e-12);
        assert_eq!(d[2][2], 80.77);
        let z = MaterialParams { lambda: 0.0, ..p }.constitutive_matrix();
        assert_eq!(z, [[161.54, 0.0, 0.0], [0.0, 161.54, 0.0], [0.0, 0.0, 80.77]]);
    }

    #[test]
    fn lame_young_roundtrip() {
        let p = MaterialParams::from_young(25.85, 0.18, 9.5e-5, 2.0, 1e-6);
        assert_relative_eq!(p.young(), 25.85, max_relative = 1e-12);
        assert_relative_eq!(p.poisson(), 0.18, max_relative = 1e-12);
        let t = MaterialParams {
            lambda: 121.15,
            mu: 80.77,
            gc: 2.7e-3,
            lo: 0.01,
            kp: 1e-6,
        };
        let back = MaterialParams::from_young(t.young(), t.poisson(), t.gc, t.lo, t.kp);
        assert_relative_eq!(back.lambda, t.lambda, max_relative = 1e-12);
        assert_relative_eq!(back.mu, t.mu, max_relative = 1e-12);
    }

    #[test]
    fn validation() {
        let good = MaterialParams::from_young(210.0, 0.3, 2.7e-3, 0.01, 1e-6);
        assert!(good.validate().is_ok());
        assert!(MaterialParams { mu: 0.0, ..good }.validate().is_err());
        assert!(MaterialParams { kp: 0.0, ..good }.validate().is_err());
        assert!(MaterialParams { lambda: -150.0, ..good }.validate().is_err());
    }
}
