use rayon::prelude::*;

use crate::basis::ElementBasis;
use crate::material::{degradation, spectral_split, stress_voigt, HistoryField, MaterialParams, SymTensor2};
use crate::scalar::Real;

/// Tensile and compressive energy densities at every quadrature point.
pub fn quadrature_energies<T: Real>(
    bases: &[ElementBasis<T>],
    u: &[T],
    params: &MaterialParams<T>,
) -> (HistoryField<T>, HistoryField<T>) {
    let per: Vec<(Vec<T>, Vec<T>)> = bases
        .par_iter()
        .map(|b| {
            let ue = b.gather_displacement(u);
            (0..b.num_points())
                .map(|q| {
                    let e = SymTensor2::from_voigt_strain(b.strain(q, &ue));
                    let s = spectral_split(e, params.lambda, params.mu);
                    (s.psi_pos, s.psi_neg)
                })
                .unzip()
        })
        .collect();
    let (pos, neg): (Vec<_>, Vec<_>) = per.into_iter().unzip();
    (HistoryField::from_elements(pos), HistoryField::from_elements(neg))
}

/// Plane-strain von Mises stress with `s_zz = nu (s_xx + s_yy)`.
pub fn von_mises<T: Real>(s: [T; 3], poisson: T) -> T {
    let szz = poisson * (s[0] + s[1]);
    let a = s[0] - s[1];
    let b = s[1] - szz;
    let c = szz - s[0];
    (T::half() * (a * a + b * b + c * c) + T::lit(3.0) * s[2] * s[2]).sqrt()
}

/// Area-averaged von Mises stress of the degraded stress per element.
pub fn element_von_mises<T: Real>(
    bases: &[ElementBasis<T>],
    u: &[T],
    phi: &[T],
    params: &MaterialParams<T>,
) -> Vec<T> {
    let d = params.constitutive_matrix();
    let nu = params.poisson();
    bases
        .par_iter()
        .map(|b| {
            let ue = b.gather_displacement(u);
            let mut acc = T::zero();
            for q in 0..b.num_points() {
                let g = degradation(b.interpolate(q, phi), params.kp);
                let s = stress_voigt(&d, b.strain(q, &ue)).map(|v| v * g);
                acc += von_mises(s, nu) * b.weights[q];
            }
            acc / b.area
        })
        .collect()
}
