use approx::assert_relative_eq;
use pfquad::material::{
    apply_hybrid_constraint, degradation, isotropic_energy, nodal_average, principal, spectral_split, update_history,
    HistoryField, MaterialParams, SymTensor2,
};
use pfquad::basis::BasisOptions;
use pfquad::ElementBasis;
use proptest::prelude::*;

const LAMBDA: f64 = 121.15;
const MU: f64 = 80.77;

proptest! {
    #[test]
    fn split_is_additive_and_orthogonal(xx in -1.0f64..1.0, yy in -1.0f64..1.0, xy in -1.0f64..1.0) {
        let e = SymTensor2::new(xx, yy, xy);
        let s = spectral_split(e, LAMBDA, MU);
        let psi = isotropic_energy(e, LAMBDA, MU);
        prop_assert!((s.psi_pos + s.psi_neg - psi).abs() <= 1e-12 * psi.max(1e-300));
        prop_assert!(s.psi_pos >= 0.0 && s.psi_neg >= 0.0);
        prop_assert!(s.strain_pos.contract(s.strain_neg).abs() < 1e-14);
        prop_assert!(s.principal[0] >= s.principal[1]);
    }

    #[test]
    fn pure_tension_and_compression(a in 1e-6f64..1.0, b in 1e-6f64..1.0) {
        let t = spectral_split(SymTensor2::new(a, b, 0.0), LAMBDA, MU);
        prop_assert_eq!(t.psi_neg, 0.0);
        let c = spectral_split(SymTensor2::new(-a, -b, 0.0), LAMBDA, MU);
        prop_assert_eq!(c.psi_pos, 0.0);
    }

    #[test]
    fn history_never_decreases(seq in prop::collection::vec(0.0f64..10.0, 1..30)) {
        let mut h = 0.0;
        for &psi in &seq {
            let next = update_history(h, psi);
            prop_assert!(next >= h && next >= psi);
            h = next;
        }
        prop_assert_eq!(h, seq.iter().cloned().fold(0.0, f64::max));
    }

    #[test]
    fn principal_values_rebuild_the_tensor(xx in -1.0f64..1.0, yy in -1.0f64..1.0, xy in -1.0f64..1.0) {
        let e = SymTensor2::new(xx, yy, xy);
        let (p, n) = principal(e);
        let r = |i: usize, j: usize| p[0] * n[0][i] * n[0][j] + p[1] * n[1][i] * n[1][j];
        prop_assert!((r(0, 0) - xx).abs() < 1e-12);
        prop_assert!((r(1, 1) - yy).abs() < 1e-12);
        prop_assert!((r(0, 1) - xy).abs() < 1e-12);
    }
}

#[test]
fn repeated_eigenvalues_are_handled() {
    let s = spectral_split(SymTensor2::new(1e-3, 1e-3, 0.0), LAMBDA, MU);
    assert_relative_eq!(s.psi_pos, isotropic_energy(SymTensor2::new(1e-3, 1e-3, 0.0), LAMBDA, MU));
    let z = spectral_split(SymTensor2::new(0.0, 0.0, 0.0), LAMBDA, MU);
    assert_eq!((z.psi_pos, z.psi_neg), (0.0, 0.0));
}

#[test]
fn lame_and_engineering_constants_round_trip() {
    let p = MaterialParams { lambda: LAMBDA, mu: MU, gc: 2.7e-3, lo: 0.01, kp: 1e-6 };
    let q = MaterialParams::from_young(p.young(), p.poisson(), p.gc, p.lo, p.kp);
    assert_relative_eq!(q.lambda, LAMBDA, max_relative = 1e-12);
    assert_relative_eq!(q.mu, MU, max_relative = 1e-12);
    let d = p.constitutive_matrix();
    assert_relative_eq!(d[0][0], 282.69, max_relative = 1e-12);
    assert_relative_eq!(d[0][1], LAMBDA);
    assert_relative_eq!(d[2][2], MU);
    assert!(p.validate().is_ok());
    assert!(MaterialParams { mu: -1.0, ..p }.validate().is_err());
    assert!(MaterialParams { kp: 0.5, ..p }.validate().is_err());
}

#[test]
fn l_panel_toughness_in_solver_units() {
    // 95 N/m in kN/mm
    let gc: f64 = 95.0 * 1e-3 / 1e3;
    assert_relative_eq!(gc, 9.5e-5, max_relative = 1e-12);
}

#[test]
fn degradation_limits() {
    assert_eq!(degradation(0.0, 1e-6), 1.0 + 1e-6);
    assert_eq!(degradation(1.0, 1e-6), 1e-6);
}

#[test]
fn hybrid_constraint_zeroes_compressed_nodes() {
    let mut phi = vec![0.5, 0.5, 0.0, 0.9];
    let changed = apply_hybrid_constraint(&mut phi, &[1.0, 0.1, 0.0, 2.0], &[0.5, 0.2, 1.0, 2.0]);
    assert_eq!(phi, vec![0.5, 0.0, 0.0, 0.9]);
    assert_eq!(changed, 1);
}

#[test]
fn nodal_average_of_a_constant_is_that_constant() {
    let left = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let right = [[1.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0]];
    let bases = vec![
        ElementBasis::from_vertices(0, vec![0, 1, 2, 3], &left, BasisOptions::default()).unwrap(),
        ElementBasis::from_vertices(1, vec![1, 4, 5, 2], &right, BasisOptions::default()).unwrap(),
    ];
    let h = HistoryField::for_bases(&bases).map_points(|_, _| 3.5);
    for v in nodal_average(&bases, &h, 6) {
        assert_relative_eq!(v, 3.5, max_relative = 1e-14);
    }
    let mut raised = HistoryField::for_bases(&bases);
    raised.raise_to(&h);
    assert_eq!(raised.max(), 3.5);
}
