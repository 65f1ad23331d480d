#![allow(clippy::needless_range_loop)]

mod common;

use nalgebra::{Matrix4, Vector3, Vector4};
use proptest::prelude::*;

use nled::fresnel::build_wave_matrix;
use nled::tensor::{boost, f_invariant, g_invariant, hodge_dual, invariants, rotation};
use nled::{Error, FieldTensor, FourVector, RankFourTensor};

fn field() -> impl Strategy<Value = (Vector3<f64>, Vector3<f64>)> {
    (prop::array::uniform3(-3.0..3.0f64), prop::array::uniform3(-3.0..3.0f64))
        .prop_map(|(e, b)| (Vector3::from(e), Vector3::from(b)))
}

fn unit() -> impl Strategy<Value = Vector3<f64>> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("not too short", |v| Vector3::from(*v).norm() > 0.1)
        .prop_map(|v| Vector3::from(v).normalize())
}

fn random_omega() -> impl Strategy<Value = RankFourTensor> {
    prop::collection::vec(-1.0..1.0f64, 256).prop_map(|v| RankFourTensor::symmetrized(|a, b, c, d| v[64 * a + 16 * b + 4 * c + d]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gauge_mode_is_always_in_the_kernel(
        omega in random_omega(),
        k in prop::array::uniform4(-2.0..2.0f64),
    ) {
        let w = build_wave_matrix(&omega, &FourVector::covector(k[0], k[1], k[2], k[3]));
        let ak = w.matrix() * Vector4::from(k);
        prop_assert!(ak.amax() <= 1e-12 * w.matrix().amax().max(1e-300) * Vector4::from(k).amax());
    }
}

proptest! {
    #[test]
    fn double_dual_is_minus_identity((e, b) in field()) {
        let f = FieldTensor::from_fields(e, b);
        let dd = hodge_dual(&hodge_dual(&f));
        prop_assert!((dd.lower() + f.lower()).amax() <= 1e-14 * (1.0 + f.lower().amax()));
    }

    #[test]
    fn dual_swaps_fields((e, b) in field()) {
        let d = FieldTensor::from_fields(e, b).dual();
        prop_assert!((d.electric() - b).amax() < 1e-14);
        prop_assert!((d.magnetic() + e).amax() < 1e-14);
    }

    #[test]
    fn invariants_match_field_formulas((e, b) in field(), n in unit()) {
        let f = FieldTensor::from_fields(e, b);
        prop_assert!((f_invariant(&f) - 0.5 * (b.norm_squared() - e.norm_squared())).abs() < 1e-13);
        prop_assert!((g_invariant(&f) + e.dot(&b)).abs() < 1e-13);
        let inv = invariants(&f, &FourVector::spatial(n)).unwrap();
        let h = e.dot(&n).powi(2) - n.cross(&b).norm_squared();
        prop_assert!((inv.h_inv - h).abs() < 1e-12);
    }

    #[test]
    fn invariants_are_lorentz_scalars((e, b) in field(), dir in unit(), rapidity in -1.5..1.5f64, angle in -3.0..3.0f64) {
        let f = FieldTensor::from_fields(e, b);
        let lambda = rotation(dir, angle) * boost(dir.cross(&Vector3::z()).try_normalize(1e-6).unwrap_or(Vector3::x()), rapidity);
        let g = f.transformed(&lambda).unwrap();
        let scale = 1.0 + e.norm_squared() + b.norm_squared();
        prop_assert!((f_invariant(&g) - f_invariant(&f)).abs() <= 1e-11 * scale * rapidity.cosh().powi(2));
        prop_assert!((g_invariant(&g) - g_invariant(&f)).abs() <= 1e-11 * scale * rapidity.cosh().powi(2));
    }

    #[test]
    fn transformed_tensor_keeps_symmetry_and_covariance(
        omega in random_omega(),
        dir in unit(),
        rapidity in -1.0..1.0f64,
        k in prop::array::uniform4(-1.0..1.0f64),
    ) {
        let lambda = boost(dir, rapidity);
        let t = omega.transformed(&lambda);
        prop_assert!(t.validate().is_ok());
        // A'(k') = Lambda A(k) Lambda^T with k' = Lambda^{-T} k
        let inv_t = lambda.try_inverse().unwrap().transpose();
        let kp = inv_t * Vector4::from(k);
        let a = build_wave_matrix(&omega, &FourVector::covector(k[0], k[1], k[2], k[3]));
        let ap = build_wave_matrix(&t, &FourVector::covector(kp[0], kp[1], kp[2], kp[3]));
        let expected: Matrix4<f64> = lambda * a.matrix() * lambda.transpose();
        prop_assert!((ap.matrix() - expected).amax() <= 1e-10 * (1.0 + expected.amax()));
    }
}

#[test]
fn broken_symmetry_is_rejected() {
    let err = RankFourTensor::from_fn(|a, b, c, d| (a + 2 * b + 3 * c + 5 * d) as f64).unwrap_err();
    assert!(matches!(err, Error::SymmetryViolation { .. }));
}

#[test]
fn isotropic_tensor_components() {
    let t = RankFourTensor::isotropic(1.0);
    let arr = common::to_array(&t);
    // (eta^{ac} eta^{bd} - eta^{ad} eta^{bc})
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let e = |x: usize, y: usize| if x == y { common::ETA[x] } else { 0.0 };
                    assert_eq!(arr[a][b][c][d], e(a, c) * e(b, d) - e(a, d) * e(b, c));
                }
            }
        }
    }
    assert!(t.validate().is_ok());
}

#[test]
fn levi_civita_part_is_separable() {
    let base = RankFourTensor::isotropic(-0.3);
    let mixed = &base + &RankFourTensor::levi_civita(0.7);
    assert!((mixed.levi_civita_coefficient() - 0.7).abs() < 1e-15);
    let stripped = mixed.without_levi_civita();
    assert!((&stripped - &base).max_abs() < 1e-15);
}

#[test]
fn non_unit_normal_rejected() {
    let n = FourVector::spatial(Vector3::new(0.0, 0.0, 2.0));
    assert!(matches!(n.require_unit_spacelike(), Err(Error::NonUnitNormal(_))));
}
