mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use proptest::prelude::*;
use qwalk::eigensystem::{
    eigenvector_pair_degenerate, full_eigenbasis, pair_geometry, protected_coin_ratio, symmetry_operator, GaugeWeight,
};
use qwalk::spectrum::degeneracy_report;
use qwalk::{Band, CoinParams, DenseMatrix, GaugeChoice, GaugePolicy, StepOperator};

fn max_residual_kron(params: &CoinParams, policy: &GaugePolicy) -> f64 {
    let basis = full_eigenbasis(params, policy).unwrap();
    let u = kron_step(params.sites(), params.r(), params.alpha(), params.beta());
    basis
        .states()
        .iter()
        .map(|s| {
            let v = s.vector.clone().into_position();
            let image = matvec(&u, v.amplitudes());
            let expect: Vec<_> = v.amplitudes().iter().map(|a| a * c(0.0, s.lambda).exp()).collect();
            max_diff(&image, &expect)
        })
        .fold(0.0, f64::max)
}

fn check_symmetry(params: &CoinParams) {
    let basis = full_eigenbasis(params, &GaugePolicy::default()).unwrap();
    let s = symmetry_operator(&basis).unwrap();
    let u = StepOperator::new(params).build_dense().unwrap();
    let sus = &(&s * &u) * &s.adjoint();
    assert!(sus.max_abs_diff(&u) < 1e-9, "SUS† − U = {}", sus.max_abs_diff(&u));
    let id = DenseMatrix::identity(2 * params.sites());
    assert!((&s * &s.adjoint()).max_abs_diff(&id) < 1e-10);
}

#[test]
fn symmetry_operator_for_reference_configurations() {
    check_symmetry(&CoinParams::hadamard(4).unwrap());
    check_symmetry(&CoinParams::with_alpha_index(20, 0.5, 0, 0.0).unwrap());
    check_symmetry(&CoinParams::with_alpha_index(20, 0.2, 0, 1.0).unwrap());
}

#[test]
fn diagonal_coin_basis() {
    let params = CoinParams::with_alpha_index(8, 1.0, 3, 0.4).unwrap();
    let basis = full_eigenbasis(&params, &GaugePolicy::default()).unwrap();
    assert_eq!(basis.len(), 16);
    assert!(basis.gram_defect() < 1e-14);
    assert!(max_residual_kron(&params, &GaugePolicy::default()) < 1e-13);
}

#[test]
fn out_of_range_gauge_is_rejected() {
    let params = CoinParams::with_alpha_index(10, 0.5, 0, 0.0).unwrap();
    let geo = pair_geometry(&params, 1, 9, Band::Lower).unwrap();
    for s in [0.0, -0.1, geo.s_max * 1.01, f64::NAN] {
        assert!(eigenvector_pair_degenerate(&params, 1, 9, Band::Lower, &GaugeChoice::new(s, 0.0)).is_err());
    }
    assert!(pair_geometry(&params, 1, 8, Band::Lower).is_err());
}

#[test]
fn protected_ratio_at_zero_alpha() {
    // α = 0, k = N/2 puts θ at π, where g00/g01 = (−1)^z e^{i(β+π/2)}
    for beta in [0.0, 0.8, -2.0] {
        for r in [0.1, 0.5, 0.9] {
            let params = CoinParams::with_alpha_index(20, r, 0, beta).unwrap();
            for z in Band::BOTH {
                let g00_over_g01 = -protected_coin_ratio(&params, 10, z).unwrap();
                let expected = c(0.0, beta + PI / 2.0).exp() * z.sign();
                assert!((g00_over_g01 - expected).norm() < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generic_basis_is_orthonormal_eigenbasis(params in generic_params()) {
        let basis = full_eigenbasis(&params, &GaugePolicy::default()).unwrap();
        prop_assert_eq!(basis.len(), 2 * params.sites());
        prop_assert!(basis.gram_defect() < 1e-10);
        prop_assert!(basis.max_residual() < 1e-10);
    }

    #[test]
    fn degenerate_basis_is_orthonormal_eigenbasis(params in lattice_params(), f in 0.05..0.95f64, omega in 0.0..TAU) {
        let policy = GaugePolicy::new(GaugeWeight::Fraction(f), omega);
        let basis = full_eigenbasis(&params, &policy).unwrap();
        prop_assert!(basis.gram_defect() < 1e-10);
        prop_assert!(max_residual_kron(&params, &policy) < 1e-10);
    }

    #[test]
    fn pair_projector_is_gauge_invariant(params in lattice_params(), f1 in 0.02..0.98f64, f2 in 0.02..0.98f64,
                                         w1 in 0.0..TAU, w2 in 0.0..TAU) {
        let report = degeneracy_report(&params);
        prop_assume!(!report.pairs.is_empty());
        for &(k, kp) in &report.pairs {
            for z in Band::BOTH {
                let geo = pair_geometry(&params, k, kp, z).unwrap();
                let (a1, a2) = eigenvector_pair_degenerate(&params, k, kp, z, &GaugeChoice::new(f1 * geo.s_max, w1)).unwrap();
                let (b1, b2) = eigenvector_pair_degenerate(&params, k, kp, z, &GaugeChoice::new(f2 * geo.s_max, w2)).unwrap();
                prop_assert!(projector(&[&a1, &a2]).max_abs_diff(&projector(&[&b1, &b2])) < 1e-10);
            }
        }
    }

    #[test]
    fn symmetry_operator_commutes(params in lattice_params().prop_filter("small", |p| p.sites() <= 12)) {
        check_symmetry(&params);
    }

    #[test]
    fn protected_ratio_ignores_bias(params in lattice_params(), r2 in 0.0..0.999f64) {
        let report = degeneracy_report(&params);
        for &k in &report.unique_ks {
            for z in Band::BOTH {
                let a = protected_coin_ratio(&params, k, z).unwrap();
                let b = protected_coin_ratio(&params.with_r(r2).unwrap(), k, z).unwrap();
                prop_assert!((a - b).norm() < 1e-12);
                prop_assert!((a.norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
