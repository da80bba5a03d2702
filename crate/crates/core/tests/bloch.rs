mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use common::*;
use proptest::prelude::*;
use qwalk::bloch::{bloch_vector, eigenstate_bloch, reduced_coin_state, trajectory};
use qwalk::eigensystem::{full_eigenbasis, GaugeWeight};
use qwalk::spectrum::degeneracy_report;
use qwalk::{Band, CoinParams, GaugePolicy};

fn formula_vs_trace(params: &CoinParams, policy: &GaugePolicy) -> f64 {
    let basis = full_eigenbasis(params, policy).unwrap();
    basis
        .states()
        .iter()
        .map(|s| {
            let traced = bloch_vector(&reduced_coin_state(&s.vector));
            let formula = eigenstate_bloch(params, s.k, s.z, policy).unwrap();
            traced.distance(&formula)
        })
        .fold(0.0, f64::max)
}

#[test]
fn unique_states_sit_on_the_equator() {
    for r in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let params = CoinParams::with_alpha_index(20, r, 0, 0.0).unwrap();
        for k in [0, 10] {
            for z in Band::BOTH {
                let b = eigenstate_bloch(&params, k, z, &GaugePolicy::default()).unwrap();
                assert!((b.theta() - FRAC_PI_2).abs() < 1e-10);
                assert!((b.r() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn bands_at_one_wavenumber_are_antipodal() {
    let params = CoinParams::new(9, 0.4, 0.77, 0.3).unwrap();
    for k in 0..9 {
        let lo = eigenstate_bloch(&params, k, Band::Lower, &GaugePolicy::default()).unwrap();
        let hi = eigenstate_bloch(&params, k, Band::Upper, &GaugePolicy::default()).unwrap();
        assert!((lo.rx + hi.rx).abs() < 1e-12 && (lo.ry + hi.ry).abs() < 1e-12 && (lo.rz + hi.rz).abs() < 1e-12);
        // lower band azimuth is β − π/2 + 2πk/N; the upper band sits opposite
        let phi = (params.beta() - FRAC_PI_2 + TAU * k as f64 / 9.0).rem_euclid(TAU);
        assert!(circle_distance(lo.phi(), phi) < 1e-10);
        assert!(circle_distance(hi.phi(), phi + PI) < 1e-10);
    }
}

#[test]
fn diagonal_coin_sits_at_the_poles() {
    let params = CoinParams::new(6, 1.0, 0.4, 0.0).unwrap();
    let points = trajectory(&[params], &(0..6).collect::<Vec<_>>(), &Band::BOTH, &GaugePolicy::default()).unwrap();
    for p in points {
        assert!((p.bloch.rz.abs() - 1.0).abs() < 1e-15);
        assert!(!p.bloch.azimuth_defined());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn formula_agrees_with_partial_trace(params in generic_params()) {
        prop_assert!(formula_vs_trace(&params, &GaugePolicy::default()) < 1e-10);
    }

    #[test]
    fn formula_agrees_in_any_gauge(params in lattice_params(), f in 0.05..0.95f64, omega in 0.0..TAU) {
        prop_assert!(formula_vs_trace(&params, &GaugePolicy::new(GaugeWeight::Fraction(f), omega)) < 1e-10);
    }

    #[test]
    fn vectors_stay_in_the_ball(params in lattice_params(), f in 0.05..0.95f64) {
        let policy = GaugePolicy::new(GaugeWeight::Fraction(f), 0.0);
        let report = degeneracy_report(&params);
        for k in 0..params.sites() {
            for z in Band::BOTH {
                let b = eigenstate_bloch(&params, k, z, &policy).unwrap();
                prop_assert!(b.r() <= 1.0 + 1e-12);
                if report.partner(k).is_none() {
                    prop_assert!((b.r() - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
