use qwalk::protected::{protected_eigenstates, protected_memory_trace, AlphaNoise};
use qwalk::{CoinParams, Complex64, StepOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn third() -> [Complex64; 3] {
    [Complex64::new(1.0 / 3f64.sqrt(), 0.0); 3]
}

#[test]
fn protected_states_are_eigenvectors_for_every_bias() {
    let params = CoinParams::with_alpha_index(12, 0.5, 4, 0.6).unwrap();
    for k in [2, 8] {
        let (a, b) = protected_eigenstates(&params, k).unwrap();
        for r in [0.0, 0.13, 0.5, 0.99, 1.0] {
            let op = StepOperator::new(&params.with_r(r).unwrap());
            for v in [&a, &b] {
                let image = op.apply_step(v).unwrap();
                // an eigenvector maps to a unit-modulus multiple of itself
                assert!((image.inner(v).unwrap().norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn overlaps_hold_under_random_bias() {
    let params = CoinParams::with_alpha_index(20, 0.5, 0, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trace = protected_memory_trace(&params, 0, third(), 1000, AlphaNoise::None, &mut rng).unwrap();
    assert_eq!(trace.rows.len(), 1001);
    let (d1, d2) = trace.max_drift();
    assert!(d1 < 1e-11 && d2 < 1e-11, "drift {d1} {d2}");
}

#[test]
fn alpha_jitter_breaks_protection() {
    let params = CoinParams::with_alpha_index(20, 0.5, 0, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trace =
        protected_memory_trace(&params, 0, third(), 1000, AlphaNoise::Uniform(std::f64::consts::PI), &mut rng).unwrap();
    let (d1, d2) = trace.max_drift();
    assert!(d1 > 1e-3 && d2 > 1e-3, "drift {d1} {d2}");
}

#[test]
fn same_seed_same_trace() {
    let params = CoinParams::with_alpha_index(10, 0.5, 2, 0.3).unwrap();
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        protected_memory_trace(&params, 1, third(), 50, AlphaNoise::None, &mut rng).unwrap()
    };
    assert_eq!(run(7), run(7));
    assert_ne!(run(7), run(8));
}
