#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use qwalk::{CoinParams, Complex64, DenseMatrix, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Coin written out from its defining formula, independent of the library.
pub fn coin_formula(r: f64, alpha: f64, beta: f64) -> [[Complex64; 2]; 2] {
    let e = |t: f64| Complex64::from_polar(1.0, t);
    let (sr, sq) = (r.sqrt(), (1.0 - r).sqrt());
    [
        [e(beta) * sr * e(alpha), e(beta) * sq * e(-beta)],
        [-e(beta) * sq * e(beta), e(beta) * sr * e(-alpha)],
    ]
}

/// `U = (T₋ ⊗ |0⟩⟨0| + T₊ ⊗ |1⟩⟨1|)(I ⊗ F)` assembled by explicit Kronecker
/// products, index `2x + c`.
pub fn kron_step(n: usize, r: f64, alpha: f64, beta: f64) -> Vec<Vec<Complex64>> {
    let dim = 2 * n;
    let zero = c(0.0, 0.0);
    let coin = coin_formula(r, alpha, beta);
    let mut shift = vec![vec![zero; dim]; dim];
    for x in 0..n {
        shift[2 * ((x + n - 1) % n)][2 * x] = c(1.0, 0.0);
        shift[2 * ((x + 1) % n) + 1][2 * x + 1] = c(1.0, 0.0);
    }
    let mut local = vec![vec![zero; dim]; dim];
    for x in 0..n {
        for i in 0..2 {
            for j in 0..2 {
                local[2 * x + i][2 * x + j] = coin[i][j];
            }
        }
    }
    let mut u = vec![vec![zero; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if shift[i][k] == zero {
                continue;
            }
            for j in 0..dim {
                u[i][j] += shift[i][k] * local[k][j];
            }
        }
    }
    u
}

pub fn matvec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Projector onto the span of orthonormal vectors.
pub fn projector(vectors: &[&StateVector]) -> DenseMatrix {
    let dim = vectors[0].amplitudes().len();
    let mut p = DenseMatrix::zeros(dim);
    for v in vectors {
        p.add_outer(c(1.0, 0.0), v.amplitudes(), v.amplitudes());
    }
    p
}

pub fn sites() -> impl Strategy<Value = usize> {
    2usize..=24
}

pub fn generic_params() -> impl Strategy<Value = CoinParams> {
    (sites(), 0.0..=1.0f64, 0.0..TAU, -PI..PI).prop_map(|(n, r, a, b)| CoinParams::new(n, r, a, b).unwrap())
}

/// Lattice angle `α = nπ/N` with `0 < R < 1`.
pub fn lattice_params() -> impl Strategy<Value = CoinParams> {
    (sites(), 0.02..0.98f64, -PI..PI)
        .prop_flat_map(|(n, r, b)| (Just(n), Just(r), 0..2 * n as i64, Just(b)))
        .prop_map(|(n, r, idx, b)| CoinParams::with_alpha_index(n, r, idx, b).unwrap())
}
