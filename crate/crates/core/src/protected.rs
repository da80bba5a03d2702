//! Protected eigenstates under a temporally fluctuating bias.
//!
//! When `α = nπ/N` and `k` is self-conjugate, the two eigenvectors at `k`
//! have a coin ratio that does not depend on `R`. They are eigenvectors of
//! every step operator in the family, so overlaps with them keep their
//! modulus when `R` is redrawn at each step with `α` and `β` held fixed.

use rand::Rng;
use serde::Serialize;

use crate::coin::CoinParams;
use crate::eigensystem::eigenvector_nondegenerate;
use crate::operator::{Basis, StateVector, StepOperator};
use crate::spectrum::{degeneracy_report, Band};
use crate::{Complex64, Error, Result};

/// Identifier of the pseudo-random generator used for bias sequences.
pub const RNG_ALGORITHM: &str = "rand_chacha::ChaCha8Rng (seed_from_u64)";

/// Bias used to build the protected eigenvectors when the configured `R` is 1.
const REFERENCE_BIAS: f64 = 0.5;

/// Per-step perturbation of `α`, used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AlphaNoise {
    None,
    /// `α_t = α + u`, `u` uniform on `[−amplitude, amplitude)`.
    Uniform(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: usize,
    /// Bias of the step that produced this state; `None` at `t = 0`.
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub alpha: f64,
    pub overlap1: f64,
    pub overlap2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtectedTrace {
    pub k: usize,
    pub rows: Vec<TraceRow>,
}

impl ProtectedTrace {
    /// Largest deviation of each overlap from its initial value.
    pub fn max_drift(&self) -> (f64, f64) {
        let first = self.rows[0];
        self.rows.iter().fold((0.0f64, 0.0f64), |(d1, d2), row| {
            (
                d1.max((row.overlap1 - first.overlap1).abs()),
                d2.max((row.overlap2 - first.overlap2).abs()),
            )
        })
    }
}

/// The two eigenvectors at a unique wavenumber `k`, in the position basis.
pub fn protected_eigenstates(params: &CoinParams, k: usize) -> Result<(StateVector, StateVector)> {
    let report = degeneracy_report(params);
    if !report.is_degenerate {
        return Err(Error::Domain(
            "protected states need alpha = n*pi/N (degenerate spectrum)".into(),
        ));
    }
    if !report.is_unique(k) {
        return Err(Error::NotUnique { k });
    }
    let reference = if params.r() == 1.0 {
        params.with_r(REFERENCE_BIAS)?
    } else {
        *params
    };
    let lower = eigenvector_nondegenerate(&reference, k, Band::Lower)?.into_position();
    let upper = eigenvector_nondegenerate(&reference, k, Band::Upper)?.into_position();
    Ok((lower, upper))
}

/// `x₀|φ⟩ + x₁|ψ_{λ(k,1)}⟩ + x₂|ψ_{λ(k,2)}⟩` with a random `|φ⟩` orthogonal
/// to both protected eigenstates. The weights are normalized.
pub fn initial_state<R: Rng + ?Sized>(
    protected: &(StateVector, StateVector),
    weights: [Complex64; 3],
    rng: &mut R,
) -> Result<StateVector> {
    let norm = weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Domain("initial-state weights must not all vanish".into()));
    }
    let (p1, p2) = protected;
    let sites = p1.sites();
    let mut phi = StateVector::random(sites, Basis::Position, rng);
    for p in [p1, p2] {
        let proj = p.inner(&phi)?;
        for (a, b) in phi.amplitudes_mut().iter_mut().zip(p.amplitudes()) {
            *a -= proj * b;
        }
    }
    let phi = phi.normalized();
    let [x0, x1, x2] = weights.map(|w| w / norm);
    let amps = phi
        .amplitudes()
        .iter()
        .zip(p1.amplitudes())
        .zip(p2.amplitudes())
        .map(|((f, a), b)| x0 * f + x1 * a + x2 * b)
        .collect();
    StateVector::new(sites, Basis::Position, amps)
}

/// Evolves under a uniformly random `R` per step and records `|⟨ψ_{λ(k,z)}|ψ(t)⟩|`.
///
/// Random draws, in order: the components of `|φ⟩`, then per step `R`
/// followed by the `α` perturbation (when enabled).
pub fn protected_memory_trace<R: Rng + ?Sized>(
    params: &CoinParams,
    k: usize,
    weights: [Complex64; 3],
    steps: usize,
    noise: AlphaNoise,
    rng: &mut R,
) -> Result<ProtectedTrace> {
    let protected = protected_eigenstates(params, k)?;
    let psi0 = initial_state(&protected, weights, rng)?;
    let (p1, p2) = &protected;
    let overlaps = |amps: &[Complex64]| {
        (
            crate::linalg::inner(p1.amplitudes(), amps).norm(),
            crate::linalg::inner(p2.amplitudes(), amps).norm(),
        )
    };

    let mut rows = Vec::with_capacity(steps + 1);
    let (o1, o2) = overlaps(psi0.amplitudes());
    rows.push(TraceRow {
        t: 0,
        r: None,
        alpha: params.alpha(),
        overlap1: o1,
        overlap2: o2,
    });

    let mut cur = psi0.into_amplitudes();
    let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
    for t in 1..=steps {
        let r: f64 = rng.random();
        let step_params = match noise {
            AlphaNoise::None => params.with_r(r)?,
            AlphaNoise::Uniform(amp) => {
                let u: f64 = rng.random_range(-amp..amp);
                params.with_r(r)?.with_alpha(params.alpha() + u)?
            }
        };
        StepOperator::new(&step_params).step_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        let (o1, o2) = overlaps(&cur);
        rows.push(TraceRow {
            t,
            r: Some(r),
            alpha: step_params.alpha(),
            overlap1: o1,
            overlap2: o2,
        });
    }
    Ok(ProtectedTrace { k, rows })
}
