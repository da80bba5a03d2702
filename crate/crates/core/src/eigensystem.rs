//! Closed-form eigenvectors of the step operator.
//!
//! At wavenumber `k` the Fourier components of an eigenvector solve
//!
//! ```text
//! [ g00  g01 ] [ ψ̃(k,0) ]
//! [ g10  g11 ] [ ψ̃(k,1) ] = 0,
//! ```
//!
//! which has a non-trivial solution iff `det G = 0`. For a non-degenerate
//! eigenvalue the eigenvector lives at a single wavenumber with coin ratio
//! `ψ̃(k,1)/ψ̃(k,0) = −g00/g01`. For a conjugate pair `(k, k')` the two-fold
//! eigenspace is spanned by superpositions
//!
//! ```text
//! s |k⟩ [|0⟩ − g00(λ,k)/g01(k) |1⟩] + e^{iω} s' |k'⟩ [|0⟩ − g00(λ,k')/g01(k') |1⟩]
//! ```
//!
//! and a gauge `(s₁, ω₁)` selects one orthonormal pair; the partner uses
//! `s₂ = √(s_max² − s₁²)`, `ω₂ = ω₁ + π`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::coin::CoinParams;
use crate::linalg::{self, DenseMatrix};
use crate::operator::{Basis, StateVector, StepOperator, DEFAULT_DENSE_LIMIT};
use crate::phase::wrap_positive;
use crate::spectrum::{degeneracy_report, eigenphase, Band, DegeneracyReport};
use crate::{Complex64, Error, Result};

/// Margin keeping the gauge weight inside the open interval `(0, s_max)`.
pub const GAUGE_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GElements {
    pub g00: Complex64,
    pub g01: Complex64,
    pub g10: Complex64,
    pub g11: Complex64,
}

impl GElements {
    pub fn det(&self) -> Complex64 {
        self.g00 * self.g11 - self.g10 * self.g01
    }
}

pub fn g_elements(params: &CoinParams, lambda: f64, k: usize) -> Result<GElements> {
    let sites = params.sites();
    if k >= sites {
        return Err(Error::IndexOutOfRange { k, sites });
    }
    let (r, beta) = (params.r(), params.beta());
    let theta = params.dispersion_angle(k);
    let wave = TAU * k as f64 / sites as f64;
    let shift = Complex64::from_polar(1.0, lambda);
    let (diag, off) = (r.sqrt(), (1.0 - r).sqrt());
    Ok(GElements {
        g00: Complex64::from_polar(diag, theta + beta) - shift,
        g10: -Complex64::from_polar(off, 2.0 * beta + wave),
        g01: Complex64::from_polar(off, -wave),
        g11: Complex64::from_polar(diag, beta - theta) - shift,
    })
}

/// Free parameters selecting one orthonormal pair inside a degenerate eigenspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeChoice {
    /// Weight of the `|k⟩` component of the first member.
    pub s1: f64,
    /// Relative phase of the `|k'⟩` component of the first member.
    pub omega1: f64,
}

impl GaugeChoice {
    pub fn new(s1: f64, omega1: f64) -> Self {
        Self {
            s1,
            omega1: wrap_positive(omega1),
        }
    }
}

/// How `s₁` is chosen for each pair when building a full basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeWeight {
    /// `s' = s` for the first member.
    Equal,
    /// A fixed `s₁` for every pair.
    Absolute(f64),
    /// `s₁ = f · s_max` with `f ∈ (0, 1)`.
    Fraction(f64),
}

/// Gauge rule for all degenerate pairs, with optional per-pair overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePolicy {
    pub weight: GaugeWeight,
    pub omega1: f64,
    /// Keyed by the smaller wavenumber of the pair and the band.
    pub overrides: BTreeMap<(usize, Band), GaugeChoice>,
}

impl Default for GaugePolicy {
    fn default() -> Self {
        Self::equal_weight()
    }
}

impl GaugePolicy {
    pub fn equal_weight() -> Self {
        Self {
            weight: GaugeWeight::Equal,
            omega1: 0.0,
            overrides: BTreeMap::new(),
        }
    }

    pub fn new(weight: GaugeWeight, omega1: f64) -> Self {
        Self {
            weight,
            omega1,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_override(mut self, k: usize, band: Band, gauge: GaugeChoice) -> Self {
        self.overrides.insert((k, band), gauge);
        self
    }

    /// Resolves the gauge for the pair whose smaller wavenumber is `k_low`.
    pub fn choice_for(&self, k_low: usize, band: Band, geometry: &PairGeometry) -> GaugeChoice {
        if let Some(g) = self.overrides.get(&(k_low, band)) {
            return *g;
        }
        let s1 = match self.weight {
            GaugeWeight::Equal => geometry.equal_weight(),
            GaugeWeight::Absolute(s) => s,
            GaugeWeight::Fraction(f) => f * geometry.s_max,
        };
        GaugeChoice::new(s1, self.omega1)
    }
}

/// Coin-space data shared by the two members of a degenerate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub k: usize,
    pub k_prime: usize,
    pub lambda: f64,
    /// `−g00(λ,k)/g01(k)`.
    pub ratio: Complex64,
    /// `−g00(λ,k')/g01(k')`.
    pub ratio_prime: Complex64,
    pub g_k: GElements,
    pub g_k_prime: GElements,
    pub s_max: f64,
}

impl PairGeometry {
    /// Weight `s'` normalizing a vector with weight `s` on `|k⟩`.
    pub fn partner_weight(&self, s: f64) -> f64 {
        let (g, gp) = (&self.g_k, &self.g_k_prime);
        let num = gp.g01.norm_sqr() - (g.g00.norm_sqr() + g.g01.norm_sqr()) * s * s;
        let den = gp.g00.norm_sqr() + gp.g01.norm_sqr();
        (num / den).max(0.0).sqrt()
    }

    /// The `s` for which `s' = s`.
    pub fn equal_weight(&self) -> f64 {
        let a = 1.0 + self.ratio.norm_sqr();
        let ap = 1.0 + self.ratio_prime.norm_sqr();
        1.0 / (a + ap).sqrt()
    }
}

/// Weights and phases of both members of a degenerate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairWeights {
    pub s1: f64,
    pub s1_prime: f64,
    pub omega1: f64,
    pub s2: f64,
    pub s2_prime: f64,
    pub omega2: f64,
}

pub fn pair_geometry(params: &CoinParams, k: usize, k_prime: usize, band: Band) -> Result<PairGeometry> {
    if params.r() == 1.0 {
        return Err(Error::DiagonalCoin);
    }
    let report = degeneracy_report(params);
    if k == k_prime || report.partner(k) != Some(k_prime) {
        return Err(Error::NotConjugatePair { k, k_prime });
    }
    let lambda = eigenphase(params, k, band)?;
    let g_k = g_elements(params, lambda, k)?;
    let g_k_prime = g_elements(params, lambda, k_prime)?;
    let s_max = g_k_prime.g01.norm() / (g_k.g00.norm_sqr() + g_k.g01.norm_sqr()).sqrt();
    Ok(PairGeometry {
        k,
        k_prime,
        lambda,
        ratio: -g_k.g00 / g_k.g01,
        ratio_prime: -g_k_prime.g00 / g_k_prime.g01,
        g_k,
        g_k_prime,
        s_max,
    })
}

/// Resolves the weights of both members for a gauge, validating `0 < s₁ < s_max`.
///
/// A weight within [`GAUGE_MARGIN`] of `s_max` is taken as the limit `s' → 0`,
/// where the first member sits at `k` alone and the second at `k'` alone.
pub fn pair_weights(geometry: &PairGeometry, gauge: &GaugeChoice) -> Result<PairWeights> {
    let s_max = geometry.s_max;
    let s1 = gauge.s1;
    if !s1.is_finite() || s1 <= GAUGE_MARGIN || s1 > s_max + GAUGE_MARGIN {
        return Err(Error::GaugeOutOfRange { s1, s_max });
    }
    let omega1 = wrap_positive(gauge.omega1);
    let omega2 = wrap_positive(omega1 + PI);
    if s1 >= s_max - GAUGE_MARGIN {
        let s2_prime = geometry.partner_weight(0.0);
        return Ok(PairWeights {
            s1: s_max,
            s1_prime: 0.0,
            omega1,
            s2: 0.0,
            s2_prime,
            omega2,
        });
    }
    let s2 = (s_max * s_max - s1 * s1).max(0.0).sqrt();
    Ok(PairWeights {
        s1,
        s1_prime: geometry.partner_weight(s1),
        omega1,
        s2,
        s2_prime: geometry.partner_weight(s2),
        omega2,
    })
}

fn check_sub_diagonal(params: &CoinParams) -> Result<()> {
    if params.r() == 1.0 {
        Err(Error::DiagonalCoin)
    } else {
        Ok(())
    }
}

/// `−g00/g01` at the eigenphase `λ(k,z)`.
pub fn coin_ratio(params: &CoinParams, k: usize, band: Band) -> Result<Complex64> {
    check_sub_diagonal(params)?;
    let lambda = eigenphase(params, k, band)?;
    let g = g_elements(params, lambda, k)?;
    Ok(-g.g00 / g.g01)
}

fn single_k_vector(params: &CoinParams, k: usize, band: Band) -> Result<StateVector> {
    let ratio = coin_ratio(params, k, band)?;
    let c0 = 1.0 / (1.0 + ratio.norm_sqr()).sqrt();
    let mut psi = StateVector::zeros(params.sites(), Basis::Fourier);
    let amps = psi.amplitudes_mut();
    amps[2 * k] = Complex64::new(c0, 0.0);
    amps[2 * k + 1] = ratio * c0;
    Ok(psi)
}

/// Eigenvector at a wavenumber without a conjugate partner, in the Fourier basis.
///
/// The `|k⟩|0⟩` amplitude is real and positive.
pub fn eigenvector_nondegenerate(params: &CoinParams, k: usize, band: Band) -> Result<StateVector> {
    check_sub_diagonal(params)?;
    if k >= params.sites() {
        return Err(Error::IndexOutOfRange {
            k,
            sites: params.sites(),
        });
    }
    if let Some(partner) = degeneracy_report(params).partner(k) {
        return Err(Error::DegeneratePair { k, partner, band });
    }
    single_k_vector(params, k, band)
}

/// The orthonormal pair of eigenvectors spanning the eigenspace of `λ(k,z) = λ(k',z)`,
/// in the Fourier basis.
pub fn eigenvector_pair_degenerate(
    params: &CoinParams,
    k: usize,
    k_prime: usize,
    band: Band,
    gauge: &GaugeChoice,
) -> Result<(StateVector, StateVector)> {
    let geometry = pair_geometry(params, k, k_prime, band)?;
    let w = pair_weights(&geometry, gauge)?;
    Ok(pair_vectors(params.sites(), &geometry, &w))
}

fn pair_vectors(sites: usize, geometry: &PairGeometry, w: &PairWeights) -> (StateVector, StateVector) {
    let build = |s: f64, s_prime: f64, omega: f64| {
        let mut psi = StateVector::zeros(sites, Basis::Fourier);
        let amps = psi.amplitudes_mut();
        let (k, kp) = (geometry.k, geometry.k_prime);
        let phase = Complex64::from_polar(s_prime, omega);
        amps[2 * k] = Complex64::new(s, 0.0);
        amps[2 * k + 1] = geometry.ratio * s;
        amps[2 * kp] = phase;
        amps[2 * kp + 1] = geometry.ratio_prime * phase;
        psi
    };
    (
        build(w.s1, w.s1_prime, w.omega1),
        build(w.s2, w.s2_prime, w.omega2),
    )
}

/// Degenerate-pair membership of a basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairTag {
    pub partner_k: usize,
    /// 1 for the member labeled by the smaller wavenumber, 2 for the other.
    pub member: u8,
    pub gauge: GaugeChoice,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenState {
    pub k: usize,
    pub z: Band,
    pub lambda: f64,
    pub pair: Option<PairTag>,
    /// Fourier-basis amplitudes.
    pub vector: StateVector,
}

/// A complete orthonormal eigenbasis, ordered by `(k, z)`.
///
/// The two members of a degenerate pair `(k, k')`, `k < k'`, are labeled by
/// `k` (member 1) and `k'` (member 2).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    params: CoinParams,
    states: Vec<EigenState>,
}

impl EigenBasis {
    pub fn params(&self) -> &CoinParams {
        &self.params
    }

    pub fn states(&self) -> &[EigenState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, k: usize, z: Band) -> Option<&EigenState> {
        self.states.iter().find(|s| s.k == k && s.z == z)
    }

    pub fn position_vectors(&self) -> Vec<StateVector> {
        self.states
            .iter()
            .map(|s| s.vector.clone().into_position())
            .collect()
    }

    /// `max |⟨ψ_i|ψ_j⟩ − δ_ij|` over the basis.
    pub fn gram_defect(&self) -> f64 {
        let vs: Vec<&[Complex64]> = self.states.iter().map(|s| s.vector.amplitudes()).collect();
        let mut worst = 0.0f64;
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((linalg::inner(a, b) - target).norm());
            }
        }
        worst
    }

    /// `max ‖U|ψ⟩ − e^{iλ}|ψ⟩‖` using the structured step.
    pub fn max_residual(&self) -> f64 {
        let op = StepOperator::new(&self.params);
        self.states
            .iter()
            .map(|s| {
                let psi = s.vector.clone().into_position();
                let image = op.apply_step(&psi).expect("basis vectors match the lattice");
                let phase = Complex64::from_polar(1.0, s.lambda);
                image
                    .amplitudes()
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(u, v)| (u - phase * v).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

pub fn full_eigenbasis(params: &CoinParams, policy: &GaugePolicy) -> Result<EigenBasis> {
    let sites = params.sites();
    let mut states = Vec::with_capacity(2 * sites);
    if params.r() == 1.0 {
        for k in 0..sites {
            for z in Band::BOTH {
                let coin = diagonal_coin_component(params, k, z);
                let mut vector = StateVector::zeros(sites, Basis::Fourier);
                vector.amplitudes_mut()[2 * k + coin] = Complex64::new(1.0, 0.0);
                states.push(EigenState {
                    k,
                    z,
                    lambda: eigenphase(params, k, z)?,
                    pair: None,
                    vector,
                });
            }
        }
        return Ok(EigenBasis {
            params: *params,
            states,
        });
    }

    let report = degeneracy_report(params);
    for k in 0..sites {
        match report.partner(k) {
            Some(kp) if kp < k => continue,
            Some(kp) => {
                for z in Band::BOTH {
                    let geometry = pair_geometry(params, k, kp, z)?;
                    let gauge = policy.choice_for(k, z, &geometry);
                    let w = pair_weights(&geometry, &gauge)?;
                    let (first, second) = pair_vectors(sites, &geometry, &w);
                    states.push(EigenState {
                        k,
                        z,
                        lambda: geometry.lambda,
                        pair: Some(PairTag { partner_k: kp, member: 1, gauge }),
                        vector: first,
                    });
                    states.push(EigenState {
                        k: kp,
                        z,
                        lambda: geometry.lambda,
                        pair: Some(PairTag { partner_k: k, member: 2, gauge }),
                        vector: second,
                    });
                }
            }
            None => {
                for z in Band::BOTH {
                    states.push(EigenState {
                        k,
                        z,
                        lambda: eigenphase(params, k, z)?,
                        pair: None,
                        vector: single_k_vector(params, k, z)?,
                    });
                }
            }
        }
    }
    states.sort_by_key(|s| (s.k, s.z));
    Ok(EigenBasis {
        params: *params,
        states,
    })
}

/// Coin component carrying the eigenvalue `λ(k,z)` for a diagonal coin.
///
/// With `θ = α − 2πk/N`, coin 0 has phase `β + θ` and coin 1 has `β − θ`;
/// the band assignment follows the sign of `sin θ`.
pub(crate) fn diagonal_coin_component(params: &CoinParams, k: usize, z: Band) -> usize {
    let upper_is_zero = params.dispersion_angle(k).sin() >= 0.0;
    match (z, upper_is_zero) {
        (Band::Upper, true) | (Band::Lower, false) => 0,
        _ => 1,
    }
}

/// `S = Σ_{non-degenerate} |ψ⟩⟨ψ| + Σ_{pairs} (|ψ²⟩⟨ψ¹| + |ψ¹⟩⟨ψ²|)`, position basis.
pub fn symmetry_operator(basis: &EigenBasis) -> Result<DenseMatrix> {
    let sites = basis.params.sites();
    if sites > DEFAULT_DENSE_LIMIT {
        return Err(Error::DenseLimit {
            sites,
            limit: DEFAULT_DENSE_LIMIT,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let position = basis.position_vectors();
    let mut s = DenseMatrix::zeros(2 * sites);
    for (i, state) in basis.states.iter().enumerate() {
        let v = position[i].amplitudes();
        match state.pair {
            None => s.add_outer(one, v, v),
            Some(tag) if tag.member == 1 => {
                let j = basis
                    .states
                    .iter()
                    .position(|o| o.k == tag.partner_k && o.z == state.z)
                    .ok_or_else(|| Error::Consistency("missing pair member".into()))?;
                let w = position[j].amplitudes();
                s.add_outer(one, w, v);
                s.add_outer(one, v, w);
            }
            Some(_) => {}
        }
    }
    Ok(s)
}

/// Coin ratio `−g00/g01` of a protected (unique-eigenvalue) eigenstate.
///
/// The ratio has unit modulus and does not depend on `R`.
pub fn protected_coin_ratio(params: &CoinParams, k: usize, band: Band) -> Result<Complex64> {
    let report: DegeneracyReport = degeneracy_report(params);
    if !report.is_unique(k) {
        return Err(Error::NotUnique { k });
    }
    coin_ratio(params, k, band)
}

/// Checks that `λ` solves `det G = 0` at `k`, returning `|det G|`.
pub fn det_residual(params: &CoinParams, lambda: f64, k: usize) -> Result<f64> {
    Ok(g_elements(params, lambda, k)?.det().norm())
}
