//! Closed-form eigenphases of the step operator and their degeneracy structure.
//!
//! At wavenumber `k` the eigenvalues are
//!
//! ```text
//! e^{iλ(k,z)} = e^{iβ} [ √R cos θ_k + i (−1)^z √(1 − R cos² θ_k) ],   θ_k = α − 2πk/N
//! ```
//!
//! for the two bands `z ∈ {1, 2}`. The spectrum is degenerate exactly when
//! `α = nπ/N` for an integer `n`; wavenumbers then pair up as
//! `k' = n − k (mod N)` and the self-conjugate ones carry unique eigenvalues.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::coin::CoinParams;
use crate::phase::{circle_distance, wrap};
use crate::{Complex64, Error, Result};

/// Tolerance on `|αN/π − round(αN/π)|` for classifying `α` as a lattice angle.
pub const LATTICE_TOLERANCE: f64 = 1e-9;

/// Band index `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Band {
    /// `z = 1`, phases below `β`.
    Lower,
    /// `z = 2`, phases above `β`.
    Upper,
}

impl Band {
    pub const BOTH: [Band; 2] = [Band::Lower, Band::Upper];

    /// `(−1)^z`.
    pub fn sign(self) -> f64 {
        match self {
            Band::Lower => -1.0,
            Band::Upper => 1.0,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Band::Lower => 1,
            Band::Upper => 2,
        }
    }

    pub fn from_index(z: u8) -> Result<Self> {
        match z {
            1 => Ok(Band::Lower),
            2 => Ok(Band::Upper),
            _ => Err(Error::Domain(format!("band index must be 1 or 2, got {z}"))),
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl Serialize for Band {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub k: usize,
    pub z: Band,
    /// Phase in `[−π, π)`.
    pub lambda: f64,
    /// Conjugate wavenumber sharing this eigenvalue, if any.
    pub partner_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegeneracyReport {
    pub is_degenerate: bool,
    /// Lattice index with `α = nπ/N`, `n ∈ {0..2N−1}`.
    pub n: Option<usize>,
    /// Conjugate pairs `(k, k')` with `k < k'`.
    pub pairs: Vec<(usize, usize)>,
    /// Self-conjugate wavenumbers, ascending.
    pub unique_ks: Vec<usize>,
}

impl DegeneracyReport {
    /// The conjugate partner of `k`, when `k` belongs to a pair.
    pub fn partner(&self, k: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == k {
                Some(b)
            } else if b == k {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn is_unique(&self, k: usize) -> bool {
        self.unique_ks.contains(&k)
    }
}

fn check_k(params: &CoinParams, k: usize) -> Result<()> {
    if k >= params.sites() {
        return Err(Error::IndexOutOfRange {
            k,
            sites: params.sites(),
        });
    }
    Ok(())
}

/// The bracketed unit-modulus factor `√R cos θ + i(−1)^z √(1 − R cos²θ)`.
fn band_factor(params: &CoinParams, k: usize, band: Band) -> Complex64 {
    let theta = params.dispersion_angle(k);
    let r = params.r();
    let (s, c) = theta.sin_cos();
    // 1 − R cos²θ written without cancellation near cos²θ = 1
    let radicand = (1.0 - r) + r * s * s;
    Complex64::new(r.sqrt() * c, band.sign() * radicand.sqrt())
}

/// The eigenvalue `e^{iλ(k,z)}`.
pub fn eigenvalue(params: &CoinParams, k: usize, band: Band) -> Result<Complex64> {
    check_k(params, k)?;
    Ok(Complex64::from_polar(1.0, params.beta()) * band_factor(params, k, band))
}

/// The eigenphase `λ(k,z) ∈ [−π, π)`.
pub fn eigenphase(params: &CoinParams, k: usize, band: Band) -> Result<f64> {
    check_k(params, k)?;
    let f = band_factor(params, k, band);
    Ok(wrap(params.beta() + f.im.atan2(f.re)))
}

/// Lattice index `n` with `α = nπ/N`, if any.
pub fn lattice_index(params: &CoinParams) -> Option<usize> {
    if let Some(n) = params.alpha_index() {
        return Some(n);
    }
    let sites = params.sites() as f64;
    let x = params.alpha() * sites / PI;
    let m = x.round();
    if (x - m).abs() < LATTICE_TOLERANCE {
        Some((m as i64).rem_euclid(2 * params.sites() as i64) as usize)
    } else {
        None
    }
}

/// `k' = n − k (mod N)`.
pub fn conjugate_wavenumber(k: usize, n: usize, sites: usize) -> usize {
    (n % sites + sites - k % sites) % sites
}

/// Wavenumbers with a unique eigenvalue for `α = nπ/N`, by parity of `n` and `N`.
///
/// These are the solutions of `2k ≡ n (mod N)`, where `α − 2πk/N` is `0` or `π`.
pub fn unique_wavenumbers(n: usize, sites: usize) -> Vec<usize> {
    let mut ks = match (n.is_multiple_of(2), sites.is_multiple_of(2)) {
        (true, true) => vec![(n / 2) % sites, ((sites + n) / 2) % sites],
        (true, false) => vec![(n / 2) % sites],
        (false, true) => vec![],
        (false, false) => vec![((sites + n) / 2) % sites],
    };
    ks.sort_unstable();
    ks.dedup();
    ks
}

pub fn degeneracy_report(params: &CoinParams) -> DegeneracyReport {
    let sites = params.sites();
    let Some(n) = lattice_index(params) else {
        return DegeneracyReport {
            is_degenerate: false,
            n: None,
            pairs: Vec::new(),
            unique_ks: Vec::new(),
        };
    };
    let pairs = (0..sites)
        .filter_map(|k| {
            let kp = conjugate_wavenumber(k, n, sites);
            (k < kp).then_some((k, kp))
        })
        .collect();
    DegeneracyReport {
        is_degenerate: true,
        n: Some(n),
        pairs,
        unique_ks: unique_wavenumbers(n, sites),
    }
}

/// All `2N` spectral points, ordered by `k` then band.
pub fn full_spectrum(params: &CoinParams) -> Vec<SpectralPoint> {
    let report = degeneracy_report(params);
    let mut points = Vec::with_capacity(2 * params.sites());
    for k in 0..params.sites() {
        let partner_k = report.partner(k);
        for z in Band::BOTH {
            let f = band_factor(params, k, z);
            points.push(SpectralPoint {
                k,
                z,
                lambda: wrap(params.beta() + f.im.atan2(f.re)),
                partner_k,
            });
        }
    }
    points
}

/// The limiting closed forms for `R = 0` and `R = 1`, in [`full_spectrum`] order.
///
/// Each value is checked against [`eigenphase`] to `1e-12`.
pub fn limiting_phases(params: &CoinParams) -> Result<Vec<f64>> {
    let r = params.r();
    if r != 0.0 && r != 1.0 {
        return Err(Error::Domain(format!(
            "limiting phases need R = 0 or R = 1, got {r}"
        )));
    }
    let beta = params.beta();
    let mut out = Vec::with_capacity(2 * params.sites());
    for k in 0..params.sites() {
        for z in Band::BOTH {
            let lambda = if r == 0.0 {
                wrap(beta + z.sign() * FRAC_PI_2)
            } else {
                let theta = params.dispersion_angle(k);
                if theta.sin() >= 0.0 {
                    wrap(beta + z.sign() * theta)
                } else {
                    wrap(beta - z.sign() * theta)
                }
            };
            let reference = eigenphase(params, k, z)?;
            let dist = circle_distance(lambda, reference);
            if dist > 1e-12 {
                return Err(Error::Consistency(format!(
                    "limiting phase at k = {k}, z = {z} differs from the general form by {dist:e}"
                )));
            }
            out.push(lambda);
        }
    }
    Ok(out)
}
