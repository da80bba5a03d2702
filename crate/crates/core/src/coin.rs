//! The coin-flip matrix of the walk.
//!
//! The coin is parameterized by a bias weight `R ∈ [0, 1]` and two angles:
//!
//! ```text
//! F = e^{iβ} [ √R e^{iα}          √(1−R) e^{−iβ} ]
//!            [ −√(1−R) e^{iβ}     √R e^{−iα}     ]
//! ```
//!
//! The lattice size is carried alongside the coin parameters because the
//! degeneracy structure of the spectrum couples `α` and `N`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::phase::wrap_positive;
use crate::{Complex64, Error, Result};

/// Coin parameters `(R, α, β)` together with the lattice size `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    #[serde(rename = "R")]
    r: f64,
    alpha: f64,
    beta: f64,
    #[serde(rename = "N")]
    sites: usize,
    /// Exact lattice index `n` when `α = nπ/N` was given as an integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_n: Option<usize>,
}

impl CoinParams {
    /// Validates and normalizes the parameters. Angles are reduced to `[0, 2π)`.
    pub fn new(sites: usize, r: f64, alpha: f64, beta: f64) -> Result<Self> {
        validate_sites(sites)?;
        validate_bias(r)?;
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain(format!(
                "angles must be finite, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(Self {
            r,
            alpha: wrap_positive(alpha),
            beta: wrap_positive(beta),
            sites,
            alpha_n: None,
        })
    }

    /// Parameters with `α = nπ/N` given exactly by the lattice index `n`.
    ///
    /// `n` is reduced modulo `2N`.
    pub fn with_alpha_index(sites: usize, r: f64, alpha_n: i64, beta: f64) -> Result<Self> {
        validate_sites(sites)?;
        let n = alpha_n.rem_euclid(2 * sites as i64) as usize;
        let mut p = Self::new(sites, r, n as f64 * PI / sites as f64, beta)?;
        p.alpha_n = Some(n);
        Ok(p)
    }

    /// The Hadamard coin `{R, α, β} = {1/2, 3π/2, π/2}` on `N` sites.
    pub fn hadamard(sites: usize) -> Result<Self> {
        Self::new(sites, 0.5, 3.0 * FRAC_PI_2, FRAC_PI_2)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// The exact lattice index, if `α` was specified as `nπ/N`.
    pub fn alpha_index(&self) -> Option<usize> {
        self.alpha_n
    }

    /// Same coin angles and lattice, different bias.
    pub fn with_r(&self, r: f64) -> Result<Self> {
        validate_bias(r)?;
        Ok(Self { r, ..*self })
    }

    /// Same bias and lattice, different `α`. Drops any exact lattice index.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.sites, self.r, alpha, self.beta)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        let mut p = Self::new(self.sites, self.r, self.alpha, beta)?;
        p.alpha_n = self.alpha_n;
        Ok(p)
    }

    /// The angle `α − 2πk/N` entering the dispersion at wavenumber `k`.
    ///
    /// With an exact lattice index this is evaluated as `π(n − 2k)/N`, so
    /// conjugate wavenumbers give angles that are exact negatives.
    pub(crate) fn dispersion_angle(&self, k: usize) -> f64 {
        let n = self.sites as f64;
        match self.alpha_n {
            Some(idx) => {
                // reduce n − 2k into (−N, N] so conjugate k give exactly opposite angles
                let two_n = 2 * self.sites as i64;
                let mut m = (idx as i64 - 2 * k as i64).rem_euclid(two_n);
                if m > self.sites as i64 {
                    m -= two_n;
                }
                PI * m as f64 / n
            }
            None => self.alpha - 2.0 * PI * k as f64 / n,
        }
    }
}

fn validate_sites(sites: usize) -> Result<()> {
    if sites < 2 {
        return Err(Error::Domain(format!("N must be at least 2, got {sites}")));
    }
    Ok(())
}

fn validate_bias(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("R must lie in [0, 1], got {r}")));
    }
    Ok(())
}

/// A 2×2 complex matrix acting on the coin space, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoinMatrix {
    pub entries: [[Complex64; 2]; 2],
}

impl CoinMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            entries: [[one, zero], [zero, one]],
        }
    }

    #[inline]
    pub fn apply(&self, c0: Complex64, c1: Complex64) -> (Complex64, Complex64) {
        let m = &self.entries;
        (m[0][0] * c0 + m[0][1] * c1, m[1][0] * c0 + m[1][1] * c1)
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.entries;
        Self {
            entries: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { entries: out }
    }

    /// Largest entrywise deviation of `C C†` and `C† C` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let id = Self::identity();
        let d = |m: Self| {
            m.entries
                .iter()
                .flatten()
                .zip(id.entries.iter().flatten())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        };
        d(self.mul(&self.adjoint())).max(d(self.adjoint().mul(self)))
    }
}

/// The coin without the global phase `e^{iβ}`.
pub fn build_coin_bare(params: &CoinParams) -> CoinMatrix {
    let (r, a, b) = (params.r, params.alpha, params.beta);
    let diag = r.sqrt();
    let off = (1.0 - r).sqrt();
    CoinMatrix {
        entries: [
            [
                Complex64::from_polar(diag, a),
                Complex64::from_polar(off, -b),
            ],
            [
                -Complex64::from_polar(off, b),
                Complex64::from_polar(diag, -a),
            ],
        ],
    }
}

/// Builds the coin-flip matrix `F`.
pub fn build_coin(params: &CoinParams) -> CoinMatrix {
    let phase = Complex64::from_polar(1.0, params.beta);
    let mut coin = build_coin_bare(params);
    for e in coin.entries.iter_mut().flatten() {
        *e *= phase;
    }
    coin
}

/// Hadamard coin parameters on `N` sites.
pub fn hadamard_params(sites: usize) -> Result<CoinParams> {
    CoinParams::hadamard(sites)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn diagonal_coin_is_identity() {
        let c = build_coin(&CoinParams::new(4, 1.0, 0.0, 0.0).unwrap());
        assert_eq!(c, CoinMatrix::identity());
    }

    #[test]
    fn unbiased_coin_is_pure_off_diagonal() {
        let c = build_coin(&CoinParams::new(4, 0.0, 0.0, 0.0).unwrap());
        let e = c.entries;
        assert!(close(e[0][0], Complex64::new(0.0, 0.0)));
        assert!(close(e[0][1], Complex64::new(1.0, 0.0)));
        assert!(close(e[1][0], Complex64::new(-1.0, 0.0)));
        assert!(close(e[1][1], Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn hadamard_family_entries() {
        let p = hadamard_params(20).unwrap();
        assert_eq!(p.r(), 0.5);
        assert!((p.alpha() - 3.0 * PI / 2.0).abs() < 1e-15);
        assert!((p.beta() - PI / 2.0).abs() < 1e-15);
        assert_eq!(p.sites(), 20);
        let c = build_coin(&p);
        assert!(c.unitarity_defect() < 1e-12);
        for e in c.entries.iter().flatten() {
            assert!((e.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(CoinParams::new(4, 1.5, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(CoinParams::new(4, -0.1, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(CoinParams::new(1, 0.5, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(CoinParams::new(4, f64::NAN, 0.0, 0.0).is_err());
        assert!(CoinParams::new(4, 0.5, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn angles_are_normalized() {
        let p = CoinParams::new(4, 0.5, -PI / 2.0, 5.0 * PI).unwrap();
        assert!((p.alpha() - 3.0 * PI / 2.0).abs() < 1e-15);
        assert!((p.beta() - PI).abs() < 1e-14);
    }

    #[test]
    fn alpha_index_is_reduced_mod_2n() {
        let p = CoinParams::with_alpha_index(4, 0.5, 9, 0.0).unwrap();
        assert_eq!(p.alpha_index(), Some(1));
        assert!((p.alpha() - PI / 4.0).abs() < 1e-15);
        let q = CoinParams::with_alpha_index(4, 0.5, -1, 0.0).unwrap();
        assert_eq!(q.alpha_index(), Some(7));
    }

    proptest! {
        #[test]
        fn coin_is_unitary(r in 0.0..=1.0f64, a in -10.0..10.0f64, b in -10.0..10.0f64) {
            let c = build_coin(&CoinParams::new(3, r, a, b).unwrap());
            prop_assert!(c.unitarity_defect() < 1e-12);
            prop_assert!((c.det().norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn global_phase_factors_out(r in 0.0..=1.0f64, a in 0.0..TAU, b in 0.0..TAU) {
            let p = CoinParams::new(3, r, a, b).unwrap();
            let full = build_coin(&p);
            let bare = build_coin_bare(&p);
            let phase = Complex64::from_polar(1.0, b);
            for (f, e) in full.entries.iter().flatten().zip(bare.entries.iter().flatten()) {
                if e.norm() > 1e-8 {
                    prop_assert!((f / e - phase).norm() < 1e-12);
                }
            }
        }
    }
}
