//! Reduced coin states and their Bloch-ball representation.
//!
//! Pauli convention: `σ_z = diag(1, −1)`, so coin `|0⟩` is the north pole.
//! For an eigenvector `s|k⟩u + e^{iω}s'|k'⟩u'` with coin spinors
//! `u = (1, −g00/g01)` the Bloch vector is
//!
//! ```text
//! r_x = −2 Re Θ,   r_y = −2 Im Θ,
//! r_z = s²(1 − |g00/g01|²) + s'²(1 − |g00'/g01'|²),
//! Θ   = s² g00(λ,k)/g01(k) + s'² g00(λ,k')/g01(k').
//! ```

use std::f64::consts::PI;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::coin::CoinParams;
use crate::eigensystem::{coin_ratio, diagonal_coin_component, pair_geometry, pair_weights, GaugePolicy};
use crate::operator::StateVector;
use crate::phase::wrap_positive;
use crate::spectrum::{degeneracy_report, Band};
use crate::{Complex64, Result};

/// Below this transverse length the azimuth is reported as 0 and flagged.
pub const AZIMUTH_EPS: f64 = 1e-14;

/// A 2×2 coin density matrix, `rho[c][c'] = Σ_x ψ(x,c) ψ̄(x,c')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDensity {
    pub rho: [[Complex64; 2]; 2],
}

impl CoinDensity {
    pub fn trace(&self) -> Complex64 {
        self.rho[0][0] + self.rho[1][1]
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let r = &self.rho;
        (r[0][0] * r[0][0] + r[0][1] * r[1][0] + r[1][0] * r[0][1] + r[1][1] * r[1][1]).re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let r = &self.rho;
        (r[0][0].im.abs())
            .max(r[1][1].im.abs())
            .max((r[0][1] - r[1][0].conj()).norm())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = &self.rho;
        let (a, d) = (r[0][0].re, r[1][1].re);
        let b = 0.5 * (r[0][1] + r[1][0].conj());
        let mean = 0.5 * (a + d);
        let spread = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mean - spread, mean + spread]
    }
}

/// Partial trace over position. Valid in either basis, since the position
/// transform does not touch the coin.
pub fn reduced_coin_state(psi: &StateVector) -> CoinDensity {
    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    for site in psi.amplitudes().chunks_exact(2) {
        for c in 0..2 {
            for cp in 0..2 {
                rho[c][cp] += site[c] * site[cp].conj();
            }
        }
    }
    CoinDensity { rho }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl BlochVector {
    pub fn new(rx: f64, ry: f64, rz: f64) -> Self {
        Self { rx, ry, rz }
    }

    pub fn r(&self) -> f64 {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }

    /// Polar angle from `+z`, in `[0, π]`; 0 at the origin.
    pub fn theta(&self) -> f64 {
        let r = self.r();
        if r == 0.0 {
            return 0.0;
        }
        (self.rz / r).clamp(-1.0, 1.0).acos()
    }

    /// Azimuth in `[0, 2π)`; 0 for on-axis vectors.
    pub fn phi(&self) -> f64 {
        if !self.azimuth_defined() {
            return 0.0;
        }
        wrap_positive(self.ry.atan2(self.rx))
    }

    pub fn azimuth_defined(&self) -> bool {
        self.rx.hypot(self.ry) > AZIMUTH_EPS
    }

    pub fn distance(&self, other: &Self) -> f64 {
        ((self.rx - other.rx).powi(2) + (self.ry - other.ry).powi(2) + (self.rz - other.rz).powi(2)).sqrt()
    }
}

impl Serialize for BlochVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BlochVector", 7)?;
        st.serialize_field("rx", &self.rx)?;
        st.serialize_field("ry", &self.ry)?;
        st.serialize_field("rz", &self.rz)?;
        st.serialize_field("r", &self.r())?;
        st.serialize_field("theta", &self.theta())?;
        st.serialize_field("phi", &self.phi())?;
        st.serialize_field("azimuth_defined", &self.azimuth_defined())?;
        st.end()
    }
}

/// `r_i = Tr(ρ σ_i)`.
pub fn bloch_vector(rho: &CoinDensity) -> BlochVector {
    let r = &rho.rho;
    BlochVector {
        rx: (r[0][1] + r[1][0]).re,
        ry: (Complex64::new(0.0, 1.0) * (r[0][1] - r[1][0])).re,
        rz: (r[0][0] - r[1][1]).re,
    }
}

/// Bloch vector of the eigenstate labeled `(k, z)` from the closed form.
///
/// Degenerate pairs use the gauge selected by `policy`; member 1 carries the
/// smaller wavenumber of the pair, member 2 the larger.
pub fn eigenstate_bloch(params: &CoinParams, k: usize, band: Band, policy: &GaugePolicy) -> Result<BlochVector> {
    if k >= params.sites() {
        return Err(crate::Error::IndexOutOfRange {
            k,
            sites: params.sites(),
        });
    }
    if params.r() == 1.0 {
        let rz = if diagonal_coin_component(params, k, band) == 0 { 1.0 } else { -1.0 };
        return Ok(BlochVector::new(0.0, 0.0, rz));
    }

    let (weights, ratios) = match degeneracy_report(params).partner(k) {
        Some(kp) => {
            let (lo, hi) = (k.min(kp), k.max(kp));
            let geometry = pair_geometry(params, lo, hi, band)?;
            let gauge = policy.choice_for(lo, band, &geometry);
            let w = pair_weights(&geometry, &gauge)?;
            let weights = if k == lo { (w.s1, w.s1_prime) } else { (w.s2, w.s2_prime) };
            (weights, (geometry.ratio, geometry.ratio_prime))
        }
        None => {
            let ratio = coin_ratio(params, k, band)?;
            let s = 1.0 / (1.0 + ratio.norm_sqr()).sqrt();
            ((s, 0.0), (ratio, Complex64::new(0.0, 0.0)))
        }
    };
    let (s, sp) = weights;
    let (a, ap) = ratios;
    // g00/g01 = −a
    let big_theta = -(a * s * s + ap * sp * sp);
    Ok(BlochVector {
        rx: -2.0 * big_theta.re,
        ry: -2.0 * big_theta.im,
        rz: s * s * (1.0 - a.norm_sqr()) + sp * sp * (1.0 - ap.norm_sqr()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub params: CoinParams,
    pub k: usize,
    pub z: Band,
    pub bloch: BlochVector,
}

pub const TRAJECTORY_CSV_HEADER: &str = "R,alpha,beta,k,z,rx,ry,rz,r,theta,phi";

impl Serialize for TrajectoryPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let b = &self.bloch;
        let mut st = s.serialize_struct("TrajectoryPoint", 12)?;
        st.serialize_field("R", &self.params.r())?;
        st.serialize_field("alpha", &self.params.alpha())?;
        st.serialize_field("beta", &self.params.beta())?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("z", &self.z)?;
        st.serialize_field("rx", &b.rx)?;
        st.serialize_field("ry", &b.ry)?;
        st.serialize_field("rz", &b.rz)?;
        st.serialize_field("r", &b.r())?;
        st.serialize_field("theta", &b.theta())?;
        st.serialize_field("phi", &b.phi())?;
        st.serialize_field("azimuth_defined", &b.azimuth_defined())?;
        st.end()
    }
}

/// Bloch vectors for every parameter point, wavenumber and band, in that nesting order.
pub fn trajectory(sweep: &[CoinParams], ks: &[usize], bands: &[Band], policy: &GaugePolicy) -> Result<Vec<TrajectoryPoint>> {
    let mut out = Vec::with_capacity(sweep.len() * ks.len() * bands.len());
    for params in sweep {
        for &k in ks {
            for &z in bands {
                out.push(TrajectoryPoint {
                    params: *params,
                    k,
                    z,
                    bloch: eigenstate_bloch(params, k, z, policy)?,
                });
            }
        }
    }
    Ok(out)
}

/// Angular distance of a Bloch vector from the equator.
pub fn equator_offset(b: &BlochVector) -> f64 {
    (b.theta() - PI / 2.0).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Basis;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_state_reduces_to_pure_coin() {
        let mut psi = StateVector::zeros(3, Basis::Position);
        psi.amplitudes_mut()[2] = c(FRAC_1_SQRT_2);
        psi.amplitudes_mut()[3] = c(FRAC_1_SQRT_2);
        let rho = reduced_coin_state(&psi);
        for e in rho.rho.iter().flatten() {
            assert!((e - c(0.5)).norm() < 1e-15);
        }
        let b = bloch_vector(&rho);
        assert!((b.rx - 1.0).abs() < 1e-15 && b.ry.abs() < 1e-15 && b.rz.abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entangled_state_is_maximally_mixed() {
        let mut psi = StateVector::zeros(3, Basis::Position);
        psi.amplitudes_mut()[0] = c(FRAC_1_SQRT_2);
        psi.amplitudes_mut()[5] = c(FRAC_1_SQRT_2);
        let b = bloch_vector(&reduced_coin_state(&psi));
        assert!(b.r() < 1e-15);
        assert!(!b.azimuth_defined());
        assert_eq!(b.phi(), 0.0);
    }

    #[test]
    fn north_pole_is_coin_zero() {
        let rho = CoinDensity {
            rho: [[c(1.0), c(0.0)], [c(0.0), c(0.0)]],
        };
        let b = bloch_vector(&rho);
        assert_eq!((b.rx, b.ry, b.rz), (0.0, 0.0, 1.0));
        assert_eq!(b.theta(), 0.0);
        assert!(!b.azimuth_defined());
    }

    #[test]
    fn sigma_y_sign() {
        // (|0⟩ + i|1⟩)/√2 points along +y
        let mut psi = StateVector::zeros(1, Basis::Position);
        psi.amplitudes_mut()[0] = c(FRAC_1_SQRT_2);
        psi.amplitudes_mut()[1] = Complex64::new(0.0, FRAC_1_SQRT_2);
        let b = bloch_vector(&reduced_coin_state(&psi));
        assert!((b.ry - 1.0).abs() < 1e-15);
        assert!((b.phi() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn density_eigenvalues_of_mixed_state() {
        let rho = CoinDensity {
            rho: [[c(0.75), c(0.0)], [c(0.0), c(0.25)]],
        };
        let ev = rho.eigenvalues();
        assert!((ev[0] - 0.25).abs() < 1e-15 && (ev[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn diagonal_coin_eigenstates_sit_at_poles() {
        let params = CoinParams::new(6, 1.0, 0.3, 0.0).unwrap();
        for k in 0..6 {
            let up = eigenstate_bloch(&params, k, Band::Upper, &GaugePolicy::default()).unwrap();
            let down = eigenstate_bloch(&params, k, Band::Lower, &GaugePolicy::default()).unwrap();
            assert_eq!(up.rz.abs(), 1.0);
            assert_eq!(up.rz, -down.rz);
        }
    }
}
