//! The step operator `U = 𝒯ℱ` and the states it acts on.
//!
//! Amplitudes are stored position-major: `(x, c) ↦ 2x + c`. The coin state
//! `c = 0` moves left (`x → x − 1`) and `c = 1` moves right, with periodic
//! boundaries.

use rand::Rng;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::coin::{build_coin, CoinMatrix, CoinParams};
use crate::linalg::{self, DenseMatrix};
use crate::{Complex64, Error, Result};

/// Largest lattice for which a dense `2N × 2N` realization is built by default.
pub const DEFAULT_DENSE_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Amplitudes `ψ(x, c)`.
    Position,
    /// Amplitudes `ψ̃(k, c)`.
    Fourier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    sites: usize,
    basis: Basis,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(sites: usize, basis: Basis, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 2 * sites {
            return Err(Error::SizeMismatch {
                expected: 2 * sites,
                actual: amps.len(),
            });
        }
        Ok(Self { sites, basis, amps })
    }

    pub fn zeros(sites: usize, basis: Basis) -> Self {
        Self {
            sites,
            basis,
            amps: vec![Complex64::new(0.0, 0.0); 2 * sites],
        }
    }

    /// The basis state `|x⟩|c⟩` in the position basis.
    pub fn basis_state(sites: usize, x: usize, c: usize) -> Result<Self> {
        if x >= sites {
            return Err(Error::IndexOutOfRange { k: x, sites });
        }
        if c > 1 {
            return Err(Error::Domain(format!("coin index must be 0 or 1, got {c}")));
        }
        let mut s = Self::zeros(sites, Basis::Position);
        s.amps[2 * x + c] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// A normalized state with independent uniform components in the unit box.
    pub fn random<R: Rng + ?Sized>(sites: usize, basis: Basis, rng: &mut R) -> Self {
        let amps = (0..2 * sites)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Self { sites, basis, amps }.normalized()
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Amplitude at site (or wavenumber) `x` and coin `c`.
    pub fn amp(&self, x: usize, c: usize) -> Complex64 {
        self.amps[2 * x + c]
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amps)
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
        self
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(linalg::inner(&self.amps, &other.amps))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.sites != other.sites {
            return Err(Error::SizeMismatch {
                expected: self.sites,
                actual: other.sites,
            });
        }
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis,
                actual: other.basis,
            });
        }
        Ok(())
    }

    fn require_basis(&self, basis: Basis) -> Result<()> {
        if self.basis != basis {
            return Err(Error::BasisMismatch {
                expected: basis,
                actual: self.basis,
            });
        }
        Ok(())
    }

    /// Converts to the position basis if needed.
    pub fn into_position(self) -> Self {
        match self.basis {
            Basis::Position => self,
            Basis::Fourier => transform(&self, FftDirection::Forward, Basis::Position),
        }
    }
}

/// One time step of the walk: a homogeneous coin followed by the conditional shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOperator {
    coin: CoinMatrix,
    sites: usize,
}

impl StepOperator {
    pub fn new(params: &CoinParams) -> Self {
        Self {
            coin: build_coin(params),
            sites: params.sites(),
        }
    }

    pub fn from_coin(coin: CoinMatrix, sites: usize) -> Self {
        Self { coin, sites }
    }

    pub fn coin(&self) -> &CoinMatrix {
        &self.coin
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Applies `U` to a position-basis state in `O(N)` work.
    pub fn apply_step(&self, psi: &StateVector) -> Result<StateVector> {
        self.check_state(psi)?;
        let mut out = StateVector::zeros(self.sites, Basis::Position);
        self.step_into(&psi.amps, &mut out.amps);
        Ok(out)
    }

    /// Writes `U·src` into `dst`. Both slices hold `2N` position amplitudes.
    pub fn step_into(&self, src: &[Complex64], dst: &mut [Complex64]) {
        let n = self.sites;
        assert_eq!(src.len(), 2 * n);
        assert_eq!(dst.len(), 2 * n);
        for x in 0..n {
            let (up, down) = self.coin.apply(src[2 * x], src[2 * x + 1]);
            let left = if x == 0 { n - 1 } else { x - 1 };
            let right = if x + 1 == n { 0 } else { x + 1 };
            dst[2 * left] = up;
            dst[2 * right + 1] = down;
        }
    }

    /// Dense `2N × 2N` matrix of `U` for `N ≤` [`DEFAULT_DENSE_LIMIT`].
    pub fn build_dense(&self) -> Result<DenseMatrix> {
        self.build_dense_with_limit(DEFAULT_DENSE_LIMIT)
    }

    pub fn build_dense_with_limit(&self, limit: usize) -> Result<DenseMatrix> {
        let n = self.sites;
        if n > limit {
            return Err(Error::DenseLimit { sites: n, limit });
        }
        let f = &self.coin.entries;
        let mut m = DenseMatrix::zeros(2 * n);
        for x in 0..n {
            let left = (x + n - 1) % n;
            let right = (x + 1) % n;
            for c in 0..2 {
                m[(2 * left, 2 * x + c)] = f[0][c];
                m[(2 * right + 1, 2 * x + c)] = f[1][c];
            }
        }
        Ok(m)
    }

    fn check_state(&self, psi: &StateVector) -> Result<()> {
        if psi.sites != self.sites {
            return Err(Error::SizeMismatch {
                expected: self.sites,
                actual: psi.sites,
            });
        }
        psi.require_basis(Basis::Position)
    }
}

/// `ψ̃(k, c) = N^{-1/2} Σ_x e^{+i2πkx/N} ψ(x, c)`, per coin component.
pub fn fourier(psi: &StateVector) -> Result<StateVector> {
    psi.require_basis(Basis::Position)?;
    Ok(transform(psi, FftDirection::Inverse, Basis::Fourier))
}

/// Adjoint of [`fourier`].
pub fn inverse_fourier(psi: &StateVector) -> Result<StateVector> {
    psi.require_basis(Basis::Fourier)?;
    Ok(transform(psi, FftDirection::Forward, Basis::Position))
}

// rustfft's inverse direction carries the e^{+i} kernel.
fn transform(psi: &StateVector, direction: FftDirection, target: Basis) -> StateVector {
    let n = psi.sites;
    let fft = FftPlanner::<f64>::new().plan_fft(n, direction);
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = StateVector::zeros(n, target);
    for c in 0..2 {
        let mut buf: Vec<Complex64> = (0..n).map(|x| psi.amps[2 * x + c]).collect();
        fft.process(&mut buf);
        for (k, v) in buf.into_iter().enumerate() {
            out.amps[2 * k + c] = v * scale;
        }
    }
    out
}

/// Applies one step per parameter set, in order. All parameter sets must share `N`.
pub fn evolve(sequence: &[CoinParams], psi0: &StateVector) -> Result<StateVector> {
    psi0.require_basis(Basis::Position)?;
    for p in sequence {
        if p.sites() != psi0.sites {
            return Err(Error::SizeMismatch {
                expected: psi0.sites,
                actual: p.sites(),
            });
        }
    }
    let mut cur = psi0.amps.clone();
    let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
    for p in sequence {
        StepOperator::new(p).step_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    StateVector::new(psi0.sites, Basis::Position, cur)
}
