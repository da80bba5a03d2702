//! Brute-force verification by dense diagonalization.
//!
//! This module only depends on the step operator's dense realization and
//! the shared spectral types; it never calls the closed-form eigen solutions.

use faer::Mat;
use serde::Serialize;

use crate::coin::CoinParams;
use crate::linalg::{self, DenseMatrix};
use crate::operator::StepOperator;
use crate::phase::{arg, circle_distance};
use crate::spectrum::{Band, SpectralPoint};
use crate::{Complex64, Error, Result};

/// Eigenvalues closer than this on the unit circle form one cluster.
pub const CLUSTER_RADIUS: f64 = 1e-8;
/// Acceptance radius when pairing closed-form and oracle eigenvalues.
pub const MATCH_RADIUS: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub eigenvalues: Vec<Complex64>,
    /// Orthonormal eigenvectors, `eigenvectors[i]` belongs to `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// `max ‖U v − μ v‖`.
    pub residual: f64,
    /// Index sets of eigenvalues within [`CLUSTER_RADIUS`] of each other.
    pub clusters: Vec<Vec<usize>>,
}

impl OracleResult {
    pub fn phases(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|&z| arg(z)).collect()
    }

    /// `max ||μ| − 1|`.
    pub fn modulus_defect(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Cluster sizes, sorted ascending.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.clusters.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    /// `Σ μ_i |v_i⟩⟨v_i|`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let dim = self.eigenvalues.len();
        let mut m = DenseMatrix::zeros(dim);
        for (mu, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m.add_outer(*mu, v, v);
        }
        m
    }

    /// `max |⟨v_i|v_j⟩ − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.eigenvectors.iter().enumerate() {
            for (j, b) in self.eigenvectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((linalg::inner(a, b) - target).norm());
            }
        }
        worst
    }
}

/// Full eigendecomposition of the dense step operator.
pub fn dense_eigendecompose(params: &CoinParams) -> Result<OracleResult> {
    let dense = StepOperator::new(params).build_dense()?;
    eigendecompose_matrix(&dense)
}

/// Eigendecomposition of a dense normal matrix.
pub fn eigendecompose_matrix(dense: &DenseMatrix) -> Result<OracleResult> {
    let dim = dense.dim();
    let mat = Mat::<Complex64>::from_fn(dim, dim, |i, j| dense[(i, j)]);
    let evd = mat
        .eigen()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let eigenvalues: Vec<Complex64> = evd.S().column_vector().iter().copied().collect();
    if eigenvalues.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    let u = evd.U();
    let mut eigenvectors: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..dim).map(|i| u[(i, j)]).collect())
        .collect();

    let clusters = cluster_phases(&eigenvalues);
    for cluster in &clusters {
        orthonormalize(&mut eigenvectors, cluster)?;
    }

    let residual = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(mu, v)| {
            let image = dense.mul_vec(v);
            image
                .iter()
                .zip(v)
                .map(|(a, b)| (a - mu * b).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);

    Ok(OracleResult {
        eigenvalues,
        eigenvectors,
        residual,
        clusters,
    })
}

/// Single-linkage clustering of eigenvalue phases around the circle.
fn cluster_phases(eigenvalues: &[Complex64]) -> Vec<Vec<usize>> {
    let mut order: Vec<(f64, usize)> = eigenvalues.iter().map(|&z| arg(z)).zip(0..).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last_phase = f64::NAN;
    for &(phase, idx) in &order {
        match clusters.last_mut() {
            Some(cur) if circle_distance(phase, last_phase) < CLUSTER_RADIUS => cur.push(idx),
            _ => clusters.push(vec![idx]),
        }
        last_phase = phase;
    }
    // join across the branch cut at ±π
    if clusters.len() > 1 {
        let first_phase = order[0].0;
        if circle_distance(first_phase, last_phase) < CLUSTER_RADIUS {
            let head = clusters.remove(0);
            clusters.last_mut().expect("non-empty").extend(head);
        }
    }
    clusters
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
fn orthonormalize(vectors: &mut [Vec<Complex64>], members: &[usize]) -> Result<()> {
    for (pos, &i) in members.iter().enumerate() {
        for _ in 0..2 {
            for &j in &members[..pos] {
                let proj = linalg::inner(&vectors[j], &vectors[i]);
                let (vi, vj) = pair_mut(vectors, i, j);
                vi.iter_mut().zip(vj.iter()).for_each(|(a, b)| *a -= proj * b);
            }
        }
        let n = linalg::norm(&vectors[i]);
        if n < 1e-6 {
            return Err(Error::Eigensolver(format!(
                "eigenvectors in a cluster of size {} are linearly dependent",
                members.len()
            )));
        }
        vectors[i].iter_mut().for_each(|a| *a /= n);
    }
    Ok(())
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &T) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub k: usize,
    pub z: Band,
    pub lambda: f64,
    /// Distance to the nearest unused oracle eigenvalue.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumComparison {
    /// Largest circle distance over all closed-form points.
    pub max_mismatch: f64,
    pub unmatched: Vec<Mismatch>,
}

impl SpectrumComparison {
    pub fn passed(&self) -> bool {
        self.unmatched.is_empty()
    }
}

/// Greedy nearest-neighbour matching of closed-form phases to oracle eigenvalues.
pub fn compare_spectra(closed_form: &[SpectralPoint], oracle: &OracleResult) -> SpectrumComparison {
    let phases = oracle.phases();
    let mut used = vec![false; phases.len()];
    let mut max_mismatch = 0.0f64;
    let mut unmatched = Vec::new();
    for pt in closed_form {
        let best = phases
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, &ph)| (i, circle_distance(ph, pt.lambda)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, d)) if d <= MATCH_RADIUS => {
                used[i] = true;
                max_mismatch = max_mismatch.max(d);
            }
            other => {
                let distance = other.map_or(f64::INFINITY, |(_, d)| d);
                max_mismatch = max_mismatch.max(distance);
                unmatched.push(Mismatch {
                    k: pt.k,
                    z: pt.z,
                    lambda: pt.lambda,
                    distance,
                });
            }
        }
    }
    if closed_form.len() != phases.len() && unmatched.is_empty() {
        max_mismatch = f64::INFINITY;
    }
    SpectrumComparison {
        max_mismatch,
        unmatched,
    }
}
