//! The `qwalk` command-line frontend.
//!
//! Every subcommand produces either a JSON document
//! `{"meta": {...}, "data": [...]}` or a CSV table with a fixed header.
//! Output depends only on the arguments (and `--seed`), never on thread
//! scheduling: sweep points run on the rayon pool and are collected in order.

mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bloch::{trajectory, TrajectoryPoint, TRAJECTORY_CSV_HEADER};
use crate::eigensystem::{full_eigenbasis, GaugePolicy, GaugeWeight};
use crate::oracle::{compare_spectra, dense_eigendecompose, Mismatch};
use crate::protected::{protected_memory_trace, AlphaNoise, RNG_ALGORITHM};
use crate::spectrum::{degeneracy_report, full_spectrum, Band, DegeneracyReport, SpectralPoint};
use crate::{CoinParams, Complex64, Error};

pub use render::SCHEMA_VERSION;
use render::{csv_float, csv_opt, Envelope};

/// Tolerance used by `verify` for phases, Gram matrices and residuals.
pub const VERIFY_TOLERANCE: f64 = 1e-10;

const VERIFY_SIZES: [usize; 6] = [2, 3, 4, 8, 16, 32];

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Spectra and eigenstates of the coined quantum walk on a cycle")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All 2N eigenphases, optionally over a sweep of R or beta
    Spectrum(SpectrumArgs),
    /// Bloch vectors of the reduced coin eigenstates
    Bloch(BlochArgs),
    /// Degeneracy structure: conjugate pairs and unique wavenumbers
    Degeneracy(DegeneracyArgs),
    /// Overlaps with protected eigenstates under a random bias sequence
    Protected(ProtectedArgs),
    /// Compare the closed form against dense diagonalization
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CoinArgs {
    /// Number of lattice sites
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Bias R in [0, 1]
    #[arg(long = "r", allow_hyphen_values = true, conflicts_with = "hadamard")]
    pub r: Option<f64>,
    /// Coin angle alpha in radians
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha_n", "hadamard"])]
    pub alpha: Option<f64>,
    /// Lattice index n, meaning alpha = n*pi/N exactly
    #[arg(long = "alpha-n", allow_hyphen_values = true, conflicts_with = "hadamard")]
    pub alpha_n: Option<i64>,
    /// Global phase beta in radians (default 0)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "hadamard")]
    pub beta: Option<f64>,
    /// Hadamard coin: R = 1/2, alpha = 3pi/2, beta = pi/2
    #[arg(long)]
    pub hadamard: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma-separated list of R values
    #[arg(long = "sweep-r", value_delimiter = ',', allow_hyphen_values = true)]
    pub sweep_r: Option<Vec<f64>>,
    /// Comma-separated list of beta values
    #[arg(long = "sweep-beta", value_delimiter = ',', allow_hyphen_values = true)]
    pub sweep_beta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BlochArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Weight s1 of the smaller wavenumber in degenerate pairs (default: equal weights)
    #[arg(long = "gauge-s")]
    pub gauge_s: Option<f64>,
    /// Relative phase omega1 of degenerate pair members
    #[arg(long = "gauge-omega", allow_hyphen_values = true, default_value_t = 0.0)]
    pub gauge_omega: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DegeneracyArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ProtectedArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    /// Unique wavenumber to protect (default: the smallest one)
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0 / 3f64.sqrt())]
    pub x0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0 / 3f64.sqrt())]
    pub x1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0 / 3f64.sqrt())]
    pub x2: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Perturb alpha each step by a uniform draw from [-a, a)
    #[arg(long = "alpha-jitter", default_value_t = 0.0)]
    pub alpha_jitter: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[arg(long, default_value_t = 12)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "inject-phase-error", hide = true)]
    pub inject_phase_error: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Eigensolver(_) | Error::Consistency(_) => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Rendered output of a subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    /// `false` when `verify` found a mismatch.
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Parameter echo placed in `meta.params`.
#[derive(Debug, Clone, Serialize)]
struct ParamsMeta {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "R")]
    r: Option<f64>,
    alpha: Option<f64>,
    alpha_n: Option<i64>,
    beta: Option<f64>,
    hadamard: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep_r: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep_beta: Option<Vec<f64>>,
}

impl ParamsMeta {
    fn new(coin: &CoinArgs, n: usize) -> Self {
        Self {
            n,
            r: coin.r,
            alpha: coin.alpha,
            alpha_n: coin.alpha_n,
            beta: coin.beta,
            hadamard: coin.hadamard,
            sweep_r: None,
            sweep_beta: None,
        }
    }

    fn with_sweep(mut self, sweep: &SweepArgs) -> Self {
        self.sweep_r = sweep.sweep_r.clone();
        self.sweep_beta = sweep.sweep_beta.clone();
        self
    }
}

fn require_n(coin: &CoinArgs) -> Result<usize, CliError> {
    coin.n.ok_or_else(|| invalid("--n is required"))
}

/// Builds coin parameters; `r` overrides `--r` (used by sweeps and defaults).
fn resolve(coin: &CoinArgs, r: Option<f64>) -> Result<CoinParams, CliError> {
    let n = require_n(coin)?;
    if coin.hadamard {
        let h = CoinParams::hadamard(n)?;
        return Ok(match r {
            Some(r) => h.with_r(r)?,
            None => h,
        });
    }
    let r = r.or(coin.r).ok_or_else(|| invalid("--r is required (or use --sweep-r)"))?;
    let beta = coin.beta.unwrap_or(0.0);
    match (coin.alpha, coin.alpha_n) {
        (Some(alpha), None) => Ok(CoinParams::new(n, r, alpha, beta)?),
        (None, Some(idx)) => Ok(CoinParams::with_alpha_index(n, r, idx, beta)?),
        _ => Err(invalid("exactly one of --alpha, --alpha-n or --hadamard is required")),
    }
}

/// Sweep grid in order: R outer, beta inner.
fn sweep_grid(coin: &CoinArgs, sweep: &SweepArgs) -> Result<Vec<CoinParams>, CliError> {
    let rs: Vec<Option<f64>> = match &sweep.sweep_r {
        Some(list) if list.is_empty() => return Err(invalid("--sweep-r list is empty")),
        Some(list) => list.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let mut grid = Vec::new();
    for r in rs {
        let base = resolve(coin, r)?;
        match &sweep.sweep_beta {
            Some(list) if list.is_empty() => return Err(invalid("--sweep-beta list is empty")),
            Some(list) => {
                for &beta in list {
                    grid.push(base.with_beta(beta)?);
                }
            }
            None => grid.push(base),
        }
    }
    Ok(grid)
}

fn is_sweep(sweep: &SweepArgs) -> bool {
    sweep.sweep_r.is_some() || sweep.sweep_beta.is_some()
}

/// Parses arguments, runs the subcommand and writes its output.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&config).and_then(|outcome| write_output(&config, &outcome).map(|_| outcome)) {
        Ok(outcome) => {
            if !outcome.passed {
                eprintln!("qwalk: verification failed");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("qwalk: {e}");
            e.exit_code()
        }
    }
}

fn output_args(config: &RunConfig) -> &OutputArgs {
    match &config.command {
        Command::Spectrum(a) => &a.output,
        Command::Bloch(a) => &a.output,
        Command::Degeneracy(a) => &a.output,
        Command::Protected(a) => &a.output,
        Command::Verify(a) => &a.output,
    }
}

fn write_output(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    match &output_args(config).out {
        Some(path) => std::fs::write(path, &outcome.body).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Runs a parsed configuration and renders its output without writing it.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let body_ok = |body| Outcome { body, passed: true };
    match &config.command {
        Command::Spectrum(a) => cmd_spectrum(a).map(body_ok),
        Command::Bloch(a) => cmd_bloch(a).map(body_ok),
        Command::Degeneracy(a) => cmd_degeneracy(a).map(body_ok),
        Command::Protected(a) => cmd_protected(a).map(body_ok),
        Command::Verify(a) => cmd_verify(a),
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    #[serde(rename = "R")]
    r: f64,
    alpha: f64,
    beta: f64,
    #[serde(flatten)]
    point: SpectralPoint,
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<String, CliError> {
    let grid = sweep_grid(&args.coin, &args.sweep)?;
    let rows: Vec<SpectrumRow> = grid
        .par_iter()
        .map(|p| {
            full_spectrum(p)
                .into_iter()
                .map(|point| SpectrumRow {
                    r: p.r(),
                    alpha: p.alpha(),
                    beta: p.beta(),
                    point,
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    match args.output.format {
        Format::Json => {
            let meta = json!({
                "coin": ParamsMeta::new(&args.coin, grid[0].sites()).with_sweep(&args.sweep),
            });
            Envelope::new("spectrum", &meta).render(&rows)
        }
        Format::Csv => {
            let sweep = is_sweep(&args.sweep);
            let mut out = String::from(if sweep {
                "R,alpha,beta,k,z,lambda,partner_k\n"
            } else {
                "k,z,lambda,partner_k\n"
            });
            for row in &rows {
                if sweep {
                    out += &format!("{},{},{},", csv_float(row.r), csv_float(row.alpha), csv_float(row.beta));
                }
                let p = &row.point;
                out += &format!("{},{},{},{}\n", p.k, p.z, csv_float(p.lambda), csv_opt(p.partner_k));
            }
            Ok(out)
        }
    }
}

fn gauge_policy(args: &BlochArgs) -> GaugePolicy {
    match args.gauge_s {
        Some(s) => GaugePolicy::new(GaugeWeight::Absolute(s), args.gauge_omega),
        None => GaugePolicy::new(GaugeWeight::Equal, args.gauge_omega),
    }
}

pub fn cmd_bloch(args: &BlochArgs) -> Result<String, CliError> {
    let grid = sweep_grid(&args.coin, &args.sweep)?;
    let policy = gauge_policy(args);
    let ks: Vec<usize> = (0..grid[0].sites()).collect();
    let rows: Vec<TrajectoryPoint> = grid
        .par_iter()
        .map(|p| trajectory(std::slice::from_ref(p), &ks, &Band::BOTH, &policy))
        .collect::<crate::Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    match args.output.format {
        Format::Json => {
            let meta = json!({
                "coin": ParamsMeta::new(&args.coin, grid[0].sites()).with_sweep(&args.sweep),
                "gauge_s": args.gauge_s,
                "gauge_omega": args.gauge_omega,
            });
            Envelope::new("bloch", &meta).render(&rows)
        }
        Format::Csv => {
            let mut out = format!("{TRAJECTORY_CSV_HEADER}\n");
            for row in &rows {
                let b = &row.bloch;
                let cells = [
                    row.params.r(),
                    row.params.alpha(),
                    row.params.beta(),
                ]
                .map(csv_float)
                .join(",");
                let geo = [b.rx, b.ry, b.rz, b.r(), b.theta(), b.phi()].map(csv_float).join(",");
                out += &format!("{cells},{},{},{geo}\n", row.k, row.z);
            }
            Ok(out)
        }
    }
}

/// The spectrum-independent part of the coin (R is irrelevant to degeneracy).
fn resolve_angles(coin: &CoinArgs) -> Result<CoinParams, CliError> {
    let r = if coin.hadamard { None } else { Some(coin.r.unwrap_or(0.5)) };
    resolve(coin, r)
}

pub fn cmd_degeneracy(args: &DegeneracyArgs) -> Result<String, CliError> {
    let params = resolve_angles(&args.coin)?;
    let report = degeneracy_report(&params);
    match args.output.format {
        Format::Json => {
            let meta = json!({ "coin": ParamsMeta::new(&args.coin, params.sites()) });
            Envelope::new("degeneracy", &meta).render(std::slice::from_ref(&report))
        }
        Format::Csv => Ok(degeneracy_csv(&report)),
    }
}

fn degeneracy_csv(report: &DegeneracyReport) -> String {
    let mut out = String::from("is_degenerate,n,kind,k,k_prime\n");
    let n = csv_opt(report.n);
    if !report.is_degenerate {
        out += "false,,none,,\n";
    }
    for &(k, kp) in &report.pairs {
        out += &format!("true,{n},pair,{k},{kp}\n");
    }
    for &k in &report.unique_ks {
        out += &format!("true,{n},unique,{k},{k}\n");
    }
    out
}

pub fn cmd_protected(args: &ProtectedArgs) -> Result<String, CliError> {
    if args.steps == 0 {
        return Err(invalid("--steps must be at least 1"));
    }
    if !(args.alpha_jitter >= 0.0 && args.alpha_jitter.is_finite()) {
        return Err(invalid("--alpha-jitter must be a finite non-negative number"));
    }
    let params = resolve_angles(&args.coin)?;
    let report = degeneracy_report(&params);
    if report.unique_ks.is_empty() {
        let why = if report.is_degenerate {
            "this lattice angle has no self-conjugate wavenumber (N odd with n odd)"
        } else {
            "alpha is not of the form n*pi/N, so no eigenvalue is unique"
        };
        return Err(invalid(format!("no protected eigenstates: {why}")));
    }
    let k = args.k.unwrap_or(report.unique_ks[0]);
    if !report.is_unique(k) {
        return Err(invalid(format!(
            "k = {k} does not carry a unique eigenvalue; unique wavenumbers are {:?}",
            report.unique_ks
        )));
    }
    let noise = if args.alpha_jitter > 0.0 {
        AlphaNoise::Uniform(args.alpha_jitter)
    } else {
        AlphaNoise::None
    };
    let weights = [args.x0, args.x1, args.x2].map(|x| Complex64::new(x, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let trace = protected_memory_trace(&params, k, weights, args.steps, noise, &mut rng)?;

    match args.output.format {
        Format::Json => {
            let meta = json!({
                "coin": ParamsMeta::new(&args.coin, params.sites()),
                "k": k,
                "x": [args.x0, args.x1, args.x2],
                "steps": args.steps,
                "alpha_jitter": args.alpha_jitter,
            });
            Envelope::new("protected", &meta)
                .seeded(args.seed, RNG_ALGORITHM)
                .render(&trace.rows)
        }
        Format::Csv => {
            let mut out = String::from("t,R,alpha,overlap1,overlap2\n");
            for row in &trace.rows {
                let r = row.r.map(csv_float).unwrap_or_default();
                out += &format!(
                    "{},{r},{},{},{}\n",
                    row.t,
                    csv_float(row.alpha),
                    csv_float(row.overlap1),
                    csv_float(row.overlap2)
                );
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct VerifyRow {
    trial: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "R")]
    r: f64,
    alpha: f64,
    beta: f64,
    degenerate: bool,
    max_mismatch: f64,
    oracle_residual: f64,
    gram_defect: f64,
    eigen_residual: f64,
    clusters_ok: bool,
    passed: bool,
    unmatched: Vec<Mismatch>,
}

fn random_trials(args: &VerifyArgs) -> Result<Vec<CoinParams>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let tau = std::f64::consts::TAU;
    (0..args.trials)
        .map(|i| {
            let n = args.coin.n.unwrap_or(VERIFY_SIZES[i % VERIFY_SIZES.len()]);
            let r: f64 = rng.random_range(0.05..0.95);
            let beta: f64 = rng.random_range(0.0..tau);
            // every third trial sits on the lattice to exercise degenerate pairs
            let params = if i % 3 == 2 {
                let idx = rng.random_range(0..2 * n as i64);
                CoinParams::with_alpha_index(n, r, idx, beta)
            } else {
                CoinParams::new(n, r, rng.random_range(0.0..tau), beta)
            };
            params.map_err(CliError::from)
        })
        .collect()
}

fn expected_clusters(params: &CoinParams, report: &DegeneracyReport) -> Vec<usize> {
    let mut sizes = Vec::new();
    if report.is_degenerate && params.r() > 0.0 && params.r() < 1.0 {
        sizes.extend(std::iter::repeat_n(2, 2 * report.pairs.len()));
        sizes.extend(std::iter::repeat_n(1, 2 * report.unique_ks.len()));
    } else if !report.is_degenerate && params.r() > 0.0 && params.r() < 1.0 {
        sizes.extend(std::iter::repeat_n(1, 2 * params.sites()));
    } else {
        return sizes;
    }
    sizes.sort_unstable();
    sizes
}

fn verify_one(trial: usize, params: &CoinParams, inject: Option<f64>) -> Result<VerifyRow, CliError> {
    let mut points = full_spectrum(params);
    if let Some(eps) = inject {
        if let Some(pt) = points.iter_mut().find(|p| p.k == 0 && p.z == Band::Lower) {
            pt.lambda = crate::phase::wrap(pt.lambda + eps);
        }
    }
    let oracle = dense_eigendecompose(params)?;
    let cmp = compare_spectra(&points, &oracle);
    let basis = full_eigenbasis(params, &GaugePolicy::default())?;
    let report = degeneracy_report(params);

    let expected = expected_clusters(params, &report);
    let mut got = oracle.cluster_sizes();
    got.sort_unstable();
    let clusters_ok = expected.is_empty() || expected == got;

    let gram_defect = basis.gram_defect();
    let eigen_residual = basis.max_residual();
    let passed = cmp.passed()
        && cmp.max_mismatch <= VERIFY_TOLERANCE
        && oracle.residual <= VERIFY_TOLERANCE
        && gram_defect <= VERIFY_TOLERANCE
        && eigen_residual <= VERIFY_TOLERANCE
        && clusters_ok;
    Ok(VerifyRow {
        trial,
        n: params.sites(),
        r: params.r(),
        alpha: params.alpha(),
        beta: params.beta(),
        degenerate: report.is_degenerate,
        max_mismatch: cmp.max_mismatch,
        oracle_residual: oracle.residual,
        gram_defect,
        eigen_residual,
        clusters_ok,
        passed,
        unmatched: cmp.unmatched,
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let explicit = args.coin.alpha.is_some() || args.coin.alpha_n.is_some() || args.coin.hadamard;
    let trials = if explicit {
        vec![resolve(&args.coin, None)?]
    } else {
        if args.trials == 0 {
            return Err(invalid("--trials must be at least 1"));
        }
        random_trials(args)?
    };
    let rows = trials
        .par_iter()
        .enumerate()
        .map(|(i, p)| verify_one(i, p, args.inject_phase_error))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = rows.iter().all(|r| r.passed);

    let body = match args.output.format {
        Format::Json => {
            let meta = json!({
                "coin": args.coin.n.map(|n| ParamsMeta::new(&args.coin, n)),
                "trials": rows.len(),
                "tolerance": VERIFY_TOLERANCE,
                "passed": passed,
            });
            Envelope::new("verify", &meta)
                .seeded(args.seed, RNG_ALGORITHM)
                .render(&rows)?
        }
        Format::Csv => {
            let mut out = String::from("trial,N,R,alpha,beta,degenerate,max_mismatch,clusters_ok,passed,unmatched\n");
            for r in &rows {
                let unmatched = r
                    .unmatched
                    .iter()
                    .map(|m| format!("k={} z={}", m.k, m.z))
                    .collect::<Vec<_>>()
                    .join(";");
                out += &format!(
                    "{},{},{},{},{},{},{},{},{},{unmatched}\n",
                    r.trial,
                    r.n,
                    csv_float(r.r),
                    csv_float(r.alpha),
                    csv_float(r.beta),
                    r.degenerate,
                    csv_float(r.max_mismatch),
                    r.clusters_ok,
                    r.passed
                );
            }
            out
        }
    };
    Ok(Outcome { body, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("qwalk").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn alpha_sources_are_exclusive() {
        let err = RunConfig::try_parse_from(["qwalk", "spectrum", "--n", "4", "--r", "0.5", "--alpha", "1", "--alpha-n", "2"]);
        assert!(err.is_err());
        let cfg = parse(&["spectrum", "--n", "4", "--r", "0.5"]);
        assert!(matches!(run(&cfg), Err(CliError::Invalid(_))));
    }

    #[test]
    fn negative_angles_parse() {
        let cfg = parse(&["spectrum", "--n", "4", "--r", "0.5", "--alpha", "-1.5", "--beta", "-0.25"]);
        assert!(run(&cfg).is_ok());
    }

    #[test]
    fn degeneracy_csv_lists_pairs_and_unique() {
        let cfg = parse(&["degeneracy", "--n", "4", "--hadamard", "--format", "csv"]);
        let out = run(&cfg).unwrap().body;
        assert_eq!(out, "is_degenerate,n,kind,k,k_prime\ntrue,6,pair,0,2\ntrue,6,unique,1,1\ntrue,6,unique,3,3\n");
    }

    #[test]
    fn csv_floats_round_trip() {
        let x = 0.1 + 0.2;
        assert_eq!(csv_float(x).parse::<f64>().unwrap(), x);
        assert_eq!(FRAC_1_SQRT_2, csv_float(FRAC_1_SQRT_2).parse::<f64>().unwrap());
    }
}
