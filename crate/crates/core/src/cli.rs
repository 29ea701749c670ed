//! Commands behind the `chiral` binary. Each command writes its data file
//! plus a JSON manifest next to it (`<stem>.manifest.json`).
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 parameter domain
//! error, 3 verification failure.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::finite::{density_curve, DensityCurve, EnsembleParams, Scaling};
use crate::limit::{limit_cdf, limit_curve, uniform_grid, LimitLaw};
use crate::sampler::{
    b_n_value, empirical_cdf, extreme_stats, fmt_real, mcmc_sample, write_archive, ExtremeStats,
    SamplerConfig, DEFAULT_BURN_IN, DEFAULT_PROPOSAL_SCALE, DEFAULT_THIN,
};
use crate::verify::{self, Level, VerificationReport};

pub const MANIFEST_SCHEMA: &str = "chiral-ensemble/run-manifest/v1";
pub const SUMMARY_SCHEMA: &str = "chiral-ensemble/sample-summary/v1";
/// Environment variable read for the worker thread count.
pub const THREADS_ENV: &str = "CHIRAL_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// `lo:hi:count`, an evenly spaced grid including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        uniform_grid(self.lo, self.hi, self.count)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts[..] else {
            return Err(format!("grid `{s}` is not of the form lo:hi:count"));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| format!("grid lower end: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("grid upper end: {e}"))?;
        let count: usize = count.trim().parse().map_err(|e| format!("grid count: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("grid needs finite lo < hi, got {lo}:{hi}"));
        }
        if count < 2 {
            return Err("grid needs at least 2 points".to_string());
        }
        Ok(GridSpec { lo, hi, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    Raw,
    Sqrtn,
}

impl From<ScalingArg> for Scaling {
    fn from(s: ScalingArg) -> Self {
        match s {
            ScalingArg::Raw => Scaling::Raw,
            ScalingArg::Sqrtn => Scaling::SqrtN,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "chiral", version, about = "Eigenvalue densities, limit laws and sampling for the chiral Gaussian ensemble")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-n one-point density on a grid (CSV `t,density`).
    Density(DensityArgs),
    /// Limit density f_c on a grid (CSV `t,f_c`).
    Limit(LimitArgs),
    /// Metropolis draws of the joint eigenvalue density (archive + summary).
    Sample(SampleArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

/// Determinant exponent given either directly or as `c = μ/n`.
#[derive(Debug, Clone, Args)]
pub struct ExponentArgs {
    #[arg(long, conflicts_with = "c", allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Sets μ = c·n.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
}

impl ExponentArgs {
    fn mu(&self, n: usize) -> f64 {
        match (self.mu, self.c) {
            (Some(mu), _) => mu,
            (None, Some(c)) => c * n as f64,
            (None, None) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub exponent: ExponentArgs,
    /// Defaults to 1001 points covering the numerical support.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    #[arg(long, value_enum, default_value = "raw")]
    pub scaling: ScalingArg,
    #[arg(long, default_value = "density.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, default_value = "-2.2:2.2:1001", allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[arg(long, default_value = "limit.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub exponent: ExponentArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Total sweeps per chain, burn-in included.
    #[arg(long, default_value_t = DEFAULT_BURN_IN + 100 * DEFAULT_THIN)]
    pub sweeps: usize,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,
    #[arg(long, default_value_t = DEFAULT_THIN)]
    pub thin: usize,
    #[arg(long, default_value_t = DEFAULT_PROPOSAL_SCALE)]
    pub proposal_scale: f64,
    #[arg(long, default_value_t = 4)]
    pub chains: usize,
    #[arg(long, default_value = "draws.csv")]
    pub out: PathBuf,
}

impl SampleArgs {
    pub fn config(&self) -> SamplerConfig {
        SamplerConfig {
            sweeps: self.sweeps,
            burn_in: self.burn_in,
            thin: self.thin,
            proposal_scale: self.proposal_scale,
            seed: self.seed,
            chains: self.chains,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "fast")]
    pub level: Level,
    #[arg(long, default_value = "verification_report.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub command: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    fn new(command: &str, params: serde_json::Value, seed: Option<u64>) -> Self {
        Self {
            schema: MANIFEST_SCHEMA.to_string(),
            command: command.to_string(),
            params,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }

    fn finish(mut self, start: Instant, primary: &Path) -> Result<Self> {
        let path = manifest_path(primary);
        self.outputs.push(path.clone());
        self.wall_clock_seconds = start.elapsed().as_secs_f64();
        write_json(&path, &self)?;
        Ok(self)
    }
}

/// `<dir>/<stem>.<suffix>.json` for a primary output `<dir>/<stem>.<ext>`.
pub fn sidecar_path(primary: &Path, suffix: &str) -> PathBuf {
    let stem = primary.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    primary.with_file_name(format!("{stem}.{suffix}.json"))
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    sidecar_path(primary, "manifest")
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(File::create(path)?)
}

fn write_curve(path: &Path, header: &str, curve: &DensityCurve) -> Result<()> {
    let mut w = BufWriter::new(create(path)?);
    writeln!(w, "{header}")?;
    for (t, v) in curve.abscissae.iter().zip(&curve.values) {
        writeln!(w, "{},{}", fmt_real(*t), fmt_real(*v))?;
    }
    w.flush()?;
    Ok(())
}

fn default_density_grid(params: EnsembleParams, scaling: Scaling) -> GridSpec {
    let mut hi = params.support_bound();
    if scaling == Scaling::SqrtN {
        hi /= (params.n() as f64).sqrt();
    }
    GridSpec { lo: -hi, hi, count: 1001 }
}

pub fn cmd_density(n: usize, mu: f64, grid: Option<GridSpec>, scaling: Scaling, out: &Path) -> Result<RunManifest> {
    let start = Instant::now();
    let params = EnsembleParams::new(n, mu)?;
    let grid = grid.unwrap_or_else(|| default_density_grid(params, scaling));
    let curve = density_curve(params, &grid.points(), scaling);
    write_curve(out, "t,density", &curve)?;
    let mut manifest = RunManifest::new(
        "density",
        json!({ "n": n, "mu": mu, "grid": grid, "scaling": scaling, "trapezoid_mass": curve.trapezoid_mass() }),
        None,
    );
    manifest.outputs.push(out.to_path_buf());
    manifest.finish(start, out)
}

pub fn cmd_limit(c: f64, grid: GridSpec, out: &Path) -> Result<RunManifest> {
    let start = Instant::now();
    let law = LimitLaw::new(c)?;
    let curve = limit_curve(law, &grid.points());
    write_curve(out, "t,f_c", &curve)?;
    let mut manifest = RunManifest::new(
        "limit",
        json!({ "c": c, "a": law.a(), "b": law.b(), "grid": grid }),
        None,
    );
    manifest.outputs.push(out.to_path_buf());
    manifest.finish(start, out)
}

/// Contents of `<stem>.summary.json` written by [`cmd_sample`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub schema: String,
    pub n: usize,
    pub mu: f64,
    pub draws: usize,
    /// Mean over chains of the final coordinate-move acceptance rate.
    pub acceptance: f64,
    /// Statistics of `λ_max/sqrt(n)` and `λ_min/sqrt(n)`.
    pub extremes: ExtremeStats,
    /// Limit-law right edge `b` for `c = μ/n`.
    pub b: f64,
    pub b_n: f64,
    /// KS distance between the pooled scaled eigenvalues and `limit_cdf`.
    pub ks_vs_limit: f64,
}

pub fn cmd_sample(n: usize, mu: f64, config: &SamplerConfig, out: &Path) -> Result<(RunManifest, SampleSummary)> {
    let start = Instant::now();
    let params = EnsembleParams::new(n, mu)?;
    config.validate()?;
    let draws = mcmc_sample(params, config)?;
    {
        let mut w = BufWriter::new(create(out)?);
        write_archive(&mut w, params, &draws)?;
        w.flush()?;
    }
    let scale = 1.0 / (n as f64).sqrt();
    let law = LimitLaw::new((mu / n as f64).max(0.0))?;
    let mut finals = vec![0.0; config.chains];
    for d in &draws {
        finals[d.seed_path.chain] = d.acceptance_rate;
    }
    let summary = SampleSummary {
        schema: SUMMARY_SCHEMA.to_string(),
        n,
        mu,
        draws: draws.len(),
        acceptance: finals.iter().sum::<f64>() / finals.len() as f64,
        extremes: extreme_stats(&draws, scale),
        b: law.b(),
        b_n: b_n_value(params),
        ks_vs_limit: empirical_cdf(&draws, scale).ks_distance(|t| limit_cdf(law, t)),
    };
    let summary_path = sidecar_path(out, "summary");
    write_json(&summary_path, &summary)?;
    let mut manifest = RunManifest::new("sample", json!({ "n": n, "mu": mu, "config": config }), Some(config.seed));
    manifest.outputs.push(out.to_path_buf());
    manifest.outputs.push(summary_path);
    Ok((manifest.finish(start, out)?, summary))
}

pub fn cmd_verify(level: Level, out: &Path) -> Result<VerificationReport> {
    let report = verify::run(level);
    write_json(out, &report)?;
    Ok(report)
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::Config(_) | Error::UnknownFunction(_) => EXIT_DOMAIN,
        _ => EXIT_FAILURE,
    }
}

/// Sizes the global rayon pool from `CHIRAL_THREADS` when it is set.
pub fn configure_threads() {
    if let Some(k) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // A pool may already exist when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    configure_threads();
    let outcome = match cli.command {
        Command::Density(a) => {
            cmd_density(a.n, a.exponent.mu(a.n), a.grid, a.scaling.into(), &a.out).map(|m| report_files(&m))
        }
        Command::Limit(a) => cmd_limit(a.c, a.grid, &a.out).map(|m| report_files(&m)),
        Command::Sample(a) => cmd_sample(a.n, a.exponent.mu(a.n), &a.config(), &a.out).map(|(m, s)| {
            report_files(&m);
            println!(
                "{} draws, acceptance {:.3}, mean lambda_max/sqrt(n) {:.4} (b = {:.4}), KS vs limit {:.4}",
                s.draws, s.acceptance, s.extremes.largest.mean, s.b, s.ks_vs_limit
            );
        }),
        Command::Verify(a) => match cmd_verify(a.level, &a.out) {
            Ok(report) => {
                print!("{}", report.table());
                for c in report.failures() {
                    println!("FAILED {} ({}): {}", c.id, c.name, c.detail);
                }
                println!("report written to {}", a.out.display());
                return if report.passed { EXIT_OK } else { EXIT_VERIFY };
            }
            Err(e) => Err(e),
        },
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn report_files(m: &RunManifest) {
    for p in &m.outputs {
        println!("wrote {}", p.display());
    }
}
