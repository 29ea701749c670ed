//! Metropolis sampling of the joint eigenvalue density
//! `q(x) ∝ exp(-Σ x_k² + 2μ Σ ln|x_k| + 2 Σ_{i<j} ln|x_i - x_j|)`
//! and the statistics computed from its draws.
//!
//! Each sweep proposes one Gaussian move per coordinate. Acceptance is
//! delayed: the single-particle terms are tested first and the `O(n)` pair
//! interaction is only evaluated for moves that survive. Because the target
//! factorizes, the product of the two Metropolis ratios keeps detailed
//! balance.
//!
//! Local moves relax the overall scale of the gas slowly, so every sweep
//! ends with one global dilation `x → e^η x`. Its log ratio is
//! `-(e^{2η} - 1) Σx² + (n² + 2μn) η`, Jacobian included, which costs `O(n)`.

use std::fmt;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::EnsembleParams;
use crate::limit::{limit_quantile, LimitLaw};

pub const DEFAULT_BURN_IN: usize = 2000;
pub const DEFAULT_THIN: usize = 10;
pub const DEFAULT_PROPOSAL_SCALE: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Total sweeps per chain, burn-in included.
    pub sweeps: usize,
    pub burn_in: usize,
    /// Record a draw every `thin` sweeps after burn-in.
    pub thin: usize,
    /// Step size in units of `max(1, sqrt(n/2 + μ)) / sqrt(n)`.
    pub proposal_scale: f64,
    pub seed: u64,
    pub chains: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            sweeps: DEFAULT_BURN_IN + 100 * DEFAULT_THIN,
            burn_in: DEFAULT_BURN_IN,
            thin: DEFAULT_THIN,
            proposal_scale: DEFAULT_PROPOSAL_SCALE,
            seed: 0,
            chains: 1,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.sweeps == 0 {
            return bad("sweeps must be positive");
        }
        if self.burn_in == 0 {
            return bad("burn_in must be positive");
        }
        if self.burn_in >= self.sweeps {
            return bad("burn_in must be smaller than the total sweep budget");
        }
        if self.thin == 0 {
            return bad("thin must be positive");
        }
        if !(self.proposal_scale > 0.0) || !self.proposal_scale.is_finite() {
            return bad("proposal_scale must be finite and positive");
        }
        if self.chains == 0 {
            return bad("chains must be positive");
        }
        Ok(())
    }

    /// Draws recorded per chain.
    pub fn draws_per_chain(&self) -> usize {
        (self.sweeps - self.burn_in) / self.thin
    }
}

/// Identifies the RNG stream a draw came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedPath {
    pub seed: u64,
    pub chain: usize,
}

impl fmt::Display for SeedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.seed, self.chain)
    }
}

impl std::str::FromStr for SeedPath {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (seed, chain) = s.split_once('/').ok_or_else(|| format!("bad seed path `{s}`"))?;
        Ok(SeedPath {
            seed: seed.parse().map_err(|e| format!("bad seed in `{s}`: {e}"))?,
            chain: chain.parse().map_err(|e| format!("bad chain in `{s}`: {e}"))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDraw {
    /// Sorted, strictly increasing, none equal to zero.
    pub eigenvalues: Vec<f64>,
    /// Fraction of accepted moves in the chain up to this draw.
    pub acceptance_rate: f64,
    /// Sweep index (1-based, burn-in included) at which the draw was taken.
    pub sweeps_used: usize,
    pub seed_path: SeedPath,
}

/// `ln q(x)` up to the normalizing constant; `-∞` off the set where all
/// coordinates are nonzero and distinct.
pub fn log_joint_density(params: EnsembleParams, x: &[f64]) -> f64 {
    let mu = params.mu();
    let mut acc = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            return f64::NEG_INFINITY;
        }
        acc -= xi * xi;
        if mu != 0.0 {
            acc += 2.0 * mu * xi.abs().ln();
        }
        for &xj in &x[i + 1..] {
            let d = (xi - xj).abs();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += 2.0 * d.ln();
        }
    }
    acc
}

/// Proposal standard deviation for the given ensemble.
pub fn step_size(params: EnsembleParams, proposal_scale: f64) -> f64 {
    let n = params.n() as f64;
    proposal_scale * (0.5 * n + params.mu()).sqrt().max(1.0) / n.sqrt()
}

/// About 1.7 standard deviations of `η` under the target, where the log
/// density in `η` has curvature `-4Σx² ≈ -2(n² + 2μn)`.
fn dilation_step(params: EnsembleParams) -> f64 {
    let n = params.n() as f64;
    1.7 / (n * n + 2.0 * params.mu() * n).sqrt()
}

/// `ln q(e^η x) - ln q(x) + n η` for a configuration with `Σx² = sum_sq`.
fn dilation_log_ratio(params: EnsembleParams, sum_sq: f64, eta: f64) -> f64 {
    let n = params.n() as f64;
    -(2.0 * eta).exp_m1() * sum_sq + (n * n + 2.0 * params.mu() * n) * eta
}

fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

/// Starting configuration: `sqrt(n)` times the limit-law quantiles at
/// `(i + 1/2)/n`, jittered by a quarter of the local spacing.
fn initial_state(params: EnsembleParams, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = params.n();
    let nf = n as f64;
    let law = LimitLaw::new((params.mu() / nf).max(0.0)).expect("c is non-negative");
    let root_n = nf.sqrt();
    let mut x: Vec<f64> = (0..n)
        .map(|i| root_n * limit_quantile(law, (i as f64 + 0.5) / nf))
        .collect();
    let spacing = 2.0 * law.b() * root_n / nf;
    for xi in x.iter_mut() {
        let jitter: f64 = rng.random_range(-0.25..0.25);
        *xi += jitter * spacing;
        if *xi == 0.0 {
            *xi = 0.1 * spacing;
        }
    }
    x.sort_by(f64::total_cmp);
    for i in 1..n {
        if x[i] <= x[i - 1] {
            x[i] = x[i - 1] + 1e-3 * spacing;
        }
    }
    x
}

struct Chain {
    params: EnsembleParams,
    state: Vec<f64>,
    rng: ChaCha8Rng,
    step: f64,
    dilation_step: f64,
    proposed: u64,
    accepted: u64,
}

impl Chain {
    fn new(params: EnsembleParams, proposal_scale: f64, seed: u64, chain: usize) -> Self {
        let mut rng = chain_rng(seed, chain);
        let state = initial_state(params, &mut rng);
        Self {
            params,
            state,
            rng,
            step: step_size(params, proposal_scale),
            dilation_step: dilation_step(params),
            proposed: 0,
            accepted: 0,
        }
    }

    fn sweep(&mut self) {
        let two_mu = 2.0 * self.params.mu();
        for i in 0..self.state.len() {
            self.proposed += 1;
            let old = self.state[i];
            let z: f64 = self.rng.sample(StandardNormal);
            let new = old + self.step * z;
            if new == 0.0 {
                continue;
            }
            // Stage 1: Gaussian confinement and |x|^{2μ} repulsion from 0.
            let mut delta = old * old - new * new;
            if two_mu != 0.0 {
                delta += two_mu * (new / old).abs().ln();
            }
            let u1: f64 = self.rng.random();
            if delta < 0.0 && u1.ln() > delta {
                continue;
            }
            // Stage 2: pair repulsion, Σ_j 2 ln|(new - x_j)/(old - x_j)|.
            let pair = pair_log_ratio(&self.state, i, old, new);
            if pair == f64::NEG_INFINITY {
                continue;
            }
            let u2: f64 = self.rng.random();
            if pair < 0.0 && u2.ln() > pair {
                continue;
            }
            self.state[i] = new;
            self.accepted += 1;
        }
        self.dilate();
    }

    fn dilate(&mut self) {
        let eta = self.dilation_step * self.rng.sample::<f64, _>(StandardNormal);
        let sum_sq: f64 = self.state.iter().map(|x| x * x).sum();
        let log_ratio = dilation_log_ratio(self.params, sum_sq, eta);
        let u: f64 = self.rng.random();
        if log_ratio >= 0.0 || u.ln() <= log_ratio {
            let factor = eta.exp();
            for x in self.state.iter_mut() {
                *x *= factor;
            }
        }
    }

    fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    fn snapshot(&self, sweep: usize, seed_path: SeedPath) -> SpectrumDraw {
        let mut eigenvalues = self.state.clone();
        eigenvalues.sort_by(f64::total_cmp);
        SpectrumDraw {
            eigenvalues,
            acceptance_rate: self.acceptance_rate(),
            sweeps_used: sweep,
            seed_path,
        }
    }
}

/// `2 Σ_{j≠i} ln|(new - x_j)/(old - x_j)|`, taking one logarithm per block
/// of ratios.
fn pair_log_ratio(state: &[f64], i: usize, old: f64, new: f64) -> f64 {
    const BLOCK: usize = 16;
    let mut total = 0.0;
    let mut prod = 1.0;
    let mut in_block = 0;
    for (j, &xj) in state.iter().enumerate() {
        if j == i {
            continue;
        }
        let num = new - xj;
        if num == 0.0 {
            return f64::NEG_INFINITY;
        }
        prod *= num / (old - xj);
        in_block += 1;
        if in_block == BLOCK {
            total += prod.abs().ln();
            prod = 1.0;
            in_block = 0;
        }
    }
    total += prod.abs().ln();
    2.0 * total
}

fn run_chain(params: EnsembleParams, config: &SamplerConfig, chain: usize) -> Vec<SpectrumDraw> {
    let mut ch = Chain::new(params, config.proposal_scale, config.seed, chain);
    let path = SeedPath { seed: config.seed, chain };
    let mut draws = Vec::with_capacity(config.draws_per_chain());
    for sweep in 1..=config.sweeps {
        ch.sweep();
        if sweep > config.burn_in && (sweep - config.burn_in).is_multiple_of(config.thin) {
            draws.push(ch.snapshot(sweep, path));
        }
    }
    draws
}

/// Runs `config.chains` independent chains (in parallel) and returns their
/// draws grouped by chain index. Identical inputs give identical output.
pub fn mcmc_sample(params: EnsembleParams, config: &SamplerConfig) -> Result<Vec<SpectrumDraw>> {
    config.validate()?;
    let per_chain: Vec<Vec<SpectrumDraw>> = (0..config.chains)
        .into_par_iter()
        .map(|c| run_chain(params, config, c))
        .collect();
    Ok(per_chain.into_iter().flatten().collect())
}

/// One draw per chain, taken after `burn_in` sweeps; used where the draws
/// must be independent.
pub fn independent_draws(params: EnsembleParams, config: &SamplerConfig) -> Result<Vec<SpectrumDraw>> {
    config.validate()?;
    Ok((0..config.chains)
        .into_par_iter()
        .map(|c| {
            let mut ch = Chain::new(params, config.proposal_scale, config.seed, c);
            for _ in 0..config.burn_in {
                ch.sweep();
            }
            ch.snapshot(config.burn_in, SeedPath { seed: config.seed, chain: c })
        })
        .collect())
}

/// Empirical CDF of pooled, scaled eigenvalues.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { sorted: values }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of points `≤ t`.
    pub fn eval(&self, t: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v <= t) as f64 / self.sorted.len() as f64
    }

    /// `sup_t |F_emp(t) - cdf(t)|` for a continuous `cdf`, evaluated on both
    /// sides of every jump.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                ((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
            })
            .fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.sorted.len() as f64
    }
}

pub fn empirical_cdf(draws: &[SpectrumDraw], scale: f64) -> EmpiricalCdf {
    EmpiricalCdf::from_values(
        draws
            .iter()
            .flat_map(|d| d.eigenvalues.iter().map(move |&x| x * scale))
            .collect(),
    )
}

/// `b_n = sqrt((n + μ + 2 + sqrt(n(n + 2μ + 4))) / n)`.
pub fn b_n_value(params: EnsembleParams) -> f64 {
    let n = params.n() as f64;
    let mu = params.mu();
    ((n + mu + 2.0 + (n * (n + 2.0 * mu + 4.0)).sqrt()) / n).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        let nf = count as f64;
        let mean = values.iter().sum::<f64>() / nf;
        let var = if count > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0)
        } else {
            0.0
        };
        Self {
            count,
            mean,
            sd: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn standard_error(&self) -> f64 {
        self.sd / (self.count as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremeStats {
    pub largest: Summary,
    pub smallest: Summary,
}

/// Summaries of `scale·λ_max` and `scale·λ_min` over the draws.
pub fn extreme_stats(draws: &[SpectrumDraw], scale: f64) -> ExtremeStats {
    let top: Vec<f64> = draws.iter().map(|d| scale * d.eigenvalues[d.eigenvalues.len() - 1]).collect();
    let bottom: Vec<f64> = draws.iter().map(|d| scale * d.eigenvalues[0]).collect();
    ExtremeStats {
        largest: Summary::of(&top),
        smallest: Summary::of(&bottom),
    }
}

/// Registered 1-Lipschitz test functions for the concentration check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LipschitzFn {
    /// `max(-2, min(2, t))`
    ClippedIdentity,
    Sine,
}

impl LipschitzFn {
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "clipped-identity" | "clipped_identity" => Ok(Self::ClippedIdentity),
            "sin" | "sine" => Ok(Self::Sine),
            other => Err(Error::UnknownFunction(other.to_string())),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Self::ClippedIdentity => "clipped-identity",
            Self::Sine => "sin",
        }
    }

    pub fn lipschitz_constant(self) -> f64 {
        1.0
    }

    pub fn apply(self, t: f64) -> f64 {
        match self {
            Self::ClippedIdentity => t.clamp(-2.0, 2.0),
            Self::Sine => t.sin(),
        }
    }
}

/// `2 exp(-n δ² ε² / (2α²))`: tail bound for `F(x/δ) = (1/n) Σ f(x_i/δ)`
/// with `f` α-Lipschitz, from the log-Sobolev constant 1/2 of the joint
/// density.
pub fn tail_bound(n: usize, delta: f64, eps: f64, alpha: f64) -> f64 {
    2.0 * (-(n as f64) * delta * delta * eps * eps / (2.0 * alpha * alpha)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationOutcome {
    pub draws: usize,
    pub eps: f64,
    /// Fraction of draws with `|F - mean(F)| > ε`.
    pub empirical_tail: f64,
    /// `2 exp(-n ε² / (2α²))`.
    pub bound: f64,
    /// The `δ = sqrt(n)` bound `2 exp(-n² ε² / (2α²))`, valid for the same
    /// statistic and much smaller.
    pub sharp_bound: f64,
    pub standard_error: f64,
    pub statistic_mean: f64,
}

impl ConcentrationOutcome {
    /// `empirical_tail ≤ bound + 3·SE`.
    pub fn holds(&self) -> bool {
        self.empirical_tail <= self.bound + 3.0 * self.standard_error
    }
}

/// Draws `config.chains` independent configurations and measures the tail
/// of `F = (1/n) Σ f(x_i / sqrt n)` around its sample mean.
pub fn concentration_check(
    params: EnsembleParams,
    config: &SamplerConfig,
    function_id: &str,
    eps: f64,
) -> Result<ConcentrationOutcome> {
    let f = LipschitzFn::from_id(function_id)?;
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let draws = independent_draws(params, config)?;
    let n = params.n();
    let inv_root_n = 1.0 / (n as f64).sqrt();
    let stats: Vec<f64> = draws
        .iter()
        .map(|d| d.eigenvalues.iter().map(|&x| f.apply(x * inv_root_n)).sum::<f64>() / n as f64)
        .collect();
    let mean = stats.iter().sum::<f64>() / stats.len() as f64;
    let exceed = stats.iter().filter(|&&v| (v - mean).abs() > eps).count();
    let total = stats.len() as f64;
    let tail = exceed as f64 / total;
    let alpha = f.lipschitz_constant();
    Ok(ConcentrationOutcome {
        draws: stats.len(),
        eps,
        empirical_tail: tail,
        bound: tail_bound(n, 1.0, eps, alpha),
        sharp_bound: tail_bound(n, (n as f64).sqrt(), eps, alpha),
        standard_error: (tail * (1.0 - tail) / total).sqrt(),
        statistic_mean: mean,
    })
}

/// One row of a draw archive.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveRecord {
    pub n: usize,
    pub mu: f64,
    pub seed_path: SeedPath,
    pub sweep: usize,
    pub eigenvalues: Vec<f64>,
}

pub const ARCHIVE_MAGIC: &str = "# chiral-ensemble draw archive v1";

/// Writes draws as text: a magic line, a header
/// `n,mu,seed_path,sweep,lambda_1,...,lambda_n`, then one draw per row with
/// reals in 17-significant-digit exponent form.
pub fn write_archive<W: Write>(mut out: W, params: EnsembleParams, draws: &[SpectrumDraw]) -> Result<()> {
    writeln!(out, "{ARCHIVE_MAGIC}")?;
    write!(out, "n,mu,seed_path,sweep")?;
    for k in 1..=params.n() {
        write!(out, ",lambda_{k}")?;
    }
    writeln!(out)?;
    for d in draws {
        write!(out, "{},{},{},{}", params.n(), fmt_real(params.mu()), d.seed_path, d.sweeps_used)?;
        for &x in &d.eigenvalues {
            write!(out, ",{}", fmt_real(x))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub(crate) fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn read_archive<R: BufRead>(input: R) -> Result<Vec<ArchiveRecord>> {
    let mut records = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("n,") {
            continue;
        }
        let bad = |reason: String| Error::Archive { line: lineno, reason };
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() < 4 {
            return Err(bad("expected at least 4 columns".into()));
        }
        let n: usize = fields[0].parse().map_err(|e| bad(format!("n: {e}")))?;
        let mu: f64 = fields[1].parse().map_err(|e| bad(format!("mu: {e}")))?;
        let seed_path: SeedPath = fields[2].parse().map_err(bad)?;
        let sweep: usize = fields[3].parse().map_err(|e| bad(format!("sweep: {e}")))?;
        let eigenvalues = fields[4..]
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| bad(format!("eigenvalue: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if eigenvalues.len() != n {
            return Err(bad(format!("expected {n} eigenvalues, found {}", eigenvalues.len())));
        }
        records.push(ArchiveRecord { n, mu, seed_path, sweep, eigenvalues });
    }
    Ok(records)
}
