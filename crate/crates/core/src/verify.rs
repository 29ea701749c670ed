//! The verification suite run by `chiral verify`: closed forms against
//! quadrature, finite-`n` laws against the limit law, and Monte Carlo
//! checks of the edge and concentration statements.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::finite::{density, kernel, laplace_tau_scaled, moment, scaled_cdf_on_grid, EnsembleParams};
use crate::limit::{bessel_integral_identity, figure_curves, limit_cdf, limit_density, limit_laplace, uniform_grid, LimitLaw};
use crate::quadrature::{adaptive_gl, gl20};
use crate::sampler::{b_n_value, concentration_check, extreme_stats, independent_draws, SamplerConfig};
use crate::specfun::laguerre_fn_sequence;

pub const REPORT_SCHEMA: &str = "chiral-ensemble/verification-report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Deterministic checks only.
    Fast,
    /// Adds the Monte Carlo checks.
    Full,
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            other => Err(format!("unknown level `{other}` (expected fast or full)")),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Fast => "fast",
            Level::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: String,
    /// The statement being checked.
    pub anchor: String,
    /// Worst observed value of the checked quantity.
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub level: Level,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
    pub seconds: f64,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Fixed-width text table, one row per check.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:>2}  {:<4}  {:<28}  {:>12}  {:>10}  {:>7}  {}\n",
            "id", "ok", "check", "statistic", "threshold", "secs", "anchor"
        );
        for c in &self.checks {
            out += &format!(
                "{:>2}  {:<4}  {:<28}  {:>12.4e}  {:>10.2e}  {:>7.2}  {}\n",
                c.id,
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.statistic,
                c.threshold,
                c.seconds,
                c.anchor
            );
        }
        out += &format!(
            "{} of {} checks passed ({} level, {:.1} s)\n",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len(),
            self.level,
            self.seconds
        );
        out
    }
}

struct Measured {
    statistic: f64,
    threshold: f64,
    passed: bool,
    detail: String,
}

struct CheckDef {
    id: u8,
    name: &'static str,
    anchor: &'static str,
    monte_carlo: bool,
    run: fn() -> Measured,
}

const CHECKS: &[CheckDef] = &[
    CheckDef {
        id: 1,
        name: "laguerre-orthonormality",
        anchor: "orthonormal Laguerre functions, Gram matrix k <= 40",
        monte_carlo: false,
        run: check_orthonormality,
    },
    CheckDef {
        id: 2,
        name: "mass-and-kernel-trace",
        anchor: "one-point density via the Christoffel-Darboux kernel",
        monte_carlo: false,
        run: check_mass_and_trace,
    },
    CheckDef {
        id: 3,
        name: "laplace-closed-form",
        anchor: "hypergeometric Laplace transform of the squared spectrum",
        monte_carlo: false,
        run: check_laplace_closed_form,
    },
    CheckDef {
        id: 4,
        name: "bessel-identity",
        anchor: "semicircle Laplace integral as a Bessel series",
        monte_carlo: false,
        run: check_bessel_identity,
    },
    CheckDef {
        id: 5,
        name: "weak-convergence-ks",
        anchor: "weak convergence of the sqrt(n)-scaled density to f_c",
        monte_carlo: false,
        run: check_weak_convergence,
    },
    CheckDef {
        id: 6,
        name: "laplace-limit",
        anchor: "limit of the scaled Laplace transform",
        monte_carlo: false,
        run: check_laplace_limit,
    },
    CheckDef {
        id: 7,
        name: "edge-convergence",
        anchor: "lambda_max/sqrt(n) -> b and lambda_min/sqrt(n) -> -b",
        monte_carlo: true,
        run: check_edge,
    },
    CheckDef {
        id: 8,
        name: "b_n-consistency",
        anchor: "b_n^2 -> b^2",
        monte_carlo: false,
        run: check_b_n,
    },
    CheckDef {
        id: 9,
        name: "concentration",
        anchor: "Lipschitz concentration from the log-Sobolev inequality",
        monte_carlo: true,
        run: check_concentration,
    },
    CheckDef {
        id: 10,
        name: "second-moment",
        anchor: "second moment of the one-point law equals n/2 + mu",
        monte_carlo: false,
        run: check_second_moment,
    },
    CheckDef {
        id: 11,
        name: "limit-density-figure",
        anchor: "density f_c for c in {0, 0.1, 1}",
        monte_carlo: false,
        run: check_figure,
    },
];

/// Runs every check of the given level in id order.
pub fn run(level: Level) -> VerificationReport {
    let start = Instant::now();
    let checks: Vec<CheckOutcome> = CHECKS
        .iter()
        .filter(|c| level == Level::Full || !c.monte_carlo)
        .map(run_one)
        .collect();
    VerificationReport {
        schema: REPORT_SCHEMA.to_string(),
        level,
        passed: checks.iter().all(|c| c.passed),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs a single check by id.
pub fn run_check(id: u8) -> Option<CheckOutcome> {
    CHECKS.iter().find(|c| c.id == id).map(run_one)
}

fn run_one(def: &CheckDef) -> CheckOutcome {
    let start = Instant::now();
    let m = (def.run)();
    CheckOutcome {
        id: def.id,
        name: def.name.to_string(),
        anchor: def.anchor.to_string(),
        statistic: m.statistic,
        threshold: m.threshold,
        passed: m.passed,
        detail: m.detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn params(n: usize, mu: f64) -> EnsembleParams {
    EnsembleParams::new(n, mu).expect("suite parameters are valid")
}

/// Smallest `p ≤ 20` with `p·α` an integer, so that `x = t^p` turns
/// `x^α dx` into a polynomial weight in `t`.
fn smoothing_power(alpha: f64) -> u32 {
    (1..=20)
        .find(|&p| {
            let v = p as f64 * alpha;
            (v - v.round()).abs() < 1e-9
        })
        .unwrap_or(1)
}

/// Max entry of `|G - I|` for the Gram matrix of `φ_0..φ_kmax`.
pub fn gram_error(alpha: f64, kmax: usize) -> f64 {
    let rule = gl20();
    let mut gram = vec![vec![0.0; kmax + 1]; kmax + 1];
    let mut accumulate = |x: f64, w: f64| {
        let phi = laguerre_fn_sequence(kmax, alpha, x).expect("x > 0");
        for j in 0..=kmax {
            for k in 0..=j {
                gram[j][k] += w * phi[j] * phi[k];
            }
        }
    };
    // [0, 1] in t with x = t^p.
    let p = smoothing_power(alpha);
    let panels = 8;
    for panel in 0..panels {
        let lo = panel as f64 / panels as f64;
        let half = 0.5 / panels as f64;
        let mid = lo + half;
        for (&u, &w) in rule.nodes().iter().zip(rule.weights()) {
            let t = mid + half * u;
            let x = t.powi(p as i32);
            accumulate(x, w * half * p as f64 * t.powi(p as i32 - 1));
        }
    }
    // [1, 40 + 10 kmax] in unit panels.
    let upper = 40 + 10 * kmax;
    for left in 1..upper {
        let mid = left as f64 + 0.5;
        for (&u, &w) in rule.nodes().iter().zip(rule.weights()) {
            accumulate(mid + 0.5 * u, 0.5 * w);
        }
    }
    let mut worst: f64 = 0.0;
    for j in 0..=kmax {
        for k in 0..=j {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((gram[j][k] - target).abs());
        }
    }
    worst
}

fn check_orthonormality() -> Measured {
    let tol = 1e-10;
    let errs: Vec<(f64, f64)> = [-0.4, 0.0, 0.5, 3.0].iter().map(|&a| (a, gram_error(a, 40))).collect();
    let worst = errs.iter().map(|e| e.1).fold(0.0, f64::max);
    Measured {
        statistic: worst,
        threshold: tol,
        passed: worst <= tol,
        detail: errs.iter().map(|(a, e)| format!("alpha={a}: {e:.2e}")).collect::<Vec<_>>().join("; "),
    }
}

fn check_mass_and_trace() -> Measured {
    let (mass_tol, trace_tol) = (1e-8, 1e-6);
    let mut worst_mass: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    for n in [1, 2, 5, 10, 25, 50] {
        for mu in [0.0, 0.5, 2.0, 10.0] {
            let p = params(n, mu);
            let mass = moment(p, 0).expect("p = 0 is valid");
            let trace = 2.0 * adaptive_gl(|x: f64| kernel(p, x, x), 0.0, p.support_bound(), 8, 1e-13).value;
            worst_mass = worst_mass.max((mass - 1.0).abs());
            worst_trace = worst_trace.max((trace - n as f64).abs());
        }
    }
    Measured {
        statistic: worst_mass,
        threshold: mass_tol,
        passed: worst_mass <= mass_tol && worst_trace <= trace_tol,
        detail: format!("max |mass-1| = {worst_mass:.2e}; max |trace-n| = {worst_trace:.2e} (tol {trace_tol:.0e})"),
    }
}

/// `(1/n) ∫_0^∞ e^{s x²/n} 2x² h(x) dx` by adaptive Gauss–Legendre.
pub fn laplace_tau_quadrature(p: EnsembleParams, s: Complex64) -> Complex64 {
    let n = p.n() as f64;
    let stretch = (1.0 - s.re.max(0.0) / n).sqrt();
    let hi = p.support_bound() / stretch + 12.0;
    // Far out the density underflows to 0 while e^{s x²/n} may overflow.
    let f = |x: f64| {
        let h = density(p, x);
        if h == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (s * (x * x / n)).exp() * (2.0 * x * x * h)
        }
    };
    let est = adaptive_gl(f, 0.0, hi, 16, 1e-13);
    est.value / n
}

/// Twenty `(n, μ, s)` cases with `Re s ≤ n/2`.
pub const LAPLACE_CASES: [(usize, f64, f64, f64); 20] = [
    (1, 0.0, 0.3, 0.0),
    (1, 0.5, -2.0, 0.0),
    (2, 0.0, 0.5, 1.0),
    (2, 2.0, -1.0, 0.0),
    (3, 0.5, 1.0, 0.0),
    (5, 0.0, -0.5, 1.0),
    (5, 10.0, 2.0, 0.0),
    (8, 1.0, 3.0, 2.0),
    (10, 2.0, -2.0, 0.0),
    (10, 2.0, 5.0, 0.0),
    (13, 0.25, -0.5, 1.0),
    (20, 0.0, 10.0, 0.0),
    (20, 3.0, -5.0, -3.0),
    (25, 0.5, 4.0, 0.0),
    (30, 7.0, 1.0, -2.0),
    (40, 0.0, -2.0, 0.0),
    (50, 10.0, 5.0, 0.0),
    (50, 10.0, -0.5, 1.0),
    (64, 1.5, 20.0, 0.0),
    (100, 50.0, 0.3, 0.7),
];

fn check_laplace_closed_form() -> Measured {
    let tol = 1e-7;
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for &(n, mu, re, im) in &LAPLACE_CASES {
        let p = params(n, mu);
        let s = Complex64::new(re, im);
        let closed = laplace_tau_scaled(p, s).expect("Re s < n");
        let quad = laplace_tau_quadrature(p, s);
        let rel = (closed - quad).norm() / quad.norm();
        if rel > worst {
            worst = rel;
            at = format!("n={n}, mu={mu}, s={s}");
        }
    }
    Measured {
        statistic: worst,
        threshold: tol,
        passed: worst <= tol,
        detail: format!("{} cases; worst relative gap at {at}", LAPLACE_CASES.len()),
    }
}

fn bessel_cases() -> Vec<(f64, f64, Complex64)> {
    let l01 = LimitLaw::new(0.1).expect("valid c");
    let l1 = LimitLaw::new(1.0).expect("valid c");
    vec![
        (-1.0, 1.0, Complex64::new(0.0, 0.0)),
        (-1.0, 1.0, Complex64::new(1.0, 0.0)),
        (-1.0, 1.0, Complex64::new(-2.5, 0.0)),
        (-1.0, 1.0, Complex64::new(0.0, 3.0)),
        (0.0, 4.0, Complex64::new(-0.5, 0.0)),
        (0.0, 4.0, Complex64::new(1.0, 1.0)),
        (l01.a_sq(), l01.b_sq(), Complex64::new(0.7, 0.0)),
        (l1.a_sq(), l1.b_sq(), Complex64::new(-2.0, 0.0)),
        (2.0, 5.0, Complex64::new(0.3, -0.8)),
        (-3.0, -1.0, Complex64::new(1.5, 0.0)),
    ]
}

fn check_bessel_identity() -> Measured {
    let tol = 1e-10;
    let cases = bessel_cases();
    let worst = cases
        .iter()
        .map(|&(a, b, s)| bessel_integral_identity(a, b, s).expect("a < b").relative_gap())
        .fold(0.0, f64::max);
    Measured {
        statistic: worst,
        threshold: tol,
        passed: worst <= tol,
        detail: format!("{} (alpha, beta, s) triples", cases.len()),
    }
}

/// Sup over a grid on `[0, 2.6]` of the distance between the scaled
/// finite-`n` CDF and the limit CDF (both laws are symmetric).
pub fn ks_to_limit(n: usize, c: f64) -> f64 {
    let grid = uniform_grid(0.0, 2.6, 2601);
    let law = LimitLaw::new(c).expect("valid c");
    let finite = scaled_cdf_on_grid(params(n, c * n as f64), &grid, 0.01);
    grid.iter()
        .zip(&finite)
        .map(|(&t, &f)| (f - limit_cdf(law, t)).abs())
        .fold(0.0, f64::max)
}

fn check_weak_convergence() -> Measured {
    let tol = 0.02;
    let ns = [20, 50, 100, 200];
    let mut monotone = true;
    let mut worst_last: f64 = 0.0;
    let mut lines = Vec::new();
    for c in [0.0, 0.1, 1.0] {
        let ks: Vec<f64> = ns.iter().map(|&n| ks_to_limit(n, c)).collect();
        monotone &= ks.windows(2).all(|w| w[1] <= w[0]);
        worst_last = worst_last.max(ks[ks.len() - 1]);
        lines.push(format!("c={c}: {}", ks.iter().map(|k| format!("{k:.2e}")).collect::<Vec<_>>().join(" ")));
    }
    Measured {
        statistic: worst_last,
        threshold: tol,
        passed: monotone && worst_last <= tol,
        detail: format!("KS over n = 20, 50, 100, 200; {}; nonincreasing: {monotone}", lines.join("; ")),
    }
}

fn check_laplace_limit() -> Measured {
    let tol = 0.01;
    let n = 400;
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for c in [0.0, 1.0] {
        let law = LimitLaw::new(c).expect("valid c");
        let p = params(n, c * n as f64);
        for s in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let z = Complex64::new(s, 0.0);
            let finite = laplace_tau_scaled(p, z).expect("Re s < n");
            let limit = limit_laplace(law, z);
            let gap = (finite - limit).norm();
            if gap > worst {
                worst = gap;
                at = format!("c={c}, s={s}: finite {:.6}, limit {:.6}", finite.re, limit.re);
            }
        }
    }
    Measured {
        statistic: worst,
        threshold: tol,
        passed: worst <= tol,
        detail: format!("n = {n}; largest gap at {at}"),
    }
}

fn edge_config(chains: usize, seed: u64) -> SamplerConfig {
    let burn_in = crate::sampler::DEFAULT_BURN_IN;
    SamplerConfig { sweeps: burn_in + 1, burn_in, thin: 1, seed, chains, ..SamplerConfig::default() }
}

fn check_edge() -> Measured {
    let b = LimitLaw::new(1.0).expect("valid c").b();
    let mut tops = Vec::new();
    let mut bottoms = Vec::new();
    for n in [20, 100] {
        let p = params(n, n as f64);
        let draws = independent_draws(p, &edge_config(128, 2024)).expect("valid config");
        let e = extreme_stats(&draws, 1.0 / (n as f64).sqrt());
        tops.push(e.largest.mean);
        bottoms.push(-e.smallest.mean);
    }
    let in_band = |v: f64| v >= b - 0.15 && v <= b + 0.05;
    let toward = |v: &[f64]| (b - v[1]).abs() < (b - v[0]).abs();
    let passed = in_band(tops[1]) && in_band(bottoms[1]) && toward(&tops) && toward(&bottoms);
    Measured {
        statistic: tops[1],
        threshold: b - 0.15,
        passed,
        detail: format!(
            "c=1, b={b:.4}, 128 chains: mean lambda_max/sqrt(n) {:.4} (n=20) -> {:.4} (n=100); mean -lambda_min/sqrt(n) {:.4} -> {:.4}",
            tops[0], tops[1], bottoms[0], bottoms[1]
        ),
    }
}

fn check_b_n() -> Measured {
    let b = LimitLaw::new(1.0).expect("valid c").b();
    let gap = (b_n_value(params(1000, 1000.0)) - b).abs();
    Measured {
        statistic: gap,
        threshold: 0.05,
        passed: gap <= 0.05,
        detail: format!("|b_n(1000, 1000) - b(1)| with b(1) = {b:.6}"),
    }
}

fn check_concentration() -> Measured {
    let out = concentration_check(params(100, 100.0), &edge_config(400, 77), "clipped-identity", 0.2)
        .expect("registered function");
    Measured {
        statistic: out.empirical_tail,
        threshold: out.bound + 3.0 * out.standard_error,
        passed: out.holds(),
        detail: format!(
            "{} draws, eps = 0.2: tail {:.4}, bound 2exp(-n eps^2/2) = {:.4}, delta=sqrt(n) bound {:.3e}",
            out.draws, out.empirical_tail, out.bound, out.sharp_bound
        ),
    }
}

fn check_second_moment() -> Measured {
    let tol = 1e-8;
    let mut worst: f64 = 0.0;
    for n in [1, 2, 3, 4, 5, 7, 10, 16, 25, 33, 50] {
        for mu in [0.0, 0.5, 2.0, 10.0] {
            let p = params(n, mu);
            let m2 = moment(p, 2).expect("p = 2 is valid");
            worst = worst.max((m2 - (0.5 * n as f64 + mu)).abs());
        }
    }
    Measured {
        statistic: worst,
        threshold: tol,
        passed: worst <= tol,
        detail: "max |m_2 - (n/2 + mu)| over n <= 50, mu in {0, 0.5, 2, 10}".to_string(),
    }
}

/// Inner and outer edge of the positive part of a sampled density: the
/// smallest and largest nonnegative abscissae with a positive value.
pub fn sampled_support(abscissae: &[f64], values: &[f64]) -> (f64, f64) {
    let positive: Vec<f64> = abscissae
        .iter()
        .zip(values)
        .filter(|(&t, &v)| t >= 0.0 && v > 0.0)
        .map(|(&t, _)| t)
        .collect();
    (
        positive.iter().copied().fold(f64::INFINITY, f64::min),
        positive.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    )
}

fn check_figure() -> Measured {
    let curves = figure_curves();
    let spacing = curves[0].abscissae[1] - curves[0].abscissae[0];
    let mut passed = true;
    let mut lines = Vec::new();
    let mut worst_semicircle: f64 = 0.0;
    for (curve, c) in curves.iter().zip([0.0, 0.1, 1.0]) {
        let law = LimitLaw::new(c).expect("valid c");
        let (inner, outer) = sampled_support(&curve.abscissae, &curve.values);
        let support_ok = (outer - law.b()).abs() <= spacing && (inner - law.a()).abs() <= spacing;
        let mut edges = vec![limit_density(law, law.b()), limit_density(law, -law.b())];
        if law.a() > 0.0 {
            edges.extend([limit_density(law, law.a()), limit_density(law, -law.a())]);
        }
        let edges_ok = edges.iter().all(|&v| v == 0.0);
        if c == 0.0 {
            worst_semicircle = curve
                .abscissae
                .iter()
                .zip(&curve.values)
                .map(|(&t, &v)| (v - (2.0 - t * t).max(0.0).sqrt() / std::f64::consts::PI).abs())
                .fold(0.0, f64::max);
        }
        passed &= support_ok && edges_ok;
        lines.push(format!("c={c}: support +-[{inner:.4}, {outer:.4}] vs [{:.4}, {:.4}]", law.a(), law.b()));
    }
    passed &= worst_semicircle <= 1e-12;
    Measured {
        statistic: worst_semicircle,
        threshold: 1e-12,
        passed,
        detail: format!("{}; max |f_0 - sqrt(2-t^2)/pi| = {worst_semicircle:.1e}", lines.join("; ")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_round_trip() {
        for level in [Level::Fast, Level::Full] {
            assert_eq!(level.to_string().parse::<Level>().unwrap(), level);
        }
        assert!("slow".parse::<Level>().is_err());
    }

    #[test]
    fn smoothing_powers() {
        assert_eq!(smoothing_power(-0.4), 5);
        assert_eq!(smoothing_power(0.5), 2);
        assert_eq!(smoothing_power(3.0), 1);
    }

    #[test]
    fn ids_are_unique_and_ordered() {
        let ids: Vec<u8> = CHECKS.iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=11).collect::<Vec<u8>>());
    }

    #[test]
    fn cheap_checks_pass() {
        for id in [4, 8] {
            let out = run_check(id).unwrap();
            assert!(out.passed, "{out:?}");
        }
    }

    #[test]
    fn sampled_support_of_a_box() {
        let t = [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5];
        let v = [0.0, 1.0, 0.0, 1.0, 1.0, 0.0];
        assert_eq!(sampled_support(&t, &v), (0.5, 1.0));
    }
}
