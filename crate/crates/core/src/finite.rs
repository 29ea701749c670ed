//! Exact finite-n eigenvalue statistics of the ensemble with weight
//! `|det x|^{2μ} e^{-tr x²}` on `n × n` Hermitian matrices.
//!
//! The one-point density is `h_n^μ(t) = K_n^μ(t, t) / n`, where
//! `K_n^μ(x, y) = Σ_{k<n} ψ_k^μ(x) ψ_k^μ(y)` is the Christoffel–Darboux kernel
//! of the generalized Hermite functions. Splitting the sum by parity gives
//! `h(x) = (|x|/n)(Σ_{k≤m1} φ_k^{μ-1/2}(x²)² + Σ_{k≤m2} φ_k^{μ+1/2}(x²)²)`
//! with `m1 = ⌊(n-1)/2⌋`, `m2 = ⌊(n-2)/2⌋`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::{adaptive_gl, gl20};
use crate::specfun::{check_mu, hermite_values, hyp2f1_terminating, log_gamma};

/// Matrix dimension `n` and determinant exponent `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    n: usize,
    mu: f64,
}

impl EnsembleParams {
    pub fn new(n: usize, mu: f64) -> Result<Self> {
        if n == 0 {
            return domain("matrix dimension n must be at least 1");
        }
        check_mu(mu)?;
        Ok(Self { n, mu })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Highest index in the `φ^{μ-1/2}` family: `⌊(n-1)/2⌋`.
    pub fn m1(&self) -> usize {
        (self.n - 1) / 2
    }

    /// Highest index in the `φ^{μ+1/2}` family: `⌊(n-2)/2⌋`, or `None`
    /// when `n = 1` and the family is empty.
    pub fn m2(&self) -> Option<usize> {
        if self.n >= 2 {
            Some((self.n - 2) / 2)
        } else {
            None
        }
    }

    /// Second moment of the one-point law, `n/2 + μ`.
    pub fn second_moment(&self) -> f64 {
        0.5 * self.n as f64 + self.mu
    }

    /// Right end of the interval outside which the density is negligible,
    /// `sqrt(2n + 4μ) + 12`.
    pub fn support_bound(&self) -> f64 {
        (2.0 * self.n as f64 + 4.0 * self.mu).sqrt() + 12.0
    }
}

/// One-point density `h_n^μ(x)`.
pub fn density(params: EnsembleParams, x: f64) -> f64 {
    let psi = hermite_values(params.n, params.mu, x);
    psi.iter().map(|v| v * v).sum::<f64>() / params.n as f64
}

/// Christoffel–Darboux kernel `K_n^μ(x, y)`.
pub fn kernel(params: EnsembleParams, x: f64, y: f64) -> f64 {
    let px = hermite_values(params.n, params.mu, x);
    if x == y {
        return px.iter().map(|v| v * v).sum();
    }
    let py = hermite_values(params.n, params.mu, y);
    px.iter().zip(&py).map(|(a, b)| a * b).sum()
}

const MOMENT_TOL: f64 = 1e-13;
const MAX_MOMENT: u32 = 8;

/// `∫ t^p h_n^μ(t) dt` for `p ≤ 8`. Odd orders vanish by symmetry.
pub fn moment(params: EnsembleParams, p: u32) -> Result<f64> {
    if p > MAX_MOMENT {
        return domain(format!("moment order {p} exceeds {MAX_MOMENT}"));
    }
    if p % 2 == 1 {
        return Ok(0.0);
    }
    let hi = params.support_bound();
    let est = adaptive_gl(|t: f64| t.powi(p as i32) * density(params, t), 0.0, hi, 8, MOMENT_TOL);
    Ok(2.0 * est.value)
}

/// `∫_0^∞ Σ_{k≤m} φ_k^α(x)² x e^{sx} dx`
/// `= (m+1)(m+α+1) (1-s)^{-(2m+α+2)} ₂F₁(-m, -m-α; 2; s²)` for `Re s < 1`.
pub fn partial_laplace(m: usize, alpha: f64, s: Complex64) -> Result<Complex64> {
    if !(alpha > -1.0) {
        return domain(format!("Laguerre parameter must be > -1, got {alpha}"));
    }
    if !(s.re < 1.0) {
        return domain(format!("Laplace integral diverges for Re(s) = {} >= 1", s.re));
    }
    Ok(partial_laplace_unchecked(m, alpha, s))
}

fn partial_laplace_unchecked(m: usize, alpha: f64, s: Complex64) -> Complex64 {
    let mf = m as f64;
    let lead = (mf + 1.0) * (mf + alpha + 1.0);
    let power = -(2.0 * mf + alpha + 2.0);
    let one_minus = Complex64::new(1.0, 0.0) - s;
    let prefactor = (one_minus.ln() * power).exp();
    prefactor * lead * hyp2f1_terminating(m, -mf - alpha, s * s)
}

/// `(1/n) ∫_0^∞ e^{st/n} τ_n(dt)`, where `τ_n` has density
/// `sqrt(t) h_n^μ(sqrt t)` on `t > 0`. Equal to
/// `n^{-2} [P(m1, μ-1/2, s/n) + P(m2, μ+1/2, s/n)]` with `P` from
/// [`partial_laplace`]. At `s = 0` this is `(n/2 + μ)/n`.
pub fn laplace_tau_scaled(params: EnsembleParams, s: Complex64) -> Result<Complex64> {
    let n = params.n as f64;
    if !(s.re < n) {
        return domain(format!("transform diverges for Re(s) = {} >= n = {n}", s.re));
    }
    let sigma = s / n;
    let mut total = partial_laplace_unchecked(params.m1(), params.mu - 0.5, sigma);
    if let Some(m2) = params.m2() {
        total += partial_laplace_unchecked(m2, params.mu + 0.5, sigma);
    }
    Ok(total / (n * n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    Raw,
    /// `t ↦ sqrt(n) h(sqrt(n) t)`, the scaling under which the limit law
    /// appears.
    SqrtN,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CurveSource {
    Finite(EnsembleParams),
    Limit { c: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityCurve {
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub scaling: Scaling,
    pub source: CurveSource,
}

impl DensityCurve {
    /// Trapezoid mass over the grid.
    pub fn trapezoid_mass(&self) -> f64 {
        self.abscissae
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }
}

pub fn density_curve(params: EnsembleParams, grid: &[f64], scaling: Scaling) -> DensityCurve {
    let root_n = (params.n as f64).sqrt();
    let values = grid
        .iter()
        .map(|&t| match scaling {
            Scaling::Raw => density(params, t),
            Scaling::SqrtN => root_n * density(params, root_n * t),
        })
        .collect();
    DensityCurve {
        abscissae: grid.to_vec(),
        values,
        scaling,
        source: CurveSource::Finite(params),
    }
}

/// CDF of the `sqrt(n)`-scaled one-point law evaluated on an increasing
/// grid of abscissae, integrating the density panel by panel with a
/// 20-point Gauss–Legendre rule between consecutive grid points (subdivided
/// so no panel is wider than `max_panel` in the scaled variable).
pub fn scaled_cdf_on_grid(params: EnsembleParams, grid: &[f64], max_panel: f64) -> Vec<f64> {
    let rule = gl20();
    let root_n = (params.n as f64).sqrt();
    let f = |t: f64| root_n * density(params, root_n * t);
    // Mass to the right of 0 is exactly 1/2; integrate from 0 outward.
    let cumulative_from_zero = |t: f64, prev_t: f64, prev_val: f64| -> f64 {
        let width = t - prev_t;
        let pieces = ((width.abs() / max_panel).ceil() as usize).max(1);
        prev_val + rule.composite(f, prev_t, t, pieces)
    };
    let mut out = vec![0.0; grid.len()];
    // Positive side in increasing order, negative side mirrored.
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| grid[i].abs().total_cmp(&grid[j].abs()));
    let mut last_t = 0.0;
    let mut last_v = 0.0;
    for i in order {
        let a = grid[i].abs();
        last_v = cumulative_from_zero(a, last_t, last_v);
        last_t = a;
        out[i] = if grid[i] >= 0.0 { 0.5 + last_v } else { 0.5 - last_v };
    }
    out
}

/// `ln C_n`, the normalizing constant of the joint eigenvalue density
/// `e^{-Σx²} Π|x_k|^{2μ} Δ(x)²`, computed as
/// `ln n! + Σ_{k<n} ln h_k` with `h_k` the squared norms of the monic
/// orthogonal polynomials for `|x|^{2μ}e^{-x²}`.
pub fn log_normalization(params: EnsembleParams) -> f64 {
    // Monic norms: h_{2m} = m! Γ(m+μ+1/2), h_{2m+1} = m! Γ(m+μ+3/2).
    let mut acc = log_gamma(params.n as f64 + 1.0).unwrap_or(0.0);
    for k in 0..params.n {
        let m = (k / 2) as f64;
        let shift = if k % 2 == 0 { 0.5 } else { 1.5 };
        acc += libm::lgamma(m + 1.0) + libm::lgamma(m + params.mu + shift);
    }
    acc
}
