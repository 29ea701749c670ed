//! The `n → ∞` law of the `sqrt(n)`-scaled eigenvalues when `μ/n → c`.
//!
//! The limit has density
//! `f_c(t) = sqrt((t² - a²)(b² - t²)) / (π|t|)` on `[-b, -a] ∪ [a, b]`, with
//! `a² = 1 + c - sqrt(1+2c)` and `b² = 1 + c + sqrt(1+2c)`. Its image under
//! `t ↦ t²`, weighted by `t²`, is the semicircle-shaped density
//! `g_c(u) = sqrt((u - a²)(b² - u)) / π` on `[a², b²]` whose Laplace transform
//! is `(1/2 + c) e^{(1+c)s} F((s/2) sqrt(1+2c))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::finite::{CurveSource, DensityCurve, Scaling};
use crate::quadrature::{adaptive_gl, tanh_sinh};
use crate::specfun::bessel_f;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    c: f64,
    a: f64,
    b: f64,
}

impl LimitLaw {
    pub fn new(c: f64) -> Result<Self> {
        let (a, b) = endpoints(c)?;
        Ok(Self { c, a, b })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `a² = 1 + c - sqrt(1+2c)`, written as `c² / (1 + c + sqrt(1+2c))` to
    /// avoid cancellation for small `c`.
    pub fn a_sq(&self) -> f64 {
        a_squared(self.c)
    }

    pub fn b_sq(&self) -> f64 {
        1.0 + self.c + (1.0 + 2.0 * self.c).sqrt()
    }

    /// Half-width `sqrt(1+2c)` of the squared support `[a², b²]`.
    fn radius(&self) -> f64 {
        (1.0 + 2.0 * self.c).sqrt()
    }
}

fn a_squared(c: f64) -> f64 {
    c * c / (1.0 + c + (1.0 + 2.0 * c).sqrt())
}

/// Support endpoints `(a, b)` with `0 ≤ a < b`, `ab = c`, `a² + b² = 2(1+c)`.
pub fn endpoints(c: f64) -> Result<(f64, f64)> {
    if !(c >= 0.0) || !c.is_finite() {
        return domain(format!("limit parameter c must be finite and >= 0, got {c}"));
    }
    let b = (1.0 + c + (1.0 + 2.0 * c).sqrt()).sqrt();
    Ok((a_squared(c).sqrt(), b))
}

/// `f_c(t)`; zero outside the support and at the edges. At `c = 0` this is
/// the semicircle `sqrt(2 - t²)/π`, positive at `t = 0`.
pub fn limit_density(law: LimitLaw, t: f64) -> f64 {
    let at = t.abs();
    if at >= law.b {
        return 0.0;
    }
    if law.a == 0.0 {
        return ((law.b - at) * (law.b + at)).sqrt() / PI;
    }
    if at <= law.a {
        return 0.0;
    }
    // (t² - a²) formed as (t - a)(t + a) keeps the edge accurate.
    let inner = (at - law.a) * (at + law.a) * (law.b - at) * (law.b + at);
    inner.sqrt() / (PI * at)
}

/// `g_c(u) = sqrt((u - a²)(b² - u)) / π` on `[a², b²]`.
pub fn g_density(law: LimitLaw, u: f64) -> f64 {
    let (lo, hi) = (law.a_sq(), law.b_sq());
    if u <= lo || u >= hi {
        return 0.0;
    }
    ((u - lo) * (hi - u)).sqrt() / PI
}

const CDF_TOL: f64 = 1e-13;

/// `ν_c((-∞, t])`.
///
/// On `[a, b]` the mass `∫_a^t f_c` equals `(1/2) ∫_{a²}^{t²} g_c(u)/u du`;
/// with `u = 1 + c - sqrt(1+2c) cos θ` the integrand becomes the smooth
/// function `R² sin²θ / (2π (a² + 2R sin²(θ/2)))` on `[0, θ_t]`, integrated
/// by adaptive Gauss–Legendre.
pub fn limit_cdf(law: LimitLaw, t: f64) -> f64 {
    if t < 0.0 {
        return 1.0 - limit_cdf(law, -t);
    }
    if t <= law.a {
        return 0.5;
    }
    if t >= law.b {
        return 1.0;
    }
    0.5 + positive_mass_to(law, t)
}

fn positive_mass_to(law: LimitLaw, t: f64) -> f64 {
    let r = law.radius();
    let centre = 1.0 + law.c;
    let cos_theta = ((centre - t * t) / r).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    let a_sq = law.a_sq();
    let integrand = |th: f64| {
        let s = th.sin();
        let h = (0.5 * th).sin();
        r * r * s * s / (2.0 * PI * (a_sq + 2.0 * r * h * h))
    };
    adaptive_gl(integrand, 0.0, theta, 2, CDF_TOL).value
}

/// Smallest `t` with `limit_cdf(t) ≥ p`, by bisection. `p = 1/2` maps to 0.
pub fn limit_quantile(law: LimitLaw, p: f64) -> f64 {
    if p <= 0.0 {
        return -law.b;
    }
    if p >= 1.0 {
        return law.b;
    }
    if p == 0.5 {
        return 0.0;
    }
    if p < 0.5 {
        return -limit_quantile(law, 1.0 - p);
    }
    let (mut lo, mut hi) = (law.a, law.b);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if limit_cdf(law, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `∫ e^{st} g_c(t) dt = (1/2 + c) e^{(1+c)s} F((s/2) sqrt(1+2c))`.
pub fn limit_laplace(law: LimitLaw, s: Complex64) -> Complex64 {
    let half_radius = 0.5 * law.radius();
    (s * (1.0 + law.c)).exp() * bessel_f(s * half_radius) * (0.5 + law.c)
}

/// Both sides of
/// `(1/π) ∫_α^β e^{st} sqrt((t-α)(β-t)) dt = (1/2)((β-α)/2)² e^{(β+α)s/2} F((β-α)s/4)`.
/// The left side is computed by tanh–sinh quadrature.
#[derive(Debug, Clone, Copy)]
pub struct IdentitySides {
    pub lhs: Complex64,
    pub rhs: Complex64,
}

impl IdentitySides {
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.lhs.norm().max(f64::MIN_POSITIVE)
    }
}

pub fn bessel_integral_identity(alpha: f64, beta: f64, s: Complex64) -> Result<IdentitySides> {
    if !(alpha < beta) {
        return domain(format!("need alpha < beta, got [{alpha}, {beta}]"));
    }
    let lhs = tanh_sinh(
        |t: f64| (s * t).exp() * ((t - alpha) * (beta - t)).sqrt(),
        alpha,
        beta,
        1e-15,
    )
    .value
        / PI;
    let half_width = 0.5 * (beta - alpha);
    let rhs = (s * (0.5 * (alpha + beta))).exp() * bessel_f(s * (0.5 * half_width)) * (0.5 * half_width * half_width);
    Ok(IdentitySides { lhs, rhs })
}

/// Samples `f_c` on a grid.
pub fn limit_curve(law: LimitLaw, grid: &[f64]) -> DensityCurve {
    DensityCurve {
        abscissae: grid.to_vec(),
        values: grid.iter().map(|&t| limit_density(law, t)).collect(),
        scaling: Scaling::SqrtN,
        source: CurveSource::Limit { c: law.c },
    }
}

/// The three laws `c ∈ {0, 0.1, 1}` on 1001 points over `[-2.2, 2.2]`.
pub fn figure_curves() -> Vec<DensityCurve> {
    let grid = uniform_grid(-2.2, 2.2, 1001);
    [0.0, 0.1, 1.0]
        .into_iter()
        .map(|c| limit_curve(LimitLaw::new(c).expect("valid c"), &grid))
        .collect()
}

pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            // Endpoint weights keep symmetric grids exactly symmetric.
            let last = (count - 1) as f64;
            (0..count)
                .map(|i| ((last - i as f64) * lo + i as f64 * hi) / last)
                .collect()
        }
    }
}
