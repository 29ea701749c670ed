//! Orthonormal Laguerre and generalized Hermite functions, and the two
//! hypergeometric series needed by the Laplace transforms.
//!
//! The Laguerre functions are
//! `φ_k^α(x) = sqrt(k!/Γ(k+α+1)) x^{α/2} e^{-x/2} L_k^α(x)`, orthonormal on
//! `[0, ∞)`. They are never formed from the raw polynomial `L_k^α`, which
//! overflows long before `k = 1000`. Instead the normalized three-term
//! recurrence runs on the polynomial factor with periodic rescaling and the
//! weight is applied in log space at the end.
//!
//! The generalized Hermite functions `ψ_k^μ` (orthonormal on ℝ for the
//! weight `|x|^{2μ} e^{-x²}`) are obtained from the Laguerre functions at
//! `x²` through the parity relations
//! `ψ_{2m}(x) = (-1)^m sqrt|x| φ_m^{μ-1/2}(x²)` and
//! `ψ_{2m+1}(x) = (-1)^m sign(x) sqrt|x| φ_m^{μ+1/2}(x²)`.

use num_complex::Complex64;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreOrder {
    k: usize,
    alpha: f64,
}

impl LaguerreOrder {
    pub fn new(k: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { k, alpha })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteOrder {
    k: usize,
    mu: f64,
}

impl HermiteOrder {
    pub fn new(k: usize, mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(Self { k, mu })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("Laguerre parameter must be finite and > -1, got {alpha}"));
    }
    Ok(())
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if !(mu > -0.5) || !mu.is_finite() {
        return domain(format!("determinant exponent must be finite and > -1/2, got {mu}"));
    }
    Ok(())
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("log_gamma requires x > 0, got {x}"));
    }
    Ok(libm::lgamma(x))
}

/// `c·ln(x)` with the convention `0·ln(0) = 0`.
fn xlogy(c: f64, x: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * x.ln()
    }
}

const RESCALE: f64 = 1e150;

/// Runs the normalized recurrence for the polynomial factor
/// `p_k = sqrt(k!Γ(α+1)/Γ(k+α+1)) L_k^α(u)` and emits
/// `p_k · exp(log_weight)` for `k = 0..=kmax`.
fn weighted_recurrence(kmax: usize, alpha: f64, u: f64, log_weight: f64, mut emit: impl FnMut(usize, f64)) {
    let ln_rescale = RESCALE.ln();
    let mut log_scale = 0.0;
    let value = |p: f64, log_scale: f64| -> f64 {
        if p == 0.0 {
            0.0
        } else {
            p * (log_weight + log_scale).exp()
        }
    };
    let mut prev = 0.0;
    let mut cur = 1.0;
    emit(0, value(cur, log_scale));
    for k in 0..kmax {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - u) * cur - (kf * (kf + alpha)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + alpha)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += ln_rescale;
        }
        emit(k + 1, value(cur, log_scale));
    }
}

/// Log of the Laguerre weight factor `x^{α/2} e^{-x/2} / sqrt(Γ(α+1))`
/// with an extra power `x^{extra}` folded in.
fn laguerre_log_weight(alpha: f64, x: f64, power: f64) -> f64 {
    xlogy(power, x) - 0.5 * x - 0.5 * libm::lgamma(alpha + 1.0)
}

/// The orthonormal Laguerre function `φ_k^α(x)`.
pub fn laguerre_fn(order: LaguerreOrder, x: f64) -> Result<f64> {
    let seq = laguerre_fn_sequence(order.k, order.alpha, x)?;
    Ok(seq[order.k])
}

/// `[φ_0^α(x), …, φ_kmax^α(x)]` in `O(kmax)`.
pub fn laguerre_fn_sequence(kmax: usize, alpha: f64, x: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("Laguerre functions need finite x >= 0, got {x}"));
    }
    if x == 0.0 && alpha < 0.0 {
        return domain(format!("φ^α diverges at x = 0 for α = {alpha} < 0"));
    }
    let mut out = vec![0.0; kmax + 1];
    let lw = laguerre_log_weight(alpha, x, 0.5 * alpha);
    weighted_recurrence(kmax, alpha, x, lw, |k, v| out[k] = v);
    Ok(out)
}

/// Fills `out[k] = sqrt|x| φ_k^α(x²)` for `k = 0..out.len()`. Finite limits
/// at `x = 0` are returned whenever they exist; otherwise `+∞`.
fn half_weighted_laguerre(alpha: f64, x_abs: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let u = x_abs * x_abs;
    // sqrt|x| · (x²)^{α/2} = |x|^{α + 1/2}
    let lw = xlogy(alpha + 0.5, x_abs) - 0.5 * u - 0.5 * libm::lgamma(alpha + 1.0);
    weighted_recurrence(out.len() - 1, alpha, u, lw, |k, v| out[k] = v);
}

/// `[ψ_0^μ(x), …, ψ_kmax^μ(x)]`.
pub fn hermite_fn_sequence(kmax: usize, mu: f64, x: f64) -> Result<Vec<f64>> {
    check_mu(mu)?;
    Ok(hermite_values(kmax + 1, mu, x))
}

/// First `count` generalized Hermite functions; `mu` already validated.
pub(crate) fn hermite_values(count: usize, mu: f64, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; count];
    if count == 0 {
        return out;
    }
    let even_len = count.div_ceil(2);
    let odd_len = count / 2;
    let x_abs = x.abs();
    let mut even = vec![0.0; even_len];
    let mut odd = vec![0.0; odd_len];
    half_weighted_laguerre(mu - 0.5, x_abs, &mut even);
    half_weighted_laguerre(mu + 0.5, x_abs, &mut odd);
    let sign_x = if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    };
    for (m, v) in even.into_iter().enumerate() {
        out[2 * m] = if m % 2 == 0 { v } else { -v };
    }
    for (m, v) in odd.into_iter().enumerate() {
        let s = if m % 2 == 0 { sign_x } else { -sign_x };
        out[2 * m + 1] = if s == 0.0 { 0.0 } else { s * v };
    }
    out
}

/// The generalized Hermite function `ψ_k^μ(x)`.
pub fn hermite_fn(order: HermiteOrder, x: f64) -> f64 {
    hermite_values(order.k + 1, order.mu, x)[order.k]
}

const SERIES_TOL: f64 = 1e-17;

/// `F(z) = Σ_{k≥0} z^{2k} / (k!(k+1)!)`, an entire function equal to
/// `₀F₁(; 2; z²)` and to `I_1(2z)/z`.
pub fn bessel_f(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut comp = Complex64::new(0.0, 0.0);
    for k in 0..100_000u32 {
        let kf = k as f64;
        term *= z2 / ((kf + 1.0) * (kf + 2.0));
        // Neumaier step, componentwise.
        let t = sum + term;
        comp.re += neumaier_residual(sum.re, term.re, t.re);
        comp.im += neumaier_residual(sum.im, term.im, t.im);
        sum = t;
        let decreasing = z2.norm() < (kf + 2.0) * (kf + 3.0);
        if decreasing && term.norm() <= SERIES_TOL * sum.norm() {
            break;
        }
    }
    sum + comp
}

fn neumaier_residual(sum: f64, term: f64, total: f64) -> f64 {
    if sum.abs() >= term.abs() {
        (sum - total) + term
    } else {
        (term - total) + sum
    }
}

/// `₂F₁(-m, b; 2; z) = Σ_{j=0}^{m} (-m)_j (b)_j / ((2)_j j!) z^j`.
pub fn hyp2f1_terminating(m: usize, b: f64, z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut comp = Complex64::new(0.0, 0.0);
    let mf = m as f64;
    for j in 0..m {
        let jf = j as f64;
        term *= z * ((jf - mf) * (b + jf) / ((2.0 + jf) * (jf + 1.0)));
        let t = sum + term;
        comp.re += neumaier_residual(sum.re, term.re, t.re);
        comp.im += neumaier_residual(sum.im, term.im, t.im);
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn log_gamma_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_relative_eq!(log_gamma(0.5).unwrap(), PI.sqrt().ln(), max_relative = 1e-14);
        let ln_fact10: f64 = (1..=10).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(log_gamma(11.0).unwrap(), ln_fact10, max_relative = 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn laguerre_closed_forms() {
        let o = LaguerreOrder::new(0, 0.0).unwrap();
        assert_relative_eq!(laguerre_fn(o, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(laguerre_fn(o, 2.0).unwrap(), (-1.0f64).exp(), max_relative = 1e-15);

        let o = LaguerreOrder::new(1, 0.5).unwrap();
        let x: f64 = 1.0;
        let gamma_2_5 = 0.75 * PI.sqrt();
        let want = (1.0 / gamma_2_5).sqrt() * x.powf(0.25) * (-0.5f64).exp() * (1.5 - x);
        assert_relative_eq!(laguerre_fn(o, x).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn laguerre_sequence_at_origin() {
        assert_eq!(laguerre_fn_sequence(0, 0.0, 0.0).unwrap(), vec![1.0]);
        let seq = laguerre_fn_sequence(3, 0.0, 0.0).unwrap();
        for v in seq {
            assert_relative_eq!(v, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn laguerre_domain_errors() {
        assert!(LaguerreOrder::new(2, -1.0).is_err());
        assert!(laguerre_fn_sequence(2, 0.5, -0.1).is_err());
        assert!(laguerre_fn_sequence(2, -0.5, 0.0).is_err());
        assert!(laguerre_fn_sequence(2, -0.5, 1e-300).is_ok());
        assert!(HermiteOrder::new(0, -0.5).is_err());
    }

    #[test]
    fn laguerre_sequence_large_order_is_finite() {
        for &x in &[0.0, 1.0, 100.0, 2000.0, 7999.0, 8000.0] {
            let seq = laguerre_fn_sequence(2000, 0.5, x).unwrap();
            assert!(seq.iter().all(|v| v.is_finite()), "x = {x}");
            assert!(seq.iter().all(|v| v.abs() < 10.0), "x = {x}");
        }
        // inside the oscillatory region the high orders are not flushed to zero
        let seq = laguerre_fn_sequence(2000, 0.5, 7000.0).unwrap();
        assert!(seq[2000].abs() > 1e-6);
    }

    #[test]
    fn hermite_basic_values() {
        let o = HermiteOrder::new(1, 0.3).unwrap();
        assert_eq!(hermite_fn(o, 0.0), 0.0);
        let o = HermiteOrder::new(0, 0.0).unwrap();
        let want = PI.powf(-0.25) * (-0.245f64).exp();
        assert_relative_eq!(hermite_fn(o, 0.7), want, max_relative = 1e-14);
        let o = HermiteOrder::new(2, 1.0).unwrap();
        for x in [0.1, 0.9, 2.3] {
            assert_eq!(hermite_fn(o, x), hermite_fn(o, -x));
        }
    }

    #[test]
    fn hermite_mu_zero_matches_classical_functions() {
        // μ = 0 gives the ordinary Hermite functions.
        let x: f64 = 0.83;
        let h = [1.0, 2.0 * x, 4.0 * x * x - 2.0, 8.0 * x.powi(3) - 12.0 * x];
        let seq = hermite_fn_sequence(3, 0.0, x).unwrap();
        for (k, hk) in h.iter().enumerate() {
            let norm = (2f64.powi(k as i32) * (1..=k).product::<usize>() as f64 * PI.sqrt()).sqrt();
            let want = hk * (-0.5 * x * x).exp() / norm;
            assert_relative_eq!(seq[k], want, max_relative = 1e-13);
        }
    }

    #[test]
    fn hermite_parity() {
        for mu in [-0.3, 0.0, 0.5, 2.0, 7.5] {
            for x in [0.05, 0.4, 1.3, 3.7] {
                let p = hermite_fn_sequence(30, mu, x).unwrap();
                let q = hermite_fn_sequence(30, mu, -x).unwrap();
                for k in 0..=30 {
                    let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                    assert_eq!(q[k], s * p[k]);
                }
            }
        }
    }

    #[test]
    fn bessel_f_values() {
        assert_eq!(bessel_f(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        // direct partial sums
        let mut s = 0.0;
        let mut fk = 1.0;
        for k in 0..30 {
            s += 1.0 / (fk * fk * (k as f64 + 1.0));
            fk *= k as f64 + 1.0;
        }
        let v = bessel_f(Complex64::new(1.0, 0.0));
        assert_relative_eq!(v.re, s, max_relative = 1e-15);
        assert_relative_eq!(v.re, 1.590_636_854_637_329, max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn hyp2f1_small_cases() {
        let z = Complex64::new(0.5, 0.0);
        assert_eq!(hyp2f1_terminating(0, 3.7, z), Complex64::new(1.0, 0.0));
        assert_relative_eq!(hyp2f1_terminating(1, -3.0, z).re, 1.75, epsilon = 1e-15);
        assert_eq!(hyp2f1_terminating(2, 1.2, Complex64::new(0.0, 0.0)).re, 1.0);
    }
}
