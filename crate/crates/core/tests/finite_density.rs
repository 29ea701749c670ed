mod common;

use approx::assert_relative_eq;
use chiral_ensemble::finite::{log_normalization, scaled_cdf_on_grid};
use chiral_ensemble::*;
use common::{integrate, integrate_complex};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn p(n: usize, mu: f64) -> EnsembleParams {
    EnsembleParams::new(n, mu).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn params_validation_and_caps() {
    assert!(EnsembleParams::new(0, 0.0).is_err());
    assert!(EnsembleParams::new(3, -0.5).is_err());
    let q = p(1, 0.0);
    assert_eq!((q.m1(), q.m2()), (0, None));
    let q = p(6, 1.0);
    assert_eq!((q.m1(), q.m2()), (2, Some(2)));
    let q = p(7, 1.0);
    assert_eq!((q.m1(), q.m2()), (3, Some(2)));
}

#[test]
fn single_particle_density() {
    let want = (-0.25f64).exp() / PI.sqrt();
    assert_relative_eq!(density(p(1, 0.0), 0.5), want, max_relative = 1e-14);
    assert_relative_eq!(want, 0.439_391_3, epsilon = 1e-7);
}

#[test]
fn density_shape() {
    let q = p(9, 1.5);
    for x in [0.1, 0.8, 2.2, 4.0] {
        assert_eq!(density(q, x), density(q, -x));
        assert!(density(q, x) > 0.0);
    }
    assert_eq!(density(q, 0.0), 0.0);
    assert!(density(p(9, 0.0), 0.0) > 0.0);
}

#[test]
fn unit_mass_by_oracle() {
    for (n, mu) in [(20, 2.0), (1, 0.5), (7, 0.0), (33, 10.0)] {
        let q = p(n, mu);
        let mass = 2.0 * integrate(|x| density(q, x), 0.0, q.support_bound(), 1e-13);
        assert!((mass - 1.0).abs() <= 1e-8, "n={n} mu={mu}: {mass}");
    }
}

#[test]
fn kernel_symmetry_and_diagonal() {
    let q = p(11, 0.75);
    for (x, y) in [(0.3, -1.2), (2.0, 0.1), (-0.7, -3.3)] {
        assert_eq!(kernel(q, x, y), kernel(q, y, x));
    }
    for x in [0.05, 1.0, 2.7] {
        assert_relative_eq!(kernel(q, x, x), 11.0 * density(q, x), max_relative = 1e-10);
    }
}

#[test]
fn kernel_trace() {
    for n in [1, 4, 17, 30] {
        let q = p(n, 2.0);
        let trace = 2.0 * integrate(|x| kernel(q, x, x), 0.0, q.support_bound(), 1e-12);
        assert!((trace - n as f64).abs() <= 1e-6, "n={n}: {trace}");
    }
}

#[test]
fn kernel_reproduces_itself() {
    for (n, mu) in [(3, 0.0), (6, 1.0), (10, 0.4)] {
        let q = p(n, mu);
        let hi = q.support_bound();
        for (x, z) in [(0.4, -1.1), (1.5, 1.5), (-2.0, 0.7)] {
            let v = integrate(|y| kernel(q, x, y) * kernel(q, y, z), -hi, hi, 1e-13);
            assert!((v - kernel(q, x, z)).abs() <= 1e-6, "n={n} x={x} z={z}");
        }
    }
}

#[test]
fn moment_examples() {
    let q = p(10, 2.0);
    assert_eq!(moment(q, 1).unwrap(), 0.0);
    assert_eq!(moment(q, 7).unwrap(), 0.0);
    assert!((moment(q, 0).unwrap() - 1.0).abs() <= 1e-10);
    assert!((moment(q, 2).unwrap() - 7.0).abs() <= 1e-8);
    assert!(moment(q, 9).is_err());
}

/// Fourth moment against the oracle integrator.
#[test]
fn higher_moments_by_oracle() {
    for (n, mu) in [(4, 0.5), (15, 3.0)] {
        let q = p(n, mu);
        for order in [4, 6, 8] {
            let want = 2.0 * integrate(|x| x.powi(order) * density(q, x), 0.0, q.support_bound(), 1e-10);
            assert_relative_eq!(moment(q, order as u32).unwrap(), want, max_relative = 1e-10);
        }
    }
}

fn partial_laplace_oracle(m: usize, alpha: f64, s: Complex64) -> Complex64 {
    let decay = 1.0 - s.re;
    let hi = (60.0 + 8.0 * m as f64 + 2.0 * alpha.max(0.0)) / decay;
    let f = |x: f64| {
        let sum: f64 = laguerre_fn_sequence(m, alpha, x).unwrap().iter().map(|v| v * v).sum();
        (s * x).exp() * (sum * x)
    };
    integrate_complex(f, 0.0, hi, 1e-14)
}

#[test]
fn partial_laplace_examples() {
    assert_relative_eq!(partial_laplace(0, 0.0, c(0.0, 0.0)).unwrap().re, 1.0, epsilon = 1e-15);
    for (m, alpha) in [(0, 2.5), (3, -0.4), (7, 1.0)] {
        let v = partial_laplace(m, alpha, c(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, (m as f64 + 1.0) * (m as f64 + alpha + 1.0), max_relative = 1e-14);
    }
    let closed = partial_laplace(2, 1.5, c(-0.3, 0.0)).unwrap();
    let oracle = partial_laplace_oracle(2, 1.5, c(-0.3, 0.0));
    assert!((closed - oracle).norm() <= 1e-8 * oracle.norm());
    assert!(partial_laplace(2, 0.0, c(1.0, 0.0)).is_err());
}

#[test]
fn partial_laplace_against_oracle_grid() {
    for (m, alpha, s) in [
        (1, -0.4, c(0.5, 0.0)),
        (4, 0.5, c(-1.0, 2.0)),
        (6, 3.0, c(0.2, -0.4)),
        (10, 0.0, c(-2.5, 0.0)),
    ] {
        let closed = partial_laplace(m, alpha, s).unwrap();
        let oracle = partial_laplace_oracle(m, alpha, s);
        assert!((closed - oracle).norm() <= 1e-9 * oracle.norm(), "m={m} alpha={alpha} s={s}");
    }
}

fn tau_oracle(q: EnsembleParams, s: Complex64) -> Complex64 {
    let n = q.n() as f64;
    let hi = q.support_bound() / (1.0 - s.re.max(0.0) / n).sqrt() + 12.0;
    let f = |x: f64| {
        let h = density(q, x);
        if h == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (s * (x * x / n)).exp() * (2.0 * x * x * h)
        }
    };
    integrate_complex(f, 0.0, hi, 1e-13) / n
}

#[test]
fn laplace_tau_at_zero() {
    for (n, mu) in [(1, 0.0), (5, 1.5), (21, 4.0), (40, 0.25)] {
        let v = laplace_tau_scaled(p(n, mu), c(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, (0.5 * n as f64 + mu) / n as f64, max_relative = 1e-14);
        if n % 2 == 1 {
            let m = (n - 1) / 2;
            assert_relative_eq!(v.re, (m as f64 + mu + 0.5) / n as f64, max_relative = 1e-14);
        }
    }
}

#[test]
fn laplace_tau_against_oracle() {
    for (n, mu, s) in [(50, 10.0, c(5.0, 0.0)), (9, 0.5, c(-2.0, 0.0)), (12, 3.0, c(-0.5, 1.0)), (30, 0.0, c(15.0, 0.0))] {
        let q = p(n, mu);
        let closed = laplace_tau_scaled(q, s).unwrap();
        let oracle = tau_oracle(q, s);
        assert!((closed - oracle).norm() <= 1e-7 * oracle.norm(), "n={n} mu={mu} s={s}: {closed} vs {oracle}");
    }
    assert!(laplace_tau_scaled(p(10, 1.0), c(10.0, 0.0)).is_err());
}

#[test]
fn density_curve_scalings() {
    let q = p(16, 2.0);
    let grid: Vec<f64> = (0..=800).map(|i| -2.5 + 5.0 * i as f64 / 800.0).collect();
    let scaled = density_curve(q, &grid, Scaling::SqrtN);
    assert!((scaled.trapezoid_mass() - 1.0).abs() < 1e-3);
    for i in [0, 123, 400, 777] {
        assert_eq!(scaled.values[i], 4.0 * density(q, 4.0 * grid[i]));
        assert_relative_eq!(scaled.values[i], scaled.values[800 - i], max_relative = 1e-12);
    }
    let raw = density_curve(q, &grid, Scaling::Raw);
    assert_eq!(raw.values[300], density(q, grid[300]));
}

#[test]
fn scaled_cdf_is_monotone_and_matches_oracle() {
    let q = p(12, 3.0);
    let grid: Vec<f64> = (0..=60).map(|i| -3.0 + 0.1 * i as f64).collect();
    let cdf = scaled_cdf_on_grid(q, &grid, 0.02);
    assert!(cdf.windows(2).all(|w| w[1] >= w[0]));
    let root = 12f64.sqrt();
    for i in [5, 25, 31, 48] {
        let t = grid[i];
        let want = 0.5 + integrate(|x| root * density(q, root * x), 0.0, t, 1e-13);
        assert!((cdf[i] - want).abs() < 1e-11, "t={t}");
    }
}

/// `∫ e^{-Σx²} Π|x_k|^{2μ} Δ(x)² dx` by direct integration for `n = 1, 2`.
#[test]
fn normalization_small_n() {
    let mu = 1.0;
    // n = 1: Γ(μ + 1/2)
    let one = integrate(|x: f64| (-x * x).exp() * x.abs().powf(2.0 * mu), -12.0, 12.0, 1e-14);
    assert_relative_eq!(log_normalization(p(1, mu)), one.ln(), max_relative = 1e-12);
    // n = 2, μ = 1: 3π/4
    assert_relative_eq!(log_normalization(p(2, mu)), (0.75 * PI).ln(), max_relative = 1e-13);
    let two = integrate(
        |x: f64| integrate(|y: f64| (-x * x - y * y).exp() * (x * y).powi(2) * (x - y).powi(2), -9.0, 9.0, 1e-12),
        -9.0,
        9.0,
        1e-11,
    );
    assert_relative_eq!(two, 0.75 * PI, max_relative = 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_even_and_nonnegative(n in 1usize..40, mu in -0.45f64..8.0, x in -8.0f64..8.0) {
        let q = p(n, mu);
        let v = density(q, x);
        prop_assert!(v >= 0.0);
        prop_assert_eq!(v, density(q, -x));
    }

    #[test]
    fn laplace_tau_conjugate_symmetry(n in 1usize..30, mu in 0.0f64..5.0, re in -3.0f64..0.4, im in -3.0f64..3.0) {
        let q = p(n, mu);
        let a = laplace_tau_scaled(q, c(re, im)).unwrap();
        let b = laplace_tau_scaled(q, c(re, -im)).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-13 * a.norm().max(1.0));
    }
}
