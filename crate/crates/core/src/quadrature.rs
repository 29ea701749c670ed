//! Numerical integration used by the moment and CDF routines and by every
//! quadrature cross-check of a closed form.
//!
//! Two rules are provided. Composite Gauss–Legendre panels, refined by
//! doubling the panel count, handle smooth integrands. The tanh–sinh
//! (double exponential) rule handles integrable algebraic singularities at
//! the interval ends, such as `x^α` with `α > -1` or square-root edges.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Values a quadrature rule can accumulate: reals and complex numbers.
pub trait Quadrable:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Quadrable for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Quadrable for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel integral over `[a, b]`.
    pub fn integrate<T: Quadrable, F: Fn(f64) -> T>(&self, f: F, a: f64, b: f64) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * w;
        }
        acc * half
    }

    /// Sum over `panels` equal-width panels, accumulated left to right.
    pub fn composite<T: Quadrable, F: Fn(f64) -> T>(
        &self,
        f: F,
        a: f64,
        b: f64,
        panels: usize,
    ) -> T {
        let width = (b - a) / panels as f64;
        let mut acc = T::zero();
        for p in 0..panels {
            let lo = a + width * p as f64;
            let hi = if p + 1 == panels { b } else { lo + width };
            acc = acc + self.integrate(&f, lo, hi);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 20-point rule used by the adaptive driver.
pub fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Result of an adaptive integration: the estimate and the difference
/// between the last two refinements.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub change: f64,
    pub converged: bool,
}

const MAX_PANELS: usize = 1 << 15;

/// Composite 20-point Gauss–Legendre with panel doubling, starting from
/// `start_panels`, until successive estimates differ by at most
/// `tol * max(1, |I|)`.
pub fn adaptive_gl<T: Quadrable, F: Fn(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    start_panels: usize,
    tol: f64,
) -> Estimate<T> {
    let rule = gl20();
    let mut panels = start_panels.max(1);
    let mut prev = rule.composite(&f, a, b, panels);
    loop {
        panels *= 2;
        let next = rule.composite(&f, a, b, panels);
        let change = (next - prev).magnitude();
        let scale = next.magnitude().max(1.0);
        if change <= tol * scale {
            return Estimate { value: next, change, converged: true };
        }
        if panels >= MAX_PANELS {
            return Estimate { value: next, change, converged: false };
        }
        prev = next;
    }
}

/// Tanh–sinh quadrature on a finite interval. Nodes close to an endpoint
/// are placed using the exact distance to that endpoint, so integrands with
/// `x^α` behaviour at `a = 0` are sampled without cancellation.
pub fn tanh_sinh<T: Quadrable, F: Fn(f64) -> T>(f: F, a: f64, b: f64, tol: f64) -> Estimate<T> {
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> Option<T> {
        let s = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * s.abs()).exp();
        // 1 - tanh|s| and the derivative weight, both without overflow.
        let comp = 2.0 * e / (1.0 + e);
        if comp <= 0.0 {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        let x = if t < 0.0 { a + half * comp } else { b - half * comp };
        if x <= a || x >= b {
            return None;
        }
        Some(f(x) * (w * half))
    };
    let t_max = 6.5;
    let mut h = 0.5;
    // Level 0: all multiples of h.
    let mut sum = eval(0.0).unwrap_or(T::zero());
    let mut j = 1;
    while j as f64 * h <= t_max {
        let t = j as f64 * h;
        for v in [eval(t), eval(-t)].into_iter().flatten() {
            sum = sum + v;
        }
        j += 1;
    }
    let mut prev = sum * h;
    for level in 1..=12 {
        h *= 0.5;
        // Add the odd multiples of the new step.
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            for v in [eval(t), eval(-t)].into_iter().flatten() {
                sum = sum + v;
            }
            k += 2;
        }
        let next = sum * h;
        let change = (next - prev).magnitude();
        if level >= 3 && change <= tol * next.magnitude().max(1.0) {
            return Estimate { value: next, change, converged: true };
        }
        prev = next;
    }
    Estimate { value: prev, change: f64::NAN, converged: false }
}
