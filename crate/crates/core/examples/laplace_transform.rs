//! Closed-form Laplace transform of the scaled squared eigenvalues against
//! its limit.

use chiral_ensemble::*;
use num_complex::Complex64;

fn main() -> Result<()> {
    for c in [0.0, 1.0] {
        let law = LimitLaw::new(c)?;
        println!("c = {c}");
        println!("  {:>4}  {:>14}  {:>14}  {:>14}  {:>10}", "s", "n = 100", "n = 400", "limit", "n^2 gap");
        for s in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let s = Complex64::new(s, 0.0);
            let at = |n: usize| -> Result<f64> {
                Ok(laplace_tau_scaled(EnsembleParams::new(n, c * n as f64)?, s)?.re)
            };
            let limit = limit_laplace(law, s).re;
            let (g100, g400) = (at(100)?, at(400)?);
            println!(
                "  {:>4}  {g100:>14.8}  {g400:>14.8}  {limit:>14.8}  {:>10.2}",
                s.re,
                400.0f64.powi(2) * (g400 - limit).abs()
            );
        }
    }
    // Closed form for one block of the transform.
    let v = partial_laplace(3, 0.5, Complex64::new(-0.3, 0.7))?;
    println!("P(3, 0.5, -0.3+0.7i) = {v:.10}");
    Ok(())
}
