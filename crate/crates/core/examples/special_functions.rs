//! Laguerre and generalized Hermite functions, the series `F` and the
//! terminating hypergeometric sum.

use chiral_ensemble::specfun::hermite_fn_sequence;
use chiral_ensemble::*;
use num_complex::Complex64;

fn main() -> Result<()> {
    let alpha = 0.5;
    println!("phi_k^{alpha}(x) for k = 0..5");
    for x in [0.1, 1.0, 5.0, 20.0] {
        let row = laguerre_fn_sequence(5, alpha, x)?;
        println!("  x = {x:>5}: {}", fmt_row(&row));
    }

    // Degree 2000 at x = 8000 stays finite thanks to the log-scaled recurrence.
    let far = laguerre_fn(LaguerreOrder::new(2000, alpha)?, 8000.0)?;
    println!("phi_2000^{alpha}(8000) = {far:.6e}");

    let mu = 1.5;
    println!("psi_k^{mu}(x) for k = 0..5");
    for x in [-1.2, 0.3, 2.0] {
        println!("  x = {x:>5}: {}", fmt_row(&hermite_fn_sequence(5, mu, x)?));
    }

    for z in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)] {
        println!("F({z}) = {:.15}", bessel_f(z).re);
    }
    println!("2F1(-3, -3.5; 2; 0.25) = {:.15}", hyp2f1_terminating(3, -3.5, Complex64::new(0.25, 0.0)).re);
    println!("ln Gamma(10.5) = {:.15}", log_gamma(10.5)?);
    Ok(())
}

fn fmt_row(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:>11.6}")).collect::<Vec<_>>().join(" ")
}
