//! One-point density, kernel and moments of the finite-n ensemble.

use chiral_ensemble::finite::log_normalization;
use chiral_ensemble::limit::uniform_grid;
use chiral_ensemble::*;

fn main() -> Result<()> {
    let params = EnsembleParams::new(20, 10.0)?;
    println!("n = {}, mu = {}", params.n(), params.mu());

    let grid = uniform_grid(-2.5, 2.5, 11);
    let curve = density_curve(params, &grid, Scaling::SqrtN);
    println!("sqrt(n)-scaled density:");
    for (t, v) in curve.abscissae.iter().zip(&curve.values) {
        println!("  t = {t:>5.2}  {v:.6}");
    }

    let fine = density_curve(params, &uniform_grid(-2.5, 2.5, 2001), Scaling::SqrtN);
    println!("trapezoid mass on [-2.5, 2.5]: {:.8}", fine.trapezoid_mass());

    for p in [0, 2, 4] {
        println!("moment {p}: {:.10}", moment(params, p)?);
    }
    println!("second moment should be n/2 + mu = {}", 0.5 * params.n() as f64 + params.mu());

    println!("K(1, 2) = {:.8}, K(1, 1) = {:.8}", kernel(params, 1.0, 2.0), kernel(params, 1.0, 1.0));
    println!("ln C_n = {:.8}", log_normalization(params));
    Ok(())
}
