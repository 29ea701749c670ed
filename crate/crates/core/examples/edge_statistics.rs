//! Largest and smallest scaled eigenvalues at c = 1 for growing n, against
//! the limit edge b and the sequence b_n.

use chiral_ensemble::sampler::independent_draws;
use chiral_ensemble::*;

fn main() -> Result<()> {
    let b = LimitLaw::new(1.0)?.b();
    println!("b = {b:.4}");
    println!("{:>5}  {:>16}  {:>16}  {:>8}", "n", "lambda_max/sqrt n", "-lambda_min/sqrt n", "b_n");
    for n in [20, 50, 100] {
        let params = EnsembleParams::new(n, n as f64)?;
        let config = SamplerConfig { sweeps: 1001, burn_in: 1000, thin: 1, chains: 64, seed: 1, ..SamplerConfig::default() };
        let draws = independent_draws(params, &config)?;
        let e = extreme_stats(&draws, 1.0 / (n as f64).sqrt());
        println!(
            "{n:>5}  {:>9.4} ± {:.4}  {:>9.4} ± {:.4}  {:>8.4}",
            e.largest.mean,
            e.largest.standard_error(),
            -e.smallest.mean,
            e.smallest.standard_error(),
            b_n_value(params)
        );
    }
    Ok(())
}
