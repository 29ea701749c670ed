//! Tail of a Lipschitz linear statistic over independent draws against the
//! log-Sobolev bound.

use chiral_ensemble::*;

fn main() -> Result<()> {
    let config = SamplerConfig { sweeps: 501, burn_in: 500, thin: 1, chains: 200, seed: 3, ..SamplerConfig::default() };
    for n in [20, 50] {
        let params = EnsembleParams::new(n, n as f64)?;
        for f in ["clipped-identity", "sin"] {
            let out = concentration_check(params, &config, f, 0.05)?;
            println!(
                "n = {n:>3}, f = {f:<16} tail {:.3} (SE {:.3}), bound {:.3}, sqrt(n) bound {:.2e}, holds: {}",
                out.empirical_tail,
                out.standard_error,
                out.bound,
                out.sharp_bound,
                out.holds()
            );
        }
    }
    Ok(())
}
