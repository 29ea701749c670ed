//! Metropolis sampling of the eigenvalue gas and comparison with the limit
//! law.

use chiral_ensemble::sampler::{read_archive, write_archive};
use chiral_ensemble::*;

fn main() -> Result<()> {
    let (n, c) = (50, 1.0);
    let params = EnsembleParams::new(n, c * n as f64)?;
    let config = SamplerConfig { sweeps: 3000, chains: 4, seed: 7, ..SamplerConfig::default() };
    let draws = mcmc_sample(params, &config)?;
    println!("{} draws from {} chains", draws.len(), config.chains);
    println!("final acceptance rates: {:?}", last_rates(&draws, config.chains));

    let scale = 1.0 / (n as f64).sqrt();
    let cdf = empirical_cdf(&draws, scale);
    let law = LimitLaw::new(c)?;
    println!("KS distance to the limit law: {:.4}", cdf.ks_distance(|t| limit_cdf(law, t)));
    for t in [0.6, 1.0, 1.5] {
        println!("  F_emp({t}) = {:.4}, limit {:.4}", cdf.eval(t), limit_cdf(law, t));
    }

    let mut buf = Vec::new();
    write_archive(&mut buf, params, &draws[..3])?;
    let back = read_archive(buf.as_slice())?;
    println!("archive round trip: {} rows, first seed path {}", back.len(), back[0].seed_path);
    Ok(())
}

fn last_rates(draws: &[SpectrumDraw], chains: usize) -> Vec<String> {
    (0..chains)
        .filter_map(|k| draws.iter().rev().find(|d| d.seed_path.chain == k))
        .map(|d| format!("{:.3}", d.acceptance_rate))
        .collect()
}
