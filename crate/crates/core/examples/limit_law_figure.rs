//! Writes the limit densities for c = 0, 0.1, 1 as CSV, the data behind the
//! usual three-curve plot. Output goes to the directory given as the first
//! argument, or the current directory.

use std::path::PathBuf;

use chiral_ensemble::cli::{cmd_limit, GridSpec};
use chiral_ensemble::*;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    let grid: GridSpec = "-2.2:2.2:1001".parse().map_err(Error::Config)?;
    for c in [0.0, 0.1, 1.0] {
        let law = LimitLaw::new(c)?;
        let out = dir.join(format!("limit_c{c}.csv"));
        cmd_limit(c, grid, &out)?;
        println!(
            "c = {c}: support ±[{:.4}, {:.4}], peak at |t| = {:.4}, written to {}",
            law.a(),
            law.b(),
            c.sqrt(),
            out.display()
        );
    }
    let law = LimitLaw::new(1.0)?;
    for p in [0.6, 0.9, 0.99] {
        println!("c = 1 quantile {p}: {:.6}", chiral_ensemble::limit::limit_quantile(law, p));
    }
    Ok(())
}
