use clap::Parser;

use chiral_ensemble::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
