//! Runs the fast verification level and prints the report table.

use chiral_ensemble::verify::{run, Level};

fn main() {
    let report = run(Level::Fast);
    print!("{}", report.table());
    for c in report.failures() {
        println!("failed: {} ({})", c.name, c.detail);
    }
}
