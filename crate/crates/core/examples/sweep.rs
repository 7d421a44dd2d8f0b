//! A small batch: canonical genera 8 and 9 with two seeds each, checked
//! against the reference tables and for agreement across seeds.
//!
//! cargo run --release --example sweep

use syzcurve::harness::sweep::{run_sweep, SweepConfig};

fn main() -> syzcurve::Result<()> {
    let config = SweepConfig {
        genera: vec![8, 9],
        seeds: vec![1, 2],
        ..SweepConfig::default()
    };
    let summary = run_sweep(&config)?;
    print!("{}", summary.text());
    Ok(())
}
