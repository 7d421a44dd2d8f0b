//! Is the ideal of a projected canonical curve generated by quadrics?
//! Compares V ⊗ I2 with I3 and probes the Jacobian of the quadrics.
//!
//! cargo run --release --example quadric_generation

use syzcurve::projection::quadric_generation_test;
use syzcurve::{build_canonical_curve, project_generic, FieldContext, DEFAULT_PRIME};

fn main() -> syzcurve::Result<()> {
    let ctx = FieldContext::new(DEFAULT_PRIME)?;
    for g in 7..=10 {
        let model = build_canonical_curve(g, &ctx, 1)?;
        let report = quadric_generation_test(&project_generic(&model, 1)?)?;
        let ranks: Vec<usize> = report.jacobian_ranks.iter().map(|&(_, r)| r).collect();
        println!(
            "g={g}: dim I2={:>3}  V⊗I2={:>4}  I3={:>4}  b12={:>2}  quadrics generate: {:<5}  jacobian ranks {:?}",
            report.dim_i2, report.dim_vi2, report.dim_i3, report.b12, report.generated_by_quadrics, ranks
        );
    }
    Ok(())
}
