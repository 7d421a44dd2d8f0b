//! Project a canonical curve from a generic point and compute the Betti
//! table of the projected coordinate ring, comparing it with the bundled
//! reference table when one exists.
//!
//! cargo run --release --example projected_betti -- 9

use syzcurve::harness::fixtures::{diff, reference_table};
use syzcurve::harness::render::{render, Format};
use syzcurve::koszul::betti_table;
use syzcurve::{build_canonical_curve, project_generic, BettiOptions, CurveKind, FieldContext, Flavor, DEFAULT_PRIME};

fn main() -> syzcurve::Result<()> {
    let g: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(9);
    let ctx = FieldContext::new(DEFAULT_PRIME)?;
    let model = build_canonical_curve(g, &ctx, 1)?;
    let spec = project_generic(&model, 1)?;
    println!("projected from a point: dim V = {}", spec.dim_v());

    let table = betti_table(&ctx, &model, &spec.v, Flavor::Tilde, &BettiOptions::default())?;
    print!("{}", render(&table, Format::M2));
    println!("linear strand length: {:?}", table.linear_strand_length());

    match reference_table(CurveKind::Canonical, g) {
        Some(reference) => {
            let mismatches = diff(&reference, &table);
            println!("reference comparison: {} mismatched cells", mismatches.len());
        }
        None => println!("no reference table for genus {g}"),
    }
    Ok(())
}
