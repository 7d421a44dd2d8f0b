//! The three module structures attached to one projection: the full ring,
//! the full ring over Sym V, and the projected ring over Sym V.
//!
//! cargo run --release --example flavor_comparison -- 8

use syzcurve::harness::render::{render, Format};
use syzcurve::projection::{default_options, flavor_comparison};
use syzcurve::{build_canonical_curve, project_generic, FieldContext, DEFAULT_PRIME};

fn main() -> syzcurve::Result<()> {
    let g: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let ctx = FieldContext::new(DEFAULT_PRIME)?;
    let model = build_canonical_curve(g, &ctx, 1)?;
    let spec = project_generic(&model, 1)?;
    let cmp = flavor_comparison(&spec, &default_options())?;

    for (name, table) in [("full", &cmp.full), ("S", &cmp.s), ("tilde", &cmp.tilde)] {
        println!("{name}:");
        print!("{}", render(table, Format::M2));
        println!();
    }
    println!("linear strand lengths (full, S, tilde): {:?}", cmp.strand_lengths());
    Ok(())
}
