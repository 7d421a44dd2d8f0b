//! Build a random canonical nodal curve, validate it, and print the
//! Betti table of its full canonical ring.
//!
//! cargo run --release --example canonical_curve -- 7

use syzcurve::curve::validate_model;
use syzcurve::harness::render::{render, Format};
use syzcurve::koszul::betti_table;
use syzcurve::{build_canonical_curve, BettiOptions, FieldContext, Flavor, DEFAULT_PRIME};

fn main() -> syzcurve::Result<()> {
    let g: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let ctx = FieldContext::new(DEFAULT_PRIME)?;
    let model = build_canonical_curve(g, &ctx, 1)?;

    println!("genus {g} over F_{}: {} nodes", ctx.modulus(), model.nodes.len());
    for check in validate_model(&model).checks {
        println!("  {:<22} {}  {}", check.name, if check.passed { "ok" } else { "--" }, check.detail);
    }

    let table = betti_table(&ctx, &model, &model.full_space(), Flavor::Full, &BettiOptions::default())?;
    println!("\nBetti table of the canonical ring:");
    print!("{}", render(&table, Format::M2));
    println!("regularity: {}", table.regularity()?);
    Ok(())
}
