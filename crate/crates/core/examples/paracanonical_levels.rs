//! Paracanonical curves twisted by torsion bundles of level 2 and 3 over a
//! prime admitting both, showing that the projected Betti table does not
//! depend on the level.
//!
//! cargo run --release --example paracanonical_levels -- 9

use syzcurve::field::smallest_prime_with_levels;
use syzcurve::harness::render::{render, Format};
use syzcurve::koszul::betti_table;
use syzcurve::{build_paracanonical_curve, project_generic, BettiOptions, FieldContext, Flavor};

fn main() -> syzcurve::Result<()> {
    let g: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(9);
    let ctx = FieldContext::new(smallest_prime_with_levels(10000, &[2, 3]))?;
    println!("working over F_{}", ctx.modulus());

    let mut tables = Vec::new();
    for level in [2, 3] {
        let model = build_paracanonical_curve(g, level, &ctx, 1)?;
        let spec = project_generic(&model, 1)?;
        let table = betti_table(&ctx, &model, &spec.v, Flavor::Tilde, &BettiOptions::default())?;
        println!("\nlevel {level}:");
        print!("{}", render(&table, Format::M2));
        tables.push(table);
    }
    println!("\ntables agree across levels: {}", tables[0].cells() == tables[1].cells());
    Ok(())
}
