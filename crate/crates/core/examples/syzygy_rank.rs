//! Rank of the extra syzygy in the linear strand of a projected canonical
//! curve of even genus.
//!
//! cargo run --release --example syzygy_rank -- 10

use syzcurve::koszul::extra_syzygy_rank;
use syzcurve::{build_canonical_curve, project_generic, FieldContext, DEFAULT_PRIME};

fn main() -> syzcurve::Result<()> {
    let g: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let ctx = FieldContext::new(DEFAULT_PRIME)?;
    let model = build_canonical_curve(g, &ctx, 1)?;
    let spec = project_generic(&model, 1)?;
    let position = g.div_ceil(2) - 2;

    let r = extra_syzygy_rank(&ctx, &model, &spec.v, position, 1)?;
    println!("genus {g}, position ({position}, 1): betti {}", r.betti);
    println!("sampled ranks: {:?}", r.samples);
    println!("rank {} of dim V = {} ({})", r.rank, r.dim_v, if r.maximal { "maximal" } else { "not maximal" });
    Ok(())
}
