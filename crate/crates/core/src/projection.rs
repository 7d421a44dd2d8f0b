//! Projection from a generic point and the quadric analyses of the image.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveKind, NodalCurveModel, RETRY_BUDGET};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::graded::{binomial, ideal_piece, multiplication_map, sym_basis, Flavor, IdealPiece, ModuleSlices, SectionSubspace};
use crate::koszul::{betti_table, ActionModule, BettiOptions, BettiTable, KoszulComplex, Strategy};
use crate::matrix::{kernel_basis, rank, FpMatrix};
use crate::poly;
use crate::rng::{self, Stream};

/// Number of curve points probed by [`quadric_generation_test`].
pub const JACOBIAN_PROBES: usize = 8;

/// A curve together with a generic hyperplane `V` of its sections.
#[derive(Clone, Debug)]
pub struct ProjectionSpec {
    pub model: NodalCurveModel,
    /// The dropped point, as a functional on section coordinates.
    pub center: Vec<u32>,
    pub v: SectionSubspace,
    pub seed: u64,
    /// Centers drawn before one passed validation.
    pub attempts: usize,
}

impl ProjectionSpec {
    pub fn ctx(&self) -> &FieldContext {
        &self.model.ctx
    }

    pub fn dim_v(&self) -> usize {
        self.v.dim()
    }

    /// Coordinates of the curve point with parameter `t` in the basis of `V`.
    pub fn point(&self, t: u32) -> Vec<u32> {
        let ctx = self.ctx();
        self.v.elements().iter().map(|f| poly::eval(ctx, f, t)).collect()
    }
}

/// Expected `dim I_2(V)` for a generic projection: `C(n + 1, 2) - (3g - 3)`,
/// clamped at zero when the quadrics cannot fill the degree-2 piece.
pub fn expected_quadrics(genus: usize, dim_v: usize) -> usize {
    binomial(dim_v + 1, 2).saturating_sub(3 * genus - 3)
}

/// Project from a random point of the dual space, resampling until the
/// image has the generic quadric count and degree-2 piece.
pub fn project_generic(model: &NodalCurveModel, seed: u64) -> Result<ProjectionSpec> {
    let ctx = model.ctx;
    let n = model.sections.count();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two sections to project".into()));
    }
    let mut rng = rng::stream(seed, Stream::Projection);
    let p = ctx.modulus();
    let g = model.genus;
    let want_ideal = expected_quadrics(g, n - 1);
    let want_slice = binomial(n, 2).min(3 * g - 3);
    let mut last = String::new();
    for attempt in 1..=RETRY_BUDGET {
        let center: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        if center.iter().all(|&c| c == 0) {
            continue;
        }
        let kernel = kernel_basis(&ctx, &FpMatrix::from_vec(1, n, center.clone()));
        let change = FpMatrix::from_vec(n - 1, n - 1, (0..(n - 1) * (n - 1)).map(|_| rng.gen_range(0..p)).collect());
        if rank(&ctx, &change) < n - 1 {
            continue;
        }
        let basis = model.sections.numerators.mul(&ctx, &kernel.mul(&ctx, &change));
        let v = SectionSubspace::new(g, basis, false);
        let image = rank(&ctx, &multiplication_map(&ctx, &v, 2));
        let ideal = binomial(n, 2) - image;
        if ideal == want_ideal && image == want_slice {
            return Ok(ProjectionSpec {
                model: model.clone(),
                center,
                v,
                seed,
                attempts: attempt,
            });
        }
        last = format!("dim I2 = {ideal} (want {want_ideal}), degree-2 piece {image} (want {want_slice})");
    }
    Err(Error::NoGenericCenter(format!("{RETRY_BUDGET} centers tried; last: {last}")))
}

/// Quadric counts, cubic generators and Jacobian probes of a projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricReport {
    pub kind: CurveKind,
    pub genus: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<u32>,
    pub prime: u32,
    pub seed: u64,
    pub dim_v: usize,
    #[serde(rename = "dim_I2")]
    pub dim_i2: usize,
    #[serde(rename = "dim_I3")]
    pub dim_i3: usize,
    #[serde(rename = "dim_VI2")]
    pub dim_vi2: usize,
    pub b12: u64,
    /// Ideal generated in degree 2; the Koszul and cokernel criteria agree.
    pub generated_by_quadrics: bool,
    /// `(curve parameter, rank)` per probe.
    pub jacobian_ranks: Vec<(u32, usize)>,
}

impl QuadricReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Image of `V ⊗ I_2 → Sym^3 V`, as a spanning set of cubic coefficient vectors.
pub fn linear_times_quadrics(ctx: &FieldContext, n: usize, quadrics: &IdealPiece) -> FpMatrix {
    let cubics = sym_basis(n, 3);
    let index: HashMap<&[usize], usize> = cubics.iter().enumerate().map(|(k, m)| (m.as_slice(), k)).collect();
    let mut columns = Vec::with_capacity(n * quadrics.dim());
    for q in 0..quadrics.dim() {
        for a in 0..n {
            let mut col = vec![0u32; cubics.len()];
            for (k, mono) in quadrics.monomials.iter().enumerate() {
                let c = quadrics.basis.get(k, q);
                if c == 0 {
                    continue;
                }
                let mut m = vec![a, mono[0], mono[1]];
                m.sort_unstable();
                let slot = index[m.as_slice()];
                col[slot] = ctx.add(col[slot], c);
            }
            columns.push(col);
        }
    }
    FpMatrix::from_columns(&columns, cubics.len())
}

/// `b̃_{1,2}` of the projected curve.
pub fn cubic_generators(spec: &ProjectionSpec) -> Result<u64> {
    let ctx = spec.ctx();
    let slices = ModuleSlices::build(ctx, &spec.model, &spec.v, Flavor::Tilde, 3);
    let complex = KoszulComplex::new(ctx, ActionModule::hyperplane_section(ctx, &slices)?);
    complex
        .betti(1, 2)
        .ok_or_else(|| Error::Internal("degree-3 piece missing".into()))
}

/// Rank of the Jacobian of `quadrics` at the curve point with parameter `t`.
pub fn jacobian_rank_at(spec: &ProjectionSpec, quadrics: &IdealPiece, t: u32) -> Result<usize> {
    let x = spec.point(t);
    if x.iter().all(|&c| c == 0) {
        return Err(Error::DegenerateSample(format!("curve parameter {t} maps to the zero vector")));
    }
    Ok(rank(spec.ctx(), &jacobian_matrix(spec.ctx(), quadrics, &x)))
}

/// Rows are quadrics, columns are partial derivatives at `x`.
pub fn jacobian_matrix(ctx: &FieldContext, quadrics: &IdealPiece, x: &[u32]) -> FpMatrix {
    let n = x.len();
    let mut m = FpMatrix::zeros(quadrics.dim(), n);
    for q in 0..quadrics.dim() {
        for (k, mono) in quadrics.monomials.iter().enumerate() {
            let c = quadrics.basis.get(k, q);
            if c == 0 {
                continue;
            }
            let (a, b) = (mono[0], mono[1]);
            if a == b {
                m.set(q, a, ctx.add(m.get(q, a), ctx.mul(ctx.mul(2, c), x[a])));
            } else {
                m.set(q, a, ctx.add(m.get(q, a), ctx.mul(c, x[b])));
                m.set(q, b, ctx.add(m.get(q, b), ctx.mul(c, x[a])));
            }
        }
    }
    m
}

/// Seeded curve parameters away from the nodes with nonzero image.
pub fn probe_parameters(spec: &ProjectionSpec, count: usize) -> Result<Vec<u32>> {
    let mut rng = rng::stream(spec.seed, Stream::Probes);
    let p = spec.ctx().modulus();
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > count * RETRY_BUDGET {
            return Err(Error::DegenerateSample("no admissible probe parameters".into()));
        }
        let t = rng.gen_range(1..p);
        let on_node = spec.model.nodes.iter().any(|&(a, b)| a == t || b == t);
        if on_node || out.contains(&t) || spec.point(t).iter().all(|&c| c == 0) {
            continue;
        }
        out.push(t);
    }
    Ok(out)
}

pub fn quadric_generation_test(spec: &ProjectionSpec) -> Result<QuadricReport> {
    let ctx = spec.ctx();
    let n = spec.dim_v();
    let i2 = ideal_piece(ctx, &spec.v, 2);
    let i3 = ideal_piece(ctx, &spec.v, 3);
    let dim_vi2 = rank(ctx, &linear_times_quadrics(ctx, n, &i2));
    let b12 = cubic_generators(spec)?;
    let by_cokernel = dim_vi2 == i3.dim();
    let by_koszul = b12 == 0;
    if by_cokernel != by_koszul || (i3.dim() - dim_vi2) as u64 != b12 {
        return Err(Error::Internal(format!(
            "cokernel of V⊗I2 → I3 has dim {} but b(1,2) = {b12}",
            i3.dim() - dim_vi2
        )));
    }
    let jacobian_ranks = if i2.dim() == 0 {
        Vec::new()
    } else {
        probe_parameters(spec, JACOBIAN_PROBES)?
            .into_iter()
            .map(|t| jacobian_rank_at(spec, &i2, t).map(|r| (t, r)))
            .collect::<Result<_>>()?
    };
    Ok(QuadricReport {
        kind: spec.model.kind(),
        genus: spec.model.genus,
        level: spec.model.level(),
        prime: ctx.modulus(),
        seed: spec.seed,
        dim_v: n,
        dim_i2: i2.dim(),
        dim_i3: i3.dim(),
        dim_vi2,
        b12,
        generated_by_quadrics: by_koszul,
        jacobian_ranks,
    })
}

/// The three Betti tables of one curve and one projection center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlavorComparison {
    pub full: BettiTable,
    pub s: BettiTable,
    pub tilde: BettiTable,
}

impl FlavorComparison {
    /// Linear strand lengths in the order full, S, tilde.
    pub fn strand_lengths(&self) -> [Option<usize>; 3] {
        [&self.full, &self.s, &self.tilde].map(BettiTable::linear_strand_length)
    }

    /// Whether row 2 vanishes in the first `m` columns, per flavor.
    pub fn second_row_vanishes(&self, m: usize) -> [bool; 3] {
        [&self.full, &self.s, &self.tilde].map(|t| (1..=m).all(|i| t.get(i, 2) == Some(0)))
    }
}

pub fn flavor_comparison(spec: &ProjectionSpec, opts: &BettiOptions) -> Result<FlavorComparison> {
    let ctx = spec.ctx();
    let table = |flavor| betti_table(ctx, &spec.model, &spec.v, flavor, opts);
    let (full, (s, tilde)) = rayon::join(
        || table(Flavor::Full),
        || rayon::join(|| table(Flavor::S), || table(Flavor::Tilde)),
    );
    Ok(FlavorComparison {
        full: full?,
        s: s?,
        tilde: tilde?,
    })
}

/// Projected-curve options covering the default rectangle.
pub fn default_options() -> BettiOptions {
    BettiOptions {
        strategy: Strategy::HyperplaneSection,
        ..BettiOptions::default()
    }
}
