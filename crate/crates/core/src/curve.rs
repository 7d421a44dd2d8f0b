//! Random g-nodal rational curves with their canonical or paracanonical
//! section spaces.
//!
//! The normalization is the projective line with affine parameter `t`. The
//! curve has nodes obtained by gluing `a_i` to `b_i`. With
//! `D(t) = prod_j (t - a_j)(t - b_j)`, a section of the (twisted) dualizing
//! sheaf is a form `f(t) dt / D(t)` with `deg f <= 2g - 2` whose residues at
//! each glued pair satisfy
//!
//! ```text
//! f(a_i) / D'(a_i) + zeta_i * f(b_i) / D'(b_i) = 0
//! ```
//!
//! where `zeta_i = 1` for the canonical series and an `l`-th root of unity
//! for a level-`l` twist. Sections are stored as their numerators `f`.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gcd, FieldContext};
use crate::graded::{Flavor, ModuleSlices, SectionSubspace};
use crate::matrix::{kernel_basis, rank, FpMatrix};
use crate::poly;
use crate::rng::{self, Stream};

/// Attempts per construction before giving up on a degenerate draw.
pub const RETRY_BUDGET: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Canonical,
    Paracanonical,
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveKind::Canonical => f.write_str("canonical"),
            CurveKind::Paracanonical => f.write_str("paracanonical"),
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "canonical" => Ok(CurveKind::Canonical),
            "paracanonical" => Ok(CurveKind::Paracanonical),
            other => Err(format!("unknown curve kind {other:?} (expected canonical or paracanonical)")),
        }
    }
}

/// Gluing data of a non-trivial torsion line bundle of exact level `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionTwist {
    pub level: u32,
    pub glue: Vec<u32>,
}

impl TorsionTwist {
    fn check(&self, ctx: &FieldContext) -> Result<()> {
        if self
            .glue
            .iter()
            .any(|&z| z == 0 || ctx.pow(z, self.level as u64) != 1)
        {
            return Err(Error::InvalidArgument(format!(
                "glue constants must be {}-th roots of unity",
                self.level
            )));
        }
        let lcm = self
            .glue
            .iter()
            .fold(1u64, |acc, &z| crate::field::lcm(acc, ctx.order(z)));
        if lcm != self.level as u64 {
            return Err(Error::InvalidArgument(format!(
                "glue constants generate level {lcm}, expected {}",
                self.level
            )));
        }
        Ok(())
    }
}

/// Numerators of a basis of the section space, one polynomial per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionBasis {
    pub numerators: FpMatrix,
}

impl SectionBasis {
    pub fn count(&self) -> usize {
        self.numerators.cols()
    }

    pub fn numerator(&self, k: usize) -> Vec<u32> {
        self.numerators.column(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalCurveModel {
    pub genus: usize,
    pub ctx: FieldContext,
    pub seed: u64,
    pub nodes: Vec<(u32, u32)>,
    pub twist: Option<TorsionTwist>,
    pub sections: SectionBasis,
}

impl NodalCurveModel {
    pub fn kind(&self) -> CurveKind {
        if self.twist.is_some() {
            CurveKind::Paracanonical
        } else {
            CurveKind::Canonical
        }
    }

    pub fn level(&self) -> Option<u32> {
        self.twist.as_ref().map(|t| t.level)
    }

    /// Length of a section numerator: `2g - 1` coefficients.
    pub fn numerator_len(&self) -> usize {
        2 * self.genus - 1
    }

    pub fn expected_section_count(&self) -> usize {
        match self.twist {
            None => self.genus,
            Some(_) => self.genus - 1,
        }
    }

    pub fn condition_matrix(&self) -> FpMatrix {
        condition_matrix(&self.ctx, &self.nodes, self.twist.as_ref())
    }

    /// The full section space as a subspace.
    pub fn full_space(&self) -> SectionSubspace {
        SectionSubspace::new(self.genus, self.sections.numerators.clone(), true)
    }
}

fn all_points(nodes: &[(u32, u32)]) -> Vec<u32> {
    nodes.iter().flat_map(|&(a, b)| [a, b]).collect()
}

/// `D'(x)` for a node parameter `x`: the product of `x - y` over the other
/// node parameters.
fn d_prime(ctx: &FieldContext, points: &[u32], x: u32) -> u32 {
    points
        .iter()
        .filter(|&&y| y != x)
        .fold(1, |acc, &y| ctx.mul(acc, ctx.sub(x, y)))
}

/// The residue functional of node `i` as a row vector on coefficient space
/// of polynomials of degree `<= 2g - 2`.
pub fn node_condition(
    ctx: &FieldContext,
    nodes: &[(u32, u32)],
    twist: Option<&TorsionTwist>,
    i: usize,
) -> Vec<u32> {
    let g = nodes.len();
    let points = all_points(nodes);
    let (a, b) = nodes[i];
    let da = d_prime(ctx, &points, a);
    let db = d_prime(ctx, &points, b);
    assert!(da != 0 && db != 0, "node parameters must be distinct");
    let zeta = twist.map_or(1, |t| t.glue[i]);
    let wa = ctx.inv(da).expect("nonzero");
    let wb = ctx.mul(zeta, ctx.inv(db).expect("nonzero"));
    let (mut pa, mut pb) = (1u32, 1u32);
    (0..2 * g - 1)
        .map(|_| {
            let v = ctx.add(ctx.mul(wa, pa), ctx.mul(wb, pb));
            pa = ctx.mul(pa, a);
            pb = ctx.mul(pb, b);
            v
        })
        .collect()
}

pub fn condition_matrix(
    ctx: &FieldContext,
    nodes: &[(u32, u32)],
    twist: Option<&TorsionTwist>,
) -> FpMatrix {
    let rows: Vec<Vec<u32>> = (0..nodes.len())
        .map(|i| node_condition(ctx, nodes, twist, i))
        .collect();
    FpMatrix::from_rows(&rows, 2 * nodes.len() - 1)
}

fn sample_nodes<R: Rng>(ctx: &FieldContext, g: usize, rng: &mut R) -> Vec<(u32, u32)> {
    let mut seen = BTreeSet::new();
    let mut pts = Vec::with_capacity(2 * g);
    while pts.len() < 2 * g {
        let x = rng.gen_range(1..ctx.modulus());
        if seen.insert(x) {
            pts.push(x);
        }
    }
    pts.chunks(2).map(|c| (c[0], c[1])).collect()
}

fn sample_twist<R: Rng>(ctx: &FieldContext, g: usize, level: u32, rng: &mut R) -> Result<TorsionTwist> {
    let zeta = ctx.primitive_root_of_unity(level)?;
    loop {
        let exps: Vec<u32> = (0..g).map(|_| rng.gen_range(0..level)).collect();
        // the orders generate level exactly iff the exponents have no common factor with it
        let common = exps.iter().fold(level as u64, |acc, &e| gcd(acc, e as u64));
        if common == 1 {
            let glue = exps.iter().map(|&e| ctx.pow(zeta, e as u64)).collect();
            return Ok(TorsionTwist { level, glue });
        }
    }
}

/// Random invertible change of basis applied to a column basis.
fn generic_basis<R: Rng>(ctx: &FieldContext, basis: &FpMatrix, rng: &mut R) -> FpMatrix {
    let n = basis.cols();
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..ctx.modulus())).collect();
        let change = FpMatrix::from_vec(n, n, data);
        if rank(ctx, &change) == n {
            return basis.mul(ctx, &change);
        }
    }
}

fn build(ctx: &FieldContext, g: usize, level: Option<u32>, seed: u64) -> Result<NodalCurveModel> {
    let mut rng = rng::stream(seed, Stream::Curve);
    let expected_rank = if level.is_some() { g } else { g - 1 };
    let mut last = String::new();
    for attempt in 0..RETRY_BUDGET {
        let nodes = sample_nodes(ctx, g, &mut rng);
        let twist = match level {
            Some(l) => Some(sample_twist(ctx, g, l, &mut rng)?),
            None => None,
        };
        let conditions = condition_matrix(ctx, &nodes, twist.as_ref());
        let r = rank(ctx, &conditions);
        if r != expected_rank {
            last = format!("attempt {attempt}: node conditions have rank {r}, expected {expected_rank}");
            continue;
        }
        let kernel = kernel_basis(ctx, &conditions);
        let numerators = generic_basis(ctx, &kernel, &mut rng);
        let model = NodalCurveModel {
            genus: g,
            ctx: *ctx,
            seed,
            nodes,
            twist,
            sections: SectionBasis { numerators },
        };
        let report = validate_model(&model);
        if report.required_passed() {
            return Ok(model);
        }
        last = format!("attempt {attempt}: {}", report.failures().join("; "));
    }
    Err(Error::DegenerateSample(format!(
        "genus {g}, p = {}, seed {seed}: retry budget of {RETRY_BUDGET} exhausted ({last})",
        ctx.modulus()
    )))
}

/// Canonical model: the section space has dimension `g`.
pub fn build_canonical_curve(g: usize, ctx: &FieldContext, seed: u64) -> Result<NodalCurveModel> {
    if g < 3 {
        return Err(Error::InvalidArgument(format!("genus must be at least 3, got {g}")));
    }
    if (ctx.modulus() as u64) <= 4 * g as u64 {
        return Err(Error::InvalidArgument(format!(
            "prime {} too small for genus {g} (need p > 4g)",
            ctx.modulus()
        )));
    }
    build(ctx, g, None, seed)
}

/// Paracanonical model of level `level`: the section space has dimension `g - 1`.
pub fn build_paracanonical_curve(
    g: usize,
    level: u32,
    ctx: &FieldContext,
    seed: u64,
) -> Result<NodalCurveModel> {
    if g < 6 {
        return Err(Error::InvalidArgument(format!(
            "paracanonical models need genus at least 6, got {g}"
        )));
    }
    if level < 2 {
        return Err(Error::InvalidArgument(format!("level must be at least 2, got {level}")));
    }
    if (ctx.modulus() as u64) <= 4 * g as u64 {
        return Err(Error::InvalidArgument(format!(
            "prime {} too small for genus {g} (need p > 4g)",
            ctx.modulus()
        )));
    }
    ctx.primitive_root_of_unity(level)?;
    build(ctx, g, Some(level), seed)
}

/// Coordinates `(x_0(t), ..., x_{n-1}(t))` of the point with affine parameter `t`.
pub fn evaluate_sections(model: &NodalCurveModel, t: u32) -> Result<Vec<u32>> {
    let ctx = &model.ctx;
    let v: Vec<u32> = (0..model.sections.count())
        .map(|k| poly::eval(ctx, &model.sections.numerator(k), t))
        .collect();
    if v.iter().all(|&x| x == 0) {
        return Err(Error::DegenerateSample(format!(
            "all sections vanish at parameter {t}"
        )));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Failed optional checks are reported without rejecting the model.
    pub required: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, passed: bool, required: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            required,
            detail,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn required_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks every model invariant and the dimensions of the degree 1, 2, 3
/// pieces of the embedded curve's coordinate ring.
///
/// The degree-t piece is expected to have dimension `(2t - 1)(g - 1)`. For
/// paracanonical models of genus below 7 projective normality is not
/// expected, so those checks are informational only.
pub fn validate_model(model: &NodalCurveModel) -> ValidationReport {
    let ctx = &model.ctx;
    let g = model.genus;
    let mut report = ValidationReport::default();

    let pts = all_points(&model.nodes);
    let distinct = pts.iter().collect::<BTreeSet<_>>().len() == pts.len();
    let nonzero = pts.iter().all(|&x| x != 0 && x < ctx.modulus());
    report.push(
        "nodes",
        model.nodes.len() == g && distinct && nonzero,
        true,
        format!("{} pairs, distinct={distinct}, nonzero={nonzero}", model.nodes.len()),
    );

    if let Some(t) = &model.twist {
        let res = t.check(ctx);
        report.push(
            "twist",
            res.is_ok() && t.glue.len() == g,
            true,
            res.err().map_or_else(|| format!("level {}", t.level), |e| e.to_string()),
        );
    }

    let count = model.sections.count();
    let expected = model.expected_section_count();
    report.push(
        "section count",
        count == expected,
        true,
        format!("{count} sections, expected {expected}"),
    );

    let numerators = &model.sections.numerators;
    let shape_ok = numerators.rows() == model.numerator_len();
    let independent = shape_ok && rank(ctx, numerators) == count;
    report.push(
        "independent sections",
        independent,
        true,
        format!("{} x {} numerator matrix", numerators.rows(), numerators.cols()),
    );

    let conditions = if shape_ok {
        model.condition_matrix().mul(ctx, numerators).is_zero()
    } else {
        false
    };
    report.push(
        "node conditions",
        conditions,
        true,
        "every numerator satisfies every residue condition".to_string(),
    );

    if !(shape_ok && independent && conditions) {
        return report;
    }

    let slices = ModuleSlices::build(ctx, model, &model.full_space(), Flavor::Full, 3);
    let projectively_normal = model.twist.is_none() || g >= 7;
    for t in 1..=3usize {
        let dim = slices.dim(t);
        let want = if t == 1 { count } else { (2 * t - 1) * (g - 1) };
        report.push(
            &format!("degree {t} piece"),
            dim == want,
            t == 1 || projectively_normal,
            format!("dim {dim}, expected {want}"),
        );
    }
    report
}

/// On-disk model document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub kind: CurveKind,
    pub genus: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<u32>,
    pub prime: u32,
    pub seed: u64,
    pub nodes: Vec<[u32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub glue: Option<Vec<u32>>,
    pub numerators: Vec<Vec<u32>>,
}

impl From<&NodalCurveModel> for ModelFile {
    fn from(m: &NodalCurveModel) -> Self {
        ModelFile {
            kind: m.kind(),
            genus: m.genus,
            level: m.level(),
            prime: m.ctx.modulus(),
            seed: m.seed,
            nodes: m.nodes.iter().map(|&(a, b)| [a, b]).collect(),
            glue: m.twist.as_ref().map(|t| t.glue.clone()),
            numerators: m.sections.numerators.columns(),
        }
    }
}

impl TryFrom<ModelFile> for NodalCurveModel {
    type Error = Error;

    fn try_from(f: ModelFile) -> Result<Self> {
        let ctx = FieldContext::new(f.prime)?;
        let twist = match (f.kind, f.level, f.glue) {
            (CurveKind::Canonical, None, None) => None,
            (CurveKind::Paracanonical, Some(level), Some(glue)) => Some(TorsionTwist { level, glue }),
            _ => {
                return Err(Error::Parse(
                    "kind, level and glue are inconsistent".to_string(),
                ))
            }
        };
        let len = 2 * f.genus - 1;
        if f.numerators.iter().any(|c| c.len() != len) {
            return Err(Error::Parse(format!("numerators must have {len} coefficients")));
        }
        let model = NodalCurveModel {
            genus: f.genus,
            ctx,
            seed: f.seed,
            nodes: f.nodes.iter().map(|n| (n[0], n[1])).collect(),
            twist,
            sections: SectionBasis {
                numerators: FpMatrix::from_columns(&f.numerators, len),
            },
        };
        Ok(model)
    }
}

impl NodalCurveModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModelFile::from(self)).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(s)?;
        NodalCurveModel::try_from(file)
    }
}
