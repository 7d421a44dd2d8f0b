//! Koszul differentials, Betti numbers and syzygy ranks.
//!
//! A graded module is handed to this layer as an [`ActionModule`]: the
//! dimensions of its graded pieces plus one matrix per basis vector of the
//! acting space and degree. Two constructions exist:
//!
//! * [`ActionModule::direct`] reads the action off the polynomial slices;
//! * [`ActionModule::hyperplane_section`] first divides by a linear form `h`.
//!   Every module here is torsion free (a product of nonzero polynomials is
//!   nonzero), so `h` is a nonzerodivisor and the graded Betti numbers of
//!   `M` over `Sym V` equal those of `M / hM` over `Sym(V / h)`. The
//!   quotient has one fewer variable and much smaller pieces.
//!
//! The differential `d_{i,j}: ∧^i ⊗ M_j → ∧^{i-1} ⊗ M_{j+1}` sends
//! `e_T ⊗ P` to `Σ_{t∈T} (-1)^{pos(t,T)} e_{T∖t} ⊗ v_t P`, with `pos` the
//! 0-based position in the sorted subset. Matrices are wedge-major: the row
//! of `e_{T'} ⊗ q` is `index(T') * dim M_{j+1} + q`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveKind, NodalCurveModel};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::graded::{binomial, Flavor, ModuleSlices, SectionSubspace, Slice};
use crate::matrix::{column_space, kernel_basis, rank, rank_dense, FpMatrix};
use crate::poly;
use crate::rng::{self, Stream};

/// Strictly increasing `i`-subsets of `{0..n-1}` in lexicographic order.
#[derive(Clone, Debug)]
pub struct WedgeIndex {
    n: usize,
    i: usize,
    combos: Vec<u32>,
    index: Vec<u32>,
}

impl WedgeIndex {
    pub fn new(n: usize, i: usize) -> WedgeIndex {
        assert!(n < 31, "wedge index supports n < 31");
        let mut combos = Vec::with_capacity(binomial(n, i));
        let mut current = Vec::with_capacity(i);
        fn walk(n: usize, i: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<u32>) {
            if current.len() == i {
                out.push(current.iter().fold(0u32, |m, &k| m | (1 << k)));
                return;
            }
            for k in start..n {
                if n - k < i - current.len() {
                    break;
                }
                current.push(k);
                walk(n, i, k + 1, current, out);
                current.pop();
            }
        }
        if i <= n {
            walk(n, i, 0, &mut current, &mut combos);
        }
        let mut index = vec![u32::MAX; 1 << n];
        for (k, &m) in combos.iter().enumerate() {
            index[m as usize] = k as u32;
        }
        WedgeIndex { n, i, combos, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.i
    }

    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }

    pub fn mask(&self, k: usize) -> u32 {
        self.combos[k]
    }

    pub fn subset(&self, k: usize) -> Vec<usize> {
        (0..self.n).filter(|&b| self.combos[k] >> b & 1 == 1).collect()
    }

    pub fn position(&self, mask: u32) -> Option<usize> {
        self.index
            .get(mask as usize)
            .filter(|&&k| k != u32::MAX)
            .map(|&k| k as usize)
    }
}

/// How Betti numbers are obtained from module slices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Koszul complex of the module itself.
    Direct,
    /// Koszul complex of the quotient by a general linear form.
    #[default]
    HyperplaneSection,
}

/// A finitely presented view of a graded module: piece dimensions and the
/// matrices of multiplication by each acting basis vector.
#[derive(Clone, Debug)]
pub struct ActionModule {
    n: usize,
    dims: Vec<usize>,
    /// `actions[j][k]` maps piece `j` to piece `j + 1`.
    actions: Vec<Vec<FpMatrix>>,
}

impl ActionModule {
    pub fn new(n: usize, dims: Vec<usize>, actions: Vec<Vec<FpMatrix>>) -> Result<ActionModule> {
        for (j, row) in actions.iter().enumerate() {
            if row.len() != n || j + 1 >= dims.len() {
                return Err(Error::InvalidArgument(format!("action data for degree {j} malformed")));
            }
            for a in row {
                if a.rows() != dims[j + 1] || a.cols() != dims[j] {
                    return Err(Error::InvalidArgument(format!(
                        "action matrix in degree {j} is {}x{}, expected {}x{}",
                        a.rows(),
                        a.cols(),
                        dims[j + 1],
                        dims[j]
                    )));
                }
            }
        }
        Ok(ActionModule { n, dims, actions })
    }

    pub fn direct(ctx: &FieldContext, slices: &ModuleSlices) -> Result<ActionModule> {
        let top = slices.top();
        let mut actions = Vec::with_capacity(top);
        for j in 0..top {
            let (src, dst) = (&slices.slices[j], &slices.slices[j + 1]);
            let mut row = Vec::with_capacity(slices.acting_dim());
            for v in &slices.acting {
                let cols = (0..src.dim())
                    .map(|c| {
                        dst.coordinates(ctx, &poly::mul(ctx, v, src.element(c)))
                            .ok_or_else(|| Error::Internal(format!("product leaves degree {} piece", j + 1)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                row.push(FpMatrix::from_columns(&cols, dst.dim()));
            }
            actions.push(row);
        }
        ActionModule::new(slices.acting_dim(), slices.hilbert_function(), actions)
    }

    /// Quotient by the first acting vector; the remaining ones act.
    pub fn hyperplane_section(ctx: &FieldContext, slices: &ModuleSlices) -> Result<ActionModule> {
        let n = slices.acting_dim();
        if n == 0 {
            return Err(Error::InvalidArgument("empty acting space".into()));
        }
        let h = &slices.acting[0];
        let quotients: Vec<Quotient> = (0..=slices.top())
            .map(|t| {
                let piece = &slices.slices[t];
                let image: Vec<Vec<u32>> = if t == 0 {
                    Vec::new()
                } else {
                    let prev = &slices.slices[t - 1];
                    (0..prev.dim()).map(|c| poly::mul(ctx, h, prev.element(c))).collect()
                };
                Quotient::new(ctx, piece, &image)
            })
            .collect();
        let mut actions = Vec::with_capacity(slices.top());
        for j in 0..slices.top() {
            let (src, dst) = (&quotients[j], &quotients[j + 1]);
            let mut row = Vec::with_capacity(n - 1);
            for v in &slices.acting[1..] {
                let cols = (0..src.dim())
                    .map(|c| dst.coordinates(ctx, &poly::mul(ctx, v, src.lift(c))))
                    .collect::<Result<Vec<_>>>()?;
                row.push(FpMatrix::from_columns(&cols, dst.dim()));
            }
            actions.push(row);
        }
        ActionModule::new(n - 1, quotients.iter().map(Quotient::dim).collect(), actions)
    }

    pub fn build(ctx: &FieldContext, slices: &ModuleSlices, strategy: Strategy) -> Result<ActionModule> {
        match strategy {
            Strategy::Direct => ActionModule::direct(ctx, slices),
            Strategy::HyperplaneSection => ActionModule::hyperplane_section(ctx, slices),
        }
    }

    pub fn acting_dim(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn action(&self, j: usize, k: usize) -> &FpMatrix {
        &self.actions[j][k]
    }

    /// The acting matrices commute wherever both composites are defined.
    /// Equivalent to `d ∘ d = 0` for every differential of the module.
    pub fn actions_commute(&self, ctx: &FieldContext) -> bool {
        (0..self.top().saturating_sub(1)).all(|j| {
            (0..self.n).all(|a| {
                (a + 1..self.n).all(|b| {
                    let ab = self.actions[j + 1][a].mul(ctx, &self.actions[j][b]);
                    let ba = self.actions[j + 1][b].mul(ctx, &self.actions[j][a]);
                    ab == ba
                })
            })
        })
    }

    /// Shape `(rows, cols)` of `d_{i,j}`.
    pub fn differential_shape(&self, i: usize, j: usize) -> (usize, usize) {
        let top = self.top();
        let rows = if i >= 1 && j < top { binomial(self.n, i - 1) * self.dims[j + 1] } else { 0 };
        let cols = if j <= top { binomial(self.n, i) * self.dims[j] } else { 0 };
        (rows, cols)
    }

    /// Row-major entries of `d_{i,j}`, or of its transpose.
    fn differential_entries(&self, ctx: &FieldContext, i: usize, j: usize, transposed: bool) -> Vec<u64> {
        let (rows, cols) = self.differential_shape(i, j);
        let mut data = vec![0u64; rows * cols];
        if rows == 0 || cols == 0 || i == 0 {
            return data;
        }
        let src = WedgeIndex::new(self.n, i);
        let dst = WedgeIndex::new(self.n, i - 1);
        let (d0, d1) = (self.dims[j], self.dims[j + 1]);
        for a in 0..src.len() {
            let mask = src.mask(a);
            let mut pos = 0;
            for t in 0..self.n {
                if mask >> t & 1 == 0 {
                    continue;
                }
                let b = dst.position(mask & !(1 << t)).expect("subset present");
                let block = &self.actions[j][t];
                let negate = pos % 2 == 1;
                for q in 0..d1 {
                    for c in 0..d0 {
                        let mut v = block.get(q, c);
                        if negate {
                            v = ctx.neg(v);
                        }
                        let (r, col) = (b * d1 + q, a * d0 + c);
                        if transposed {
                            data[col * rows + r] = v as u64;
                        } else {
                            data[r * cols + col] = v as u64;
                        }
                    }
                }
                pos += 1;
            }
        }
        data
    }

    pub fn differential(&self, ctx: &FieldContext, i: usize, j: usize) -> FpMatrix {
        let (rows, cols) = self.differential_shape(i, j);
        let data = self.differential_entries(ctx, i, j, false);
        FpMatrix::from_vec(rows, cols, data.into_iter().map(|v| v as u32).collect())
    }

    /// Rank of `d_{i,j}`, eliminating along the shorter side.
    pub fn differential_rank(&self, ctx: &FieldContext, i: usize, j: usize) -> usize {
        let (rows, cols) = self.differential_shape(i, j);
        if rows == 0 || cols == 0 || i == 0 {
            return 0;
        }
        let transposed = rows > cols;
        let data = self.differential_entries(ctx, i, j, transposed);
        if transposed {
            rank_dense(ctx, data, cols, rows)
        } else {
            rank_dense(ctx, data, rows, cols)
        }
    }
}

/// `M_t / U` for a subspace `U ⊆ M_t`, with coordinates read off residues.
struct Quotient {
    sub: Slice,
    rest: Slice,
}

impl Quotient {
    fn new(ctx: &FieldContext, piece: &Slice, image: &[Vec<u32>]) -> Quotient {
        let len = piece.len();
        let sub = Slice::from_spanning(ctx, len, image);
        let residues: Vec<Vec<u32>> = (0..piece.dim())
            .map(|c| reduce_by(ctx, &sub, piece.element(c)))
            .collect();
        Quotient {
            sub,
            rest: Slice::from_spanning(ctx, len, &residues),
        }
    }

    fn dim(&self) -> usize {
        self.rest.dim()
    }

    fn lift(&self, k: usize) -> &[u32] {
        self.rest.element(k)
    }

    fn coordinates(&self, ctx: &FieldContext, f: &[u32]) -> Result<Vec<u32>> {
        let r = reduce_by(ctx, &self.sub, f);
        self.rest
            .coordinates(ctx, &r)
            .ok_or_else(|| Error::Internal("product leaves the module".into()))
    }
}

fn reduce_by(ctx: &FieldContext, sub: &Slice, f: &[u32]) -> Vec<u32> {
    let mut r = f.to_vec();
    for (k, &c) in sub.pivots().iter().enumerate() {
        let coef = r[c];
        if coef == 0 {
            continue;
        }
        for (x, &y) in r.iter_mut().zip(sub.element(k)) {
            *x = ctx.sub(*x, ctx.mul(coef, y));
        }
    }
    r
}

/// Differential of the module given by `slices`, assembled directly.
pub fn koszul_differential(ctx: &FieldContext, slices: &ModuleSlices, i: usize, j: usize) -> Result<FpMatrix> {
    if j + 1 > slices.top() {
        return Err(Error::InvalidArgument(format!("slice {} not available", j + 1)));
    }
    Ok(ActionModule::direct(ctx, slices)?.differential(ctx, i, j))
}

/// Koszul complex of an [`ActionModule`] with memoized differential ranks.
/// Lazily computed `(rank, milliseconds)` per differential; `None` when skipped.
type RankCell = Arc<OnceLock<Option<(usize, f64)>>>;

pub struct KoszulComplex {
    ctx: FieldContext,
    module: ActionModule,
    max_entries: Option<usize>,
    ranks: Mutex<HashMap<(usize, usize), RankCell>>,
}

impl KoszulComplex {
    pub fn new(ctx: &FieldContext, module: ActionModule) -> KoszulComplex {
        KoszulComplex {
            ctx: *ctx,
            module,
            max_entries: None,
            ranks: Mutex::new(HashMap::new()),
        }
    }

    /// Differentials with more entries than `limit` are not assembled.
    pub fn with_entry_limit(mut self, limit: Option<usize>) -> KoszulComplex {
        self.max_entries = limit;
        self
    }

    pub fn module(&self) -> &ActionModule {
        &self.module
    }

    /// Rank of `d_{i,j}`; `None` when the matrix exceeds the entry limit.
    /// `j = -1` and out-of-range indices give the zero map.
    pub fn rank(&self, i: usize, j: isize) -> Option<usize> {
        self.timed_rank(i, j).map(|(r, _)| r)
    }

    /// Rank together with the milliseconds spent assembling and reducing.
    pub fn timed_rank(&self, i: usize, j: isize) -> Option<(usize, f64)> {
        if j < 0 {
            return Some((0, 0.0));
        }
        let j = j as usize;
        let cell = {
            let mut map = self.ranks.lock().expect("rank cache poisoned");
            map.entry((i, j)).or_default().clone()
        };
        *cell.get_or_init(|| {
            let (rows, cols) = self.module.differential_shape(i, j);
            if self.max_entries.is_some_and(|m| rows * cols > m) {
                return None;
            }
            let start = Instant::now();
            let r = self.module.differential_rank(&self.ctx, i, j);
            Some((r, start.elapsed().as_secs_f64() * 1e3))
        })
    }

    /// Milliseconds attributed to cell `(i, j)`: its two differentials.
    pub fn cell_millis(&self, i: usize, j: usize) -> Option<f64> {
        let (_, a) = self.timed_rank(i, j as isize)?;
        let (_, b) = self.timed_rank(i + 1, j as isize - 1)?;
        Some(a + b)
    }

    /// `b_{i,j} = C(n,i) dim M_j - rank d_{i,j} - rank d_{i+1,j-1}`.
    pub fn betti(&self, i: usize, j: usize) -> Option<u64> {
        let n = self.module.acting_dim();
        if j + 1 > self.module.top() {
            return None;
        }
        let chain = binomial(n, i) * self.module.dims()[j];
        let out = self.rank(i, j as isize)?;
        let inc = self.rank(i + 1, j as isize - 1)?;
        Some((chain - out - inc) as u64)
    }

    /// Checks `d_{i-1,j+1} ∘ d_{i,j} = 0` on the assembled matrices.
    pub fn composition_vanishes(&self, i: usize, j: usize) -> bool {
        if i == 0 || j + 2 > self.module.top() {
            return true;
        }
        let first = self.module.differential(&self.ctx, i, j);
        let second = self.module.differential(&self.ctx, i - 1, j + 1);
        if first.rows() == 0 || first.cols() == 0 || second.rows() == 0 {
            return true;
        }
        second.mul(&self.ctx, &first).is_zero()
    }
}

/// Betti number of a module given by polynomial slices, via the direct route.
pub fn betti_number(ctx: &FieldContext, slices: &ModuleSlices, i: usize, j: usize) -> Result<u64> {
    let complex = KoszulComplex::new(ctx, ActionModule::direct(ctx, slices)?);
    complex
        .betti(i, j)
        .ok_or_else(|| Error::InvalidArgument(format!("slice {} not available", j + 1)))
}

/// Parameters of a Betti table computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiOptions {
    /// Largest homological index; defaults to the acting-space dimension.
    pub i_max: Option<usize>,
    pub j_max: usize,
    pub strategy: Strategy,
    /// Skip differentials with more entries than this.
    pub max_entries: Option<usize>,
}

impl Default for BettiOptions {
    fn default() -> Self {
        BettiOptions {
            i_max: None,
            j_max: 4,
            strategy: Strategy::default(),
            max_entries: None,
        }
    }
}

/// Graded Betti numbers on a computed region; absent cells are unreported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub flavor: Flavor,
    pub genus: usize,
    pub level: Option<u32>,
    pub prime: Option<u32>,
    pub seed: Option<u64>,
    /// Dimension of the acting space (number of variables).
    pub acting_dim: usize,
    cells: BTreeMap<(usize, usize), u64>,
}

impl BettiTable {
    pub fn new(flavor: Flavor, genus: usize, level: Option<u32>, acting_dim: usize) -> BettiTable {
        BettiTable {
            flavor,
            genus,
            level,
            prime: None,
            seed: None,
            acting_dim,
            cells: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, i: usize, j: usize, value: u64) {
        self.cells.insert((i, j), value);
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u64> {
        self.cells.get(&(i, j)).copied()
    }

    pub fn is_computed(&self, i: usize, j: usize) -> bool {
        self.cells.contains_key(&(i, j))
    }

    pub fn cells(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.cells
    }

    /// Computed cells grouped by total degree `i + j` are not needed here;
    /// this is the rectangle hull of the computed region.
    pub fn extent(&self) -> Option<(usize, usize)> {
        let i = self.cells.keys().map(|k| k.0).max()?;
        let j = self.cells.keys().map(|k| k.1).max()?;
        Some((i, j))
    }

    /// True when every cell `(i, j)` with `i ≤ acting_dim` is computed.
    pub fn row_complete(&self, j: usize) -> bool {
        (0..=self.acting_dim).all(|i| self.is_computed(i, j))
    }

    /// Last nonzero row, provided every row past it up to the last computed
    /// row is complete and at least one such row exists.
    pub fn regularity(&self) -> Result<usize> {
        let (_, j_top) = self
            .extent()
            .ok_or_else(|| Error::Undetermined("empty table".into()))?;
        let last = self
            .cells
            .iter()
            .filter(|(_, &v)| v != 0)
            .map(|(&(_, j), _)| j)
            .max()
            .unwrap_or(0);
        if last >= j_top || !(0..=j_top).all(|j| self.row_complete(j)) {
            return Err(Error::Undetermined(format!(
                "rows 0..={j_top} do not certify a vanishing row after row {last}"
            )));
        }
        Ok(last)
    }

    /// Largest `i` with `b_{i,1} ≠ 0`; `None` if row 1 is incomplete.
    pub fn linear_strand_length(&self) -> Option<usize> {
        if !self.row_complete(1) {
            return None;
        }
        Some(
            (0..=self.acting_dim)
                .filter(|&i| self.get(i, 1).unwrap_or(0) != 0)
                .max()
                .unwrap_or(0),
        )
    }

    /// `b_{i,j} = 0` for `1 ≤ i ≤ m` and every computed row `j ≥ 2`.
    /// Unreported cells count as not certified.
    pub fn property_n_tilde(&self, m: usize) -> bool {
        let Some((_, j_top)) = self.extent() else {
            return false;
        };
        (1..=m).all(|i| (2..=j_top.max(2)).all(|j| self.get(i, j) == Some(0)))
    }

    /// Largest `m` for which [`property_n_tilde`](Self::property_n_tilde) holds.
    pub fn n_tilde_holds_up_to(&self) -> usize {
        (1..=self.acting_dim)
            .take_while(|&m| self.property_n_tilde(m))
            .last()
            .unwrap_or(0)
    }

    /// Alternating sums along antidiagonals against the Hilbert function.
    /// Returns `(d, lhs, rhs)` for every fully computed total degree `d`
    /// covered by `hilbert`.
    pub fn euler_sums(&self, hilbert: &[usize]) -> Vec<(usize, i64, i64)> {
        let n = self.acting_dim;
        let mut out = Vec::new();
        for d in 0..hilbert.len() {
            let indices: Vec<usize> = (0..=d.min(n)).collect();
            if !indices.iter().all(|&i| self.is_computed(i, d - i)) {
                continue;
            }
            let lhs: i64 = indices
                .iter()
                .map(|&i| sign(i) * self.get(i, d - i).unwrap_or(0) as i64)
                .sum();
            let rhs: i64 = indices
                .iter()
                .map(|&i| sign(i) * (binomial(n, i) * hilbert[d - i]) as i64)
                .sum();
            out.push((d, lhs, rhs));
        }
        out
    }

    pub fn euler_identity_holds(&self, hilbert: &[usize]) -> bool {
        self.euler_sums(hilbert).iter().all(|&(_, l, r)| l == r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&BettiTableJson::from(self)).expect("table serializes")
    }
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// One cell of the serialized table. Zero cells certify generic vanishing;
/// nonzero cells bound the generic value from above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub i: usize,
    pub j: usize,
    pub value: u64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTableJson {
    pub flavor: Flavor,
    pub genus: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prime: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub acting_dim: usize,
    pub cells: Vec<CellJson>,
    pub regularity: Option<usize>,
    pub linear_strand_length: Option<usize>,
}

impl From<&BettiTable> for BettiTableJson {
    fn from(t: &BettiTable) -> Self {
        BettiTableJson {
            flavor: t.flavor,
            genus: t.genus,
            level: t.level,
            prime: t.prime,
            seed: t.seed,
            acting_dim: t.acting_dim,
            cells: t
                .cells
                .iter()
                .map(|(&(i, j), &value)| CellJson { i, j, value, certified: value == 0 })
                .collect(),
            regularity: t.regularity().ok(),
            linear_strand_length: t.linear_strand_length(),
        }
    }
}

impl From<BettiTableJson> for BettiTable {
    fn from(t: BettiTableJson) -> Self {
        BettiTable {
            flavor: t.flavor,
            genus: t.genus,
            level: t.level,
            prime: t.prime,
            seed: t.seed,
            acting_dim: t.acting_dim,
            cells: t.cells.into_iter().map(|c| ((c.i, c.j), c.value)).collect(),
        }
    }
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BettiTableJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        BettiTableJson::deserialize(d).map(BettiTable::from)
    }
}

/// Betti table of one module flavor over `model`.
///
/// `space` is the projected section space (ignored for [`Flavor::Full`]).
/// Cells whose differentials exceed `opts.max_entries` are left unreported.
pub fn betti_table(
    ctx: &FieldContext,
    model: &NodalCurveModel,
    space: &SectionSubspace,
    flavor: Flavor,
    opts: &BettiOptions,
) -> Result<BettiTable> {
    betti_table_timed(ctx, model, space, flavor, opts).map(|(t, _)| t)
}

/// Milliseconds per computed cell.
pub type CellTimings = BTreeMap<(usize, usize), f64>;

/// [`betti_table`] plus the time attributed to each cell.
pub fn betti_table_timed(
    ctx: &FieldContext,
    model: &NodalCurveModel,
    space: &SectionSubspace,
    flavor: Flavor,
    opts: &BettiOptions,
) -> Result<(BettiTable, CellTimings)> {
    if opts.j_max < 2 {
        return Err(Error::InvalidArgument("j_max must be at least 2".into()));
    }
    let slices = ModuleSlices::build(ctx, model, space, flavor, opts.j_max + 1);
    let n = slices.acting_dim();
    let i_max = opts.i_max.unwrap_or(n);
    if i_max > slices.dim(1).max(n) {
        return Err(Error::InvalidArgument(format!(
            "i_max {i_max} exceeds the degree-one piece dimension {}",
            slices.dim(1)
        )));
    }
    let module = ActionModule::build(ctx, &slices, opts.strategy)?;
    let complex = KoszulComplex::new(ctx, module).with_entry_limit(opts.max_entries);

    let mut needed: Vec<(usize, isize)> = Vec::new();
    for j in 0..=opts.j_max {
        for i in 0..=i_max {
            needed.push((i, j as isize));
            needed.push((i + 1, j as isize - 1));
        }
    }
    needed.sort_unstable();
    needed.dedup();
    needed.par_iter().for_each(|&(i, j)| {
        complex.rank(i, j);
    });

    let mut table = BettiTable::new(flavor, model.genus, model.level(), n);
    table.prime = Some(ctx.modulus());
    table.seed = Some(model.seed);
    let mut timings = CellTimings::new();
    for j in 0..=opts.j_max {
        for i in 0..=i_max {
            if i > n {
                table.insert(i, j, 0);
            } else if let Some(b) = complex.betti(i, j) {
                table.insert(i, j, b);
                timings.insert((i, j), complex.cell_millis(i, j).unwrap_or(0.0));
            }
        }
    }

    if flavor == Flavor::Tilde && model.kind() == CurveKind::Canonical && !space.is_full() {
        if let Some((&(i, j), &v)) = table.cells.iter().find(|(&(_, j), &v)| j >= 4 && v != 0) {
            return Err(Error::DegenerateSample(format!(
                "b({i},{j}) = {v} exceeds the regularity bound of a projected canonical curve"
            )));
        }
    }
    Ok((table, timings))
}

/// An element of `∧^p V ⊗ M_1` in wedge-major layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyClass {
    pub position: usize,
    /// Dimension of `V`.
    pub n: usize,
    /// Dimension of the degree-one piece.
    pub fiber: usize,
    pub representative: Vec<u32>,
}

impl SyzygyClass {
    /// Columns `ι_{e_k^*} γ` for the dual basis of `V`.
    pub fn contraction_matrix(&self, ctx: &FieldContext) -> FpMatrix {
        let p = self.position;
        let src = WedgeIndex::new(self.n, p);
        let dst = WedgeIndex::new(self.n, p.saturating_sub(1));
        let rows = dst.len() * self.fiber;
        let mut m = FpMatrix::zeros(rows, self.n);
        if p == 0 {
            return m;
        }
        for a in 0..src.len() {
            let mask = src.mask(a);
            let mut pos = 0;
            for k in 0..self.n {
                if mask >> k & 1 == 0 {
                    continue;
                }
                let b = dst.position(mask & !(1 << k)).expect("subset present");
                for w in 0..self.fiber {
                    let mut v = self.representative[a * self.fiber + w];
                    if pos % 2 == 1 {
                        v = ctx.neg(v);
                    }
                    let r = b * self.fiber + w;
                    m.set(r, k, ctx.add(m.get(r, k), v));
                }
                pos += 1;
            }
        }
        m
    }

    /// `dim V` minus the dimension of the forms whose contraction kills `γ`.
    pub fn rank(&self, ctx: &FieldContext) -> usize {
        rank(ctx, &self.contraction_matrix(ctx))
    }
}

/// Outcome of [`extra_syzygy_rank`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyRank {
    pub position: usize,
    pub betti: u64,
    pub dim_v: usize,
    /// Minimum over the sampled representatives.
    pub rank: usize,
    pub samples: Vec<usize>,
    pub maximal: bool,
}

/// Number of coboundary-shifted representatives sampled.
pub const SYZYGY_SAMPLES: usize = 16;

/// Rank of a class in `K̃_{p,1}` of the projected curve.
pub fn extra_syzygy_rank(
    ctx: &FieldContext,
    model: &NodalCurveModel,
    space: &SectionSubspace,
    position: usize,
    seed: u64,
) -> Result<SyzygyRank> {
    let slices = ModuleSlices::build(ctx, model, space, Flavor::Tilde, 2);
    let module = ActionModule::direct(ctx, &slices)?;
    let n = module.acting_dim();
    if position == 0 || position > n {
        return Err(Error::InvalidArgument(format!("position {position} outside 1..={n}")));
    }
    let cycles = kernel_basis(ctx, &module.differential(ctx, position, 1));
    let boundaries = column_space(ctx, &module.differential(ctx, position + 1, 0));
    let betti = (cycles.cols() - boundaries.cols()) as u64;
    if betti == 0 {
        return Err(Error::NoExtraSyzygy(position));
    }

    let mut rng = rng::stream(seed, Stream::Syzygy);
    let len = cycles.rows();
    let mut gamma = None;
    for _ in 0..crate::curve::RETRY_BUDGET {
        let coeffs: Vec<u32> = (0..cycles.cols()).map(|_| rng.gen_range(0..ctx.modulus())).collect();
        let candidate = cycles.mul_vec(ctx, &coeffs);
        let stacked = boundaries.hstack(&FpMatrix::from_columns(std::slice::from_ref(&candidate), len));
        if rank(ctx, &stacked) > boundaries.cols() {
            gamma = Some(candidate);
            break;
        }
    }
    let gamma = gamma.ok_or_else(|| Error::DegenerateSample("no cycle outside the boundaries".into()))?;

    let mut samples = Vec::with_capacity(SYZYGY_SAMPLES);
    for s in 0..SYZYGY_SAMPLES {
        let mut rep = gamma.clone();
        if s > 0 && boundaries.cols() > 0 {
            let coeffs: Vec<u32> = (0..boundaries.cols()).map(|_| rng.gen_range(0..ctx.modulus())).collect();
            let shift = boundaries.mul_vec(ctx, &coeffs);
            rep.iter_mut().zip(&shift).for_each(|(x, &y)| *x = ctx.add(*x, y));
        }
        let class = SyzygyClass {
            position,
            n,
            fiber: module.dims()[1],
            representative: rep,
        };
        samples.push(class.rank(ctx));
    }
    let min = *samples.iter().min().expect("at least one sample");
    Ok(SyzygyRank {
        position,
        betti,
        dim_v: n,
        rank: min,
        samples,
        maximal: min == n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_canonical_curve, build_paracanonical_curve};
    use crate::field::smallest_prime_with_levels;
    use crate::graded::tests::hyperplane;

    fn ctx() -> FieldContext {
        FieldContext::new(10007).unwrap()
    }

    #[test]
    fn wedge_index_is_lexicographic() {
        let w = WedgeIndex::new(4, 2);
        let subsets: Vec<Vec<usize>> = (0..w.len()).map(|k| w.subset(k)).collect();
        assert_eq!(
            subsets,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(w.position(0b1010), Some(4));
        assert_eq!(w.position(0b0111), None);
        assert_eq!(WedgeIndex::new(5, 0).len(), 1);
        assert_eq!(WedgeIndex::new(3, 4).len(), 0);
    }

    #[test]
    fn genus_six_differential_shape() {
        let ctx = ctx();
        let model = build_canonical_curve(6, &ctx, 3).unwrap();
        let v = hyperplane(&model, 3);
        let slices = ModuleSlices::build(&ctx, &model, &v, Flavor::Tilde, 2);
        let d = koszul_differential(&ctx, &slices, 2, 1).unwrap();
        assert_eq!((d.rows(), d.cols()), (75, 50));
        let d10 = koszul_differential(&ctx, &slices, 1, 0).unwrap();
        assert_eq!(rank(&ctx, &d10), 5);
    }

    #[test]
    fn compositions_vanish() {
        let ctx = ctx();
        let model = build_canonical_curve(7, &ctx, 1).unwrap();
        let v = hyperplane(&model, 1);
        for flavor in [Flavor::Full, Flavor::S, Flavor::Tilde] {
            let slices = ModuleSlices::build(&ctx, &model, &v, flavor, 4);
            for strategy in [Strategy::Direct, Strategy::HyperplaneSection] {
                let module = ActionModule::build(&ctx, &slices, strategy).unwrap();
                assert!(module.actions_commute(&ctx));
                let complex = KoszulComplex::new(&ctx, module);
                for i in 1..=4 {
                    for j in 0..=2 {
                        assert!(complex.composition_vanishes(i, j), "{flavor} {strategy:?} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn routes_agree() {
        let ctx = ctx();
        let opts = |strategy| BettiOptions { j_max: 3, strategy, ..BettiOptions::default() };
        for g in 6..=8 {
            let model = build_canonical_curve(g, &ctx, 11).unwrap();
            let v = hyperplane(&model, 11);
            for flavor in [Flavor::Full, Flavor::S, Flavor::Tilde] {
                let a = betti_table(&ctx, &model, &v, flavor, &opts(Strategy::Direct)).unwrap();
                let b = betti_table(&ctx, &model, &v, flavor, &opts(Strategy::HyperplaneSection)).unwrap();
                assert_eq!(a, b, "g={g} {flavor}");
            }
        }
        let p = smallest_prime_with_levels(10000, &[2]);
        let pctx = FieldContext::new(p).unwrap();
        let model = build_paracanonical_curve(8, 2, &pctx, 4).unwrap();
        let v = hyperplane(&model, 4);
        let a = betti_table(&pctx, &model, &v, Flavor::Tilde, &opts(Strategy::Direct)).unwrap();
        let b = betti_table(&pctx, &model, &v, Flavor::Tilde, &opts(Strategy::HyperplaneSection)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn genus_six_projected_table() {
        let ctx = ctx();
        let model = build_canonical_curve(6, &ctx, 2).unwrap();
        let v = hyperplane(&model, 2);
        let t = betti_table(&ctx, &model, &v, Flavor::Tilde, &BettiOptions::default()).unwrap();
        let expected = [((0, 0), 1), ((1, 2), 10), ((2, 2), 15), ((3, 2), 6), ((4, 2), 1), ((3, 3), 1)];
        for (&(i, j), &value) in t.cells() {
            let want = expected.iter().find(|e| e.0 == (i, j)).map_or(0, |e| e.1);
            assert_eq!(value, want, "cell ({i},{j})");
        }
        assert_eq!(t.regularity().unwrap(), 3);
        assert!(!t.property_n_tilde(1));
        let slices = ModuleSlices::build(&ctx, &model, &v, Flavor::Tilde, 5);
        assert!(t.euler_identity_holds(&slices.hilbert_function()));
        assert_eq!(t.euler_sums(&slices.hilbert_function()).len(), 5);
    }

    #[test]
    fn canonical_ring_shape() {
        let ctx = ctx();
        let model = build_canonical_curve(7, &ctx, 5).unwrap();
        let v = model.full_space();
        let t = betti_table(&ctx, &model, &v, Flavor::Full, &BettiOptions::default()).unwrap();
        // last syzygy module is S(-g-1)
        assert_eq!(t.regularity().unwrap(), 3);
        assert_eq!(t.get(5, 3), Some(1));
        assert_eq!(t.linear_strand_length(), Some(2));
        // Gorenstein symmetry b_{i,j} = b_{g-2-i,3-j}
        for i in 0..=5 {
            for j in 0..=3 {
                assert_eq!(t.get(i, j), t.get(5 - i, 3 - j), "({i},{j})");
            }
        }
    }

    #[test]
    fn rank_is_orientation_independent() {
        let ctx = ctx();
        let model = build_canonical_curve(7, &ctx, 8).unwrap();
        let v = hyperplane(&model, 8);
        let slices = ModuleSlices::build(&ctx, &model, &v, Flavor::Tilde, 3);
        let module = ActionModule::direct(&ctx, &slices).unwrap();
        for (i, j) in [(2, 1), (3, 1), (2, 2), (4, 2)] {
            let d = module.differential(&ctx, i, j);
            assert_eq!(module.differential_rank(&ctx, i, j), rank(&ctx, &d.transpose()));
        }
    }

    #[test]
    fn entry_limit_leaves_cells_unreported() {
        let ctx = ctx();
        let model = build_canonical_curve(6, &ctx, 2).unwrap();
        let v = hyperplane(&model, 2);
        let opts = BettiOptions { max_entries: Some(200), strategy: Strategy::Direct, ..Default::default() };
        let t = betti_table(&ctx, &model, &v, Flavor::Tilde, &opts).unwrap();
        assert!(t.is_computed(0, 0));
        assert!(!t.is_computed(2, 2));
        assert!(t.regularity().is_err());
        assert!(!t.property_n_tilde(1) || t.get(1, 2) == Some(0));
    }

    fn det(ctx: &FieldContext, mut m: Vec<Vec<u32>>) -> u32 {
        let n = m.len();
        let mut d = 1;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| m[r][c] != 0) else { return 0 };
            if r != c {
                m.swap(r, c);
                d = ctx.neg(d);
            }
            d = ctx.mul(d, m[c][c]);
            let inv = ctx.inv(m[c][c]).unwrap();
            for r in c + 1..n {
                let f = ctx.mul(m[r][c], inv);
                for k in c..n {
                    m[r][k] = ctx.sub(m[r][k], ctx.mul(f, m[c][k]));
                }
            }
        }
        d
    }

    /// `v_1 ∧ … ∧ v_p ⊗ w` expanded by maximal minors.
    fn decomposable(ctx: &FieldContext, vs: &[Vec<u32>], w: &[u32]) -> SyzygyClass {
        let n = vs[0].len();
        let p = vs.len();
        let idx = WedgeIndex::new(n, p);
        let mut rep = Vec::with_capacity(idx.len() * w.len());
        for a in 0..idx.len() {
            let cols = idx.subset(a);
            let minor = vs.iter().map(|v| cols.iter().map(|&c| v[c]).collect()).collect();
            let coef = det(ctx, minor);
            rep.extend(w.iter().map(|&x| ctx.mul(coef, x)));
        }
        SyzygyClass { position: p, n, fiber: w.len(), representative: rep }
    }

    #[test]
    fn decomposable_syzygy_rank() {
        let ctx = ctx();
        let mut r = rng::stream(9, Stream::Syzygy);
        for p in 1..=4 {
            let vs: Vec<Vec<u32>> = (0..p).map(|_| (0..7).map(|_| r.gen_range(0..10007)).collect()).collect();
            let w: Vec<u32> = (0..5).map(|_| r.gen_range(0..10007)).collect();
            let class = decomposable(&ctx, &vs, &w);
            assert_eq!(class.rank(&ctx), p);
            let mut scaled = class.clone();
            scaled.representative.iter_mut().for_each(|x| *x = ctx.mul(*x, 1234));
            assert_eq!(scaled.rank(&ctx), p);
        }
    }

    #[test]
    fn absent_syzygy_is_an_error() {
        let ctx = ctx();
        let model = build_canonical_curve(8, &ctx, 1).unwrap();
        let v = hyperplane(&model, 1);
        // row 1 of the projected genus-8 table is (7) at i = 1 only
        assert!(matches!(extra_syzygy_rank(&ctx, &model, &v, 2, 1), Err(Error::NoExtraSyzygy(2))));
        let r = extra_syzygy_rank(&ctx, &model, &v, 1, 1).unwrap();
        assert_eq!(r.betti, 7);
        assert_eq!(r.samples.len(), SYZYGY_SAMPLES);
    }
}
