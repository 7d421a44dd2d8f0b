//! Graded pieces of the coordinate rings and section modules of an embedded
//! nodal curve.
//!
//! Every graded piece lives inside the coefficient space of polynomials of
//! degree `<= t(2g - 2)` on the normalization. Pulling sections back along
//! the normalization is injective, so these subspaces are faithful models of
//! the degree-`t` pieces and no quotient ring arithmetic is needed.

use serde::{Deserialize, Serialize};

use crate::curve::NodalCurveModel;
use crate::field::FieldContext;
use crate::matrix::{kernel_basis, rank, row_reduce, FpMatrix};
use crate::poly;

/// Which module's syzygies are being measured.
///
/// * `Full`: the coordinate ring of the linearly normal curve over `Sym H^0`.
/// * `S`: the section module `M = sum_t H^0(O(t))` over `Sym V`.
/// * `Tilde`: the coordinate ring of the projected curve over `Sym V`; its
///   degree-one piece is `V` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    #[serde(rename = "full")]
    Full,
    #[serde(rename = "S")]
    S,
    #[serde(rename = "tilde")]
    Tilde,
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Flavor::Full => "full",
            Flavor::S => "S",
            Flavor::Tilde => "tilde",
        })
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(Flavor::Full),
            "S" | "s" => Ok(Flavor::S),
            "tilde" => Ok(Flavor::Tilde),
            other => Err(format!("unknown flavor {other:?} (expected full, S or tilde)")),
        }
    }
}

/// A subspace of the section space, stored as numerator columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSubspace {
    genus: usize,
    basis: FpMatrix,
    full: bool,
}

impl SectionSubspace {
    pub fn new(genus: usize, basis: FpMatrix, full: bool) -> Self {
        assert_eq!(basis.rows(), 2 * genus - 1, "numerators have 2g - 1 coefficients");
        SectionSubspace { genus, basis, full }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Whether this is all of `H^0` rather than a hyperplane.
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn element(&self, k: usize) -> Vec<u32> {
        self.basis.column(k)
    }

    pub fn elements(&self) -> Vec<Vec<u32>> {
        self.basis.columns()
    }
}

/// Coefficient length of a degree-`t` piece.
pub fn piece_len(genus: usize, t: usize) -> usize {
    t * (2 * genus - 2) + 1
}

/// A subspace of polynomial coefficient space kept in reduced-echelon form.
///
/// Rows of `echelon` are basis vectors; the coordinates of a member in this
/// basis are its entries at the pivot positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    len: usize,
    echelon: FpMatrix,
    pivots: Vec<usize>,
}

impl Slice {
    pub fn from_spanning(ctx: &FieldContext, len: usize, vectors: &[Vec<u32>]) -> Slice {
        let m = FpMatrix::from_rows(vectors, len);
        let rr = row_reduce(ctx, &m);
        let rows: Vec<Vec<u32>> = (0..rr.rank).map(|i| rr.reduced.row(i).to_vec()).collect();
        Slice {
            len,
            echelon: FpMatrix::from_rows(&rows, len),
            pivots: rr.pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn element(&self, k: usize) -> &[u32] {
        self.echelon.row(k)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as columns.
    pub fn basis(&self) -> FpMatrix {
        self.echelon.transpose()
    }

    /// Coordinates of `f` in the echelon basis, or `None` if `f` is not in the span.
    pub fn coordinates(&self, ctx: &FieldContext, f: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(f.len(), self.len);
        let coords: Vec<u32> = self.pivots.iter().map(|&c| f[c]).collect();
        let mut residual = f.to_vec();
        for (k, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (r, &b) in residual.iter_mut().zip(self.echelon.row(k)) {
                *r = ctx.sub(*r, ctx.mul(c, b));
            }
        }
        residual.iter().all(|&v| v == 0).then_some(coords)
    }

    pub fn contains(&self, ctx: &FieldContext, f: &[u32]) -> bool {
        self.coordinates(ctx, f).is_some()
    }
}

/// The graded pieces `0..=top` of one module flavor together with the space
/// whose exterior powers index its Koszul complex.
#[derive(Clone, Debug)]
pub struct ModuleSlices {
    pub flavor: Flavor,
    pub genus: usize,
    /// Basis of the linear forms acting on the module (numerator polynomials).
    pub acting: Vec<Vec<u32>>,
    pub slices: Vec<Slice>,
}

impl ModuleSlices {
    /// `space` is the generating space of the projected curve; it is ignored
    /// for `Flavor::Full`, which always acts by the full section space.
    pub fn build(
        ctx: &FieldContext,
        model: &NodalCurveModel,
        space: &SectionSubspace,
        flavor: Flavor,
        top: usize,
    ) -> ModuleSlices {
        let g = model.genus;
        let full = model.full_space();
        let (acting, first, generators) = match flavor {
            Flavor::Full => (&full, &full, &full),
            Flavor::S => (space, &full, &full),
            Flavor::Tilde => (space, space, space),
        };
        let mut slices = vec![Slice::from_spanning(ctx, 1, &[vec![1]])];
        if top >= 1 {
            slices.push(Slice::from_spanning(ctx, piece_len(g, 1), &first.elements()));
        }
        let gens = generators.elements();
        for t in 2..=top {
            let prev = &slices[t - 1];
            let len = piece_len(g, t);
            let products: Vec<Vec<u32>> = gens
                .iter()
                .flat_map(|x| {
                    (0..prev.dim()).map(move |k| poly::mul(ctx, x, prev.element(k)))
                })
                .collect();
            slices.push(Slice::from_spanning(ctx, len, &products));
        }
        ModuleSlices {
            flavor,
            genus: g,
            acting: acting.elements(),
            slices,
        }
    }

    pub fn top(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn dim(&self, t: usize) -> usize {
        self.slices[t].dim()
    }

    pub fn acting_dim(&self) -> usize {
        self.acting.len()
    }

    pub fn hilbert_function(&self) -> Vec<usize> {
        self.slices.iter().map(Slice::dim).collect()
    }
}

/// Basis of the degree-`t` piece of the given flavor, as columns.
pub fn graded_slice(
    ctx: &FieldContext,
    model: &NodalCurveModel,
    space: &SectionSubspace,
    flavor: Flavor,
    t: usize,
) -> FpMatrix {
    ModuleSlices::build(ctx, model, space, flavor, t).slices[t].basis()
}

pub fn hilbert_function(
    ctx: &FieldContext,
    model: &NodalCurveModel,
    space: &SectionSubspace,
    flavor: Flavor,
    t_max: usize,
) -> Vec<usize> {
    ModuleSlices::build(ctx, model, space, flavor, t_max).hilbert_function()
}

/// Monomials of degree `t` in `n` variables as non-decreasing index lists,
/// in lexicographic order: `x0^2, x0 x1, x1^2` for `n = 2, t = 2`.
pub fn sym_basis(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, t: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            extend(n, t, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(n, t, 0, &mut Vec::with_capacity(t), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `Sym^t(space) -> polynomials of degree <= t(2g - 2)`; the column for a
/// monomial is the product of its factors.
pub fn multiplication_map(ctx: &FieldContext, space: &SectionSubspace, t: usize) -> FpMatrix {
    assert!(t >= 1);
    let elems = space.elements();
    let len = piece_len(space.genus(), t);
    let columns: Vec<Vec<u32>> = sym_basis(space.dim(), t)
        .iter()
        .map(|mono| {
            let prod = mono[1..]
                .iter()
                .fold(elems[mono[0]].clone(), |acc, &k| poly::mul(ctx, &acc, &elems[k]));
            poly::padded(&prod, len)
        })
        .collect();
    FpMatrix::from_columns(&columns, len)
}

/// Degree-`t` forms on the span of `space` vanishing on the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPiece {
    pub degree: usize,
    /// Columns are coefficient vectors over `monomials`.
    pub basis: FpMatrix,
    pub monomials: Vec<Vec<usize>>,
}

impl IdealPiece {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

pub fn ideal_piece(ctx: &FieldContext, space: &SectionSubspace, t: usize) -> IdealPiece {
    assert!(t >= 2);
    let m = multiplication_map(ctx, space, t);
    IdealPiece {
        degree: t,
        basis: kernel_basis(ctx, &m),
        monomials: sym_basis(space.dim(), t),
    }
}

/// Whether `Sym^t(space)` surjects onto the `(2t - 1)(g - 1)`-dimensional piece.
pub fn normality_check(ctx: &FieldContext, space: &SectionSubspace, t: usize) -> bool {
    assert!(t >= 2);
    rank(ctx, &multiplication_map(ctx, space, t)) == (2 * t - 1) * (space.genus() - 1)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::curve::{build_canonical_curve, build_paracanonical_curve};
    use crate::matrix::column_space;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> FieldContext {
        FieldContext::new(10007).unwrap()
    }

    /// First `n - 1` random combinations of the full space: a generic hyperplane.
    pub(crate) fn hyperplane(model: &NodalCurveModel, seed: u64) -> SectionSubspace {
        let f = model.ctx;
        let n = model.sections.count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let change = FpMatrix::from_vec(n, n - 1, (0..n * (n - 1)).map(|_| rng.gen_range(0..f.modulus())).collect());
        SectionSubspace::new(model.genus, model.sections.numerators.mul(&f, &change), false)
    }

    #[test]
    fn sym_basis_counts() {
        assert_eq!(sym_basis(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(sym_basis(7, 2).len(), 28);
        assert_eq!(sym_basis(7, 3).len(), 84);
        assert_eq!(sym_basis(5, 0), vec![Vec::<usize>::new()]);
        for n in 1..8 {
            for t in 0..5 {
                assert_eq!(sym_basis(n, t).len(), binomial(n + t - 1, t));
            }
        }
    }

    #[test]
    fn multiplication_matches_convolution() {
        let f = ctx();
        let m = build_canonical_curve(6, &f, 1).unwrap();
        let space = m.full_space();
        let t1 = multiplication_map(&f, &space, 1);
        assert_eq!(t1, *space.basis());
        let mm = multiplication_map(&f, &space, 2);
        assert_eq!(mm.rows(), 2 * 10 + 1);
        assert_eq!(mm.cols(), 21);
        assert_eq!(rank(&f, &mm), 15);
        let monos = sym_basis(6, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let col = rng.gen_range(0..monos.len());
            let (i, j) = (monos[col][0], monos[col][1]);
            let (a, b) = (space.element(i), space.element(j));
            // naive convolution
            let mut c = vec![0u32; a.len() + b.len() - 1];
            for (x, &u) in a.iter().enumerate() {
                for (y, &v) in b.iter().enumerate() {
                    c[x + y] = f.add(c[x + y], f.mul(u, v));
                }
            }
            assert_eq!(mm.column(col), c);
        }
    }

    #[test]
    fn tilde_and_s_slices() {
        let f = ctx();
        let m = build_canonical_curve(8, &f, 1).unwrap();
        let v = hyperplane(&m, 1);
        assert_eq!(graded_slice(&f, &m, &v, Flavor::Tilde, 1).cols(), 7);
        assert_eq!(graded_slice(&f, &m, &v, Flavor::S, 1).cols(), 8);
        assert_eq!(graded_slice(&f, &m, &v, Flavor::Tilde, 2).cols(), 21);
        assert_eq!(hilbert_function(&f, &m, &v, Flavor::Tilde, 3), vec![1, 7, 21, 35]);
        assert_eq!(hilbert_function(&f, &m, &v, Flavor::Tilde, 0), vec![1]);
    }

    #[test]
    fn slices_match_multiplication_image() {
        let f = ctx();
        let m = build_canonical_curve(6, &f, 2).unwrap();
        let v = hyperplane(&m, 2);
        for t in 2..=3 {
            let from_products = graded_slice(&f, &m, &v, Flavor::Tilde, t);
            let image = column_space(&f, &multiplication_map(&f, &v, t));
            assert_eq!(from_products, image);
        }
    }

    #[test]
    fn ideal_dimensions() {
        let f = ctx();
        for g in [6usize, 7, 8] {
            let m = build_canonical_curve(g, &f, 3).unwrap();
            let full = m.full_space();
            assert_eq!(ideal_piece(&f, &full, 2).dim(), (g - 2) * (g - 3) / 2);
            let v = hyperplane(&m, 3);
            let i2 = ideal_piece(&f, &v, 2);
            assert_eq!(i2.dim(), (g - 1) * (g - 6) / 2);
            // rank-nullity against the multiplication map
            let r = rank(&f, &multiplication_map(&f, &v, 2));
            assert_eq!(i2.dim() + r, binomial(v.dim() + 1, 2));
            assert!(normality_check(&f, &v, 2));
        }
    }

    #[test]
    fn ideal_elements_vanish() {
        let f = ctx();
        let m = build_canonical_curve(8, &f, 5).unwrap();
        let v = hyperplane(&m, 5);
        let i2 = ideal_piece(&f, &v, 2);
        let mm = multiplication_map(&f, &v, 2);
        assert!(mm.mul(&f, &i2.basis).is_zero());
        assert_eq!(i2.dim(), 7);
    }

    #[test]
    fn genus_six_normality_up_to_four() {
        let f = ctx();
        let m = build_canonical_curve(6, &f, 4).unwrap();
        let v = hyperplane(&m, 4);
        for t in 2..=4 {
            assert!(normality_check(&f, &v, t), "t = {t}");
        }
    }

    #[test]
    fn paracanonical_hilbert_function() {
        let f = ctx();
        let m = build_paracanonical_curve(10, 2, &f, 1).unwrap();
        let v = hyperplane(&m, 1);
        assert!(normality_check(&f, &v, 2));
        assert_eq!(hilbert_function(&f, &m, &v, Flavor::Tilde, 3), vec![1, 8, 27, 45]);
    }

    #[test]
    fn slices_nest_multiplicatively() {
        let f = ctx();
        let m = build_canonical_curve(7, &f, 6).unwrap();
        let v = hyperplane(&m, 6);
        for flavor in [Flavor::Full, Flavor::S, Flavor::Tilde] {
            let ms = ModuleSlices::build(&f, &m, &v, flavor, 4);
            let s1 = ModuleSlices::build(&f, &m, &v, Flavor::S, 1);
            for t in 1..4 {
                let next = &ms.slices[t + 1];
                for a in 0..s1.dim(1) {
                    for b in 0..ms.dim(t) {
                        let prod = poly::mul(&f, s1.slices[1].element(a), ms.slices[t].element(b));
                        assert!(next.contains(&f, &prod), "{flavor} t={t}");
                    }
                }
            }
            assert_eq!(ms.dim(0), 1);
            for t in 2..=4 {
                assert_eq!(ms.dim(t), (2 * t - 1) * 6);
            }
        }
    }
}
