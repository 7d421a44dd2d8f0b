//! Dense matrices over GF(p) and the elimination kernels.
//!
//! Elimination works on `u64` accumulators and only reduces modulo `p` when
//! an entry is inspected or when the number of pending updates could
//! overflow. Row updates for a given pivot are independent and are spread
//! across the rayon pool; the result does not depend on the schedule.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::FieldContext;

/// Row-major dense matrix with entries in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        FpMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend_from_slice(r);
        }
        FpMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(columns: &[Vec<u32>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged column");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, ctx: &FieldContext, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let p = ctx.modulus() as u64;
        let mut out = FpMatrix::zeros(self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.set(i, j, v as u32);
            }
        }
        out
    }

    pub fn mul_vec(&self, ctx: &FieldContext, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = ctx.modulus() as u64;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p) as u32
            })
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        FpMatrix {
            rows: self.rows,
            cols,
            data,
        }
    }
}

/// Output of [`row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Reduced row-echelon form; rows past `rank` are zero.
    pub reduced: FpMatrix,
}

/// Reduced row-echelon form.
pub fn row_reduce(ctx: &FieldContext, m: &FpMatrix) -> RowReduction {
    let mut data: Vec<u64> = m.data.iter().map(|&v| v as u64).collect();
    let pivots = eliminate(ctx, &mut data, m.rows, m.cols, true);
    let reduced = FpMatrix {
        rows: m.rows,
        cols: m.cols,
        data: data.iter().map(|&v| ctx.reduce(v)).collect(),
    };
    RowReduction {
        rank: pivots.len(),
        pivots,
        reduced,
    }
}

/// Rank via echelon form, eliminating along the shorter side.
pub fn rank(ctx: &FieldContext, m: &FpMatrix) -> usize {
    if m.rows > m.cols {
        let t = m.transpose();
        rank_dense(ctx, t.data.iter().map(|&v| v as u64).collect(), t.rows, t.cols)
    } else {
        rank_dense(ctx, m.data.iter().map(|&v| v as u64).collect(), m.rows, m.cols)
    }
}

/// Rank of a row-major buffer whose entries are already below `p`.
pub fn rank_dense(ctx: &FieldContext, mut data: Vec<u64>, rows: usize, cols: usize) -> usize {
    assert_eq!(data.len(), rows * cols);
    eliminate(ctx, &mut data, rows, cols, false).len()
}

/// Columns spanning the right kernel `{v : m v = 0}`.
pub fn kernel_basis(ctx: &FieldContext, m: &FpMatrix) -> FpMatrix {
    let rr = row_reduce(ctx, m);
    let nullity = m.cols - rr.rank;
    let mut is_pivot = vec![false; m.cols];
    for &c in &rr.pivots {
        is_pivot[c] = true;
    }
    let mut basis = FpMatrix::zeros(m.cols, nullity);
    for (k, free) in (0..m.cols).filter(|&c| !is_pivot[c]).enumerate() {
        basis.set(free, k, 1);
        for (r, &pc) in rr.pivots.iter().enumerate() {
            basis.set(pc, k, ctx.neg(rr.reduced.get(r, free)));
        }
    }
    // The free columns carry an identity block, so the basis is independent.
    assert!(m.mul(ctx, &basis).is_zero(), "rank-nullity: kernel basis not annihilated");
    assert_eq!(rr.rank + basis.cols(), m.cols, "rank-nullity");
    basis
}

/// Column-space basis (as columns), in reduced-echelon form of the transpose.
pub fn column_space(ctx: &FieldContext, m: &FpMatrix) -> FpMatrix {
    let rr = row_reduce(ctx, &m.transpose());
    let rows: Vec<Vec<u32>> = (0..rr.rank).map(|i| rr.reduced.row(i).to_vec()).collect();
    FpMatrix::from_rows(&rows, m.rows).transpose()
}

const PAR_THRESHOLD: usize = 1 << 14;

/// Gaussian elimination in place. Returns pivot columns. When `full` is set
/// the pivot rows are normalised and cleared above as well (RREF); otherwise
/// only rows below the pivot are touched and the buffer is left in echelon
/// form with unreduced entries.
fn eliminate(ctx: &FieldContext, data: &mut [u64], rows: usize, cols: usize, full: bool) -> Vec<usize> {
    let p = ctx.modulus() as u64;
    let step_bound = ((u64::MAX - p) / ((p - 1) * (p - 1))).max(1);
    let mut pending = 0u64;
    let mut pivots = Vec::new();
    let mut pivot_row = vec![0u32; cols];
    let mut r = 0usize;

    for col in 0..cols {
        if r == rows {
            break;
        }
        let mut found = None;
        for row in r..rows {
            let v = data[row * cols + col] % p;
            data[row * cols + col] = v;
            if v != 0 {
                found = Some(row);
                break;
            }
        }
        let Some(src) = found else { continue };
        if src != r {
            for c in col..cols {
                data.swap(src * cols + c, r * cols + c);
            }
        }
        let inv = ctx.inv(data[r * cols + col] as u32).expect("pivot is nonzero") as u64;
        for c in col..cols {
            let v = (data[r * cols + c] % p) * inv % p;
            data[r * cols + c] = v;
            pivot_row[c] = v as u32;
        }
        let piv = &pivot_row[col..];
        let width = cols - col;

        let update = |row: &mut [u64]| {
            let f = row[col] % p;
            if f == 0 {
                row[col] = 0;
                return;
            }
            let m = p - f;
            for (x, &y) in row[col..].iter_mut().zip(piv) {
                *x += m * y as u64;
            }
        };

        let (head, tail) = data.split_at_mut(r * cols);
        let below = &mut tail[cols..];
        let work = (if full { rows - 1 } else { rows - r - 1 }) * width;
        if work >= PAR_THRESHOLD {
            below.par_chunks_mut(cols).for_each(update);
            if full {
                head.par_chunks_mut(cols).for_each(update);
            }
        } else {
            below.chunks_mut(cols).for_each(update);
            if full {
                head.chunks_mut(cols).for_each(update);
            }
        }

        pending += 1;
        if pending >= step_bound {
            let reduce = |row: &mut [u64]| {
                for x in &mut row[col + 1..] {
                    *x %= p;
                }
            };
            data.par_chunks_mut(cols).for_each(reduce);
            pending = 0;
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}
