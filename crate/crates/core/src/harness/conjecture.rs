//! Comparison of measured tables with the conjectured shapes.
//!
//! With `c = ⌊(g-1)/2⌋` (the generic Clifford index):
//!
//! * projected canonical curves, `g ≥ 9`: `Ñ_{c-3}` holds, the linear strand
//!   has length `g - c - 3`, and for `g = 2k` also `b̃_{k-2,1} = b̃_{k-3,2} = 1`;
//! * projected paracanonical curves, `g ≥ 11`: `Ñ_{c-4}` holds and the linear
//!   strand has length `c - 3`.
//!
//! Reports never fail a run; disagreements are recorded.

use serde::{Deserialize, Serialize};

use crate::curve::CurveKind;
use crate::koszul::BettiTable;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub kind: CurveKind,
    pub genus: usize,
    pub clifford: usize,
    pub n_tilde_holds_up_to: usize,
    pub linear_strand_length: Option<usize>,
    pub predicted_n_tilde: Option<usize>,
    pub predicted_strand_length: Option<usize>,
    /// `None` when the canonical prediction does not apply.
    pub canonical_conjecture_consistent: Option<bool>,
    /// `None` when the paracanonical prediction does not apply.
    pub paracanonical_conjecture_consistent: Option<bool>,
}

pub fn clifford_index(genus: usize) -> usize {
    (genus - 1) / 2
}

impl ConjectureReport {
    pub fn from_table(kind: CurveKind, table: &BettiTable) -> ConjectureReport {
        let g = table.genus;
        let c = clifford_index(g);
        let strand = table.linear_strand_length();
        let n_tilde = table.n_tilde_holds_up_to();
        let holds = |m: isize| m <= 0 || table.property_n_tilde(m as usize);
        let mut report = ConjectureReport {
            kind,
            genus: g,
            clifford: c,
            n_tilde_holds_up_to: n_tilde,
            linear_strand_length: strand,
            predicted_n_tilde: None,
            predicted_strand_length: None,
            canonical_conjecture_consistent: None,
            paracanonical_conjecture_consistent: None,
        };
        match kind {
            CurveKind::Canonical if g >= 9 => {
                let m = c as isize - 3;
                let length = g - c - 3;
                let mut ok = holds(m) && strand == Some(length);
                if g.is_multiple_of(2) {
                    let k = g / 2;
                    ok &= table.get(k - 2, 1) == Some(1) && table.get(k - 3, 2) == Some(1);
                }
                report.predicted_n_tilde = Some(m.max(0) as usize);
                report.predicted_strand_length = Some(length);
                report.canonical_conjecture_consistent = Some(ok);
            }
            CurveKind::Paracanonical if g >= 11 => {
                let m = c as isize - 4;
                let length = c - 3;
                report.predicted_n_tilde = Some(m.max(0) as usize);
                report.predicted_strand_length = Some(length);
                report.paracanonical_conjecture_consistent = Some(holds(m) && strand == Some(length));
            }
            _ => {}
        }
        report
    }

    /// The applicable prediction agrees, or none applies.
    pub fn consistent(&self) -> bool {
        self.canonical_conjecture_consistent.unwrap_or(true) && self.paracanonical_conjecture_consistent.unwrap_or(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Flavor;

    fn table(genus: usize, n: usize, cells: &[((usize, usize), u64)]) -> BettiTable {
        let mut t = BettiTable::new(Flavor::Tilde, genus, None, n);
        for j in 0..=3 {
            for i in 0..=n {
                t.insert(i, j, 0);
            }
        }
        t.insert(0, 0, 1);
        for &((i, j), v) in cells {
            t.insert(i, j, v);
        }
        t
    }

    #[test]
    fn genus_ten_shape_is_consistent() {
        let t = table(
            10,
            9,
            &[
                ((1, 1), 18), ((2, 1), 42), ((3, 1), 1),
                ((2, 2), 1), ((3, 2), 126), ((4, 2), 210), ((5, 2), 162), ((6, 2), 63), ((7, 2), 10), ((8, 2), 1),
                ((7, 3), 1),
            ],
        );
        let r = ConjectureReport::from_table(CurveKind::Canonical, &t);
        assert_eq!(r.clifford, 4);
        assert_eq!(r.n_tilde_holds_up_to, 1);
        assert_eq!(r.linear_strand_length, Some(3));
        assert_eq!(r.canonical_conjecture_consistent, Some(true));
        assert_eq!(r.paracanonical_conjecture_consistent, None);
    }

    #[test]
    fn wrong_strand_is_reported() {
        let t = table(9, 8, &[((1, 1), 12), ((2, 1), 16), ((3, 1), 2), ((2, 2), 30)]);
        let r = ConjectureReport::from_table(CurveKind::Canonical, &t);
        assert_eq!(r.canonical_conjecture_consistent, Some(false));
        assert!(!r.consistent());
    }

    #[test]
    fn small_genus_has_no_prediction() {
        let t = table(8, 7, &[((1, 1), 7)]);
        let r = ConjectureReport::from_table(CurveKind::Canonical, &t);
        assert!(r.canonical_conjecture_consistent.is_none() && r.consistent());
    }
}
