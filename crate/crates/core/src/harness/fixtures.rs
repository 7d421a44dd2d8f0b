//! Published reference tables, bundled as JSON cell maps.
//!
//! Every printed cell is stored, zeros included; cells the source did not
//! print are absent and count as unreported. The printed `total:` line is
//! kept verbatim (two of the source tables have totals that disagree with
//! their own columns), but comparisons only ever use cells.

use serde::{Deserialize, Serialize};

use super::render::CellMap;
use crate::curve::CurveKind;
use crate::error::Result;
use crate::koszul::BettiTable;

const REFERENCE_JSON: &str = include_str!("../../fixtures/reference_tables.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub kind: CurveKind,
    pub genus: usize,
    /// Number of printed columns.
    pub columns: usize,
    pub printed_totals: Option<Vec<Option<u64>>>,
    /// `[i, j, value]` triples.
    pub cells: Vec<[u64; 3]>,
}

#[derive(Deserialize)]
struct ReferenceFile {
    tables: Vec<ReferenceTable>,
}

impl ReferenceTable {
    pub fn cell_map(&self) -> CellMap {
        self.cells.iter().map(|&[i, j, v]| ((i as usize, j as usize), v)).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u64> {
        self.cell_map().get(&(i, j)).copied()
    }

    /// Columns whose printed total differs from the sum of printed cells.
    pub fn inconsistent_totals(&self) -> Vec<usize> {
        let Some(totals) = &self.printed_totals else {
            return Vec::new();
        };
        let cells = self.cell_map();
        totals
            .iter()
            .enumerate()
            .filter(|&(i, t)| {
                let sum: u64 = cells.iter().filter(|(k, _)| k.0 == i).map(|(_, v)| v).sum();
                t.unwrap_or(0) != sum
            })
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn reference_tables() -> Result<Vec<ReferenceTable>> {
    Ok(serde_json::from_str::<ReferenceFile>(REFERENCE_JSON)?.tables)
}

pub fn reference_table(kind: CurveKind, genus: usize) -> Option<ReferenceTable> {
    reference_tables()
        .ok()?
        .into_iter()
        .find(|t| t.kind == kind && t.genus == genus)
}

/// A reference cell the computed table disagrees with or did not compute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellMismatch {
    pub i: usize,
    pub j: usize,
    pub expected: u64,
    pub found: Option<u64>,
}

pub fn diff(reference: &ReferenceTable, table: &BettiTable) -> Vec<CellMismatch> {
    reference
        .cell_map()
        .into_iter()
        .filter_map(|((i, j), expected)| {
            let found = table.get(i, j);
            (found != Some(expected)).then_some(CellMismatch { i, j, expected, found })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Flavor;
    use crate::harness::render::{parse_m2, render_m2};

    #[test]
    fn bundle_is_complete() {
        let tables = reference_tables().unwrap();
        let canonical: Vec<usize> = tables.iter().filter(|t| t.kind == CurveKind::Canonical).map(|t| t.genus).collect();
        let para: Vec<usize> = tables.iter().filter(|t| t.kind == CurveKind::Paracanonical).map(|t| t.genus).collect();
        assert_eq!(canonical, vec![6, 8, 9, 10, 11, 12]);
        assert_eq!(para, vec![8, 9, 10, 11, 12]);
        for t in &tables {
            assert_eq!(t.get(0, 0), Some(1), "{} {}", t.kind, t.genus);
        }
    }

    #[test]
    fn rendering_round_trips() {
        for t in reference_tables().unwrap() {
            let cells = t.cell_map();
            assert_eq!(parse_m2(&render_m2(&cells)).unwrap(), cells, "{} {}", t.kind, t.genus);
        }
    }

    #[test]
    fn known_total_line_typos() {
        let mut bad: Vec<(usize, Vec<usize>)> = reference_tables()
            .unwrap()
            .iter()
            .filter(|t| !t.inconsistent_totals().is_empty())
            .map(|t| (t.genus, t.inconsistent_totals()))
            .collect();
        bad.sort();
        assert_eq!(bad, vec![(10, vec![7, 8]), (12, vec![3])]);
    }

    #[test]
    fn unprinted_cell_is_unreported() {
        let t = reference_table(CurveKind::Canonical, 11).unwrap();
        assert_eq!(t.get(9, 1), None);
        assert_eq!(t.get(9, 2), Some(1));
    }

    #[test]
    fn diff_reports_disagreements() {
        let reference = reference_table(CurveKind::Paracanonical, 11).unwrap();
        let mut table = BettiTable::new(Flavor::Tilde, 11, Some(2), 9);
        for (&(i, j), &v) in &reference.cell_map() {
            table.insert(i, j, v);
        }
        assert!(diff(&reference, &table).is_empty());
        table.insert(2, 2, 69);
        let mut partial = BettiTable::new(Flavor::Tilde, 11, Some(2), 9);
        partial.insert(0, 0, 1);
        assert_eq!(
            diff(&reference, &table),
            vec![CellMismatch { i: 2, j: 2, expected: 70, found: Some(69) }]
        );
        assert_eq!(diff(&reference, &partial).len(), 8);
    }
}
