//! Text formats for Betti tables.
//!
//! The `m2` layout: a header of column indices, a `total:` line, then one
//! line per row `j`. Labels are right-aligned in 7 characters; each column is
//! a space followed by its entry centered in the column width (extra padding
//! on the left). Zero cells print as `.`, unreported cells as `?`, and
//! unreported cells at the end of a row are omitted. Rows and columns run up
//! to the last nonzero entry. Trailing whitespace is trimmed.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::koszul::BettiTable;

pub type CellMap = BTreeMap<(usize, usize), u64>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    M2,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m2" => Ok(Format::M2),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

pub fn render(table: &BettiTable, format: Format) -> String {
    match format {
        Format::M2 => render_m2(table.cells()),
        Format::Json => table.to_json() + "\n",
        Format::Csv => render_csv(table.cells()),
    }
}

fn center(s: &str, width: usize) -> String {
    let pad = width.saturating_sub(s.chars().count());
    let left = pad.div_ceil(2);
    format!("{}{}{}", " ".repeat(left), s, " ".repeat(pad - left))
}

fn push_line(out: &mut String, label: &str, entries: &[String], widths: &[usize]) {
    let mut line = format!("{label:>7}");
    for (e, &w) in entries.iter().zip(widths) {
        line.push(' ');
        line.push_str(&center(e, w));
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

pub fn render_m2(cells: &CellMap) -> String {
    let nonzero = cells.iter().filter(|(_, &v)| v != 0).map(|(k, _)| *k);
    let last_col = nonzero.clone().map(|k| k.0).max().unwrap_or(0);
    let last_row = nonzero.map(|k| k.1).max().unwrap_or(0);

    let rows: Vec<Vec<String>> = (0..=last_row)
        .map(|j| {
            let end = (0..=last_col).rev().find(|&i| cells.contains_key(&(i, j)));
            let end = end.map_or(0, |e| e + 1);
            (0..end)
                .map(|i| match cells.get(&(i, j)) {
                    Some(0) => ".".to_string(),
                    Some(v) => v.to_string(),
                    None => "?".to_string(),
                })
                .collect()
        })
        .collect();
    let totals: Vec<String> = (0..=last_col)
        .map(|i| {
            let sum: u64 = (0..=last_row).filter_map(|j| cells.get(&(i, j))).sum();
            if sum == 0 { ".".to_string() } else { sum.to_string() }
        })
        .collect();
    let header: Vec<String> = (0..=last_col).map(|i| i.to_string()).collect();
    let widths: Vec<usize> = (0..=last_col)
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .chain([&header[i], &totals[i]])
                .map(|s| s.len())
                .max()
                .unwrap_or(1)
        })
        .collect();

    let mut out = String::new();
    push_line(&mut out, "", &header, &widths);
    push_line(&mut out, "total:", &totals, &widths);
    for (j, row) in rows.iter().enumerate() {
        push_line(&mut out, &format!("{j}:"), row, &widths);
    }
    out
}

/// Inverse of [`render_m2`]; the `total:` line is ignored.
pub fn parse_m2(text: &str) -> Result<CellMap> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
    let columns = header.split_whitespace().count();
    for (k, tok) in header.split_whitespace().enumerate() {
        if tok.parse::<usize>().ok() != Some(k) {
            return Err(Error::Parse(format!("bad column header {tok:?}")));
        }
    }
    let mut cells = CellMap::new();
    for line in lines {
        let (label, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing row label in {line:?}")))?;
        let label = label.trim();
        if label == "total" {
            continue;
        }
        let j: usize = label.parse().map_err(|_| Error::Parse(format!("bad row label {label:?}")))?;
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        if tokens.len() > columns {
            return Err(Error::Parse(format!("row {j} has {} entries for {columns} columns", tokens.len())));
        }
        for (i, tok) in tokens.into_iter().enumerate() {
            match tok {
                "." => {
                    cells.insert((i, j), 0);
                }
                "?" => {}
                _ => {
                    let v = tok.parse().map_err(|_| Error::Parse(format!("bad entry {tok:?}")))?;
                    cells.insert((i, j), v);
                }
            }
        }
    }
    Ok(cells)
}

/// One `i,j,value` line per computed cell.
pub fn render_csv(cells: &CellMap) -> String {
    cells.iter().fold(String::new(), |mut out, (&(i, j), v)| {
        let _ = writeln!(out, "{i},{j},{v}");
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GENUS_NINE: &str = "        0  1  2  3  4   5  6 7
 total: 1 12 46 96 100 48 10 1
     0: 1  .  .  .  .   .  . .
     1: . 12 16  .  .   .  . .
     2: .  . 30 96 100 48  9 1
     3: .  .  .  .   .  .  1 .
";

    #[test]
    fn columns_center_with_left_bias() {
        assert_eq!(center("4", 3), " 4 ");
        assert_eq!(center("9", 2), " 9");
        assert_eq!(center("12", 2), "12");
        assert_eq!(center(".", 4), "  . ");
    }

    #[test]
    fn parse_then_render() {
        let cells = parse_m2(GENUS_NINE).unwrap();
        assert_eq!(cells.get(&(4, 2)), Some(&100));
        assert_eq!(cells.get(&(6, 3)), Some(&1));
        assert_eq!(cells.len(), 32);
        let text = render_m2(&cells);
        assert_eq!(parse_m2(&text).unwrap(), cells);
    }

    #[test]
    fn unreported_cells() {
        let mut cells = CellMap::new();
        cells.insert((0, 0), 1);
        cells.insert((1, 0), 0);
        cells.insert((2, 0), 0);
        cells.insert((0, 1), 0);
        cells.insert((2, 1), 5);
        let text = render_m2(&cells);
        assert_eq!(text, "        0 1 2\n total: 1 . 5\n     0: 1 . .\n     1: . ? 5\n");
        assert_eq!(parse_m2(&text).unwrap(), cells);
    }

    #[test]
    fn csv_lines() {
        let cells: CellMap = [((0, 0), 1), ((1, 1), 7)].into_iter().collect();
        assert_eq!(render_csv(&cells), "0,0,1\n1,1,7\n");
    }

    #[test]
    fn malformed_input() {
        assert!(parse_m2("").is_err());
        assert!(parse_m2("  0 1\n 0: 1 . 3\n").is_err());
        assert!(parse_m2("  0 2\n").is_err());
        assert!(parse_m2("  0\n x: 1\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(rows in 1usize..5, cols in 1usize..9, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut cells = CellMap::new();
            for j in 0..rows {
                for i in 0..cols {
                    if rng.gen_bool(0.9) {
                        let v = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..2000) };
                        cells.insert((i, j), v);
                    }
                }
            }
            cells.insert((cols - 1, rows - 1), 3);
            prop_assert_eq!(parse_m2(&render_m2(&cells)).unwrap(), cells);
        }
    }
}
