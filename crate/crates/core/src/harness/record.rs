//! Persisted experiment records.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fixtures::CellMismatch;
use crate::curve::CurveKind;
use crate::error::Result;
use crate::graded::Flavor;
use crate::koszul::{BettiTable, CellTimings, SyzygyRank};
use crate::projection::QuadricReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    /// Keyed by `"i,j"`.
    pub cells_ms: BTreeMap<String, f64>,
}

impl Timings {
    pub fn from_cells(total_ms: f64, cells: &CellTimings) -> Timings {
        Timings {
            total_ms,
            cells_ms: cells.iter().map(|(&(i, j), &ms)| (format!("{i},{j}"), ms)).collect(),
        }
    }
}

/// Everything needed to reproduce and compare one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub kind: CurveKind,
    pub genus: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<u32>,
    pub prime: u32,
    pub seed: u64,
    pub flavor: Flavor,
    pub projected: bool,
    pub table: BettiTable,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quadrics: Option<QuadricReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub syzygy: Option<SyzygyRank>,
    /// Disagreements with the bundled reference table, when one exists.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reference_mismatches: Option<Vec<CellMismatch>>,
    pub version: String,
    pub timings: Timings,
}

#[derive(Serialize)]
struct WithoutTimings<'a> {
    kind: CurveKind,
    genus: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<u32>,
    prime: u32,
    seed: u64,
    flavor: Flavor,
    projected: bool,
    table: &'a BettiTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrics: &'a Option<QuadricReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    syzygy: &'a Option<SyzygyRank>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_mismatches: &'a Option<Vec<CellMismatch>>,
    version: &'a str,
}

impl ExperimentRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Serialization of the mathematical content only; identical inputs
    /// give identical bytes.
    pub fn content_json(&self) -> String {
        let view = WithoutTimings {
            kind: self.kind,
            genus: self.genus,
            level: self.level,
            prime: self.prime,
            seed: self.seed,
            flavor: self.flavor,
            projected: self.projected,
            table: &self.table,
            quadrics: &self.quadrics,
            syzygy: &self.syzygy,
            reference_mismatches: &self.reference_mismatches,
            version: &self.version,
        };
        serde_json::to_string_pretty(&view).expect("record serializes")
    }

    pub fn from_json(s: &str) -> Result<ExperimentRecord> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_json())
    }

    pub fn read(path: &Path) -> Result<ExperimentRecord> {
        ExperimentRecord::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Write to a temporary sibling, then rename over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}
