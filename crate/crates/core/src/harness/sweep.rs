//! Batches of experiments over genera, kinds, levels and seeds.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conjecture::ConjectureReport;
use super::fixtures::{diff, reference_table, CellMismatch};
use super::record::{write_atomic, ExperimentRecord, Timings, TOOL_VERSION};
use super::render::CellMap;
use crate::curve::{build_canonical_curve, build_paracanonical_curve, CurveKind};
use crate::error::{Error, Result};
use crate::field::{smallest_prime_with_levels, FieldContext, DEFAULT_PRIME};
use crate::graded::Flavor;
use crate::koszul::{betti_table_timed, BettiOptions};
use crate::projection::{project_generic, quadric_generation_test};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepJob {
    pub kind: CurveKind,
    pub genus: usize,
    pub level: Option<u32>,
    pub seed: u64,
}

impl SweepJob {
    pub fn label(&self) -> String {
        match self.level {
            Some(l) => format!("{}-g{}-l{}-s{}", self.kind, self.genus, l, self.seed),
            None => format!("{}-g{}-s{}", self.kind, self.genus, self.seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub kinds: Vec<CurveKind>,
    pub genera: Vec<usize>,
    /// Levels used for paracanonical runs.
    pub levels: Vec<u32>,
    pub seeds: Vec<u64>,
    /// When absent: the default prime for canonical runs, and the smallest
    /// prime above 10000 that all levels divide `p - 1` of otherwise.
    pub prime: Option<u32>,
    pub flavor: Flavor,
    pub options: BettiOptions,
    pub quadrics: bool,
    pub out_dir: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            kinds: vec![CurveKind::Canonical],
            genera: vec![8],
            levels: vec![2],
            seeds: vec![1],
            prime: None,
            flavor: Flavor::Tilde,
            options: BettiOptions::default(),
            quadrics: true,
            out_dir: None,
        }
    }
}

impl SweepConfig {
    pub fn jobs(&self) -> Vec<SweepJob> {
        let mut jobs = Vec::new();
        for &kind in &self.kinds {
            for &genus in &self.genera {
                let levels: Vec<Option<u32>> = match kind {
                    CurveKind::Canonical => vec![None],
                    CurveKind::Paracanonical => self.levels.iter().map(|&l| Some(l)).collect(),
                };
                for &level in &levels {
                    for &seed in &self.seeds {
                        jobs.push(SweepJob { kind, genus, level, seed });
                    }
                }
            }
        }
        jobs
    }

    pub fn prime_for(&self, kind: CurveKind) -> u32 {
        match (self.prime, kind) {
            (Some(p), _) => p,
            (None, CurveKind::Canonical) => DEFAULT_PRIME,
            (None, CurveKind::Paracanonical) => smallest_prime_with_levels(10000, &self.levels),
        }
    }
}

pub fn run_job(job: &SweepJob, config: &SweepConfig) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let ctx = FieldContext::new(config.prime_for(job.kind))?;
    let model = match (job.kind, job.level) {
        (CurveKind::Canonical, _) => build_canonical_curve(job.genus, &ctx, job.seed)?,
        (CurveKind::Paracanonical, Some(l)) => build_paracanonical_curve(job.genus, l, &ctx, job.seed)?,
        (CurveKind::Paracanonical, None) => {
            return Err(Error::InvalidArgument("paracanonical run without a level".into()))
        }
    };
    let spec = project_generic(&model, job.seed)?;
    let (table, cells) = betti_table_timed(&ctx, &model, &spec.v, config.flavor, &config.options)?;
    let quadrics = if config.quadrics { Some(quadric_generation_test(&spec)?) } else { None };
    let reference_mismatches = (config.flavor == Flavor::Tilde)
        .then(|| reference_table(job.kind, job.genus))
        .flatten()
        .map(|r| diff(&r, &table));
    Ok(ExperimentRecord {
        kind: job.kind,
        genus: job.genus,
        level: job.level,
        prime: ctx.modulus(),
        seed: job.seed,
        flavor: config.flavor,
        projected: true,
        table,
        quadrics,
        syzygy: None,
        reference_mismatches,
        version: TOOL_VERSION.to_string(),
        timings: Timings::from_cells(start.elapsed().as_secs_f64() * 1e3, &cells),
    })
}

/// Runs sharing kind and genus, compared across levels and seeds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConsistency {
    pub kind: CurveKind,
    pub genus: usize,
    pub runs: Vec<String>,
    /// All tables identical; otherwise some sample was not generic.
    pub identical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobMismatches {
    pub job: String,
    pub cells: Vec<CellMismatch>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub jobs: Vec<String>,
    pub reference_mismatches: Vec<JobMismatches>,
    pub groups: Vec<GroupConsistency>,
    pub conjectures: Vec<ConjectureReport>,
    #[serde(skip)]
    pub records: Vec<ExperimentRecord>,
    #[serde(skip)]
    pub files: Vec<PathBuf>,
}

impl SweepSummary {
    pub fn mismatch_count(&self) -> usize {
        self.reference_mismatches.iter().map(|m| m.cells.len()).sum()
    }

    pub fn text(&self) -> String {
        let mut out = format!("jobs: {}\n", self.jobs.len());
        out += &format!("reference mismatches: {}\n", self.mismatch_count());
        for m in &self.reference_mismatches {
            for c in &m.cells {
                let found = c.found.map_or("unreported".to_string(), |v| v.to_string());
                out += &format!("  {} ({},{}): expected {}, found {}\n", m.job, c.i, c.j, c.expected, found);
            }
        }
        for g in &self.groups {
            let state = if g.identical { "identical" } else { "DIFFER (non-generic sample)" };
            out += &format!("{} g={}: {} runs, tables {}\n", g.kind, g.genus, g.runs.len(), state);
        }
        for c in &self.conjectures {
            let verdict = match (c.canonical_conjecture_consistent, c.paracanonical_conjecture_consistent) {
                (Some(v), _) | (_, Some(v)) => if v { "consistent" } else { "INCONSISTENT" },
                _ => "not applicable",
            };
            let strand = c.linear_strand_length.map_or("?".to_string(), |s| s.to_string());
            out += &format!(
                "conjecture {} g={}: N~ up to {}, strand {}, {}\n",
                c.kind, c.genus, c.n_tilde_holds_up_to, strand, verdict
            );
        }
        out
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    let jobs = config.jobs();
    if jobs.is_empty() {
        return Err(Error::InvalidArgument("sweep has no jobs".into()));
    }
    let records: Vec<ExperimentRecord> = jobs
        .par_iter()
        .map(|job| run_job(job, config))
        .collect::<Result<_>>()?;

    let reference_mismatches = jobs
        .iter()
        .zip(&records)
        .filter_map(|(job, r)| {
            let cells = r.reference_mismatches.clone()?;
            (!cells.is_empty()).then(|| JobMismatches { job: job.label(), cells })
        })
        .collect();

    let mut grouped: BTreeMap<(String, usize), Vec<(String, &ExperimentRecord)>> = BTreeMap::new();
    for (job, r) in jobs.iter().zip(&records) {
        grouped.entry((job.kind.to_string(), job.genus)).or_default().push((job.label(), r));
    }
    let mut groups = Vec::new();
    let mut conjectures = Vec::new();
    for runs in grouped.values() {
        let first: &CellMap = runs[0].1.table.cells();
        groups.push(GroupConsistency {
            kind: runs[0].1.kind,
            genus: runs[0].1.genus,
            runs: runs.iter().map(|(l, _)| l.clone()).collect(),
            identical: runs.iter().all(|(_, r)| r.table.cells() == first),
        });
        if config.flavor == Flavor::Tilde {
            conjectures.push(ConjectureReport::from_table(runs[0].1.kind, &runs[0].1.table));
        }
    }

    let mut summary = SweepSummary {
        jobs: jobs.iter().map(SweepJob::label).collect(),
        reference_mismatches,
        groups,
        conjectures,
        records,
        files: Vec::new(),
    };
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir)?;
        for (job, r) in jobs.iter().zip(&summary.records) {
            let path = dir.join(format!("{}.json", job.label()));
            r.write(&path)?;
            summary.files.push(path);
        }
        let path = dir.join("summary.json");
        write_atomic(&path, &serde_json::to_string_pretty(&summary)?)?;
        summary.files.push(path);
    }
    Ok(summary)
}
