use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use syzcurve::curve::{build_canonical_curve, build_paracanonical_curve, validate_model, CurveKind};
use syzcurve::field::{smallest_prime_with_levels, FieldContext, DEFAULT_PRIME};
use syzcurve::harness::fixtures::{diff, reference_table};
use syzcurve::harness::record::{write_atomic, ExperimentRecord, Timings, TOOL_VERSION};
use syzcurve::harness::render::{render, Format};
use syzcurve::harness::sweep::{run_sweep, SweepConfig};
use syzcurve::koszul::{betti_table_timed, extra_syzygy_rank, BettiOptions, Strategy};
use syzcurve::projection::{project_generic, quadric_generation_test, QuadricReport};
use syzcurve::{Error, Flavor, NodalCurveModel, Result};

#[derive(Parser)]
#[command(name = "syzcurve", version, about = "Betti tables of projected canonical and paracanonical curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a random nodal curve and validate it.
    Curve {
        #[command(flatten)]
        curve: CurveArgs,
        /// Write the model as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Betti table of a (projected) curve.
    Betti {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value = "tilde")]
        flavor: Flavor,
        /// Project from a generic point (default).
        #[arg(long, overrides_with = "no_project")]
        project: bool,
        /// Use the full section space.
        #[arg(long = "no-project")]
        no_project: bool,
        #[arg(long, default_value = "m2")]
        format: Format,
        /// Also write an experiment record to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        i_max: Option<usize>,
        #[arg(long, default_value_t = 4)]
        j_max: usize,
        #[arg(long, value_parser = parse_strategy, default_value = "hyperplane-section")]
        strategy: Strategy,
    },
    /// Quadric counts, cubic generators and Jacobian probes.
    Quadrics {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        json: bool,
    },
    /// Rank of the extra syzygy in the linear strand.
    Syzrank {
        #[command(flatten)]
        curve: CurveArgs,
        /// Defaults to ceil(g/2) - 2.
        #[arg(long)]
        position: Option<usize>,
    },
    /// Run a batch of experiments and compare with the reference tables.
    Sweep {
        /// Genera as a list (8,9,10) or a range (8..10).
        #[arg(long, value_parser = parse_list)]
        genus: Vec<Vec<usize>>,
        #[arg(long, value_delimiter = ',', default_value = "canonical")]
        kinds: Vec<CurveKind>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        levels: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seeds: Vec<u64>,
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long, default_value = "tilde")]
        flavor: Flavor,
        #[arg(long)]
        i_max: Option<usize>,
        #[arg(long, default_value_t = 4)]
        j_max: usize,
        #[arg(long)]
        no_quadrics: bool,
        /// Directory for records and the summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    genus: usize,
    /// Torsion level; builds a paracanonical curve.
    #[arg(long)]
    level: Option<u32>,
    /// Defaults to 10007, or the smallest prime above 10000 admitting the level.
    #[arg(long)]
    prime: Option<u32>,
    #[arg(long, env = "SYZ_SEED", default_value_t = 1)]
    seed: u64,
}

impl CurveArgs {
    fn context(&self) -> Result<FieldContext> {
        let p = match (self.prime, self.level) {
            (Some(p), _) => p,
            (None, Some(l)) => smallest_prime_with_levels(10000, &[l]),
            (None, None) => DEFAULT_PRIME,
        };
        FieldContext::new(p)
    }

    fn build(&self) -> Result<(FieldContext, NodalCurveModel)> {
        let ctx = self.context()?;
        let model = match self.level {
            None => build_canonical_curve(self.genus, &ctx, self.seed)?,
            Some(l) => build_paracanonical_curve(self.genus, l, &ctx, self.seed)?,
        };
        Ok((ctx, model))
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let bad = || format!("expected a list like 8,9,10 or a range like 8..10, got {s:?}");
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').parse().map_err(|_| bad())?;
        return if a <= b { Ok((a..=b).collect()) } else { Err(bad()) };
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn parse_strategy(s: &str) -> std::result::Result<Strategy, String> {
    match s {
        "direct" => Ok(Strategy::Direct),
        "hyperplane-section" => Ok(Strategy::HyperplaneSection),
        _ => Err(format!("unknown strategy {s:?} (direct, hyperplane-section)")),
    }
}

fn cmd_curve(args: &CurveArgs, out: Option<&PathBuf>) -> Result<String> {
    let (ctx, model) = args.build()?;
    let mut text = String::new();
    let _ = writeln!(text, "kind: {}", model.kind());
    let _ = writeln!(text, "genus: {}", model.genus);
    if let Some(l) = model.level() {
        let _ = writeln!(text, "level: {l}");
    }
    let _ = writeln!(text, "prime: {}", ctx.modulus());
    let _ = writeln!(text, "seed: {}", model.seed);
    let _ = writeln!(text, "sections: {}", model.sections.count());
    for check in &validate_model(&model).checks {
        let state = if check.passed { "ok" } else if check.required { "FAILED" } else { "informational mismatch" };
        let _ = writeln!(text, "check {}: {state} ({})", check.name, check.detail);
    }
    if let Some(path) = out {
        write_atomic(path, &model.to_json())?;
        let _ = writeln!(text, "model written to {}", path.display());
    }
    Ok(text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_betti(
    args: &CurveArgs,
    flavor: Flavor,
    project: bool,
    format: Format,
    out: Option<&PathBuf>,
    opts: BettiOptions,
) -> Result<String> {
    let start = Instant::now();
    let (ctx, model) = args.build()?;
    let space = if project { project_generic(&model, args.seed)?.v } else { model.full_space() };
    let (table, cells) = betti_table_timed(&ctx, &model, &space, flavor, &opts)?;
    let text = render(&table, format);
    let expected_cells = (opts.j_max + 1) * (opts.i_max.unwrap_or(table.acting_dim) + 1);
    if table.cells().len() < expected_cells {
        eprintln!("partial table: {} of {expected_cells} cells computed", table.cells().len());
    }
    if let Some(path) = out {
        let reference_mismatches = (project && flavor == Flavor::Tilde)
            .then(|| reference_table(model.kind(), model.genus))
            .flatten()
            .map(|r| diff(&r, &table));
        let record = ExperimentRecord {
            kind: model.kind(),
            genus: model.genus,
            level: model.level(),
            prime: ctx.modulus(),
            seed: args.seed,
            flavor,
            projected: project,
            table,
            quadrics: None,
            syzygy: None,
            reference_mismatches,
            version: TOOL_VERSION.to_string(),
            timings: Timings::from_cells(start.elapsed().as_secs_f64() * 1e3, &cells),
        };
        record.write(path)?;
    }
    Ok(text)
}

fn quadric_text(r: &QuadricReport) -> String {
    let relation = if r.dim_vi2 == r.dim_i3 {
        format!("{} = {} (isomorphism)", r.dim_vi2, r.dim_i3)
    } else {
        format!("{} < {} (cokernel {})", r.dim_vi2, r.dim_i3, r.dim_i3 - r.dim_vi2)
    };
    let ranks: Vec<String> = r.jacobian_ranks.iter().map(|(_, k)| k.to_string()).collect();
    format!(
        "kind: {}\ngenus: {}\nprime: {}\nseed: {}\ndim V: {}\ndim I2: {}\ndim I3: {}\nV⊗I2 → I3: {relation}\nb12: {}\ngenerated by quadrics: {}\njacobian ranks: {}\n",
        r.kind,
        r.genus,
        r.prime,
        r.seed,
        r.dim_v,
        r.dim_i2,
        r.dim_i3,
        r.b12,
        if r.generated_by_quadrics { "yes" } else { "no" },
        if ranks.is_empty() { "-".to_string() } else { ranks.join(" ") },
    )
}

fn cmd_quadrics(args: &CurveArgs, json: bool) -> Result<String> {
    let (_, model) = args.build()?;
    let report = quadric_generation_test(&project_generic(&model, args.seed)?)?;
    Ok(if json { report.to_json() + "\n" } else { quadric_text(&report) })
}

fn cmd_syzrank(args: &CurveArgs, position: Option<usize>) -> Result<String> {
    let (ctx, model) = args.build()?;
    let position = position.unwrap_or_else(|| model.genus.div_ceil(2).saturating_sub(2));
    let spec = project_generic(&model, args.seed)?;
    let r = extra_syzygy_rank(&ctx, &model, &spec.v, position, args.seed)?;
    let mut text = String::new();
    let _ = writeln!(text, "position: ({}, 1)", r.position);
    let _ = writeln!(text, "betti: {}", r.betti);
    let _ = writeln!(text, "dim V: {}", r.dim_v);
    let _ = writeln!(text, "rank: {}", r.rank);
    if r.maximal {
        let _ = writeln!(text, "maximal rank");
    } else {
        let _ = writeln!(text, "not maximal (minimum over {} sampled representatives)", r.samples.len());
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Curve { curve, out } => cmd_curve(&curve, out.as_ref()),
        Command::Betti { curve, flavor, project, no_project, format, out, i_max, j_max, strategy } => {
            let _ = project;
            let opts = BettiOptions { i_max, j_max, strategy, max_entries: None };
            cmd_betti(&curve, flavor, !no_project, format, out.as_ref(), opts)
        }
        Command::Quadrics { curve, json } => cmd_quadrics(&curve, json),
        Command::Syzrank { curve, position } => cmd_syzrank(&curve, position),
        Command::Sweep { genus, kinds, levels, seeds, prime, flavor, i_max, j_max, no_quadrics, out } => {
            let genera: Vec<usize> = genus.into_iter().flatten().collect();
            if genera.is_empty() {
                return Err(Error::InvalidArgument("--genus is required".into()));
            }
            let config = SweepConfig {
                kinds,
                genera,
                levels,
                seeds,
                prime,
                flavor,
                options: BettiOptions { i_max, j_max, ..BettiOptions::default() },
                quadrics: !no_quadrics,
                out_dir: out,
            };
            Ok(run_sweep(&config)?.text())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(5)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
