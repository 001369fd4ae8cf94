//! The `gridorder` command line.
//!
//! Every subcommand is deterministic given its flags. JSON reports keep a
//! fixed key order and write big integers as decimal strings.
//!
//! Exit codes: `0` success, `2` validation or lemma failure, `3` usage or
//! input error, `4` enumeration budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::{
    annulus_random_lines, base_pair_lines, build_cross, build_polygon, check_lemma_line_squares,
    check_lemma_separation, erdos_parabola, ConstructionKind, ConstructionLayout, LineSquaresReport,
    SeparationReport,
};
use crate::geometry::{parse_point_file, write_point_file, Line};
use crate::oracles::{
    arrangement_census, bound_formulas, enumerate_grid_ordertypes, zaslavsky_cells, BoundReport,
    GridOrderTypeCount, DEFAULT_BUDGET,
};
use crate::ordertype::SignatureDigest;
use crate::placement::{
    default_steps, run_batch, run_continuing, PlacementEngine, PlacementTrace, Policy, PolicyKind,
    TraceFile,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "gridorder", version, about = "Labeled order types on small integer grids")]
pub struct Cli {
    /// Log progress to stderr.
    #[arg(long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Cross,
    Polygon,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the parabola set {(i, i² mod p)} as a point file.
    GenParabola {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify a layout.
    Build {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run placement engines on a layout and report distinctness.
    Place {
        /// Layout JSON written by `build`.
        layout: PathBuf,
        /// Seed of the first engine; engine `i` uses `seed + i`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Steps per engine; defaults to `min(n − |base|, |T|)`.
        #[arg(long)]
        steps: Option<usize>,
        /// Continue a saved random trace by `--steps` more placements.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Also write every trace as a JSON array.
        #[arg(long)]
        traces: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Re-verify a layout and run the per-line and separation checks.
    Verify {
        layout: PathBuf,
        /// Random annulus lines for the polygon line check.
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Count labeled order types on the g × g grid exhaustively.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// One or more grid sides, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        g: Vec<u64>,
        /// Cap on the search size (g²)ⁿ.
        #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Count arrangement cells of a point file and compare with the formula.
    Census {
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, _: &log::Metadata) -> bool {
        true
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!("{}: {}", record.level().as_str().to_lowercase(), record.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

fn init_logger(verbose: bool) {
    let _ = log::set_logger(&LOGGER);
    log::set_max_level(if verbose {
        log::LevelFilter::Info
    } else {
        log::LevelFilter::Warn
    });
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Io(_)
        | Error::Json(_)
        | Error::Parse(_)
        | Error::InvalidInput(_)
        | Error::NotPrime(_)
        | Error::TooSmall { .. }
        | Error::TooManySteps { .. } => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

/// Parse arguments, run, and return the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    init_logger(cli.verbose);
    match execute(&cli.command) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            exit_code(&e)
        }
    }
}

/// Runs one subcommand; `Ok(false)` means the report was written but a check failed.
pub fn execute(cmd: &Command) -> Result<bool> {
    match cmd {
        Command::GenParabola { p, out } => {
            let s = erdos_parabola(*p)?;
            let text = write_point_file(&s);
            if parse_point_file(&text)? != s {
                return Err(Error::Internal("point file does not round-trip".into()));
            }
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Build { kind, n, out, format } => {
            let layout = match kind {
                Kind::Cross => build_cross(*n)?,
                Kind::Polygon => build_polygon(*n)?,
            };
            let text = match format {
                Format::Json => layout.to_json() + "\n",
                Format::Text | Format::Csv => layout_summary(&layout),
            };
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Place {
            layout,
            seed,
            count,
            steps,
            resume,
            traces,
            out,
            format,
        } => {
            let layout = load_layout(layout)?;
            match resume {
                Some(path) => cmd_resume(&layout, path, *count, *steps, out.as_deref(), *format),
                None => cmd_place(&layout, *seed, *count, *steps, traces.as_deref(), out.as_deref(), *format),
            }
        }
        Command::Verify {
            layout,
            count,
            seed,
            out,
            format,
        } => {
            let layout = load_layout(layout)?;
            let report = verify_report(&layout, *count, *seed)?;
            let text = match format {
                Format::Json => to_json(&report),
                Format::Text | Format::Csv => report.to_text(),
            };
            emit(out.as_deref(), &text)?;
            Ok(report.pass)
        }
        Command::Enumerate {
            n,
            g,
            budget,
            out,
            format,
        } => {
            let counts = g
                .iter()
                .map(|&g| enumerate_grid_ordertypes(*n, g, *budget as u128))
                .collect::<Result<Vec<GridOrderTypeCount>>>()?;
            let text = match format {
                Format::Json => to_json(&counts),
                Format::Text => counts
                    .iter()
                    .map(|c| format!("n={} g={} count={}\n", c.n, c.g, c.count))
                    .collect(),
                Format::Csv => {
                    let mut s = String::from("n,g,alpha,count\n");
                    for c in &counts {
                        let _ = writeln!(s, "{},{},{:.6},{}", c.n, c.g, c.alpha, c.count);
                    }
                    s
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Census { points, out, format } => {
            let s = parse_point_file(&read(points)?)?;
            let census = arrangement_census(&s)?;
            let formula = zaslavsky_cells(s.len() as u64);
            let report = CensusReport {
                n: s.len(),
                lines: census.lines.len(),
                vertices: census.vertices.len(),
                parallel_pairs: census.parallel_pairs,
                generic: census.generic,
                cells: census.cell_count.to_string(),
                formula: formula.to_string(),
                matches: census.cell_count == formula,
            };
            let text = match format {
                Format::Json => to_json(&report),
                Format::Text | Format::Csv => format!(
                    "cells={} formula={} {}{}\n",
                    report.cells,
                    report.formula,
                    if report.matches { "match" } else { "mismatch" },
                    if report.generic { "" } else { " (not generic)" }
                ),
            };
            emit(out.as_deref(), &text)?;
            Ok(report.matches || !report.generic)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn load_layout(path: &Path) -> Result<ConstructionLayout> {
    ConstructionLayout::from_json(&read(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn kind_name(k: ConstructionKind) -> &'static str {
    match k {
        ConstructionKind::Cross => "cross",
        ConstructionKind::Polygon => "polygon",
    }
}

fn layout_summary(layout: &ConstructionLayout) -> String {
    let p = &layout.params;
    let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    format!(
        "kind={} n={} p={} k={} m={} L={} ell={} base_points={} chosen_lines={} squares={} grid_extent={}\n",
        kind_name(layout.kind),
        p.n,
        opt(p.p),
        opt(p.k),
        opt(p.m),
        opt(p.side_length),
        p.ell,
        layout.base_points.len(),
        layout.chosen_lines.len(),
        layout.squares.len(),
        p.grid_extent
    )
}

#[derive(Serialize)]
struct CensusReport {
    n: usize,
    lines: usize,
    vertices: usize,
    parallel_pairs: usize,
    generic: bool,
    cells: String,
    formula: String,
    #[serde(rename = "match")]
    matches: bool,
}

#[derive(Serialize)]
struct TraceSummary {
    seed: u64,
    digest: SignatureDigest,
    alive: Vec<usize>,
    log_lower_bound: String,
    alive_product: String,
    max_squares_per_line: usize,
}

impl From<&PlacementTrace> for TraceSummary {
    fn from(t: &PlacementTrace) -> Self {
        TraceSummary {
            seed: t.seed,
            digest: t.digest,
            alive: t.steps.iter().map(|s| s.alive).collect(),
            log_lower_bound: format!("{:.6}", t.log_lower_bound),
            alive_product: t.alive_product.to_string(),
            max_squares_per_line: t.max_squares_per_line,
        }
    }
}

#[derive(Serialize)]
struct PlaceReport {
    kind: &'static str,
    n: u64,
    seed: u64,
    count: usize,
    steps: usize,
    distinct: usize,
    all_distinct: bool,
    alive_non_increasing: bool,
    bounds: BoundReport,
    traces: Vec<TraceSummary>,
}

fn cmd_place(
    layout: &ConstructionLayout,
    seed: u64,
    count: usize,
    steps: Option<usize>,
    traces_out: Option<&Path>,
    out: Option<&Path>,
    format: Format,
) -> Result<bool> {
    if count == 0 {
        return Err(Error::InvalidInput("--count must be positive".into()));
    }
    let steps = steps.unwrap_or_else(|| default_steps(layout));
    let seeds: Vec<u64> = (0..count as u64).map(|i| seed.wrapping_add(i)).collect();
    let traces = run_batch(layout, &seeds, steps)?;
    let digests: std::collections::BTreeSet<SignatureDigest> = traces.iter().map(|t| t.digest).collect();
    let monotone = traces
        .iter()
        .all(|t| t.steps.windows(2).all(|w| w[1].alive <= w[0].alive));
    let report = PlaceReport {
        kind: kind_name(layout.kind),
        n: layout.params.n,
        seed,
        count,
        steps,
        distinct: digests.len(),
        all_distinct: digests.len() == count,
        alive_non_increasing: monotone,
        bounds: bound_formulas(layout.params.n)?,
        traces: traces.iter().map(TraceSummary::from).collect(),
    };
    if let Some(path) = traces_out {
        let files: Vec<TraceFile> = traces.iter().map(|t| t.to_file()).collect();
        fs::write(path, to_json(&files))?;
    }
    let text = match format {
        Format::Json => to_json(&report),
        Format::Text => {
            let mut s = format!(
                "kind={} n={} count={} steps={} distinct={}\n",
                report.kind, report.n, count, steps, report.distinct
            );
            for t in &report.traces {
                let _ = writeln!(s, "seed={} digest={} log_lower_bound={}", t.seed, t.digest, t.log_lower_bound);
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("seed,step,alive\n");
            for t in &report.traces {
                for (i, a) in t.alive.iter().enumerate() {
                    let _ = writeln!(s, "{},{},{}", t.seed, i, a);
                }
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(report.all_distinct && monotone)
}

fn cmd_resume(
    layout: &ConstructionLayout,
    path: &Path,
    count: usize,
    steps: Option<usize>,
    out: Option<&Path>,
    format: Format,
) -> Result<bool> {
    if count != 1 {
        return Err(Error::InvalidInput("--resume continues a single trace; use --count 1".into()));
    }
    let saved: TraceFile = serde_json::from_str(&read(path)?)?;
    if saved.policy != PolicyKind::Random {
        return Err(Error::InvalidInput("only random traces can be resumed".into()));
    }
    let mut engine = PlacementEngine::new(layout, saved.seed);
    let prefix = engine.replay(&saved)?;
    let more = steps.unwrap_or_else(|| default_steps(layout).saturating_sub(prefix.len()));
    let trace = run_continuing(&mut engine, &Policy::Random, more, prefix)?;
    let text = match format {
        Format::Json => to_json(&trace.to_file()),
        Format::Text | Format::Csv => format!(
            "seed={} steps={} digest={} log_lower_bound={:.6}\n",
            trace.seed,
            trace.steps.len(),
            trace.digest,
            trace.log_lower_bound
        ),
    };
    emit(out, &text)?;
    Ok(true)
}

/// Largest number of squares met by one line through two base points.
#[derive(Serialize)]
struct BasePairCheck {
    lines: usize,
    max_squares: usize,
    /// Counts must stay strictly below this (`2p`) for the cross layout.
    limit: u64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    kind: &'static str,
    n: u64,
    base_points: usize,
    squares: usize,
    chosen_lines: usize,
    /// General position, square bounds and pairwise separation all hold
    /// (checked while loading).
    structure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_lines: Option<BasePairCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    separation: Option<SeparationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    line_squares: Option<LineSquaresReport>,
    pass: bool,
}

impl VerifyReport {
    fn to_text(&self) -> String {
        let mut s = format!(
            "kind={} n={} base_points={} squares={} chosen_lines={} structure=ok\n",
            self.kind, self.n, self.base_points, self.squares, self.chosen_lines
        );
        if let Some(c) = &self.cross_lines {
            let _ = writeln!(s, "base-pair lines: {} max squares per line {} (limit < {})", c.lines, c.max_squares, c.limit);
        }
        if let Some(r) = &self.separation {
            let _ = writeln!(
                s,
                "separation: min distance {:.3} bound {:.3} min post-rounding gap {:.3} failures {}",
                r.min_distance, r.bound, r.min_post_rounding_gap, r.failures
            );
        }
        if let Some(r) = &self.line_squares {
            let _ = writeln!(
                s,
                "line squares: {} lines max count {} bound {} failures {}",
                r.lines_checked, r.max_count, r.bound_floor, r.failures
            );
        }
        let _ = writeln!(s, "{}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

fn verify_report(layout: &ConstructionLayout, count: usize, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        kind: kind_name(layout.kind),
        n: layout.params.n,
        base_points: layout.base_points.len(),
        squares: layout.squares.len(),
        chosen_lines: layout.chosen_lines.len(),
        structure: true,
        cross_lines: None,
        separation: None,
        line_squares: None,
        pass: true,
    };
    match layout.kind {
        ConstructionKind::Cross => {
            let p = layout
                .params
                .p
                .ok_or_else(|| Error::InvalidInput("cross layout without p".into()))?;
            let lines = base_pair_lines(layout);
            let max_squares = lines
                .iter()
                .map(|(a, b)| {
                    let l = Line::through(a, b);
                    layout.squares.iter().filter(|s| l.intersects_square(s)).count()
                })
                .max()
                .unwrap_or(0);
            let pass = (max_squares as u64) < 2 * p;
            report.pass &= pass;
            report.cross_lines = Some(BasePairCheck {
                lines: lines.len(),
                max_squares,
                limit: 2 * p,
                pass,
            });
        }
        ConstructionKind::Polygon => {
            let sep = check_lemma_separation(layout)?;
            let mut lines = base_pair_lines(layout);
            lines.extend(annulus_random_lines(layout, count, seed)?);
            let ls = check_lemma_line_squares(layout, &lines)?;
            report.pass &= sep.pass && ls.pass;
            report.separation = Some(sep);
            report.line_squares = Some(ls);
        }
    }
    Ok(report)
}
