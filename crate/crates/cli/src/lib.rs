//! Command-line front end for the orthoguard solver.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid input, 3 failed
//! verification, 4 exact solver cap exceeded.

pub mod format;
pub mod svg;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use orthoguard::exact::{minimum_guard_set_with, ExactConfig, ExactError, DEFAULT_CAP};
use orthoguard::gen::{fixtures, random_terrain, EndStyle, GenParams};
use orthoguard::solver::verify_guard_set;
use orthoguard::visibility::sees;
use orthoguard::{solve_side, solve_traced, GuardSolution, Provenance, Side, SolverError, Terrain, VertexClass};
use thiserror::Error;

use crate::format::{parse_solution, parse_terrain, serialize_solution, serialize_terrain, FormatError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{0}")]
    Verification(String),
    #[error(transparent)]
    Exact(ExactError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Format { .. } | CliError::Solver(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Exact(ExactError::CapExceeded { .. }) => 4,
            CliError::Exact(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "orthoguard", version, about = "Guard sets for 1.5D orthogonal terrains (0-based vertex indices)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
            SideArg::Both => Side::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VertexSet {
    All,
    Reflex,
    Convex,
    LeftConvex,
    RightConvex,
}

impl VertexSet {
    fn select(self, t: &Terrain) -> Vec<usize> {
        match self {
            VertexSet::All => (0..t.len()).collect(),
            VertexSet::Reflex => t.reflex_indices(),
            VertexSet::Convex => t.convex_indices(),
            VertexSet::LeftConvex => t.indices_of(VertexClass::LeftConvex),
            VertexSet::RightConvex => t.indices_of(VertexClass::RightConvex),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EndsArg {
    Vertical,
    Horizontal,
    Mixed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a guard set with the sweep pipeline.
    Solve {
        terrain: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        /// Write the sweep trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the solution here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check coverage with the visibility oracle: all vertices for `both`,
    /// the convex vertices of that side otherwise.
        #[arg(long)]
        verify: bool,
    },
    /// Compute a minimum guard set by exhaustive search.
    Exact {
        terrain: PathBuf,
        #[arg(long, value_enum, default_value = "reflex")]
        candidates: VertexSet,
        #[arg(long, value_enum, default_value = "all")]
        witnesses: VertexSet,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a solution file guards every vertex of a terrain.
    Check { terrain: PathBuf, solution: PathBuf },
    /// Time the pipeline on generated terrains and check the counter bounds.
    Bench {
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        max_run: u32,
        #[arg(long, default_value_t = 4)]
        max_jump: u32,
    },
    /// Draw a terrain, and optionally a solution, as SVG.
    Render {
        terrain: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated terrain or a named fixture.
    Gen {
        /// One of E1, E2, E1-mirror, T3.
        #[arg(long, conflicts_with_all = ["seed", "steps"])]
        fixture: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 4)]
        max_run: u32,
        #[arg(long, default_value_t = 4)]
        max_jump: u32,
        #[arg(long, value_enum, default_value = "vertical")]
        ends: EndsArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_terrain(path: &Path) -> Result<Terrain, CliError> {
    parse_terrain(&read(path)?).map_err(|source| CliError::Format { path: path.to_owned(), source })
}

fn emit(out: &mut dyn Write, dest: Option<&Path>, text: &str) -> Result<(), CliError> {
    match dest {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
    };
}

/// Parse `args` and run the command. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Solve { terrain, side, trace, out: dest, verify } => {
            let t = load_terrain(&terrain)?;
            let sol = match &trace {
                Some(path) => {
                    let (sol, text) = solve_traced(&t, side.into())?;
                    write_file(path, &text)?;
                    sol
                }
                None => solve_side(&t, side.into())?,
            };
            emit(out, dest.as_deref(), &serialize_solution(&sol))?;
            if verify {
                let targets = match side {
                    SideArg::Both => VertexSet::All,
                    SideArg::Left => VertexSet::LeftConvex,
                    SideArg::Right => VertexSet::RightConvex,
                }
                .select(&t);
                let guards = sol.guard_set();
                let missed: Vec<usize> = targets.iter().copied().filter(|&w| !guards.iter().any(|&g| sees(&t, g, w))).collect();
                if !missed.is_empty() {
                    return Err(CliError::Verification(format!("uncovered vertices: {missed:?}")));
                }
                if dest.is_some() {
                    say!(out, "verified: {} guards cover {} target vertices", sol.len(), targets.len())?;
                }
            }
            Ok(())
        }
        Command::Exact { terrain, candidates, witnesses, cap, out: dest } => {
            let t = load_terrain(&terrain)?;
            let cands = candidates.select(&t);
            let wits = witnesses.select(&t);
            let guards = minimum_guard_set_with(&t, &cands, &wits, &ExactConfig { cap }).map_err(CliError::Exact)?;
            let sol = assign_witnesses(&t, &guards, &wits);
            say!(out, "optimum {}", guards.len())?;
            if let Some(p) = dest {
                write_file(&p, &serialize_solution(&sol))?;
            } else {
                emit(out, None, &serialize_solution(&sol))?;
            }
            Ok(())
        }
        Command::Check { terrain, solution } => {
            let t = load_terrain(&terrain)?;
            let sol = parse_solution(&read(&solution)?, t.len())
                .map_err(|source| CliError::Format { path: solution.clone(), source })?;
            for (g, e) in &sol.guards {
                if let Some(w) = e.witnesses.iter().find(|&&w| !sees(&t, *g, w)) {
                    return Err(CliError::Verification(format!("guard {g} does not see its witness {w}")));
                }
            }
            let report = verify_guard_set(&t, &sol.guard_set());
            if report.is_covered() {
                say!(out, "ok: {} guards cover all {} vertices", sol.len(), t.len())?;
                Ok(())
            } else {
                Err(CliError::Verification(format!("uncovered vertices: {:?}", report.uncovered)))
            }
        }
        Command::Bench { sizes, seeds, max_run, max_jump } => bench(out, &sizes, seeds, max_run, max_jump),
        Command::Render { terrain, solution, out: dest } => {
            let t = load_terrain(&terrain)?;
            let sol = match &solution {
                Some(p) => Some(parse_solution(&read(p)?, t.len()).map_err(|source| CliError::Format { path: p.clone(), source })?),
                None => None,
            };
            emit(out, dest.as_deref(), &svg::render(&t, sol.as_ref()))
        }
        Command::Gen { fixture, seed, steps, max_run, max_jump, ends, out: dest } => {
            let t = match fixture {
                Some(name) => fixtures()
                    .remove(name.as_str())
                    .ok_or_else(|| CliError::Usage(format!("unknown fixture `{name}`")))?,
                None => {
                    let ends = match ends {
                        EndsArg::Vertical => EndStyle::VerticalBoth,
                        EndsArg::Horizontal => EndStyle::HorizontalBoth,
                        EndsArg::Mixed => EndStyle::Mixed,
                    };
                    random_terrain(&GenParams { seed, steps, max_run, max_jump, ends }).map_err(|e| CliError::Usage(e.to_string()))?
                }
            };
            emit(out, dest.as_deref(), &serialize_terrain(&t))
        }
    }
}

/// Give each witness to the lowest-indexed guard that sees it.
fn assign_witnesses(t: &Terrain, guards: &BTreeSet<usize>, witnesses: &[usize]) -> GuardSolution {
    let mut sol = GuardSolution::default();
    for &w in witnesses {
        if let Some(&g) = guards.iter().find(|&&g| sees(t, g, w)) {
            sol.guards.entry(g).or_default().witnesses.push(w);
        }
    }
    for &g in guards {
        sol.guards.entry(g).or_default();
    }
    sol
}

fn bench(out: &mut dyn Write, sizes: &[usize], seeds: u64, max_run: u32, max_jump: u32) -> Result<(), CliError> {
    say!(out, "{:>9} {:>6} {:>8} {:>9} {:>10} {:>10} {:>8} {:>12}  check", "n", "seed", "m", "ms", "events", "heap_ops", "fired", "heap_bound")?;
    let mut failed = 0;
    for &size in sizes {
        if size < 4 {
            return Err(CliError::Usage(format!("size {size} is below the 4-vertex minimum")));
        }
        for seed in 0..seeds {
            let p = GenParams { seed, steps: size / 2 - 1, max_run, max_jump, ends: EndStyle::VerticalBoth };
            let t = random_terrain(&p).map_err(|e| CliError::Usage(e.to_string()))?;
            let start = Instant::now();
            let sol = solve_side(&t, Side::Both)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let sides: Vec<_> = [sol.left_counters, sol.right_counters].into_iter().flatten().collect();
            let events: usize = sides.iter().map(|c| c.vertex_events() + c.intersections_fired + c.intersections_discarded).sum();
            let ops: usize = sides.iter().map(|c| c.heap_ops()).sum();
            let fired: usize = sides.iter().map(|c| c.intersections_fired).sum();
            let m = sol.len() as f64;
            let bound = 20.0 * (t.len() as f64 + m * m.max(2.0).log2());
            let picked = |p: Provenance| sol.guards.values().filter(|e| e.provenance.contains(&p)).count();
            let fired_ok = sol.left_counters.is_none_or(|c| c.intersections_fired <= picked(Provenance::LeftSweep))
                && sol.right_counters.is_none_or(|c| c.intersections_fired <= picked(Provenance::RightSweep));
            let ok = ops as f64 <= bound && fired_ok;
            if !ok {
                failed += 1;
            }
            say!(
                out,
                "{:>9} {:>6} {:>8} {:>9.2} {:>10} {:>10} {:>8} {:>12.0}  {}",
                t.len(),
                seed,
                sol.len(),
                ms,
                events,
                ops,
                fired,
                bound,
                if ok { "ok" } else { "FAIL" }
            )?;
        }
    }
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} rows broke a counter bound")));
    }
    Ok(())
}
