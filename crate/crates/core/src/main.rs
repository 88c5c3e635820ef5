use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use distfn::info::full_report;
use distfn::sim::{self, Cell, CellSettings, ExperimentPlan};
use distfn::source::{induced_z_pmf, load_source_file, FunctionSpec, JointSource};
use distfn::typicality::{self, ProductPmf, TypicalityParams, DEFAULT_BUDGET};
use distfn::{Error, Result};

/// Boundary polylines extend this many bits past the outermost corners.
const BOUNDARY_SPAN: f64 = 1.0;

#[derive(Parser)]
#[command(name = "distfn", version, about = "Distributed compression of a function of two sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every entropy of the source and function as JSON.
    Entropy {
        #[arg(long)]
        source: PathBuf,
    },
    /// Print both rate regions; optionally write the function-region boundary as CSV.
    Region {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        boundary_out: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        resolution: usize,
    },
    /// Enumerate a typical set exhaustively.
    Typical {
        #[arg(long)]
        source: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Include the typical sequences themselves (capped).
        #[arg(long)]
        list: bool,
    },
    /// Run one cell and print its report row as CSV.
    Simulate {
        #[arg(long)]
        source: PathBuf,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        #[arg(long, default_value_t = sim::DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, default_value_t = sim::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        full_z: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run a plan file; writes CSV to --out and a JSON mirror beside it.
    Sweep {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    X,
    Y,
    Z,
    Joint,
}

fn load(path: &Path) -> Result<(JointSource, FunctionSpec)> {
    let (src, f) = load_source_file(path)?;
    let unused = f.unused_z_symbols();
    if !unused.is_empty() {
        eprintln!("warning: z symbols {unused:?} never occur as F(x, y)");
    }
    Ok((src, f))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|e| Error::Io { path: "<stdout>".into(), source: e })
}

fn workers(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Entropy { source } => {
            let (src, f) = load(&source)?;
            print_json(&full_report(&src, &f)?)
        }
        Command::Region { source, boundary_out, resolution } => {
            let (src, f) = load(&source)?;
            let summary = sim::report_regions(&src, &f)?;
            if let Some(path) = boundary_out {
                let file = std::fs::File::create(&path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
                summary.function_region.write_boundary_csv(file, resolution, BOUNDARY_SPAN)?;
            }
            print_json(&summary)
        }
        Command::Typical { source, which, n, eps, budget, list } => {
            let (src, f) = load(&source)?;
            let params = TypicalityParams::new(eps, n)?;
            let (px, py) = src.marginals();
            let summary = match which {
                Which::X => typicality::enumerate_typical(&px, &params, budget, list)?,
                Which::Y => typicality::enumerate_typical(&py, &params, budget, list)?,
                Which::Z => typicality::enumerate_typical(&induced_z_pmf(&src, &f)?, &params, budget, list)?,
                Which::Joint => {
                    let joint = ProductPmf::new(vec![src.x_size(), src.y_size()], src.pmf().to_vec())?;
                    typicality::enumerate_jointly_typical(&joint, &params, budget, list)?
                }
            };
            print_json(&summary)
        }
        Command::Simulate { source, n, r1, r2, eps, trials, seed, budget, full_z, workers: w } => {
            let (src, f) = load(&source)?;
            let settings = CellSettings { epsilon: eps, trials, master_seed: seed, budget, full_z };
            let report = sim::with_workers(workers(w), || sim::run_cell(&src, &f, Cell { n, r1, r2 }, &settings))??;
            sim::write_rows_csv(std::io::stdout().lock(), [&report.row])
        }
        Command::Sweep { plan, out, workers: w } => {
            let plan = ExperimentPlan::load(&plan)?;
            let out = out.or_else(|| plan.output.clone()).ok_or_else(|| {
                Error::InvalidParameter("no output path: pass --out or set \"output\" in the plan".into())
            })?;
            let report = sim::with_workers(workers(w), || sim::run_sweep(&plan))??;
            for failure in &report.failures {
                eprintln!("skipped {failure}");
            }
            let json = report.write_files(&out)?;
            eprintln!("wrote {} and {}", out.display(), json.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}
