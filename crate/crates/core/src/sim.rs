//! Monte Carlo experiment driver.
//!
//! A plan is a list of block lengths and a grid of nominal rate pairs. Each
//! cell builds one decoder and runs independent trials. Randomness is
//! derived, never shared:
//!
//! * bin labels depend on `(master_seed, encoder, n, sequence)` only, so the
//!   codes of every cell with the same `n` are nested truncations of each other;
//! * the source realization of trial `t` at block length `n` comes from the
//!   substream `(master_seed, n, t)`, independent of the rates.
//!
//! Together these make every rate comparison at fixed `n` a comparison on
//! identical realizations with nested bins.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{BinningCode, Decoder, DecoderOptions, ErrorClass, EventFlags};
use crate::error::{Error, Result};
use crate::info::{full_report, EntropyReport};
use crate::region::{region_of, RateRegion, RegionKind, DEFAULT_TOLERANCE};
use crate::source::{load_source_file, FunctionSpec, JointSource};
use crate::stream::substream;
use crate::typicality::{TypicalityParams, DEFAULT_BUDGET};

pub const DEFAULT_EPSILON: f64 = 0.15;
pub const DEFAULT_TRIALS: usize = 2000;
pub const DEFAULT_N_VALUES: [usize; 5] = [2, 4, 6, 8, 10];
pub const DEFAULT_RATES: [f64; 3] = [0.5, 1.0, 1.5];

/// Two-sided 95% standard normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

/// Stream tag separating trial substreams from any other derived stream.
const TRIAL_STREAM: u64 = 0x7472_6961_6c73;

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}
fn default_trials() -> usize {
    DEFAULT_TRIALS
}
fn default_n_values() -> Vec<usize> {
    DEFAULT_N_VALUES.to_vec()
}
fn default_rates() -> Vec<f64> {
    DEFAULT_RATES.to_vec()
}
fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

/// A sweep description, as read from a plan file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    /// Source/function document; relative paths resolve against the plan file.
    pub source: PathBuf,
    #[serde(default = "default_n_values")]
    pub n_values: Vec<usize>,
    #[serde(default = "default_rates")]
    pub r1_values: Vec<f64>,
    #[serde(default = "default_rates")]
    pub r2_values: Vec<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub full_z: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentPlan {
    /// The default sweep over `source`.
    pub fn new(source: impl Into<PathBuf>) -> Self {
        ExperimentPlan {
            source: source.into(),
            n_values: default_n_values(),
            r1_values: default_rates(),
            r2_values: default_rates(),
            epsilon: DEFAULT_EPSILON,
            trials: DEFAULT_TRIALS,
            master_seed: 0,
            budget: DEFAULT_BUDGET,
            full_z: false,
            output: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut plan: ExperimentPlan = serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
        if plan.source.is_relative() {
            if let Some(dir) = path.parent() {
                plan.source = dir.join(&plan.source);
            }
        }
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.n_values.is_empty() || self.r1_values.is_empty() || self.r2_values.is_empty() {
            return Err(Error::InvalidParameter("plan grid is empty".into()));
        }
        if self.n_values.contains(&0) {
            return Err(Error::InvalidParameter("block lengths must be at least 1".into()));
        }
        if self.r1_values.iter().chain(&self.r2_values).any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::InvalidParameter("rates must be finite and non-negative".into()));
        }
        TypicalityParams::new(self.epsilon, 1)?;
        Ok(())
    }

    /// Cells in `(n, r1, r2)` nesting order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &n in &self.n_values {
            for &r1 in &self.r1_values {
                for &r2 in &self.r2_values {
                    cells.push(Cell { n, r1, r2 });
                }
            }
        }
        cells
    }

    pub fn settings(&self) -> CellSettings {
        CellSettings {
            epsilon: self.epsilon,
            trials: self.trials,
            master_seed: self.master_seed,
            budget: self.budget,
            full_z: self.full_z,
        }
    }
}

/// One grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    pub r1: f64,
    pub r2: f64,
}

/// Everything about a cell run that is not the grid point itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSettings {
    pub epsilon: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub budget: u64,
    pub full_z: bool,
}

impl Default for CellSettings {
    fn default() -> Self {
        CellSettings {
            epsilon: DEFAULT_EPSILON,
            trials: DEFAULT_TRIALS,
            master_seed: 0,
            budget: DEFAULT_BUDGET,
            full_z: false,
        }
    }
}

/// One CSV row. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub r1_nominal: f64,
    pub r2_nominal: f64,
    pub k1: u32,
    pub k2: u32,
    pub r1_eff: f64,
    pub r2_eff: f64,
    pub eps: f64,
    pub trials: usize,
    pub errors: usize,
    pub pe_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub e0: usize,
    pub e1: usize,
    pub e2: usize,
    pub e12: usize,
    pub in_region_eff: bool,
    pub in_sw_region_eff: bool,
    pub seed: u64,
}

/// Per-trial record carried in the JSON mirror.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub success: bool,
    pub truth_typical: bool,
    pub class: ErrorClass,
    pub candidates: usize,
    #[serde(flatten)]
    pub events: EventFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub row: ReportRow,
    pub trials: Vec<TrialRecord>,
}

/// Wilson score interval at 95% for `errors` out of `trials`.
pub fn wilson_interval(errors: usize, trials: usize) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).min(p).max(0.0), (center + half).max(p).min(1.0))
}

fn cell_code(src: &JointSource, cell: Cell, settings: &CellSettings) -> Result<BinningCode> {
    BinningCode::new(cell.n, src.x_size(), src.y_size(), cell.r1, cell.r2, settings.master_seed)
}

fn cell_decoder(src: &JointSource, f: &FunctionSpec, cell: Cell, settings: &CellSettings) -> Result<Decoder> {
    let code = cell_code(src, cell, settings)?;
    let params = TypicalityParams::new(settings.epsilon, cell.n)?;
    Decoder::new(&code, src, f, params, DecoderOptions { budget: settings.budget, full_z: settings.full_z })
}

/// Runs every trial of one cell.
pub fn run_cell(src: &JointSource, f: &FunctionSpec, cell: Cell, settings: &CellSettings) -> Result<CellReport> {
    if settings.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let decoder = cell_decoder(src, f, cell, settings)?;
    let report = full_report(src, f)?;
    let trials: Vec<TrialRecord> = (0..settings.trials)
        .into_par_iter()
        .map(|t| {
            let mut stream = substream(settings.master_seed, &[TRIAL_STREAM, cell.n as u64, t as u64]);
            let pair = src.sample(cell.n, &mut stream)?;
            let out = decoder.run(&pair)?;
            Ok(TrialRecord {
                success: out.is_success(),
                truth_typical: out.truth_typical,
                class: out.error_class,
                candidates: out.candidate_count,
                events: out.events,
            })
        })
        .collect::<Result<_>>()?;

    let count = |class| trials.iter().filter(|t| t.class == class).count();
    let errors = trials.iter().filter(|t| !t.success).count();
    let (ci_lo, ci_hi) = wilson_interval(errors, settings.trials);
    let code = decoder.code();
    let (r1_eff, r2_eff) = (code.r1_effective(), code.r2_effective());
    let row = ReportRow {
        n: cell.n,
        r1_nominal: cell.r1,
        r2_nominal: cell.r2,
        k1: code.k1,
        k2: code.k2,
        r1_eff,
        r2_eff,
        eps: settings.epsilon,
        trials: settings.trials,
        errors,
        pe_hat: errors as f64 / settings.trials as f64,
        ci_lo,
        ci_hi,
        e0: count(ErrorClass::E0NoCandidate),
        e1: count(ErrorClass::E1XConfusion),
        e2: count(ErrorClass::E2YConfusion),
        e12: count(ErrorClass::E12JointConfusion),
        in_region_eff: region_of(&report, RegionKind::Function).contains(r1_eff, r2_eff, DEFAULT_TOLERANCE)?,
        in_sw_region_eff: region_of(&report, RegionKind::SlepianWolf).contains(r1_eff, r2_eff, DEFAULT_TOLERANCE)?,
        seed: settings.master_seed,
    };
    Ok(CellReport { row, trials })
}

/// Exact block error probability of the code a cell would build.
pub fn exact_cell_error(src: &JointSource, f: &FunctionSpec, cell: Cell, settings: &CellSettings) -> Result<f64> {
    cell_decoder(src, f, cell, settings)?.exact_error_probability(src)
}

/// Output of [`run_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub plan: ExperimentPlan,
    pub cells: Vec<CellReport>,
    /// Cells that could not be run, with their error messages.
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn rows(&self) -> impl Iterator<Item = &ReportRow> {
        self.cells.iter().map(|c| &c.row)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows_csv(out, self.rows())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer(out, self)?;
        Ok(())
    }

    /// Writes the CSV to `path` and the JSON mirror next to it with a `.json` extension.
    pub fn write_files(&self, path: &Path) -> Result<PathBuf> {
        let csv = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(csv))?;
        let json_path = path.with_extension("json");
        let json = std::fs::File::create(&json_path).map_err(|e| Error::io(&json_path, e))?;
        let mut w = std::io::BufWriter::new(json);
        self.write_json(&mut w)?;
        w.flush().map_err(|e| Error::io(&json_path, e))?;
        Ok(json_path)
    }
}

pub fn write_rows_csv<'a, W: Write>(out: W, rows: impl IntoIterator<Item = &'a ReportRow>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Runs every cell of a plan with an already loaded source.
///
/// Failing cells are recorded and skipped; the sweep fails only when every
/// cell fails, with the first cell's error.
pub fn run_sweep_with(plan: &ExperimentPlan, src: &JointSource, f: &FunctionSpec) -> Result<SweepReport> {
    plan.validate()?;
    let settings = plan.settings();
    let mut cells = Vec::new();
    let mut failures = Vec::new();
    let mut first_error = None;
    for (i, cell) in plan.cells().into_iter().enumerate() {
        match run_cell(src, f, cell, &settings) {
            Ok(report) => cells.push(report),
            Err(e) => {
                let e = Error::Cell { cell: i, n: cell.n, r1: cell.r1, r2: cell.r2, source: Box::new(e) };
                failures.push(e.to_string());
                first_error.get_or_insert(e);
            }
        }
    }
    if cells.is_empty() {
        return Err(first_error.expect("a non-empty grid with no successes has an error"));
    }
    Ok(SweepReport { plan: plan.clone(), cells, failures })
}

pub fn run_sweep(plan: &ExperimentPlan) -> Result<SweepReport> {
    plan.validate()?;
    let (src, f) = load_source_file(&plan.source)?;
    run_sweep_with(plan, &src, &f)
}

/// Runs `job` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Converse-side quantities evaluated at an observed error rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanoDiagnostic {
    pub n: usize,
    pub pe_hat: f64,
    /// `pe_hat * log2|Z| + 1/n`.
    pub delta_n: f64,
    pub r1_lower: f64,
    pub r2_lower: f64,
    pub rsum_lower: f64,
}

/// `δ_n = P_e log2|Z| + 1/n` and the rate lower bounds it implies.
///
/// The `1/n` term is kept; dropping it gives the looser per-symbol form.
pub fn fano(pe_hat: f64, n: usize, z_size: usize, report: &EntropyReport) -> Result<FanoDiagnostic> {
    if !(0.0..=1.0).contains(&pe_hat) {
        return Err(Error::InvalidParameter(format!("error rate {pe_hat} not in [0, 1]")));
    }
    if n == 0 || z_size == 0 {
        return Err(Error::InvalidParameter("n and |Z| must be at least 1".into()));
    }
    let delta_n = pe_hat * (z_size as f64).log2() + 1.0 / n as f64;
    Ok(FanoDiagnostic {
        n,
        pe_hat,
        delta_n,
        r1_lower: report.h_z_given_y - delta_n,
        r2_lower: report.h_z_given_x - delta_n,
        rsum_lower: report.h_z - delta_n,
    })
}

/// Fano diagnostic for a report row.
pub fn fano_for_row(row: &ReportRow, z_size: usize, report: &EntropyReport) -> Result<FanoDiagnostic> {
    fano(row.pe_hat, row.n, z_size, report)
}

/// Entropies, both regions, and their corners for one source and function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub entropy: EntropyReport,
    pub function_region: RateRegion,
    pub slepian_wolf_region: RateRegion,
    pub function_corners: Vec<(f64, f64)>,
    pub slepian_wolf_corners: Vec<(f64, f64)>,
    pub function_sum_constraint_active: bool,
    /// Function thresholds are componentwise at or below the Slepian-Wolf ones.
    pub function_region_contains_slepian_wolf: bool,
    pub unused_z_symbols: Vec<usize>,
}

pub fn report_regions(src: &JointSource, f: &FunctionSpec) -> Result<RegionSummary> {
    let entropy = full_report(src, f)?;
    let function_region = region_of(&entropy, RegionKind::Function);
    let slepian_wolf_region = region_of(&entropy, RegionKind::SlepianWolf);
    Ok(RegionSummary {
        entropy,
        function_corners: function_region.corner_points(),
        slepian_wolf_corners: slepian_wolf_region.corner_points(),
        function_sum_constraint_active: function_region.sum_constraint_active(),
        function_region_contains_slepian_wolf: crate::region::containment(&function_region, &slepian_wolf_region),
        unused_z_symbols: f.unused_z_symbols(),
        function_region,
        slepian_wolf_region,
    })
}
