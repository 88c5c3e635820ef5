//! Runs the bundled default plan and prints the CSV.
//!
//! cargo run --release --example rate_sweep [-- plan.json]

use std::path::PathBuf;

use distfn::sim::{run_sweep, ExperimentPlan};

fn main() -> distfn::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/default_plan.json"));
    let plan = ExperimentPlan::load(&path)?;
    let report = run_sweep(&plan)?;
    for failure in &report.failures {
        eprintln!("skipped {failure}");
    }
    report.write_csv(std::io::stdout().lock())
}
