use std::path::PathBuf;

use rand::Rng;

use distfn::info::full_report;
use distfn::sim::{
    exact_cell_error, fano_for_row, run_cell, run_sweep, run_sweep_with, wilson_interval, Cell, CellSettings,
    ExperimentPlan, ReportRow,
};
use distfn::source::{FunctionSpec, JointSource};
use distfn::stream::{substream, Stream};
use distfn::typicality::{enumerate_jointly_typical, ProductPmf, TypicalityParams, DEFAULT_BUDGET};

fn default_plan() -> ExperimentPlan {
    ExperimentPlan::load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/default_plan.json")).unwrap()
}

fn random_source(rng: &mut Stream, x: usize, y: usize) -> JointSource {
    let w: Vec<f64> = (0..x * y).map(|_| rng.gen::<f64>() + 0.02).collect();
    let total: f64 = w.iter().sum();
    JointSource::new(x, y, w.iter().map(|v| v / total).collect()).unwrap()
}

#[test]
fn exact_error_inside_interval_for_most_cells() {
    let mut rng = substream(99, &[]);
    let mut inside = 0;
    for _ in 0..100 {
        // shapes with |X|^n |Y|^n <= 2^16
        let (x, y, n) = match rng.gen_range(0..3) {
            0 => (2, 2, rng.gen_range(2..=8)),
            1 => (3, 3, rng.gen_range(2..=5)),
            _ => (3, 2, rng.gen_range(2..=6)),
        };
        let src = random_source(&mut rng, x, y);
        let z = rng.gen_range(1..=4);
        let f = FunctionSpec::new(x, y, z, (0..x * y).map(|_| rng.gen_range(0..z)).collect()).unwrap();
        let settings = CellSettings {
            epsilon: rng.gen_range(0.2..0.8),
            trials: 1000,
            master_seed: rng.gen(),
            ..Default::default()
        };
        let cell = Cell { n, r1: rng.gen_range(0.0..2.0), r2: rng.gen_range(0.0..2.0) };
        let exact = exact_cell_error(&src, &f, cell, &settings).unwrap();
        let row = run_cell(&src, &f, cell, &settings).unwrap().row;
        inside += usize::from(row.ci_lo <= exact && exact <= row.ci_hi);
    }
    assert!(inside >= 93, "{inside}/100");
}

fn parse_rows(csv_bytes: &[u8]) -> Vec<ReportRow> {
    csv::Reader::from_reader(csv_bytes).deserialize().map(|r| r.unwrap()).collect()
}

#[test]
fn default_sweep_rows_are_consistent() {
    let report = run_sweep(&default_plan()).unwrap();
    let mut bytes = Vec::new();
    report.write_csv(&mut bytes).unwrap();
    let rows = parse_rows(&bytes);
    assert_eq!(rows.len(), 45);

    let (src, f) = distfn::source::load_source_file(&default_plan().source).unwrap();
    let entropies = full_report(&src, &f).unwrap();
    for row in &rows {
        assert_eq!(row.e0 + row.e1 + row.e2 + row.e12, row.errors);
        assert_eq!(row.pe_hat, row.errors as f64 / row.trials as f64);
        assert!(row.ci_lo <= row.pe_hat && row.pe_hat <= row.ci_hi);
        let d = fano_for_row(row, f.z_size(), &entropies).unwrap();
        assert!(d.delta_n >= 1.0 / row.n as f64);
        assert!(d.r1_lower <= entropies.h_z_given_y && d.r2_lower <= entropies.h_z_given_x);
        assert!(d.rsum_lower <= entropies.h_z);
    }

    // pe_hat along every row and column of each 3x3 grid, read back from the CSV
    for grid in rows.chunks(9) {
        for i in 0..3 {
            for j in 0..2 {
                assert!(grid[i * 3 + j + 1].pe_hat <= grid[i * 3 + j].pe_hat, "{:?}", grid[i * 3 + j + 1]);
                assert!(grid[(j + 1) * 3 + i].pe_hat <= grid[j * 3 + i].pe_hat, "{:?}", grid[(j + 1) * 3 + i]);
            }
        }
    }
}

#[test]
fn single_cell_plan_matches_run_cell() {
    let src = JointSource::dsbs(0.25).unwrap();
    let f = FunctionSpec::modular_sum(2);
    let mut plan = ExperimentPlan::new("unused");
    plan.n_values = vec![6];
    plan.r1_values = vec![1.2];
    plan.r2_values = vec![0.9];
    plan.trials = 300;
    plan.master_seed = 8;
    let sweep = run_sweep_with(&plan, &src, &f).unwrap();
    let direct = run_cell(&src, &f, Cell { n: 6, r1: 1.2, r2: 0.9 }, &plan.settings()).unwrap();
    assert_eq!(sweep.cells, [direct]);
}

#[test]
fn constant_function_error_bounded_by_atypicality() {
    let src = JointSource::new(2, 2, vec![0.4, 0.1, 0.2, 0.3]).unwrap();
    let f = FunctionSpec::constant(2, 2, 1, 0).unwrap();
    let settings = CellSettings { trials: 1000, epsilon: 0.2, master_seed: 21, ..Default::default() };
    let params = TypicalityParams::new(0.2, 4).unwrap();
    let mass = enumerate_jointly_typical(&ProductPmf::new(vec![2, 2], src.pmf().to_vec()).unwrap(), &params, DEFAULT_BUDGET, false)
        .unwrap()
        .probability_mass;
    for (r1, r2) in [(0.0, 0.0), (0.5, 1.5), (2.0, 2.0)] {
        let cell = run_cell(&src, &f, Cell { n: 4, r1, r2 }, &settings).unwrap();
        let atypical = cell.trials.iter().filter(|t| !t.truth_typical).count();
        assert!(cell.row.errors <= atypical);
        let (lo, hi) = wilson_interval(atypical, settings.trials);
        assert!(lo <= 1.0 - mass && 1.0 - mass <= hi, "{atypical} vs {}", 1.0 - mass);
    }
}
