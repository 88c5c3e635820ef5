//! One line per acceptance criterion. Every criterion runs even when an
//! earlier one fails; the process exits non-zero if any failed.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::Rng;

use distfn::info::{conditional_entropy, entropy, full_report, h2, JointTable};
use distfn::region::{region_of, RegionKind};
use distfn::sim::{
    exact_cell_error, run_cell, run_sweep, with_workers, Cell, CellSettings, ExperimentPlan, SweepReport,
};
use distfn::source::{FunctionSpec, JointSource};
use distfn::stream::{substream, Stream};
use distfn::typicality::{enumerate_typical, TypicalityParams, DEFAULT_BUDGET};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_pmf(rng: &mut Stream, len: usize) -> Vec<f64> {
    // a few exact zeros keep the degenerate paths exercised
    let mut w: Vec<f64> = (0..len).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen::<f64>() }).collect();
    if w.iter().all(|&v| v == 0.0) {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    // absorb rounding so the sum is within tolerance
    let drift = 1.0 - w.iter().sum::<f64>();
    let i = w.iter().position(|&v| v > 0.0).unwrap();
    w[i] += drift;
    w
}

fn random_source(rng: &mut Stream, max: usize) -> JointSource {
    let (x, y) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
    JointSource::new(x, y, random_pmf(rng, x * y)).unwrap()
}

fn random_function(rng: &mut Stream, x: usize, y: usize) -> FunctionSpec {
    let z = rng.gen_range(1..=6);
    FunctionSpec::new(x, y, z, (0..x * y).map(|_| rng.gen_range(0..z)).collect()).unwrap()
}

/// `sum_v p(v) H(U | V = v)` for `U` on rows.
fn conditional_by_columns(t: &JointTable) -> f64 {
    (0..t.cols)
        .map(|v| {
            let col: Vec<f64> = (0..t.rows).map(|u| t.probs[u * t.cols + v]).collect();
            let pv: f64 = col.iter().sum();
            if pv == 0.0 {
                0.0
            } else {
                pv * entropy(&col.iter().map(|p| p / pv).collect::<Vec<_>>())
            }
        })
        .sum()
}

fn entropy_engine() -> Outcome {
    let mut rng = substream(1, &[]);
    let mut worst = 0.0f64;
    let mut violations = 0;
    for _ in 0..200 {
        let src = random_source(&mut rng, 5);
        let f = random_function(&mut rng, src.x_size(), src.y_size());
        let r = full_report(&src, &f).unwrap();

        // H(Y|X) by columns: Y on rows, X on columns
        let (xs, ys) = (src.x_size(), src.y_size());
        let mut yx = vec![0.0; ys * xs];
        for x in 0..xs {
            for y in 0..ys {
                yx[y * xs + x] = src.p(x, y);
            }
        }
        let h_y_given_x = conditional_by_columns(&JointTable::new(ys, xs, yx).unwrap());
        worst = worst.max((r.h_xy - r.h_x - h_y_given_x).abs());

        let mut zy = vec![0.0; f.z_size() * ys];
        for x in 0..xs {
            for y in 0..ys {
                zy[f.eval(x, y) * ys + y] += src.p(x, y);
            }
        }
        let zy = JointTable::new(f.z_size(), ys, zy).unwrap();
        worst = worst.max((conditional_entropy(&zy) - conditional_by_columns(&zy)).abs());
        worst = worst.max((r.h_z_given_y - conditional_by_columns(&zy)).abs());

        let tol = 1e-9;
        if r.h_z_given_y > r.h_x_given_y + tol || r.h_z_given_x > r.h_y_given_x + tol || r.h_z > r.h_xy + tol {
            violations += 1;
        }
    }
    outcome(worst <= 1e-9 && violations == 0, format!("max deviation {worst:.2e}, {violations} ordering violations"))
}

fn region_identities() -> Outcome {
    let mut rng = substream(2, &[]);
    let mut mismatches = 0;
    for _ in 0..100 {
        let src = random_source(&mut rng, 5);
        let r = full_report(&src, &FunctionSpec::identity(src.x_size(), src.y_size())).unwrap();
        let (a, b) = (region_of(&r, RegionKind::Function), region_of(&r, RegionKind::SlepianWolf));
        let same = [(a.r1_min, b.r1_min), (a.r2_min, b.r2_min), (a.rsum_min, b.rsum_min)]
            .iter()
            .all(|(u, v)| u.to_bits() == v.to_bits());
        mismatches += usize::from(!same);
    }
    let r = full_report(&JointSource::dsbs(0.25).unwrap(), &FunctionSpec::modular_sum(2)).unwrap();
    let km = region_of(&r, RegionKind::Function);
    let target = 0.811_278_124_5;
    let close = [km.r1_min, km.r2_min, km.rsum_min].iter().all(|t| (t - target).abs() <= 1e-9)
        && (h2(0.25) - target).abs() <= 1e-9;
    outcome(
        mismatches == 0 && close && !km.sum_constraint_active(),
        format!(
            "{mismatches}/100 identity mismatches; mod-2 thresholds ({:.10}, {:.10}, {:.10}), sum active {}",
            km.r1_min,
            km.r2_min,
            km.rsum_min,
            km.sum_constraint_active()
        ),
    )
}

fn typicality_bounds() -> Outcome {
    let mut violations = 0;
    let mut checked = 0;
    let mut mass = (0.0, 0.0);
    for n in [4, 8, 12, 16] {
        for p in [0.5, 0.75, 0.9] {
            for eps in [0.05, 0.1, 0.2] {
                let s = enumerate_typical(&[1.0 - p, p], &TypicalityParams::new(eps, n).unwrap(), DEFAULT_BUDGET, false)
                    .unwrap();
                checked += 1;
                if (s.cardinality as f64).log2() > n as f64 * (s.entropy + eps) {
                    violations += 1;
                }
                if p == 0.75 && eps == 0.1 && n == 4 {
                    mass.0 = s.probability_mass;
                }
                if p == 0.75 && eps == 0.1 && n == 16 {
                    mass.1 = s.probability_mass;
                }
            }
        }
    }
    outcome(
        violations == 0 && mass.1 > mass.0,
        format!("{violations}/{checked} bound violations; mass n=4 {:.4}, n=16 {:.4}", mass.0, mass.1),
    )
}

fn decoder_oracle() -> Outcome {
    let mut rng = substream(4, &[]);
    let mut inside = 0;
    for _ in 0..20 {
        let src = JointSource::new(2, 2, random_pmf(&mut rng, 4)).unwrap();
        let f = random_function(&mut rng, 2, 2);
        let settings = CellSettings {
            epsilon: rng.gen_range(0.2..1.2),
            trials: 2000,
            master_seed: rng.gen(),
            ..Default::default()
        };
        let cell = Cell { n: 2, r1: rng.gen_range(0..=4) as f64 * 0.5, r2: rng.gen_range(0..=4) as f64 * 0.5 };
        let exact = exact_cell_error(&src, &f, cell, &settings).unwrap();
        let row = run_cell(&src, &f, cell, &settings).unwrap().row;
        if row.ci_lo <= exact && exact <= row.ci_hi {
            inside += 1;
        }
    }
    outcome(inside >= 18, format!("{inside}/20 exact values inside the 95% interval"))
}

fn default_plan() -> ExperimentPlan {
    ExperimentPlan::load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/default_plan.json")).unwrap()
}

fn event_structure(sweep: &SweepReport) -> Outcome {
    let mut trials = 0;
    let mut violations = 0;
    for cell in &sweep.cells {
        for t in &cell.trials {
            trials += 1;
            let bad = (t.events.e1 && !t.events.e12) || (t.events.e2 && !t.events.e12) || (t.truth_typical && t.events.e0);
            violations += usize::from(bad);
        }
    }
    outcome(
        violations == 0 && sweep.failures.is_empty(),
        format!("{violations} violations over {trials} trials in {} cells", sweep.cells.len()),
    )
}

fn rate_monotonicity() -> Outcome {
    let src = JointSource::dsbs(0.05).unwrap();
    let f = FunctionSpec::identity(2, 2);
    let settings = CellSettings { trials: 2000, master_seed: 6, ..Default::default() };
    let rates = [0.4, 0.8, 1.2, 1.6];
    let grid: Vec<Vec<_>> = rates
        .iter()
        .map(|&r1| rates.iter().map(|&r2| run_cell(&src, &f, Cell { n: 10, r1, r2 }, &settings).unwrap()).collect())
        .collect();

    let mut pe_violations = 0;
    let mut trial_violations = 0;
    let mut pairs = |a: &distfn::sim::CellReport, b: &distfn::sim::CellReport| {
        pe_violations += usize::from(b.row.pe_hat > a.row.pe_hat);
        trial_violations += a.trials.iter().zip(&b.trials).filter(|(lo, hi)| lo.success && !hi.success).count();
    };
    for i in 0..4 {
        for j in 0..3 {
            pairs(&grid[i][j], &grid[i][j + 1]);
            pairs(&grid[j][i], &grid[j + 1][i]);
        }
    }
    let pes: Vec<f64> = grid.iter().flatten().map(|c| c.row.pe_hat).collect();
    let (lo, hi) = pes.iter().fold((1.0f64, 0.0f64), |(a, b), &p| (a.min(p), b.max(p)));
    outcome(
        pe_violations == 0 && trial_violations == 0,
        format!("{pe_violations} pe_hat and {trial_violations} per-trial violations; pe_hat range [{lo}, {hi}]"),
    )
}

fn region_behavior() -> Outcome {
    let src = JointSource::dsbs(0.05).unwrap();
    let f = FunctionSpec::identity(2, 2);
    let settings = CellSettings { epsilon: 0.15, trials: 2000, master_seed: 7, ..Default::default() };
    let inside = run_cell(&src, &f, Cell { n: 10, r1: 1.2, r2: 1.2 }, &settings).unwrap().row;
    let outside = run_cell(&src, &f, Cell { n: 10, r1: 0.1, r2: 0.1 }, &settings).unwrap().row;
    let gap = outside.pe_hat - inside.pe_hat;
    let atypical = inside.e0;
    outcome(
        gap >= 0.3,
        format!(
            "pe_hat at ({}, {}) = {}, at ({}, {}) = {}, gap {gap:.4} (need >= 0.3); {atypical}/2000 E0 inside",
            inside.r1_eff, inside.r2_eff, inside.pe_hat, outside.r1_eff, outside.r2_eff, outside.pe_hat
        ),
    )
}

fn serialized(report: &SweepReport) -> (Vec<u8>, Vec<u8>) {
    let (mut csv, mut json) = (Vec::new(), Vec::new());
    report.write_csv(&mut csv).unwrap();
    report.write_json(&mut json).unwrap();
    (csv, json)
}

fn determinism(reference: &SweepReport) -> Outcome {
    let plan = default_plan();
    let expected = serialized(reference);
    let mut differing = Vec::new();
    for workers in [1, 2, 4] {
        let again = with_workers(workers, || run_sweep(&plan)).unwrap().unwrap();
        if serialized(&again) != expected {
            differing.push(workers);
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "CSV {} bytes, JSON {} bytes; worker counts with differing output: {differing:?}",
            expected.0.len(),
            expected.1.len()
        ),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, limit: Option<Duration>, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took > limit {
                o.pass = false;
                o.detail.push_str(&format!("; over the {}s limit", limit.as_secs()));
            }
        }
        failed += usize::from(!o.pass);
        println!(
            "criterion {id} [{}] {name}: {} ({:.2}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64()
        );
    };

    let sweep = with_workers(2, || run_sweep(&default_plan())).unwrap().unwrap();
    report(1, "entropy engine", Some(Duration::from_secs(5)), &mut entropy_engine);
    report(2, "region identities", None, &mut region_identities);
    report(3, "typicality bounds", Some(Duration::from_secs(10)), &mut typicality_bounds);
    report(4, "decoder oracle equivalence", None, &mut decoder_oracle);
    report(5, "error-event structure", None, &mut || event_structure(&sweep));
    report(6, "rate monotonicity", None, &mut rate_monotonicity);
    report(7, "qualitative region behavior", Some(Duration::from_secs(60)), &mut region_behavior);
    report(8, "determinism", None, &mut || determinism(&sweep));

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
