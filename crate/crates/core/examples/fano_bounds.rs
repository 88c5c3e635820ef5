//! What an observed error rate says about the rates, through Fano's inequality.
//!
//! A code with block error probability `P_e` must satisfy
//! `R1 >= H(Z|Y) - δ`, `R2 >= H(Z|X) - δ`, `R1 + R2 >= H(Z) - δ` with
//! `δ = P_e log2|Z| + 1/n`.
//!
//! cargo run --release --example fano_bounds

use distfn::info::full_report;
use distfn::sim::{fano_for_row, run_cell, Cell, CellSettings};
use distfn::source::{FunctionSpec, JointSource};

fn main() -> distfn::Result<()> {
    let src = JointSource::dsbs(0.25)?;
    let f = FunctionSpec::modular_sum(2);
    let report = full_report(&src, &f)?;
    println!("thresholds: H(Z|Y) = {:.4}, H(Z|X) = {:.4}, H(Z) = {:.4}", report.h_z_given_y, report.h_z_given_x, report.h_z);

    let settings = CellSettings { trials: 2000, master_seed: 9, ..Default::default() };
    for n in [6, 10] {
        for r in [0.5, 1.0, 1.5] {
            let row = run_cell(&src, &f, Cell { n, r1: r, r2: r }, &settings)?.row;
            let d = fano_for_row(&row, f.z_size(), &report)?;
            println!(
                "n={n:>2} R=({:.1}, {:.1}) pe_hat={:.3} delta={:.3} -> R1 >= {:+.3}, R2 >= {:+.3}, R1+R2 >= {:+.3}",
                row.r1_eff, row.r2_eff, row.pe_hat, d.delta_n, d.r1_lower, d.r2_lower, d.rsum_lower
            );
        }
    }
    Ok(())
}
