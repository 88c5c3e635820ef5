//! One Monte Carlo cell next to the exact error probability of the same code.
//!
//! cargo run --release --example monte_carlo_cell

use distfn::info::full_report;
use distfn::sim::{exact_cell_error, fano, run_cell, Cell, CellSettings};
use distfn::source::{FunctionSpec, JointSource};

fn main() -> distfn::Result<()> {
    let src = JointSource::dsbs(0.25)?;
    let f = FunctionSpec::modular_sum(2);
    let report = full_report(&src, &f)?;
    let settings = CellSettings { trials: 4000, master_seed: 5, ..Default::default() };

    println!("{:>3} {:>5} {:>5} {:>8} {:>19} {:>8} {:>8}", "n", "r1", "r2", "pe_hat", "95% interval", "exact", "delta_n");
    for n in [4, 6, 8] {
        for r in [0.9, 1.3] {
            let cell = Cell { n, r1: r, r2: r };
            let row = run_cell(&src, &f, cell, &settings)?.row;
            let exact = exact_cell_error(&src, &f, cell, &settings)?;
            let d = fano(row.pe_hat, n, f.z_size(), &report)?;
            println!(
                "{n:>3} {:>5.2} {:>5.2} {:>8.4} [{:.4}, {:.4}] {exact:>8.4} {:>8.4}",
                row.r1_eff, row.r2_eff, row.pe_hat, row.ci_lo, row.ci_hi, d.delta_n
            );
        }
    }
    Ok(())
}
