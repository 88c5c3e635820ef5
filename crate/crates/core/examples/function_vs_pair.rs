//! Sending only `X xor Y` vs sending the whole pair, at the same rates.
//!
//! Rates between `h(p)` and the Slepian-Wolf corner suffice for the xor but
//! not for `(X, Y)`. No decoder beats the floor set by atypical truths (the
//! `atyp` column); the xor decoder reaches it at lower rates than the pair
//! decoder. At n = 10 the bins below the corner are still too coarse for
//! either, which is what "asymptotic" looks like at desk scale.
//!
//! cargo run --release --example function_vs_pair

use distfn::sim::{run_cell, Cell, CellSettings};
use distfn::source::{FunctionSpec, JointSource};

fn main() -> distfn::Result<()> {
    let src = JointSource::dsbs(0.05)?;
    let xor = FunctionSpec::modular_sum(2);
    let pair = FunctionSpec::identity(2, 2);
    let settings = CellSettings { trials: 2000, epsilon: 0.25, master_seed: 3, ..Default::default() };

    println!("{:>3} {:>5} {:>9} {:>9} {:>9} {:>6} {:>6}", "n", "R", "pe(xor)", "atyp", "pe(pair)", "in F", "in SW");
    for n in [6, 8, 10] {
        for r in [0.25, 0.5, 0.75, 1.0] {
            let cell = Cell { n, r1: r, r2: r };
            let a = run_cell(&src, &xor, cell, &settings)?;
            let b = run_cell(&src, &pair, cell, &settings)?.row;
            let atypical = a.trials.iter().filter(|t| !t.truth_typical).count() as f64 / settings.trials as f64;
            println!(
                "{n:>3} {:>5.2} {:>9.4} {:>9.4} {:>9.4} {:>6} {:>6}",
                a.row.r1_eff, a.row.pe_hat, atypical, b.pe_hat, a.row.in_region_eff, b.in_sw_region_eff
            );
        }
    }
    Ok(())
}
