//! Function region vs Slepian-Wolf region for the mod-2 adder.
//!
//! The function region of `X xor Y` on a doubly symmetric source is a
//! quadrant with corner `(h(p), h(p))`: the sum constraint never binds.
//! Recovering `(X, Y)` itself needs the larger Slepian-Wolf region.
//!
//! cargo run --example rate_regions

use distfn::region::DEFAULT_TOLERANCE;
use distfn::sim::report_regions;
use distfn::source::{FunctionSpec, JointSource};

fn main() -> distfn::Result<()> {
    for p in [0.05, 0.11, 0.25] {
        let src = JointSource::dsbs(p)?;
        let s = report_regions(&src, &FunctionSpec::modular_sum(2))?;
        println!("DSBS({p})");
        println!("  function corners:     {:?}", s.function_corners);
        println!("  slepian-wolf corners: {:?}", s.slepian_wolf_corners);
        println!("  sum constraint binds: {}", s.function_sum_constraint_active);

        // a rate pair that suffices for the xor but not for the pair itself
        let (r1, r2) = (s.function_region.r1_min + 0.01, s.function_region.r2_min + 0.01);
        println!(
            "  ({r1:.3}, {r2:.3}) in function region: {}, in slepian-wolf region: {}",
            s.function_region.contains(r1, r2, DEFAULT_TOLERANCE)?,
            s.slepian_wolf_region.contains(r1, r2, DEFAULT_TOLERANCE)?
        );
    }

    println!("\nslepian-wolf boundary for DSBS(0.25), CSV:");
    let s = report_regions(&JointSource::dsbs(0.25)?, &FunctionSpec::identity(2, 2))?;
    s.slepian_wolf_region.write_boundary_csv(std::io::stdout().lock(), 4, 0.5)?;
    Ok(())
}
