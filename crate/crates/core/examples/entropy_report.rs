//! Entropies of the bundled sources, side by side.
//!
//! cargo run --example entropy_report [-- path/to/source.json ...]

use std::path::PathBuf;

use distfn::info::full_report;
use distfn::source::load_source_file;

fn main() -> distfn::Result<()> {
    let mut paths: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    if paths.is_empty() {
        let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
        paths = ["dsbs_0.25_xor.json", "dsbs_0.05_identity.json", "ternary_max.json"]
            .iter()
            .map(|f| data.join(f))
            .collect();
    }

    println!("{:<24} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}", "source", "H(X,Y)", "H(X|Y)", "H(Y|X)", "H(Z)", "H(Z|Y)", "H(Z|X)");
    for path in paths {
        let (src, f) = load_source_file(&path)?;
        let r = full_report(&src, &f)?;
        let name = path.file_stem().unwrap_or_default().to_string_lossy();
        println!(
            "{name:<24} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4}",
            r.h_xy, r.h_x_given_y, r.h_y_given_x, r.h_z, r.h_z_given_y, r.h_z_given_x
        );
    }
    Ok(())
}
