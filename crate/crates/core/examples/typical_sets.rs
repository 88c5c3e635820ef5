//! Typical sets by exhaustive enumeration.
//!
//! The typical set holds an ever larger share of the probability while its
//! size stays below `2^(n(H+ε))`, a vanishing fraction of all sequences.
//!
//! cargo run --release --example typical_sets

use distfn::info::JointTable;
use distfn::typicality::{
    conditional_typical_count, enumerate_jointly_typical, enumerate_typical, ProductPmf, TypicalityParams,
    DEFAULT_BUDGET,
};

fn main() -> distfn::Result<()> {
    let p = [0.25, 0.75];
    let eps = 0.1;
    println!("Bernoulli(0.75), eps = {eps}");
    println!("{:>3} {:>10} {:>12} {:>10} {:>8}", "n", "|A|", "2^n(H+eps)", "2^n", "P(A)");
    for n in [4, 8, 12, 16, 20] {
        let s = enumerate_typical(&p, &TypicalityParams::new(eps, n)?, DEFAULT_BUDGET, false)?;
        println!(
            "{n:>3} {:>10} {:>12.1} {:>10} {:>8.4}",
            s.cardinality,
            s.upper_bound,
            1u64 << n,
            s.probability_mass
        );
    }

    let params = TypicalityParams::new(0.2, 6)?;
    let small = enumerate_typical(&[0.5, 0.3, 0.2], &params, DEFAULT_BUDGET, true)?;
    println!("\nternary (0.5, 0.3, 0.2), n = 6, eps = 0.2: {} sequences, e.g.", small.cardinality);
    for seq in small.listing.iter().flatten().take(8) {
        println!("  {seq}");
    }

    // pairs from a doubly symmetric source with crossover 0.1
    let joint = ProductPmf::new(vec![2, 2], vec![0.45, 0.05, 0.05, 0.45])?;
    let params = TypicalityParams::new(0.15, 10)?;
    let s = enumerate_jointly_typical(&joint, &params, DEFAULT_BUDGET, false)?;
    println!("\njointly typical pairs, n = 10: {} of {} (mass {:.4})", s.cardinality, 1u64 << 20, s.probability_mass);

    let table = JointTable::new(2, 2, vec![0.45, 0.05, 0.05, 0.45])?;
    let y = [0, 1, 1, 0, 1, 0, 0, 1, 1, 0];
    let count = conditional_typical_count(&y, &table, &params, DEFAULT_BUDGET)?;
    println!("sequences jointly typical with y = {y:?}: {count}");
    Ok(())
}
