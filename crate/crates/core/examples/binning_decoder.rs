//! Encode one source realization into two bin indices and decode `X xor Y`.
//!
//! cargo run --example binning_decoder

use distfn::codec::{BinningCode, Decoder, DecoderOptions};
use distfn::source::{FunctionSpec, JointSource};
use distfn::stream::substream;
use distfn::typicality::TypicalityParams;

fn main() -> distfn::Result<()> {
    let src = JointSource::dsbs(0.25)?;
    let f = FunctionSpec::modular_sum(2);
    let n = 10;
    let seed = 11;
    let params = TypicalityParams::new(0.15, n)?;

    for (r1, r2) in [(0.5, 0.5), (1.0, 1.0), (1.5, 1.5)] {
        let code = BinningCode::new(n, 2, 2, r1, r2, seed)?;
        let decoder = Decoder::new(&code, &src, &f, params, DecoderOptions::default())?;
        println!("rates ({r1}, {r2}): {} x {} bins", 1u64 << code.k1, 1u64 << code.k2);
        // same realizations at every rate
        for trial in 0..4u64 {
            let pair = src.sample(n, &mut substream(seed, &[trial]))?;
            let out = decoder.run(&pair)?;
            let z: String = f.apply(&pair).iter().map(|z| z.to_string()).collect();
            println!(
                "  z = {z}  bins ({:>5}, {:>5})  candidates {:>3}  {:?}",
                out.message.i0, out.message.j0, out.candidate_count, out.error_class
            );
        }
    }
    Ok(())
}
