//! Regenerates `corpus/check.lam`:
//!
//!     cargo run -p lamnorm --example gen_corpus > crates/core/corpus/check.lam

use lamnorm::gen::TermGen;
use lamnorm::pretty;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() {
    let mut rng = StdRng::seed_from_u64(0x1a3d);
    let gen = TermGen::default();
    println!("# 100 generated terms for `lamnorm check --corpus`");
    println!("# 60 arbitrary, 20 beta-normal, 20 strict CPS");
    for _ in 0..60 {
        println!("{}", pretty(&gen.term(&mut rng)));
    }
    for _ in 0..20 {
        println!("{}", pretty(&gen.normal_term(&mut rng)));
    }
    for _ in 0..20 {
        println!("{}", pretty(&gen.strict_cps_term(&mut rng)));
    }
}
