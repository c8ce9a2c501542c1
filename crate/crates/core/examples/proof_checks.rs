//! The identities the intertwining argument leans on, checked on every
//! normalized d for GL_3 with f = 1: pattern containment, the order of the
//! quotient and its residue description, and Weyl invariance of ρ₀^{⊗3}.
//!
//! `cargo run --release --example proof_checks`

use parahoric_lab::glq::TableCache;
use parahoric_lab::lemma::{normalized_representatives, proof_identity_checks, LemmaEngine};
use parahoric_lab::orders::intermediate_shapes;

fn main() -> parahoric_lab::Result<()> {
    let cache = TableCache::new();
    for q in [2, 3] {
        let engine = LemmaEngine::new(&cache, q, 1, 3)?;
        for shape in intermediate_shapes(3, 1) {
            let mut ok = 0;
            let reps = normalized_representatives(3, 1, 2, &shape)?;
            for x in &reps {
                let c = proof_identity_checks(engine.levi_table(), 3, &shape, x)?;
                if c.all() {
                    ok += 1;
                } else {
                    println!("  failed at {x}: {c:?}");
                }
            }
            println!("q={q} shape {shape}: {ok}/{} pass", reps.len());
        }
    }
    Ok(())
}
