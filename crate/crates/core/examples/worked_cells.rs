//! The hand-checkable GL_2 cells: q = 2, f = 1, e_0 = 2, x = diag(1, π).
//! Over the maximal order H̄ is the Borel of GL_2(F_2), so the left side is
//! the dimension of Borel-invariants in τ ⊗ ρ₀. Trivial and Steinberg give 1,
//! the sign character gives 0.
//!
//! `cargo run --example worked_cells`

use parahoric_lab::glq::TableCache;
use parahoric_lab::lemma::{LemmaEngine, TauFilter};
use parahoric_lab::orders::{AffineWeylElem, BlockShape};

fn main() -> parahoric_lab::Result<()> {
    let cache = TableCache::new();
    let engine = LemmaEngine::new(&cache, 2, 1, 2)?;
    for shape in [BlockShape::new(vec![1, 1])?, BlockShape::new(vec![2])?] {
        let data = engine.shape_data(&shape)?;
        for x in ["d:0,0", "d:0,1", "w:2,1;d:0,0", "w:2,1;d:1,0"] {
            let x: AffineWeylElem = x.parse()?;
            for tau in engine.taus(&data, TauFilter::All)? {
                let r = engine.lemma_check(&data, 0, &tau, &x)?;
                println!("shape {shape} x={x} τ={tau:?}: left {} right {}", r.left.unwrap(), r.right.unwrap());
            }
        }
    }
    Ok(())
}
