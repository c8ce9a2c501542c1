//! The depth-zero orbit comparison on each face of the standard chamber of
//! GL_3 over F_3((π)): Hom dimensions over the U(𝔅₀)-orbit of xσ against the
//! sum of intertwining dimensions, for every cuspidal ρ₀ of GL_1(F_3).
//!
//! `cargo run --release --example orbit_check`

use parahoric_lab::building::{orbit_dimension_check, DepthZeroSpec};
use parahoric_lab::glq::TableCache;
use parahoric_lab::lemma::LemmaEngine;
use parahoric_lab::orders::{intermediate_shapes, weyl_representatives};

fn main() -> parahoric_lab::Result<()> {
    let cache = TableCache::new();
    let engine = LemmaEngine::new(&cache, 3, 1, 3)?;
    let xs: Vec<_> = weyl_representatives(3, 1, 1).into_iter().filter(|x| x.spread() <= 1).collect();
    for shape in intermediate_shapes(3, 1) {
        let data = engine.shape_data(&shape)?;
        for rho0 in engine.cuspidals()? {
            let spec = DepthZeroSpec::full(&engine, &cache, &data, rho0)?;
            let (mut equal, mut biggest) = (0, 0);
            for x in &xs {
                let r = orbit_dimension_check(&engine, &data, &spec, x)?;
                equal += r.equal as usize;
                biggest = biggest.max(r.orbit_size);
            }
            println!("face {shape} ρ₀={rho0}: {} τ, {equal}/{} x agree, largest orbit {biggest}", spec.taus.len(), xs.len());
        }
    }
    Ok(())
}
