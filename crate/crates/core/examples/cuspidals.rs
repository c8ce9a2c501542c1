//! Cuspidal irreducibles of GL_n(F_q), found by averaging over unipotent
//! radicals, against the necklace count of degree-n orbits.
//!
//! `cargo run --release --example cuspidals`

use parahoric_lab::glq::{cuspidal_count, cuspidal_indices, TableCache};
use parahoric_lab::lemma::field_with_order;

fn main() -> parahoric_lab::Result<()> {
    let cache = TableCache::new();
    for (n, q) in [(1, 4), (2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)] {
        let table = cache.table(n, &field_with_order(q)?)?;
        let cusp = cuspidal_indices(&table)?;
        let degrees: Vec<i64> = cusp.iter().map(|&i| table.irreducibles()[i].degree()).collect();
        println!("GL_{n}(F_{q}): {} cuspidal (expected {}), degrees {:?}", cusp.len(), cuspidal_count(n, q as u64), degrees);
    }
    Ok(())
}
