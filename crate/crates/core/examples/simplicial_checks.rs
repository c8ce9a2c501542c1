//! Builds balls in the building of GL_R and checks ∂∂ = 0, ε∂ = 0, the
//! orientation rule and the simplex-to-order dictionary on each.
//!
//! `cargo run --release --example simplicial_checks`

use parahoric_lab::building::{simplicial_checks, truncated_building};
use parahoric_lab::field::Field;
use parahoric_lab::lemma::timed;

fn main() -> parahoric_lab::Result<()> {
    for r in [2, 3] {
        for q in [2, 3] {
            for radius in [1, 2] {
                let field = Field::new(q, 1)?;
                let (complex, build_ms) = timed(|| truncated_building(r, &field, radius));
                let complex = complex?;
                let (checks, check_ms) = timed(|| simplicial_checks(&complex));
                let checks = checks?;
                println!(
                    "R={r} q={q} radius={radius}: simplices {:?}, ∂∂ {}/{}, ε∂ {}/{}, dictionary {}/{} + {}/{} ({} ms build, {} ms checks)",
                    checks.simplices,
                    checks.boundary_squared.1,
                    checks.boundary_squared.0,
                    checks.augmentation.1,
                    checks.augmentation.0,
                    checks.dictionary_fixed.1,
                    checks.dictionary_fixed.0,
                    checks.dictionary_faces.1,
                    checks.dictionary_faces.0,
                    build_ms,
                    check_ms
                );
            }
        }
    }
    Ok(())
}
