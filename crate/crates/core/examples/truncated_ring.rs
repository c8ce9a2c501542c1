//! Arithmetic in F_q[π]/π^M: units, valuations and Newton inversion of a
//! matrix congruent to a unipotent one.
//!
//! `cargo run --example truncated_ring`

use parahoric_lab::field::{Field, TruncMatrix, TruncRing};

fn main() -> parahoric_lab::Result<()> {
    let field = Field::new(3, 2)?;
    println!("F_{}: generator {}, modulus {:?}", field.q(), field.generator(), field.modulus());
    let ring = TruncRing::new(field.clone(), 4);
    let u = ring.from_coeffs(&[2, 1, 0, 5]);
    let v = ring.inv(&u)?;
    println!("u = {:?}, u^-1 = {:?}, u u^-1 = {:?}", u, v, ring.mul(&u, &v));
    let a = ring.monomial(1, 2);
    println!("valuation of π^2 is {}, unit: {}", ring.valuation(&a), a.is_unit());

    let g = TruncMatrix::from_fn(3, |i, j| match (i, j) {
        _ if i == j => ring.one(),
        (0, 1) => ring.from_coeffs(&[1, 2]),
        (2, 0) => ring.monomial(4, 1),
        _ => ring.zero(),
    });
    let h = g.invert(&ring)?;
    println!("g g^-1 is the identity: {}", g.mul(&ring, &h).is_identity());
    Ok(())
}
