//! Hereditary order patterns, their radicals, and how affine Weyl elements
//! move them. Also lists the condition-(D) normal forms used by the sweep.
//!
//! `cargo run --example orders_and_weyl`

use parahoric_lab::lemma::normalized_representatives;
use parahoric_lab::orders::{
    conjugate_pattern, condition_d_normalize, intermediate_shapes, intersect_patterns, standard_order, standard_radical,
    AffineWeylElem, BlockShape,
};

fn main() -> parahoric_lab::Result<()> {
    let shape = BlockShape::new(vec![2, 1])?;
    let order = standard_order(&shape);
    println!("order of shape {shape}:\n{order}");
    println!("radical:\n{}", standard_radical(&shape));

    let x: AffineWeylElem = "w:2,3,1;d:1,0,-1".parse()?;
    let moved = conjugate_pattern(&order, &x);
    println!("x = {x} (spread {}), x 𝔅 x^-1:\n{moved}", x.spread());
    println!("intersection with 𝔅:\n{}", intersect_patterns(&order, &moved));
    println!("x normalized for {shape}: {}", condition_d_normalize(&x, &shape)?);

    for f in [1, 2] {
        for shape in intermediate_shapes(2, f) {
            let reps = normalized_representatives(2, f, 2, &shape)?;
            println!("f={f} shape {shape}: {} normalized x with spread ≤ 2", reps.len());
        }
    }
    Ok(())
}
