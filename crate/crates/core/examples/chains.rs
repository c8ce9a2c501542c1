//! Oriented chains with constant and star coefficients: the boundary of an
//! edge of the GL_2(F_3) tree and its augmentation, then ∂∂ on a GL_3
//! triangle.
//!
//! `cargo run --example chains`

use parahoric_lab::building::{augmentation, boundary, truncated_building, Coeff, CoefficientSystem, OrientedChain};
use parahoric_lab::field::Field;

fn show(c: &OrientedChain) -> String {
    c.support().map(|(s, v)| format!("{s:?}↦{v:?}")).collect::<Vec<_>>().join(" + ")
}

fn main() -> parahoric_lab::Result<()> {
    let tree = truncated_building(2, &Field::new(3, 1)?, 1)?;
    let edge = tree.simplices(1)[0].clone();
    let system = CoefficientSystem::Constant;
    let unit: Coeff = system.basis(&tree, &edge).into_iter().take(1).map(|b| (b, 1)).collect();
    let mut c = OrientedChain::zero(1);
    c.add(&tree, system, &[edge[1], edge[0]], &unit)?;
    let d = boundary(&tree, &c)?;
    println!("∂{}: {}; ε = {:?}", show(&c), show(&d), augmentation(&d)?);

    let ball = truncated_building(3, &Field::new(2, 1)?, 1)?;
    let t = ball.simplices(2)[0].clone();
    for system in [CoefficientSystem::Constant, CoefficientSystem::Star] {
        let basis = system.basis(&ball, &t);
        let value: Coeff = basis.iter().map(|&b| (b, 1)).collect();
        let mut c = OrientedChain::zero(2);
        c.add(&ball, system, &t, &value)?;
        let once = boundary(&ball, &c)?;
        let twice = boundary(&ball, &once)?;
        println!("{system:?}: {} basis vectors on {t:?}, ∂ has {} faces, ∂∂ zero: {}", basis.len(), once.support().count(), twice.is_zero());
    }
    Ok(())
}
