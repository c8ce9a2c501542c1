//! A ball in the building of GL_3 over F_2((π)): vertices as lattice normal
//! forms, neighbours, chambers, and the order attached to one chamber.
//!
//! `cargo run --release --example building_export [out.json]`

use parahoric_lab::building::truncated_building;
use parahoric_lab::field::Field;

fn main() -> parahoric_lab::Result<()> {
    let complex = truncated_building(3, &Field::new(2, 1)?, 1)?;
    println!("{} vertices, {} edges, {} chambers", complex.vertices().len(), complex.edge_count(), complex.simplices(2).len());
    println!("standard vertex: {}", complex.vertices()[0]);
    let chamber = complex.simplices(2)[0].clone();
    let order = complex.simplex_order(&chamber)?;
    println!("chamber {chamber:?} has shape {} and pattern\n{}", order.shape, order.pattern);
    for l in &order.chain {
        println!("  {l}");
    }
    if let Some(path) = std::env::args().nth(1) {
        let text = serde_json::to_string(&complex.export()).expect("export serialises");
        std::fs::write(&path, text).map_err(|source| parahoric_lab::Error::Io { path: path.clone().into(), source })?;
        println!("wrote {path}");
    }
    Ok(())
}
