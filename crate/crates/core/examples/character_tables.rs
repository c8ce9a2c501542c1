//! Character tables of small general linear groups, with their degrees and
//! the exact orthogonality check.
//!
//! Run with `cargo run --release --example character_tables`.

use std::sync::Arc;
use std::time::Instant;

use parahoric_lab::field::Field;
use parahoric_lab::glq::{character_table, conjugacy_classes};

fn main() -> parahoric_lab::Result<()> {
    for (n, p, k) in [(1, 5, 1), (2, 2, 1), (2, 3, 1), (2, 2, 2), (2, 5, 1), (3, 2, 1), (3, 3, 1), (4, 2, 1)] {
        let field = Field::new(p, k)?;
        let start = Instant::now();
        let group = Arc::new(conjugacy_classes(n, &field)?);
        let table = character_table(group.clone())?;
        table.verify()?;
        println!(
            "GL_{n}(F_{q}): order {order}, {classes} classes, exponent {exp}, degrees {degrees:?} ({ms} ms)",
            q = field.q(),
            order = group.order(),
            classes = group.num_classes(),
            exp = group.exponent(),
            degrees = table.degrees(),
            ms = start.elapsed().as_millis(),
        );
    }

    let field = Field::new(2, 1)?;
    let table = character_table(Arc::new(conjugacy_classes(2, &field)?))?;
    println!("\nGL_2(F_2):");
    for chi in table.irreducibles() {
        let row: Vec<String> = chi.values.iter().map(|v| v.to_string()).collect();
        println!("  {}", row.join("\t"));
    }
    Ok(())
}
