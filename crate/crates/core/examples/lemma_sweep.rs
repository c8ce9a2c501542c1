//! Runs the default Hom-dimension sweep and prints a per-configuration summary.
//!
//! `cargo run --release --example lemma_sweep [bound]`

use std::collections::BTreeMap;

use parahoric_lab::glq::TableCache;
use parahoric_lab::lemma::{plan_sweep, timed, SweepGrid};

fn main() -> parahoric_lab::Result<()> {
    let mut grid = SweepGrid::default_grid();
    if let Some(b) = std::env::args().nth(1) {
        grid.bound = b.parse().expect("bound must be an integer");
    }
    let cache = TableCache::new();
    let (plan, plan_ms) = timed(|| plan_sweep(&cache, &grid));
    let plan = plan?;
    println!("planned {} models in {plan_ms} ms", plan.units.len());
    let ((reports, _), run_ms) = timed(|| plan.run());
    let mut summary: BTreeMap<(u32, usize, usize, String), (usize, usize)> = BTreeMap::new();
    for r in &reports {
        let p = &r.params;
        let e = summary.entry((p.q, p.f, p.e0, p.shape.clone())).or_default();
        e.0 += 1;
        e.1 += usize::from(!r.equal);
    }
    for ((q, f, e0, shape), (cells, fails)) in &summary {
        println!("q={q} f={f} e0={e0} shape={shape:<10} cells={cells:<5} failures={fails}");
    }
    let fails = reports.iter().filter(|r| !r.equal).count();
    println!("{} cells, {fails} failures, {run_ms} ms", reports.len());
    Ok(())
}
