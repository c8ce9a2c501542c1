//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use parahoric_lab::building::{simplicial_checks, truncated_building};
use parahoric_lab::commands::{orbit_check, OrbitArgs, RunOptions};
use parahoric_lab::field::Field;
use parahoric_lab::glq::{character_table, conjugacy_classes, cuspidal_indices, gl_order, TableCache};
use parahoric_lab::lemma::{field_with_order, normalized_representatives, plan_sweep, proof_identity_checks, LemmaEngine, SweepGrid};
use parahoric_lab::orders::intermediate_shapes;

const SAMPLE_SEED: u64 = 20_240_611;

struct Outcome {
    ok: bool,
    detail: String,
}

type Check = fn() -> parahoric_lab::Result<Outcome>;

fn character_tables() -> parahoric_lab::Result<Outcome> {
    let mut detail = Vec::new();
    let mut ok = true;
    for (n, q) in [(1, 2), (1, 3), (1, 4), (1, 5), (2, 2), (2, 3), (2, 4), (3, 2)] {
        let group = Arc::new(conjugacy_classes(n, &field_with_order(q)?)?);
        let table = character_table(group.clone())?;
        let orth = table.verify().is_ok();
        let sum: i64 = table.degrees().iter().map(|d| d * d).sum();
        let order = gl_order(n, q as u64);
        ok &= orth && sum as u64 == order && group.order() == order;
        detail.push(format!("GL{n}(F{q}) {}", table.len()));
    }
    // GL_2(F_2) against S_3, matching classes by size (1, 3, 2).
    let group = Arc::new(conjugacy_classes(2, &field_with_order(2)?)?);
    let table = character_table(group.clone())?;
    let by_size = |s: u64| group.classes().iter().position(|c| c.size == s).unwrap();
    let mut rows: Vec<Vec<i64>> = (0..table.len())
        .map(|chi| [1, 3, 2].iter().map(|&s| table.value(chi, by_size(s)).as_integer().unwrap()).collect())
        .collect();
    rows.sort();
    let s3 = vec![vec![1, -1, 1], vec![1, 1, 1], vec![2, 0, -1]];
    ok &= rows == s3;
    Ok(Outcome { ok, detail: format!("{}; S3 match {}", detail.join(", "), rows == s3) })
}

fn cuspidal_counts() -> parahoric_lab::Result<Outcome> {
    let cache = TableCache::new();
    let mut ok = true;
    let mut detail = Vec::new();
    for q in [2u32, 3, 4, 5] {
        let table = cache.table(2, &field_with_order(q)?)?;
        let cusp = cuspidal_indices(&table)?;
        let q = q as i64;
        ok &= cusp.len() as i64 == q * (q - 1) / 2 && cusp.iter().all(|&i| table.irreducibles()[i].degree() == q - 1);
        detail.push(format!("GL2(F{q}) {}", cusp.len()));
    }
    let t3 = cache.table(3, &field_with_order(2)?)?;
    let n3 = cuspidal_indices(&t3)?.len();
    ok &= n3 == 2;
    detail.push(format!("GL3(F2) {n3}"));
    Ok(Outcome { ok, detail: detail.join(", ") })
}

fn sweep_and_sample(fraction: f64) -> parahoric_lab::Result<(usize, usize, usize, usize)> {
    let cache = TableCache::new();
    let plan = plan_sweep(&cache, &SweepGrid::default_grid())?;
    let (reports, _) = plan.run();
    let failures = reports.iter().filter(|r| !r.equal).count();
    if fraction == 0.0 {
        return Ok((reports.len(), failures, 0, 0));
    }
    let sample = plan.scaled_sample(&reports, fraction, SAMPLE_SEED)?;
    let agree = sample.iter().filter(|s| s.1).count();
    Ok((reports.len(), failures, sample.len(), agree))
}

fn lemma_sweep() -> parahoric_lab::Result<Outcome> {
    let (cells, failures, _, _) = sweep_and_sample(0.0)?;
    Ok(Outcome { ok: cells > 0 && failures == 0, detail: format!("{cells} cells, {failures} failures") })
}

fn proof_identities() -> parahoric_lab::Result<Outcome> {
    let cache = TableCache::new();
    let grid = SweepGrid::default_grid();
    let (mut total, mut passed) = (0, 0);
    for &(q, f, e0) in &grid.configs {
        let engine = LemmaEngine::new(&cache, q, f, e0)?;
        for shape in intermediate_shapes(e0, f) {
            for x in normalized_representatives(e0, f, grid.bound, &shape)? {
                total += 1;
                if proof_identity_checks(engine.levi_table(), e0, &shape, &x)?.all() {
                    passed += 1;
                }
            }
        }
    }
    Ok(Outcome { ok: total > 0 && passed == total, detail: format!("{passed}/{total} (shape, d) pairs") })
}

fn simplicial() -> parahoric_lab::Result<Outcome> {
    let mut ok = true;
    let mut balls = 0;
    for r in [2, 3] {
        for q in [2, 3] {
            for radius in [1, 2] {
                let complex = truncated_building(r, &Field::new(q, 1)?, radius)?;
                ok &= simplicial_checks(&complex)?.passed();
                balls += 1;
            }
        }
    }
    let tree = truncated_building(2, &Field::new(2, 1)?, 1)?.vertices().len();
    ok &= tree == 4;
    Ok(Outcome { ok, detail: format!("{balls} truncations; R=2 q=2 radius 1 has {tree} vertices") })
}

fn orbit_suite() -> parahoric_lab::Result<Outcome> {
    let (mut cells, mut ok) = (0, true);
    for q in [2, 3] {
        for e0 in [2, 3] {
            let args = OrbitArgs { q, e0, shape: None, x: None, rho: None, taus: None, bound: 1 };
            let out = orbit_check(&args, RunOptions::default())?;
            let v: serde_json::Value = serde_json::from_str(&out.json).unwrap();
            cells += v["summary"]["cells"].as_u64().unwrap();
            ok &= out.passed;
        }
    }
    Ok(Outcome { ok: ok && cells > 0, detail: format!("{cells} cells") })
}

fn robustness() -> parahoric_lab::Result<Outcome> {
    let (_, _, sampled, agree) = sweep_and_sample(0.1)?;
    Ok(Outcome { ok: sampled > 0 && agree == sampled, detail: format!("{agree}/{sampled} rescaled cells agree (seed {SAMPLE_SEED})") })
}

fn main() {
    let criteria: [(&str, Check, Duration); 7] = [
        ("1 character tables", character_tables, Duration::from_secs(60)),
        ("2 cuspidal counts", cuspidal_counts, Duration::from_secs(60)),
        ("3 intertwining sweep", lemma_sweep, Duration::from_secs(15 * 60)),
        ("4 proof identities", proof_identities, Duration::from_secs(5 * 60)),
        ("5 simplicial suite", simplicial, Duration::from_secs(2 * 60)),
        ("6 depth-zero orbit suite", orbit_suite, Duration::from_secs(10 * 60)),
        ("7 unit-scaling robustness", robustness, Duration::from_secs(15 * 60)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        // The budget is only reported: debug builds are far slower.
        let over = if elapsed > budget { " (over budget)" } else { "" };
        println!("{} criterion {name}: {detail} [{:.1} s{over}]", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
