//! Subcommand implementations behind the command-line tool. Each returns a
//! JSON report and a human summary.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::building::{orbit_dimension_check, simplicial_checks, truncated_building, DepthZeroSpec};
use crate::error::{Error, Result};
use crate::glq::{character_table, conjugacy_classes, cuspidal_count, cuspidal_indices, TableCache};
use crate::lemma::{field_with_order, plan_sweep, LemmaEngine, LemmaReport};
use crate::orders::{weyl_representatives, AffineWeylElem, BlockShape};
use crate::report::{Report, SweepConfig};

/// Options shared by every subcommand.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Record wall times in the JSON report.
    pub timing: bool,
    /// Seed for the sampled robustness checks.
    pub seed: u64,
}

pub struct CommandOutput {
    pub json: String,
    pub summary: String,
    pub passed: bool,
}

type Cells = Vec<(Value, bool, u64)>;

fn finish<E: Serialize>(command: &str, config: E, cells: Cells, start: Instant, opts: RunOptions, summary: String) -> Result<CommandOutput> {
    let report = Report::new(command, config, cells, start.elapsed().as_millis() as u64, opts.timing);
    let mut summary = summary;
    writeln!(summary, "{}: {} cells, {} failures, {} ms", command, report.summary.cells, report.summary.failures, start.elapsed().as_millis())
        .unwrap();
    for &i in &report.failures {
        let c = &report.cells[i].cell;
        writeln!(summary, "FAILED {}", serde_json::to_string(c).unwrap_or_default()).unwrap();
    }
    Ok(CommandOutput { json: report.to_json()?, passed: report.passed(), summary })
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report cells serialise")
}

fn check_cell(params: Value, left: Option<i64>, right: Option<i64>, equal: bool) -> Value {
    json!({ "params": params, "left": left, "right": right, "equal": equal })
}

/// Parses block sizes `"2,1"` into a shape whose blocks are multiples of `f`.
pub fn parse_shape(s: &str, f: usize) -> Result<BlockShape> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("cannot parse shape {s:?}"))))
        .collect::<Result<_>>()?;
    let shape = BlockShape::new(parts)?;
    if !shape.refines_blocks_of(f) {
        return Err(Error::InvalidArgument(format!("shape {shape} is not made of blocks of size {f}")));
    }
    Ok(shape)
}

pub fn char_table(n: usize, q: u32, opts: RunOptions) -> Result<CommandOutput> {
    let start = Instant::now();
    let field = field_with_order(q)?;
    let group = Arc::new(conjugacy_classes(n, &field)?);
    let table = character_table(group.clone())?;
    let degrees = table.degrees();
    let mut summary = String::new();
    writeln!(summary, "GL_{n}(F_{q}): order {}, {} classes, degrees {:?}", group.order(), group.num_classes(), degrees).unwrap();
    // Larger tables are only summarised; the JSON has the checks either way.
    for (i, chi) in table.irreducibles().iter().enumerate().filter(|_| group.num_classes() <= 12) {
        let vals: Vec<String> = chi.values.iter().map(ToString::to_string).collect();
        writeln!(summary, "  χ{i}: {}", vals.join("  ")).unwrap();
    }
    let sum_sq: i64 = degrees.iter().map(|d| d * d).sum();
    let verified = table.verify();
    if let Err(e) = &verified {
        writeln!(summary, "verification failed: {e}").unwrap();
    }
    let params = |check: &str| json!({ "n": n, "q": q, "check": check, "degrees": degrees });
    let cells = vec![
        (check_cell(params("sum-of-squares"), Some(sum_sq), Some(group.order() as i64), sum_sq as u64 == group.order()),
            sum_sq as u64 == group.order(), 0),
        (check_cell(params("orthogonality"), Some(table.len() as i64), Some(group.num_classes() as i64), verified.is_ok()),
            verified.is_ok(), 0),
    ];
    let ms = start.elapsed().as_millis() as u64;
    let cells = cells.into_iter().map(|(c, ok, _)| (c, ok, ms)).collect();
    finish("char-table", json!({ "n": n, "q": q }), cells, start, opts, summary)
}

pub fn cuspidals(n: usize, q: u32, opts: RunOptions) -> Result<CommandOutput> {
    let start = Instant::now();
    let field = field_with_order(q)?;
    let cache = TableCache::new();
    let table = cache.table(n, &field)?;
    let cusp = cuspidal_indices(&table)?;
    let degrees: Vec<i64> = cusp.iter().map(|&i| table.irreducibles()[i].degree()).collect();
    let expected = cuspidal_count(n, q as u64) as i64;
    let mut summary = String::new();
    writeln!(summary, "GL_{n}(F_{q}): cuspidal characters {cusp:?} of degrees {degrees:?}; expected count {expected}").unwrap();
    let ok = cusp.len() as i64 == expected;
    let cell = check_cell(json!({ "n": n, "q": q, "indices": cusp, "degrees": degrees }), Some(cusp.len() as i64), Some(expected), ok);
    finish("cuspidals", json!({ "n": n, "q": q }), vec![(cell, ok, start.elapsed().as_millis() as u64)], start, opts, summary)
}

/// Which `τ` to test in `lemma-verify`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauChoice {
    Trivial,
    All,
    Indices(Vec<usize>),
}

impl std::str::FromStr for TauChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(TauChoice::Trivial),
            "all" => Ok(TauChoice::All),
            _ => s
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("cannot parse τ {s:?}"))))
                .collect::<Result<Vec<_>>>()
                .map(TauChoice::Indices),
        }
    }
}

pub struct LemmaArgs {
    pub q: u32,
    pub f: usize,
    pub e0: usize,
    pub shape: String,
    pub rho: Option<usize>,
    pub tau: TauChoice,
    pub x: String,
}

pub fn lemma_verify(args: &LemmaArgs, opts: RunOptions) -> Result<CommandOutput> {
    let start = Instant::now();
    let cache = TableCache::new();
    let engine = LemmaEngine::new(&cache, args.q, args.f, args.e0)?;
    let shape = parse_shape(&args.shape, args.f)?;
    if shape.r() != args.f * args.e0 {
        return Err(Error::InvalidArgument(format!("shape {shape} does not have size {}", args.f * args.e0)));
    }
    let x = args.x.parse::<AffineWeylElem>()?.with_block_size(args.f);
    if x.e0() != args.e0 {
        return Err(Error::InvalidArgument(format!("{x} has {} blocks, expected {}", x.e0(), args.e0)));
    }
    let data = engine.shape_data(&shape)?;
    let rhos = match args.rho {
        Some(r) => vec![r],
        None => engine.cuspidals()?,
    };
    let mut cells: Cells = Vec::new();
    let mut summary = String::new();
    if let Some(tables) = &data.tables {
        let taus: Vec<Vec<usize>> = match &args.tau {
            TauChoice::Trivial => vec![tables.iter().map(|t| t.trivial()).collect()],
            TauChoice::All => engine.taus(&data, crate::lemma::TauFilter::All)?,
            TauChoice::Indices(v) => vec![v.clone()],
        };
        for &rho in &rhos {
            for tau in &taus {
                let t = Instant::now();
                let r: LemmaReport = engine.lemma_check(&data, rho, tau, &x)?;
                writeln!(summary, "ρ₀={rho} τ={tau:?} x={x}: left={} right={}", r.left.unwrap(), r.right.unwrap()).unwrap();
                cells.push((to_value(&r), r.equal, t.elapsed().as_millis() as u64));
            }
        }
    } else {
        for r in engine.reports_for_x(&data, &x, &[])?.into_iter().filter(|r| rhos.contains(&r.params.rho)) {
            writeln!(summary, "ρ₀={} x={} class-sum identity: {}", r.params.rho, x, if r.equal { "holds" } else { "FAILS" }).unwrap();
            cells.push((to_value(&r), r.equal, start.elapsed().as_millis() as u64));
        }
    }
    let config = json!({ "q": args.q, "f": args.f, "e0": args.e0, "shape": shape.to_string(), "x": x.to_string() });
    finish("lemma-verify", config, cells, start, opts, summary)
}

/// Runs the sweep; with `sample > 0` also recomputes that fraction of cells
/// under random unit identifications (seeded by `opts.seed`).
pub fn lemma_sweep(config: &SweepConfig, sample: f64, opts: RunOptions) -> Result<CommandOutput> {
    let start = Instant::now();
    config.validate()?;
    let cache = TableCache::new();
    let plan = plan_sweep(&cache, &config.grid())?;
    let groups = plan.run_grouped();
    let mut cells: Cells = Vec::new();
    for (rs, ms) in &groups {
        cells.extend(rs.iter().map(|r| (to_value(r), r.equal, *ms)));
    }
    let reports: Vec<LemmaReport> = groups.into_iter().flat_map(|(r, _)| r).collect();
    let mut summary = String::new();
    if sample > 0.0 {
        let checked = plan.scaled_sample(&reports, sample, opts.seed)?;
        let agree = checked.iter().filter(|c| c.1).count();
        writeln!(summary, "unit-scaling sample (seed {}): {agree}/{} cells unchanged", opts.seed, checked.len()).unwrap();
        for (i, ok) in checked {
            let cell = json!({
                "params": { "check": "unit-scaling", "cell": i, "seed": opts.seed },
                "left": reports[i].left,
                // Only agreement is recorded for the rescaled run.
                "right": if ok { reports[i].left } else { None },
                "equal": ok,
            });
            cells.push((cell, ok, 0));
        }
    }
    let mut echo = to_value(&config.echo());
    echo["sample"] = json!(sample);
    echo["seed"] = json!(opts.seed);
    finish("lemma-sweep", echo, cells, start, opts, summary)
}

pub fn building(rank: usize, q: u32, radius: usize, opts: RunOptions) -> Result<(CommandOutput, String)> {
    let start = Instant::now();
    let field = field_with_order(q)?;
    let complex = truncated_building(rank, &field, radius)?;
    let counts: Vec<usize> = (0..=complex.dimension()).map(|d| complex.simplices(d).len()).collect();
    let mut summary = String::new();
    writeln!(summary, "GL_{rank}(F) over F_{q}, ball of radius {radius}: simplex counts by dimension {counts:?}").unwrap();
    let top_ok = complex.dimension() + 1 == rank;
    let cell = check_cell(json!({ "rank": rank, "q": q, "radius": radius, "check": "top-dimension", "simplices": counts }),
        Some(complex.dimension() as i64), Some(rank as i64 - 1), top_ok);
    let export = serde_json::to_string(&complex.export()).map_err(|e| Error::Invariant(e.to_string()))? + "\n";
    let out = finish("building", json!({ "rank": rank, "q": q, "radius": radius }), vec![(cell, top_ok, 0)], start, opts, summary)?;
    Ok((out, export))
}

pub fn complex_check(rank: usize, q: u32, radius: usize, opts: RunOptions) -> Result<CommandOutput> {
    let start = Instant::now();
    let field = field_with_order(q)?;
    let complex = truncated_building(rank, &field, radius)?;
    let checks = simplicial_checks(&complex)?;
    let ms = start.elapsed().as_millis() as u64;
    let mut summary = String::new();
    writeln!(summary, "GL_{rank}, q={q}, radius {radius}: simplex counts {:?}", checks.simplices).unwrap();
    let mut cells: Cells = Vec::new();
    for (name, (total, ok)) in [
        ("boundary-squared", checks.boundary_squared),
        ("augmentation-boundary", checks.augmentation),
        ("orientation", checks.orientation),
        ("dictionary-fixed-points", checks.dictionary_fixed),
        ("dictionary-faces", checks.dictionary_faces),
    ] {
        writeln!(summary, "  {name}: {ok}/{total}").unwrap();
        let params = json!({ "rank": rank, "q": q, "radius": radius, "check": name });
        cells.push((check_cell(params, Some(ok as i64), Some(total as i64), ok == total), ok == total, ms));
    }
    finish("complex-check", json!({ "rank": rank, "q": q, "radius": radius }), cells, start, opts, summary)
}

pub struct OrbitArgs {
    pub q: u32,
    pub e0: usize,
    /// Block sizes; every face of the standard chamber when absent.
    pub shape: Option<String>,
    pub x: Option<String>,
    pub rho: Option<usize>,
    /// `τ` index tuples; every `τ` with the right support when absent.
    pub taus: Option<Vec<Vec<usize>>>,
    pub bound: i64,
}

pub fn orbit_check(args: &OrbitArgs, opts: RunOptions) -> Result<CommandOutput> {
    let start = Instant::now();
    let cache = TableCache::new();
    let engine = LemmaEngine::new(&cache, args.q, 1, args.e0)?;
    let shapes = match &args.shape {
        Some(s) => vec![parse_shape(s, 1)?],
        None => crate::orders::intermediate_shapes(args.e0, 1),
    };
    let xs = match &args.x {
        Some(s) => vec![s.parse::<AffineWeylElem>()?],
        None => weyl_representatives(args.e0, 1, args.bound).into_iter().filter(|x| x.spread() <= args.bound).collect(),
    };
    if xs.iter().any(|x| x.e0() != args.e0) || shapes.iter().any(|s| s.r() != args.e0) {
        return Err(Error::InvalidArgument(format!("x and shape must have size {}", args.e0)));
    }
    let rhos = match args.rho {
        Some(r) => vec![r],
        None => engine.cuspidals()?,
    };
    let mut cells: Cells = Vec::new();
    let mut summary = String::new();
    for shape in &shapes {
        let data = engine.shape_data(shape)?;
        for &rho in &rhos {
            let spec = match &args.taus {
                Some(t) => DepthZeroSpec::new(&engine, &cache, &data, rho, t.clone())?,
                None => DepthZeroSpec::full(&engine, &cache, &data, rho)?,
            };
            for x in &xs {
                let t = Instant::now();
                let r = orbit_dimension_check(&engine, &data, &spec, x)?;
                if !r.equal {
                    writeln!(summary, "mismatch: {}", serde_json::to_string(&r).unwrap_or_default()).unwrap();
                }
                cells.push((to_value(&r), r.equal, t.elapsed().as_millis() as u64));
            }
        }
        writeln!(summary, "q={} e0={} face {}: {} cells", args.q, args.e0, shape, rhos.len() * xs.len()).unwrap();
    }
    let config = json!({ "q": args.q, "e0": args.e0, "shape": args.shape, "x": args.x, "bound": args.bound });
    finish("orbit-check", config, cells, start, opts, summary)
}
