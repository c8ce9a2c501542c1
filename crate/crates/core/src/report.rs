//! Sweep configuration files and deterministic JSON reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lemma::{SweepGrid, TauFilter};

/// Largest matrix size `R = f e_0` the sweep accepts.
pub const MAX_SWEEP_RANK: usize = 4;

/// A sweep description, read from and written to `key = value` text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub q: Vec<u32>,
    pub f: Vec<usize>,
    pub e0: Vec<usize>,
    pub bound: i64,
    /// Block sizes of `𝔅` in units of `f`, or every intermediate shape.
    pub shape: Option<Vec<usize>>,
    pub taus: TauFilter,
    pub output: Option<PathBuf>,
    /// Worker threads; 0 uses the default pool.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            q: vec![2, 3],
            f: vec![1, 2],
            e0: vec![2, 3],
            bound: 2,
            shape: None,
            taus: TauFilter::All,
            output: None,
            workers: 0,
        }
    }
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| Error::InvalidArgument(format!("{key}: cannot parse {t:?}"))))
        .collect()
}

impl SweepConfig {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "q = {}", list(&self.q)).unwrap();
        writeln!(s, "f = {}", list(&self.f)).unwrap();
        writeln!(s, "e0 = {}", list(&self.e0)).unwrap();
        writeln!(s, "bound = {}", self.bound).unwrap();
        writeln!(s, "shape = {}", self.shape.as_ref().map_or("any".to_string(), |v| list(v))).unwrap();
        let tau = match self.taus {
            TauFilter::All => "all",
            TauFilter::SupportOnly => "support-only",
        };
        writeln!(s, "tau = {tau}").unwrap();
        if let Some(p) = &self.output {
            writeln!(s, "output = {}", p.display()).unwrap();
        }
        writeln!(s, "workers = {}", self.workers).unwrap();
        s
    }

    /// Parses `key = value` lines; `#` starts a comment. Missing keys keep
    /// their defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = SweepConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("line {}: expected key = value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "q" => c.q = parse_list(key, value)?,
                "f" => c.f = parse_list(key, value)?,
                "e0" => c.e0 = parse_list(key, value)?,
                "bound" => {
                    c.bound = value.parse().map_err(|_| Error::InvalidArgument(format!("bound: cannot parse {value:?}")))?
                }
                "shape" => c.shape = if value == "any" { None } else { Some(parse_list(key, value)?) },
                "tau" => {
                    c.taus = match value {
                        "all" => TauFilter::All,
                        "support-only" => TauFilter::SupportOnly,
                        _ => return Err(Error::InvalidArgument(format!("tau: expected all or support-only, got {value:?}"))),
                    }
                }
                "output" => c.output = Some(PathBuf::from(value)),
                "workers" => {
                    c.workers =
                        value.parse().map_err(|_| Error::InvalidArgument(format!("workers: cannot parse {value:?}")))?
                }
                _ => return Err(Error::InvalidArgument(format!("line {}: unknown key {key:?}", n + 1))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bound < 0 {
            return Err(Error::InvalidArgument("bound must be non-negative".into()));
        }
        if self.q.iter().any(|&q| q < 2) || self.f.contains(&0) || self.e0.contains(&0) {
            return Err(Error::InvalidArgument("q >= 2, f >= 1 and e0 >= 1 are required".into()));
        }
        Ok(())
    }

    /// The `(q, f, e_0)` grid with `f e_0 <= 4`, in list order.
    pub fn grid(&self) -> SweepGrid {
        let mut configs = Vec::new();
        for &q in &self.q {
            for &f in &self.f {
                for &e0 in &self.e0 {
                    if f * e0 <= MAX_SWEEP_RANK {
                        configs.push((q, f, e0));
                    }
                }
            }
        }
        SweepGrid { configs, bound: self.bound, shape: self.shape.clone(), taus: self.taus }
    }

    /// Echo for reports.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            q: self.q.clone(),
            f: self.f.clone(),
            e0: self.e0.clone(),
            bound: self.bound,
            shape: self.shape.clone(),
            tau: self.taus,
            workers: self.workers,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub q: Vec<u32>,
    pub f: Vec<usize>,
    pub e0: Vec<usize>,
    pub bound: i64,
    pub shape: Option<Vec<usize>>,
    pub tau: TauFilter,
    pub workers: usize,
}

/// One report record: the cell's own fields followed by `wall_ms`.
#[derive(Clone, Debug, Serialize)]
pub struct CellRecord<C: Serialize> {
    #[serde(flatten)]
    pub cell: C,
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub cells: usize,
    pub passes: usize,
    pub failures: usize,
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report<E: Serialize, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: E,
    pub cells: Vec<CellRecord<C>>,
    pub summary: Summary,
    /// Indices into `cells` of every failed cell.
    pub failures: Vec<usize>,
}

impl<E: Serialize, C: Serialize> Report<E, C> {
    /// Assembles a report from `(cell, passed, wall_ms)` triples. Timings are
    /// kept only when `timing` is set, so that reruns are byte-identical.
    pub fn new(command: &str, config: E, cells: Vec<(C, bool, u64)>, total_ms: u64, timing: bool) -> Self {
        let failures: Vec<usize> = cells.iter().enumerate().filter(|(_, c)| !c.1).map(|(i, _)| i).collect();
        let n = cells.len();
        Report {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            cells: cells.into_iter().map(|(cell, _, ms)| CellRecord { cell, wall_ms: timing.then_some(ms) }).collect(),
            summary: Summary { cells: n, passes: n - failures.len(), failures: failures.len(), wall_ms: timing.then_some(total_ms) },
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Invariant(format!("report serialisation: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

pub fn emit_report<E: Serialize, C: Serialize>(report: &Report<E, C>, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json()?).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let mut c = SweepConfig::default();
        assert_eq!(SweepConfig::from_text(&c.to_text()).unwrap(), c);
        c.shape = Some(vec![1, 2]);
        c.taus = TauFilter::SupportOnly;
        c.output = Some(PathBuf::from("out/report.json"));
        c.workers = 3;
        c.q = vec![3];
        assert_eq!(SweepConfig::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn config_errors() {
        assert!(SweepConfig::from_text("q = 2\nnonsense").is_err());
        assert!(SweepConfig::from_text("colour = red").is_err());
        assert!(SweepConfig::from_text("bound = -1").is_err());
        assert!(SweepConfig::from_text("tau = some").is_err());
        let c = SweepConfig::from_text("# comment\nq = 2 # trailing\n").unwrap();
        assert_eq!(c.q, vec![2]);
    }

    #[test]
    fn default_grid_matches() {
        assert_eq!(SweepConfig::default().grid(), SweepGrid::default_grid());
    }

    #[derive(Serialize)]
    struct Cell {
        left: i64,
    }

    #[test]
    fn reports_are_deterministic_without_timing() {
        let cells = |t: u64| vec![(Cell { left: 1 }, true, t), (Cell { left: 2 }, false, t + 1)];
        let a: Report<(), Cell> = Report::new("x", (), cells(5), 12, false);
        let b: Report<(), Cell> = Report::new("x", (), cells(40), 99, false);
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(a.to_json().unwrap().contains("\"wall_ms\": null"));
        assert_eq!(a.failures, vec![1]);
        let timed: Report<(), Cell> = Report::new("x", (), cells(5), 12, true);
        assert!(timed.to_json().unwrap().contains("\"wall_ms\": 5"));
        let empty: Report<(), Cell> = Report::new("x", (), vec![], 0, false);
        assert_eq!(empty.summary.cells, 0);
        assert!(empty.passed());
    }

    #[test]
    fn emit_reports_io_errors_with_path() {
        let r: Report<(), Cell> = Report::new("x", (), vec![], 0, false);
        let err = emit_report(&r, Path::new("/nonexistent-dir/report.json")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/report.json"));
    }
}
