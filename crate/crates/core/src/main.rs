use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use parahoric_lab::commands::{self, CommandOutput, LemmaArgs, OrbitArgs, RunOptions, TauChoice};
use parahoric_lab::lemma::TauFilter;
use parahoric_lab::report::SweepConfig;
use parahoric_lab::Error;

/// Finite-group and building checks for depth-zero types of GL_N.
#[derive(Parser)]
#[command(name = "parahoric-lab", version)]
struct Cli {
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print the JSON report to stdout after the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Record wall times in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of GL_n(F_q) and its orthogonality checks.
    CharTable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    /// Cuspidal irreducibles of GL_n(F_q).
    Cuspidals {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    /// Both sides of the intertwining identity for one double coset.
    LemmaVerify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        e0: usize,
        /// Block sizes of the order, e.g. `2,1`.
        #[arg(long)]
        shape: String,
        /// Cuspidal index of GL_f(F_q); all cuspidals when absent.
        #[arg(long)]
        rho: Option<usize>,
        /// `trivial`, `all`, or comma-separated Levi indices.
        #[arg(long, default_value = "trivial")]
        tau: String,
        /// Affine Weyl element, e.g. `w:2,1;d:1,0`.
        #[arg(long)]
        x: String,
    },
    /// The identity over a grid of parameters.
    LemmaSweep {
        /// Sweep config file; flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',')]
        f: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        e0: Option<Vec<usize>>,
        #[arg(long)]
        bound: Option<i64>,
        /// Block sizes in units of f.
        #[arg(long, value_delimiter = ',')]
        shape: Option<Vec<usize>>,
        /// `all` or `support-only`.
        #[arg(long)]
        tau_filter: Option<String>,
        #[arg(long)]
        workers: Option<usize>,
        /// Fraction of cells rechecked under random unit identifications.
        #[arg(long, default_value_t = 0.0)]
        sample: f64,
    },
    /// Export a truncated building.
    Building {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Where to write the vertex and simplex lists.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Chain-complex and order-dictionary checks on a truncated building.
    ComplexCheck {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Orbit-wise dimension count against the intertwining sum (f = 1).
    OrbitCheck {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        e0: usize,
        #[arg(long)]
        shape: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        rho: Option<usize>,
        /// Levi index tuples separated by `;`, e.g. `0;2`.
        #[arg(long)]
        tau: Option<String>,
        #[arg(long, default_value_t = 1)]
        bound: i64,
    },
}

fn parse_taus(s: &str) -> Result<Vec<Vec<usize>>, Error> {
    s.split(';')
        .map(|t| {
            t.split(',')
                .map(|i| i.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("cannot parse τ list {s:?}"))))
                .collect()
        })
        .collect()
}

fn sweep_config(
    config: Option<PathBuf>,
    q: Option<Vec<u32>>,
    f: Option<Vec<usize>>,
    e0: Option<Vec<usize>>,
    bound: Option<i64>,
    shape: Option<Vec<usize>>,
    tau_filter: Option<String>,
    workers: Option<usize>,
) -> Result<SweepConfig, Error> {
    let mut c = match config {
        Some(p) => SweepConfig::read(&p)?,
        None => SweepConfig::default(),
    };
    c.q = q.unwrap_or(c.q);
    c.f = f.unwrap_or(c.f);
    c.e0 = e0.unwrap_or(c.e0);
    c.bound = bound.unwrap_or(c.bound);
    c.shape = shape.or(c.shape);
    c.workers = workers.unwrap_or(c.workers);
    if let Some(t) = tau_filter {
        c.taus = match t.as_str() {
            "all" => TauFilter::All,
            "support-only" => TauFilter::SupportOnly,
            _ => return Err(Error::InvalidArgument(format!("--tau-filter: expected all or support-only, got {t:?}"))),
        };
    }
    c.validate()?;
    Ok(c)
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn run(cli: Cli) -> Result<CommandOutput, Error> {
    let opts = RunOptions { timing: cli.timing, seed: cli.seed };
    let mut output = cli.output;
    let out = match cli.command {
        Command::CharTable { n, q } => commands::char_table(n, q, opts)?,
        Command::Cuspidals { n, q } => commands::cuspidals(n, q, opts)?,
        Command::LemmaVerify { q, f, e0, shape, rho, tau, x } => {
            let args = LemmaArgs { q, f, e0, shape, rho, tau: tau.parse::<TauChoice>()?, x };
            commands::lemma_verify(&args, opts)?
        }
        Command::LemmaSweep { config, q, f, e0, bound, shape, tau_filter, workers, sample } => {
            let c = sweep_config(config, q, f, e0, bound, shape, tau_filter, workers)?;
            if !(0.0..=1.0).contains(&sample) {
                return Err(Error::InvalidArgument(format!("--sample must lie in [0, 1], got {sample}")));
            }
            if c.workers > 0 {
                // Only fails if a pool already exists, which is harmless here.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(c.workers).build_global();
            }
            if output.is_none() {
                output = c.output.clone();
            }
            commands::lemma_sweep(&c, sample, opts)?
        }
        Command::Building { rank, q, radius, export } => {
            let (out, complex) = commands::building(rank, q, radius, opts)?;
            if let Some(p) = export {
                write(&p, &complex)?;
            }
            out
        }
        Command::ComplexCheck { rank, q, radius } => commands::complex_check(rank, q, radius, opts)?,
        Command::OrbitCheck { q, e0, shape, x, rho, tau, bound } => {
            let taus = tau.as_deref().map(parse_taus).transpose()?;
            commands::orbit_check(&OrbitArgs { q, e0, shape, x, rho, taus, bound }, opts)?
        }
    };
    if let Some(p) = output {
        write(&p, &out.json)?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            print!("{}", out.summary);
            if json {
                print!("{}", out.json);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Invariant(_) => 1,
                _ => 2,
            })
        }
    }
}
