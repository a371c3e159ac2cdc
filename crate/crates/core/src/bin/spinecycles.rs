use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spinecycles::cycles;
use spinecycles::predictor::{self, disc_set_dividing, disc_set_exact, kaneko_bound, PredictError};
use spinecycles::runner::{self, CensusConfig, PhiSource, RunnerError};
use spinecycles::ssgraph::{self, GraphError, ModularPolynomialData};

#[derive(Parser)]
#[command(
    name = "spinecycles",
    version,
    about = "Cycles along the spine of supersingular isogeny graphs"
)]
struct Cli {
    /// Modular polynomial file (`i j coefficient` lines) replacing the built-in table.
    #[arg(long, global = true)]
    phi: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminants of orders where a prime above l has order dividing r.
    Discs {
        ell: u64,
        r: u32,
        /// Only orders where the order is exactly r.
        #[arg(long)]
        exact: bool,
    },
    /// Kaneko bounds for (l, r).
    Bound { ell: u64, r: u32 },
    /// Predicted spine and total r-cycle counts at p.
    Predict { ell: u64, r: u32, p: u64 },
    /// Build the l-isogeny graph at p.
    Graph {
        p: u64,
        ell: u64,
        /// Cycle length to census on the built graph.
        #[arg(long)]
        cycles: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Sweep primes, writing one CSV row per prime.
    Census {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        /// Also build each graph and count cycles directly.
        #[arg(long)]
        oracle: bool,
        /// Do not count tainted rows as mismatches.
        #[arg(long)]
        skip_tainted: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// First prime in the running average.
        #[arg(long)]
        avg_start: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check formula against graph counts at the given primes.
    Validate {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        r: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Residue-class table of (n_s, n_t) for odd r.
    Residues {
        ell: u64,
        r: u32,
        /// Emit every class when the modulus is at most this.
        #[arg(long, default_value_t = 100_000)]
        full_limit: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<RunnerError> for Failure {
    fn from(e: RunnerError) -> Self {
        match e {
            RunnerError::InvalidConfig(_)
            | RunnerError::Predict(_)
            | RunnerError::Graph(_)
            | RunnerError::Cycle(_) => Failure::Usage(e.to_string()),
            RunnerError::Io(_) | RunnerError::Csv(_) => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<PredictError> for Failure {
    fn from(e: PredictError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn load_phi(path: &Option<PathBuf>) -> Result<PhiSource, Failure> {
    match path {
        None => Ok(PhiSource::Builtin),
        Some(p) => Ok(PhiSource::External(ModularPolynomialData::from_file(p)?)),
    }
}

fn warn_depth(ell: u64, r: u32) {
    if ell >= 5 && r > 8 {
        eprintln!(
            "warning: l = {ell}, r = {r} enumerates on the order of {ell}^{r} walks per vertex"
        );
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let phi = load_phi(&cli.phi)?;
    match cli.command {
        Command::Discs { ell, r, exact } => {
            let set = if exact {
                disc_set_exact(ell, r)?
            } else {
                disc_set_dividing(ell, r)?
            };
            println!("{set}");
        }
        Command::Bound { ell, r } => {
            let b = kaneko_bound(ell, r)?;
            println!("M={}", b.m);
            if let Some(s) = b.m_strong {
                println!("M_strong={s}");
            }
            println!("operative={}", b.operative());
        }
        Command::Predict { ell, r, p } => {
            let pred = predictor::predict(ell, r, p)?;
            println!(
                "n_s={} n_t={} valid={} experimental={}",
                pred.n_s, pred.n_t, pred.valid, pred.experimental
            );
        }
        Command::Graph {
            p,
            ell,
            cycles: r,
            seed,
            dot,
        } => {
            let data = match &phi {
                PhiSource::Builtin => ModularPolynomialData::builtin(ell)?,
                PhiSource::External(d) if d.ell() == ell => d.clone(),
                PhiSource::External(d) => {
                    return Err(GraphError::EllMismatch {
                        expected: ell,
                        found: d.ell(),
                    }
                    .into())
                }
            };
            let g = ssgraph::build_graph_with(p, &data, seed.unwrap_or(0))?;
            println!("vertices={} spine={}", g.vertex_count(), g.spine_size());
            if let Some(r) = r {
                warn_depth(ell, r);
                let c = cycles::census(&g, r).map_err(|e| Failure::Usage(e.to_string()))?;
                let hist: Vec<String> = c
                    .spine_count_histogram
                    .iter()
                    .map(|(k, v)| format!("{k}:{v}"))
                    .collect();
                println!(
                    "n_s={} n_t={} histogram={{{}}} tainted={}",
                    c.n_s_graph,
                    c.n_t_graph,
                    hist.join(","),
                    c.tainted_present
                );
            }
            if let Some(path) = dot {
                std::fs::write(path, g.to_dot())?;
            }
        }
        Command::Census {
            ell,
            r,
            pmin,
            pmax,
            oracle,
            skip_tainted,
            seed,
            avg_start,
            output,
        } => {
            if oracle {
                warn_depth(ell, r);
            }
            let cfg = CensusConfig {
                ell,
                r,
                p_min: pmin,
                p_max: pmax,
                with_oracle: oracle,
                skip_tainted,
                seed,
                average_start: avg_start,
                phi,
            };
            let report = runner::run_census(&cfg)?;
            report.write_csv(BufWriter::new(File::create(&output)?))?;
            print!("{}", report.summary_text());
            return Ok(report.summary.mismatches.is_empty());
        }
        Command::Validate {
            ell,
            r,
            primes,
            seed,
        } => {
            warn_depth(ell, r);
            let report = runner::run_validate(ell, r, &primes, seed, &phi)?;
            print!("{}", report.text());
            return Ok(report.passed());
        }
        Command::Residues {
            ell,
            r,
            full_limit,
            output,
        } => {
            let text = runner::run_residues(ell, r, full_limit)?;
            std::fs::write(&output, &text)?;
            if let Some(first) = text.lines().next() {
                println!("{first}");
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
