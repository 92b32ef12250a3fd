use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphvar::analyze::analyze;
use graphvar::config::RunConfig;
use graphvar::density::{limit_vector, DensityMode, DEFAULT_INJECTION_BUDGET};
use graphvar::process::jump_counts;
use graphvar::verify::{verify, Status, VerificationReport};
use graphvar::{pathio, AdjacencyGraph, Error};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "graphvar",
    version,
    about = "Simulate exchangeable graph processes and check their variation bounds"
)]
struct Cli {
    /// Flat TOML file of run settings; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one path and write it as JSON lines.
    Simulate(ModelArgs),
    /// Ladders, N_p profiles, variation grids and TV comparisons for a path file.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        grids: GridArgs,
    },
    /// Truncated graph-limit vector of a graph (edge list) or a path snapshot.
    Densities {
        /// Edge-list file (`n <N>` header, then `i j` lines) or a path file with --time.
        input: PathBuf,
        /// Read `input` as a path file and use its snapshot at this time.
        #[arg(long)]
        time: Option<f64>,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Monte Carlo draws per pattern for levels too large to count exactly.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Run the verification suite.
    Verify {
        /// Restrict to these check families (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Run the exchangeability check on the planted-asymmetry model.
        #[arg(long)]
        adversarial: bool,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grids: GridArgs,
    },
    /// Print the summary of a saved verification report.
    Report { report: PathBuf },
}

#[derive(Args, Default)]
struct ModelArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    init_density: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    hot_edge_factor: Option<f64>,
    #[arg(long)]
    global_rate: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    graphons: Option<Vec<f64>>,
}

#[derive(Args, Default)]
struct GridArgs {
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    m_grid: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    tv_p_grid: Option<Vec<f64>>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    weight: Option<String>,
    #[arg(long)]
    k_perm: Option<usize>,
    #[arg(long)]
    k_inj: Option<usize>,
    #[arg(long)]
    seed_count: Option<usize>,
}

macro_rules! apply {
    ($cfg:expr, $args:expr, $($field:ident),+) => {
        $( if let Some(v) = $args.$field.clone() { $cfg.$field = v; } )+
    };
}

impl ModelArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        apply!(
            cfg,
            self,
            model,
            vertices,
            rate,
            init_density,
            horizon,
            hot_edge_factor,
            global_rate,
            graphons
        );
    }
}

impl GridArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        apply!(
            cfg, self, p_grid, m_grid, alphas, tv_p_grid, n_max, weight, k_perm, k_inj, seed_count
        );
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::Parse { .. } | Error::Json(_) => EXIT_IO,
        Error::Domain(_) | Error::Refused(_) => EXIT_USAGE,
    }
}

fn write_out(file: &Path, text: &str) -> graphvar::Result<()> {
    fs::write(file, text).map_err(|e| Error::Io {
        path: file.to_path_buf(),
        source: e,
    })
}

fn emit(out: Option<&Path>, text: &str) -> graphvar::Result<()> {
    match out {
        Some(f) => write_out(f, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> graphvar::Result<u8> {
    let mut cfg = match &cli.config {
        Some(f) => RunConfig::load(f)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match cli.command {
        Command::Simulate(model) => {
            model.apply(&mut cfg);
            cfg.validate()?;
            let out = cli
                .out
                .ok_or_else(|| Error::Domain("simulate needs --out <file>".into()))?;
            let path = cfg.build_model()?.simulate(cfg.seed)?;
            pathio::save(&path, &out)?;
            let jc = jump_counts(&path);
            let hist: Vec<String> = jc
                .histogram()
                .iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect();
            println!(
                "{} events on {} vertices; jumps per edge max {} mean {:.4}; histogram {}",
                path.events().len(),
                path.n_vertices(),
                jc.max(),
                jc.mean(),
                hist.join(" ")
            );
        }
        Command::Analyze { path, grids } => {
            grids.apply(&mut cfg);
            cfg.validate()?;
            let p = pathio::load(&path)?;
            let report = analyze(&p, &cfg)?;
            match &cli.out {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|e| Error::Io {
                        path: dir.clone(),
                        source: e,
                    })?;
                    write_out(&dir.join("analysis.json"), &report.to_json())?;
                    write_out(&dir.join("ladders.csv"), &report.ladder_csv())?;
                    write_out(&dir.join("variation.csv"), &report.variation_csv())?;
                    for s in &report.skipped {
                        eprintln!("skipped {} p={}: {}", s.section, s.p, s.reason);
                    }
                }
                None => println!("{}", report.to_json()),
            }
        }
        Command::Densities {
            input,
            time,
            n_max,
            samples,
        } => {
            let g = match time {
                Some(t) => pathio::load(&input)?.snapshot(t)?,
                None => {
                    let text = fs::read_to_string(&input).map_err(|e| Error::Io {
                        path: input.clone(),
                        source: e,
                    })?;
                    AdjacencyGraph::parse_edge_list(&text)?
                }
            };
            let mode = DensityMode::Auto {
                budget: DEFAULT_INJECTION_BUDGET,
                samples,
                seed: cfg.seed,
            };
            let v = limit_vector(&g, n_max, mode)?;
            emit(cli.out.as_deref(), &format!("{}\n", v.to_json()))?;
        }
        Command::Verify {
            only,
            adversarial,
            model,
            grids,
        } => {
            model.apply(&mut cfg);
            grids.apply(&mut cfg);
            cfg.adversarial |= adversarial;
            let report = verify(&cfg, &only)?;
            if let Some(f) = &cli.out {
                write_out(f, &report.to_json())?;
            }
            print!("{}", report.summary_table());
            return Ok(if report.passed() {
                0
            } else {
                EXIT_CHECK_FAILED
            });
        }
        Command::Report { report } => {
            let text = fs::read_to_string(&report).map_err(|e| Error::Io {
                path: report.clone(),
                source: e,
            })?;
            let r: VerificationReport = serde_json::from_str(&text)?;
            print!("{}", r.summary_table());
            let count = |s: Status| r.checks.iter().filter(|c| c.status == s).count();
            println!(
                "{} checks: {} pass, {} pass-with-slack, {} skipped, {} fail",
                r.checks.len(),
                count(Status::Pass),
                count(Status::PassWithSlack),
                count(Status::Skipped),
                count(Status::Fail)
            );
            return Ok(if r.passed() { 0 } else { EXIT_CHECK_FAILED });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
