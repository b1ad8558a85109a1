use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quron_walk::experiments::{
    default_coin_grid, run_classical, run_coin_check, run_hopfield, run_simulate, run_sweep, ExperimentError,
    ScenarioConfig,
};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Open quantum walks for associative memory on hypercubes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Also write an SVG chart next to the CSV.
    #[arg(long, global = true)]
    svg: bool,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config integration step.
    #[arg(long, global = true)]
    dt: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario and write its population trajectory.
    Simulate { config: PathBuf },
    /// Mixing time over a (kappa, gamma) grid.
    Sweep { config: PathBuf },
    /// Unitarity table of the neuron and biased coins.
    CoinCheck {
        /// Comma-separated firing probabilities.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
    },
    /// Classical asynchronous retrieval with Hebbian weights.
    Hopfield { config: PathBuf },
    /// Classical continuous-time walk on the same jump graph.
    Classical { config: PathBuf },
}

fn load(path: &Path, common: &Common) -> Result<ScenarioConfig, ExperimentError> {
    let mut cfg = ScenarioConfig::load(path)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(dt) = common.dt {
        cfg.dt = dt;
    }
    Ok(cfg)
}

fn write(dir: &Path, name: &Path, content: &str) -> Result<(), ExperimentError> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(&path, content)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn output_name(cfg: &ScenarioConfig, fallback: &str) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| PathBuf::from(fallback))
}

fn run(cli: Cli) -> Result<(), ExperimentError> {
    let common = &cli.common;
    match &cli.command {
        Command::Simulate { config } => {
            let cfg = load(config, common)?;
            let sim = run_simulate(&cfg, common.svg)?;
            let name = output_name(&cfg, "trajectory.csv");
            write(&common.out, &name, &sim.csv)?;
            if let Some(svg) = sim.svg {
                write(&common.out, &name.with_extension("svg"), &svg)?;
            }
        }
        Command::Sweep { config } => {
            let cfg = load(config, common)?;
            let grid = cfg.grid()?;
            let sweep = run_sweep(&cfg, &grid, true, common.svg)?;
            let name = output_name(&cfg, "sweep.csv");
            write(&common.out, &name, &sweep.csv)?;
            if let Some(svg) = sweep.svg {
                write(&common.out, &name.with_extension("svg"), &svg)?;
            }
        }
        Command::CoinCheck { grid } => {
            let grid = grid.clone().unwrap_or_else(default_coin_grid);
            let (_, csv) = run_coin_check(&grid)?;
            write(&common.out, Path::new("coin_check.csv"), &csv)?;
        }
        Command::Hopfield { config } => {
            let cfg = load(config, common)?;
            let (_, csv) = run_hopfield(&cfg)?;
            write(&common.out, &output_name(&cfg, "hopfield.csv"), &csv)?;
        }
        Command::Classical { config } => {
            let cfg = load(config, common)?;
            let run = run_classical(&cfg)?;
            write(&common.out, &output_name(&cfg, "classical.csv"), &run.csv)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
