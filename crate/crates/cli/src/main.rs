use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use qsceom_cli::{cmd, Config, Result};

#[derive(Parser)]
#[command(
    name = "qsceom",
    version,
    about = "q-sc-EOM experiments on a statevector simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides run.seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides output.dir
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Ground and excited states along a geometry scan
    Pes,
    /// Ansatz errors vs FCI and optimizer comparison
    AnsatzBench,
    /// BRG group counts and induced EOM error
    BrgSweep,
    /// Noise, mitigation and shot-allocation study
    NoiseBench,
    /// Qubit Hamiltonian terms and measurement groups
    DumpHamiltonian,
    /// Exact FCI energies
    Fci,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::Pes => "pes",
            Self::AnsatzBench => "ansatz-bench",
            Self::BrgSweep => "brg-sweep",
            Self::NoiseBench => "noise-bench",
            Self::DumpHamiltonian => "dump-hamiltonian",
            Self::Fci => "fci",
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::defaults(),
    };
    if let Some(s) = cli.seed {
        cfg.set("run.seed", &s.to_string()).expect("schema key");
    }
    if let Some(o) = &cli.out {
        cfg.set("output.dir", &o.to_string_lossy())
            .expect("schema key");
    }
    if let Some(n) = cli.threads {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let start = Instant::now();
    match cli.command {
        Command::Pes => cmd::pes::run(&cfg)?,
        Command::AnsatzBench => cmd::ansatz_bench::run(&cfg)?,
        Command::BrgSweep => cmd::brg_sweep::run(&cfg)?,
        Command::NoiseBench => cmd::noise_bench::run(&cfg)?,
        Command::DumpHamiltonian => cmd::simple::dump_hamiltonian(&cfg)?,
        Command::Fci => cmd::simple::fci(&cfg)?,
    }
    // Wall time stays out of the CSVs so they remain byte-identical across reruns.
    let log = format!(
        "command={}\nconfig_hash={}\nwall_seconds={:.3}\n",
        cli.command.name(),
        cfg.hash(),
        start.elapsed().as_secs_f64()
    );
    let path = PathBuf::from(cfg.str("output.dir")).join("run.log");
    std::fs::write(&path, log).map_err(|e| qsceom_cli::CliError::io(&path, e))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
