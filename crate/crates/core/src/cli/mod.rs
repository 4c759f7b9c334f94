//! `dgm-sim` command-line runner.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
//! failure (including a failing `verify` check).

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::scenarios::robustness::PerturbationKind;
pub use config::RunConfig;
pub use output::{emit_csv, Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Figures and checks for dissipation-generated module networks.
///
/// Times are in arbitrary units; couplings g and J are inverse times.
#[derive(Debug, Parser)]
#[command(name = "dgm-sim", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Clone, PartialEq)]
pub enum Command {
    /// First-order error against T for the hop and zz edges.
    Fig2(CommonArgs),
    /// Coherence of a cavity qubit against the boson hop J.
    Fig4Coherence(CommonArgs),
    /// Concurrence of two cavity qubits against J.
    Fig5Concurrence(CommonArgs),
    /// Error against T with leaking Hamiltonian error terms.
    Fig6HamRobustness(CommonArgs),
    /// Error against T with leaking dissipative error terms.
    Fig7LindbladRobustness(CommonArgs),
    /// Bell-state preparation through the seven-segment CNOT.
    Fig8Cnot(CommonArgs),
    /// Spectral identities and closed-form generator checks.
    Verify(CommonArgs),
    /// Numeric against closed-form cavity effective generators.
    JcCrosscheck(CommonArgs),
    /// Two z-dephasing qubits mixed by a second-order hop.
    Zdephase(CommonArgs),
}

#[derive(Debug, Args, Clone, PartialEq, Default)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for random error terms and probe operators.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (default: current directory).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Largest T of the time grid; for the J sweeps, the evolution time.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Samples on the swept axis.
    #[arg(long)]
    pub points: Option<usize>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fig2(_) => "fig2",
            Command::Fig4Coherence(_) => "fig4-coherence",
            Command::Fig5Concurrence(_) => "fig5-concurrence",
            Command::Fig6HamRobustness(_) => "fig6-ham-robustness",
            Command::Fig7LindbladRobustness(_) => "fig7-lindblad-robustness",
            Command::Fig8Cnot(_) => "fig8-cnot",
            Command::Verify(_) => "verify",
            Command::JcCrosscheck(_) => "jc-crosscheck",
            Command::Zdephase(_) => "zdephase",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Fig2(a)
            | Command::Fig4Coherence(a)
            | Command::Fig5Concurrence(a)
            | Command::Fig6HamRobustness(a)
            | Command::Fig7LindbladRobustness(a)
            | Command::Fig8Cnot(a)
            | Command::Verify(a)
            | Command::JcCrosscheck(a)
            | Command::Zdephase(a) => a,
        }
    }
}

/// Failure of a run, tagged with its exit code.
#[derive(Debug)]
pub enum RunError {
    Io(std::io::Error),
    Lib(Error),
    ChecksFailed(usize),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => EXIT_IO,
            RunError::Lib(e) if e.is_numerical() => EXIT_NUMERICAL,
            RunError::Lib(_) => EXIT_CONFIG,
            RunError::ChecksFailed(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Io(e) => write!(f, "I/O failure: {e}"),
            RunError::Lib(e) => write!(f, "{e}"),
            RunError::ChecksFailed(n) => write!(f, "{n} verification checks failed"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Lib(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// Config file merged with the command-line overrides.
pub fn resolve_config(cmd: &Command) -> Result<RunConfig, Error> {
    let args = cmd.args();
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    commands::ensure_scenario(&cfg, cmd.name())?;
    if let Some(s) = args.seed {
        cfg.seed = Some(s);
    }
    if let Some(o) = &args.out {
        cfg.output = Some(o.clone());
    }
    if let Some(p) = args.points {
        cfg.points = Some(p);
    }
    if let Some(t) = args.tmax {
        match cmd {
            Command::Fig4Coherence(_) | Command::Fig5Concurrence(_) => cfg.t = Some(t),
            _ => cfg.t_max = Some(t),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one subcommand without touching the file system.
pub fn compute(cmd: &Command, cfg: &RunConfig) -> Result<Vec<Table>, Error> {
    match cmd {
        Command::Fig2(_) => commands::fig2(cfg),
        Command::Fig4Coherence(_) => commands::fig4(cfg),
        Command::Fig5Concurrence(_) => commands::fig5(cfg),
        Command::Fig6HamRobustness(_) => commands::robustness(cfg, PerturbationKind::Hamiltonian),
        Command::Fig7LindbladRobustness(_) => commands::robustness(cfg, PerturbationKind::Lindbladian),
        Command::Fig8Cnot(_) => commands::fig8(cfg),
        Command::Verify(_) => commands::verify(cfg),
        Command::JcCrosscheck(_) => commands::jc_crosscheck(cfg),
        Command::Zdephase(_) => commands::zdephase(cfg),
    }
}

/// Resolves the config, computes and writes every table. Returns the written paths.
pub fn run(cmd: &Command) -> Result<Vec<PathBuf>, RunError> {
    let cfg = resolve_config(cmd)?;
    log::info!("running {} with {:?}", cmd.name(), cfg);
    let tables = compute(cmd, &cfg)?;
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut paths = Vec::new();
    for t in &tables {
        let p = emit_csv(t, &dir)?;
        log::info!("wrote {}", p.display());
        paths.push(p);
    }
    let failed = commands::failures(&tables);
    if failed > 0 {
        return Err(RunError::ChecksFailed(failed));
    }
    Ok(paths)
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&cli.command) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("dgm-sim {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
