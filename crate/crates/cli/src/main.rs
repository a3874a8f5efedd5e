mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stabtherm::Error;

/// Thermalization-time bounds for Pauli stabilizer Hamiltonians.
///
/// MODEL arguments are `.stab` files or builtins: `builtin:toric:<L>`,
/// `builtin:ising:<dims>:<L>[:open]`.
#[derive(Debug, Parser)]
#[command(name = "stabtherm", version, about, long_about = None)]
pub struct Cli {
    /// Write the JSON report to this path (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    /// Suppress the text summary.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a builtin lattice model to a .stab file.
    Build {
        #[command(subcommand)]
        lattice: BuildLattice,
    },
    /// Parse and validate a model.
    Validate { model: String },
    /// κ(β) and the high-temperature gap bound.
    HighTemp {
        model: String,
        #[arg(long)]
        beta: f64,
        /// simplified, proposition, numeric or all
        #[arg(long, default_value = "all")]
        variant: String,
        #[command(flatten)]
        bath: BathArgs,
    },
    /// Largest β with κ(β) < 1.
    CriticalBeta {
        model: String,
        #[arg(long, default_value = "simplified")]
        variant: String,
        #[arg(long, default_value_t = stabtherm::high_temp::DEFAULT_BETA_TOL)]
        tol: f64,
    },
    /// Maximum energy penalty of an ordering.
    Barrier {
        model: String,
        /// An ordering file or `builtin:<toric-zx|toric-xz|lex-zx>`.
        #[arg(long)]
        ordering: String,
        /// Enumerate all 4^N Paulis (default when no sampling is requested).
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
        /// Also evaluate the low-temperature gap bound at this β.
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        bath: BathArgs,
    },
    /// Exact generalized energy barrier (small models).
    BarrierExact { model: String },
    /// Exact spectral gap of the Davies or heat-bath generator.
    Gap {
        model: String,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        bath: BathArgs,
        #[arg(long, default_value = "davies")]
        generator: String,
        #[arg(long, default_value = "dense")]
        method: String,
    },
    /// Mixing-time upper bound from a spectral gap.
    MixingTime {
        model: String,
        #[arg(long)]
        beta: f64,
        /// A gap value, or `auto` to compute the Davies gap.
        #[arg(long, default_value = "auto")]
        gap: String,
        #[command(flatten)]
        bath: BathArgs,
    },
    /// Run the full inequality ledger.
    Verify {
        model: String,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        bath: BathArgs,
        /// Random observables per Poincaré check.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum BuildLattice {
    /// Kitaev toric code on an L×L torus.
    Toric {
        #[arg(long = "L")]
        l: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Ferromagnetic Ising model, periodic unless --open.
    Ising {
        #[arg(long)]
        dims: usize,
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        open: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BathArgs {
    /// glauber or metropolis
    #[arg(long, default_value = "glauber")]
    pub bath: String,
    /// File of `<ω> <h(ω)>` lines; overrides --bath.
    #[arg(long, value_name = "PATH")]
    pub rates: Option<PathBuf>,
}

pub const EXIT_INPUT: u8 = 1;
pub const EXIT_RESOURCE: u8 = 2;
pub const EXIT_LEDGER: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

/// Errors surfaced to the user, with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Resource(_)) => EXIT_RESOURCE,
            CliError::Core(_) | CliError::Io(_) => EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => f.write_str(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let report = commands::dispatch(&cli.command)?;
    if !cli.quiet {
        for line in &report.lines {
            println!("{line}");
        }
    }
    if let Some(path) = &cli.json {
        let text = report.to_json_string();
        if path.as_os_str() == "-" {
            print!("{text}");
        } else {
            std::fs::write(path, text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(if report.ledger_failed { EXIT_LEDGER } else { 0 })
}
