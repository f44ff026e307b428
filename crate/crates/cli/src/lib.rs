//! Command implementations behind the `holoqc` binary.
//!
//! Every command first reads and validates all of its inputs, computes its
//! results in memory and only then writes files, each through a temporary
//! file in the destination directory that is renamed into place.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub mod commands;

pub use commands::{cmd_diff_with, run, MatrixOracle};

/// Exit status for success.
pub const EXIT_OK: u8 = 0;
/// Exit status when a numerical result misses its tolerance.
pub const EXIT_TOLERANCE: u8 = 1;
/// Exit status for unreadable or invalid input.
pub const EXIT_INPUT: u8 = 2;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(
    name = "holoqc",
    version,
    about = "Holomorphic qubit circuit simulator"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Run a circuit with the holomorphic engine and write the final state.
    Simulate(SimulateArgs),
    /// Run a circuit with both engines and report their largest deviation.
    Diff(DiffArgs),
    /// Write phase-portrait trajectories of a Pauli flow.
    Portrait(PortraitArgs),
    /// Distance of a state to the nearest product state.
    Entanglement(EntanglementArgs),
    /// Discrete Berry phase of a closed loop of states.
    Holonomy(HolonomyArgs),
    /// Classical evolution of mode amplitudes under a Pauli Hamiltonian.
    ClassicalEvolve(ClassicalArgs),
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct SimulateArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Initial state; |0...0> when omitted.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct DiffArgs {
    /// Circuit file; a seeded random circuit when omitted.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Initial state; |0...0> for circuit files, a seeded random state otherwise.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Width of the random circuit.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=12))]
    pub qubits: u64,
    /// Gate count of the random circuit.
    #[arg(long, default_value_t = 30)]
    pub depth: usize,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct PortraitArgs {
    #[arg(long, value_parser = parse_pauli)]
    pub generator: holoqc::Pauli,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_final: f64,
    /// Total phases of the starting points.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_values_t = [-1.2, -0.6, 0.0, 0.6, 1.2]
    )]
    pub offsets: Vec<f64>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct EntanglementArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Report file; the report goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct HolonomyArgs {
    /// Polar angle of a Bloch-sphere circle.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    pub theta: Option<f64>,
    /// Number of points on the circle.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Explicit loop of states.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Allowed distance from the analytic phase of a circle.
    #[arg(long, default_value_t = 2e-3)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct ClassicalArgs {
    /// Coherent point `{"z": [[re, im], ...]}`.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, value_parser = parse_pauli)]
    pub generator: holoqc::Pauli,
    #[arg(long, default_value_t = 1)]
    pub qubit: usize,
    #[arg(long, default_value_t = 10.0)]
    pub t_final: f64,
    /// Sample spacing.
    #[arg(long, default_value_t = 1e-2)]
    pub dt: f64,
    /// Series file; the series goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn parse_pauli(s: &str) -> Result<holoqc::Pauli, String> {
    s.parse()
        .map_err(|_| format!("generator must be X, Y or Z, got {s:?}"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Tolerance(_) => EXIT_TOLERANCE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Tolerance(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<holoqc::Error> for CliError {
    fn from(e: holoqc::Error) -> Self {
        use holoqc::Error::*;
        match e {
            NotPhysical(_) | VanishingOverlap { .. } | Singular(_) | NearSingular { .. } => {
                CliError::Tolerance(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Everything a command produces: files to write, text for stdout, exit status.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub files: Vec<(PathBuf, Vec<u8>)>,
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    /// Writes the files, then the stdout text.
    pub fn commit<W: Write>(&self, mut stdout: W) -> Result<u8, CliError> {
        for (path, bytes) in &self.files {
            write_atomic(path, bytes)?;
        }
        stdout
            .write_all(self.stdout.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))?;
        Ok(self.code)
    }
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// Checks that `path` can be created as a regular file.
pub fn check_output(path: &Path) -> Result<(), CliError> {
    if path.is_dir() {
        return Err(CliError::Input(format!(
            "{}: is a directory",
            path.display()
        )));
    }
    let dir = parent_dir(path);
    if !dir.is_dir() {
        return Err(CliError::Input(format!(
            "{}: no such directory",
            dir.display()
        )));
    }
    Ok(())
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Input(format!("{}: {e}", path.display()));
    let dir = parent_dir(path);
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// `{:.16e}`, the format of every float the CLI prints.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
