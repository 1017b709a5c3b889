use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "ctxsim",
    version,
    about = "Reproducible simulations of a two-qubit contextuality witness"
)]
pub struct Cli {
    /// Tolerance for every pass/fail check [default: 1e-10]
    #[arg(long, global = true, value_name = "X")]
    pub tolerance: Option<f64>,

    /// Output format [default: text]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Flat key = value file; command-line flags take precedence
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned text for reading.
    #[value(alias = "table")]
    Text,
    /// One JSON object per line.
    #[value(alias = "records", alias = "json")]
    Jsonl,
    /// Long-format comma-separated rows.
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the commutation and product identities of the Pauli operators.
    Identities(IdentitiesArgs),
    /// Run both filtration settings on one state and estimate the witness.
    Run(RunArgs),
    /// Evaluate the witness on |++> over a grid of mixing parameters.
    Sweep(SweepArgs),
    /// Noncontextual hidden-variable predictions and contradiction search.
    Nchv(NchvArgs),
    /// Two-photon optics model of the filters.
    Optics(OpticsArgs),
    /// Headline checks from every subcommand at default settings.
    Report,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    /// Perturb one operand so the checks must fail (self-test).
    #[arg(long)]
    pub corrupt: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// plus_plus | bell_phi_plus | bell_phi_minus | maximally_mixed |
    /// product:x,y,z;x,y,z [default: plus_plus]
    #[arg(long)]
    pub state: Option<String>,

    /// Mixing of the first setting's parity check [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,

    /// Mixing of the second setting's parity check [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub p_prime: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub p_start: Option<f64>,
    /// [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub p_stop: Option<f64>,
    /// [default: 11]
    #[arg(long)]
    pub p_steps: Option<usize>,
    /// [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub p_prime_start: Option<f64>,
    /// [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub p_prime_stop: Option<f64>,
    /// [default: 11]
    #[arg(long)]
    pub p_prime_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct NchvArgs {
    /// Eigenvalue assigned to s1s1: 1 or -1 [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub target: Option<i64>,

    /// Constraints to drop: factorization, identity-22-33, identity-23-32,
    /// or identities (both). Comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub disable: Vec<String>,
}

#[derive(Debug, Args)]
pub struct OpticsArgs {
    /// Overlap of the photons' internal states, in [0, 1] [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,

    /// a | b | both [default: both]
    #[arg(long)]
    pub setting: Option<String>,

    /// plus_plus or product:x,y,z;x,y,z with unit Bloch vectors
    /// [default: plus_plus]
    #[arg(long)]
    pub state: Option<String>,
}
