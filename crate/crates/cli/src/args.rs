use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qihe_core::qcore::DEFAULT_MAX_DIMENSION;
use qihe_core::verify::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "qihe",
    version,
    about = "Work and communication accounting for quantum information heat engines"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Energy units for reports.
    #[arg(long, global = true, value_enum, default_value_t = UnitsArg::Natural)]
    pub units: UnitsArg,

    /// Bath temperature in kelvin.
    #[arg(long, global = true, default_value_t = 300.0)]
    pub temperature: f64,

    /// Largest dense Hilbert-space dimension allowed.
    #[arg(long, global = true, env = "QIHE_MAX_DIM", default_value_t = DEFAULT_MAX_DIMENSION)]
    pub capacity: usize,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    Natural,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Pretty,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Work from depolarizing a state at the bath temperature.
    Work(WorkArgs),
    /// Remote Carnot cycle driven by messenger qubits.
    Carnot(CarnotArgs),
    /// Energy-distribution protocols.
    Protocol(ProtocolArgs),
    /// Holevo information of an alphabet.
    Holevo(AlphabetArg),
    /// Communication/energy split of an alphabet.
    Tradeoff(TradeoffArgs),
    /// Typical subspace of a qubit or alphabet source.
    Typical(TypicalArgs),
    /// Work ledger for the dual-use codewords.
    Refactor(RefactorArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    PureQubit,
    MixedQubit,
    /// `diag(1 - p, p)`.
    Qubit,
    Bell,
    Ghz,
    EvenParity,
    Random,
    /// Explicit matrix from `--file`.
    File,
}

#[derive(Debug, Args)]
pub struct WorkArgs {
    #[arg(long, value_enum, default_value_t = StateKind::PureQubit)]
    pub state: StateKind,
    /// Qubit count for `ghz` and `even-parity`.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Excited population for `qubit`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Dimension for `random`.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// JSON file `{"dims": [...], "data": matrix}` for `file`.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Keep only these subsystems before extracting.
    #[arg(long, value_delimiter = ',')]
    pub keep: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct CarnotArgs {
    #[arg(long = "t-low")]
    pub t_low: f64,
    #[arg(long = "t-high")]
    pub t_high: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolKind {
    Bell,
    Classical,
    Ghz,
    Parity,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(value_enum)]
    pub kind: ProtocolKind,
    /// Number of qubits for `ghz` and `parity`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Route the Bell pair's travelling qubit through an eavesdropper.
    #[arg(long)]
    pub intercept: bool,
    /// Revealed outcomes for `parity`, as `qubit=bit`.
    #[arg(long, value_parser = parse_reveal, value_delimiter = ',')]
    pub reveal: Vec<(usize, usize)>,
    /// Measuring party for `ghz`.
    #[arg(long)]
    pub initiator: Option<usize>,
    /// Random channels on qubits 2..n to test against the parity theorem.
    #[arg(long)]
    pub channels: Option<usize>,
    /// Sample this many protocol runs.
    #[arg(long)]
    pub shots: Option<usize>,
}

fn parse_reveal(s: &str) -> Result<(usize, usize), String> {
    let (q, b) = s
        .split_once('=')
        .ok_or_else(|| format!("expected qubit=bit, got `{s}`"))?;
    let q = q
        .trim()
        .parse()
        .map_err(|e| format!("bad qubit index `{q}`: {e}"))?;
    let b = b
        .trim()
        .parse()
        .map_err(|e| format!("bad outcome `{b}`: {e}"))?;
    Ok((q, b))
}

#[derive(Debug, Args)]
pub struct AlphabetArg {
    /// Alphabet JSON file.
    #[arg(long)]
    pub alphabet: PathBuf,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    #[command(flatten)]
    pub alphabet: AlphabetArg,
    /// Also report block coding with 1..=n copies per letter.
    #[arg(long)]
    pub block: Option<usize>,
    /// Intervals in the boundary sweep.
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Dense,
    Types,
}

#[derive(Debug, Args)]
pub struct TypicalArgs {
    /// Source `diag(1 - p, p)`.
    #[arg(
        long,
        required_unless_present = "alphabet",
        conflicts_with = "alphabet"
    )]
    pub p: Option<f64>,
    /// Use the average state of an alphabet as the source.
    #[arg(long)]
    pub alphabet: Option<PathBuf>,
    /// Block lengths, comma separated.
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub block_lengths: Vec<usize>,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct RefactorArgs {
    #[command(flatten)]
    pub alphabet: AlphabetArg,
    #[arg(long = "L")]
    pub block_length: usize,
    #[arg(long)]
    pub delta: f64,
    /// Build the refactorizing unitary explicitly (L <= 3).
    #[arg(long)]
    pub unitary: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a single criterion.
    #[arg(long)]
    pub criterion: Option<u8>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn reveal_syntax() {
        assert_eq!(parse_reveal("3=1"), Ok((3, 1)));
        assert!(parse_reveal("3").is_err());
        assert!(parse_reveal("a=1").is_err());
    }
}
