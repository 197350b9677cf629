use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpl_core::{eta_opt_equatorial, AxisFamily};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Debug, Parser)]
#[command(name = "qpl", version, about = "Joint measurability, chained correlation inequalities and linear steering for noisy qubit measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounds on η for orthogonal and trine axis sets.
    Table1 {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Threshold η_opt(N) for N equatorial axes.
    Table2 {
        /// Comma-separated N values; defaults to the reference list.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classical, quantum and attenuated values of the chained inequality.
    Table3 {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Add a sampled column at η_opt(N).
        #[arg(long)]
        montecarlo: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One chained inequality evaluated on sequential-measurement correlations.
    Chained {
        /// Which inequality, 1 to 4.
        #[arg(long)]
        which: u8,
        #[arg(long)]
        n: usize,
        /// Unsharpness in [0, 1], or `opt` for η_opt(N).
        #[arg(long)]
        eta: EtaArg,
        #[arg(long)]
        montecarlo: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample ⟨X_k^(η) X_{k+l}⟩ for a noisy then sharp measurement.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        eta: EtaArg,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// N-setting linear steering functional on a two-qubit state.
    Steering {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta: EtaArg,
        #[arg(long, value_enum, default_value_t = StateArg::Bell)]
        state: StateArg,
        #[arg(long)]
        montecarlo: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Single-qubit sequential analogue of the steering functional.
    LocalSteering {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta: EtaArg,
        #[arg(long)]
        montecarlo: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a parent POVM file against a noisy axis set.
    VerifyGlobal {
        /// JSON list of {a, c0, cx, cy, cz}.
        #[arg(long)]
        file: PathBuf,
        /// `equatorial:N`, `orthogonal:N` or `trine:N`.
        #[arg(long)]
        axes: AxisFamily,
        #[arg(long)]
        eta: EtaArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the symmetric parent POVM for an axis set.
    BuildGlobal {
        #[arg(long)]
        axes: AxisFamily,
        #[arg(long)]
        eta: EtaArg,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Table1 { .. } => "table1",
            Command::Table2 { .. } => "table2",
            Command::Table3 { .. } => "table3",
            Command::Chained { .. } => "chained",
            Command::Simulate { .. } => "simulate",
            Command::Steering { .. } => "steering",
            Command::LocalSteering { .. } => "local-steering",
            Command::VerifyGlobal { .. } => "verify-global",
            Command::BuildGlobal { .. } => "build-global",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Table1 { output }
            | Command::Table2 { output, .. }
            | Command::Table3 { output, .. }
            | Command::Chained { output, .. }
            | Command::Simulate { output, .. }
            | Command::Steering { output, .. }
            | Command::LocalSteering { output, .. }
            | Command::VerifyGlobal { output, .. }
            | Command::BuildGlobal { output, .. } => output,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record the wall-clock time in the report header.
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = qpl_core::seqsim::DEFAULT_SHOTS)]
    pub shots: usize,
    /// Decimal or 0x-prefixed hex.
    #[arg(long, env = "QPL_SEED", default_value = "0xC0FFEE", value_parser = parse_seed)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Bell,
    Mixed,
}

/// A fixed unsharpness or the equatorial threshold for the given N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaArg {
    Value(f64),
    Opt,
}

impl EtaArg {
    pub fn resolve(self, n: usize) -> qpl_core::Result<f64> {
        match self {
            EtaArg::Value(v) => Ok(v),
            EtaArg::Opt => eta_opt_equatorial(n),
        }
    }
}

impl FromStr for EtaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("opt") {
            return Ok(EtaArg::Opt);
        }
        let v: f64 = s.parse().map_err(|_| format!("expected a number or `opt`, got {s:?}"))?;
        if !v.is_finite() {
            return Err(format!("eta must be finite, got {s:?}"));
        }
        Ok(EtaArg::Value(v))
    }
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}
