mod commands;
mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eaqldpc::eaqecc::Orientation;
use eaqldpc::simulator::ChannelReading;

use crate::source::SourceArgs;

#[derive(Parser, Debug)]
#[command(name = "eaqldpc", version, about = "Entanglement-assisted quantum LDPC codes from designs and geometries")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for output files and the run manifest; stdout when absent.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build, check and transform designs.
    #[command(subcommand)]
    Design(DesignCmd),
    /// Parameters, distance and matrix export of the code of a design.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Recompute a published table and diff it against the printed values.
    Tables(TablesArgs),
    /// Monte Carlo block error rate under the depolarizing channel.
    Sim(SimArgs),
}

#[derive(Subcommand, Debug)]
pub enum DesignCmd {
    /// Construct a design and write it in the design file format.
    Build {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Check that a design file is a Steiner 2-design.
    Verify {
        file: PathBuf,
        /// Block size to check against (default: the file's block size).
        #[arg(long)]
        mu: Option<usize>,
    },
    /// Develop base blocks cyclically modulo v.
    Develop {
        #[arg(long)]
        v: usize,
        /// Comma-separated base block; repeat for several.
        #[arg(long = "bases", value_name = "BLOCK", required = true)]
        bases: Vec<String>,
    },
    /// Delete spread parts from a geometry's line design.
    Delete {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of spread parts to delete.
        #[arg(long, default_value_t = 1)]
        parts: usize,
    },
}

#[derive(Args, Debug)]
pub struct CodeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// I: block-by-point matrix, II: point-by-block matrix.
    #[arg(long = "type", default_value = "II", value_parser = parse_orientation)]
    pub orientation: Orientation,
}

#[derive(Subcommand, Debug)]
pub enum CodeCmd {
    /// One CSV row of code parameters.
    Params {
        #[command(flatten)]
        code: CodeArgs,
        /// Skip the distance computation.
        #[arg(long)]
        no_distance: bool,
    },
    /// Minimum distance with its evidence.
    Distance {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Parity-check matrix in alist format.
    ExportAlist {
        #[command(flatten)]
        code: CodeArgs,
    },
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    /// Table id (I..XIII or 1..13), or "all".
    pub table: String,
    /// Check distances against theorems only.
    #[arg(long)]
    pub no_distance: bool,
    /// Exit 0 when the only deviations are known misprints in the source tables.
    #[arg(long)]
    pub accept_errata: bool,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    /// Code to simulate (default: PG(3,2) Type II).
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long = "type", value_parser = parse_orientation)]
    pub orientation: Option<Orientation>,
    /// Channel parameters, comma-separated.
    #[arg(long = "fm", value_delimiter = ',', required = true)]
    pub f_m: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// depolarizing (each Pauli f_m/3) or per-pauli (each Pauli f_m).
    #[arg(long, default_value_t = ChannelReading::Depolarizing)]
    pub channel: ChannelReading,
    #[arg(long, default_value_t = eaqldpc::decoder::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Prior fed to both decoders instead of the component flip probability.
    #[arg(long)]
    pub prior: Option<f64>,
    /// Count only exact recovery as success.
    #[arg(long)]
    pub exact_recovery: bool,
}

fn parse_orientation(s: &str) -> Result<Orientation, String> {
    s.parse().map_err(|e: eaqldpc::eaqecc::EaqeccError| e.to_string())
}

/// Why a command stopped: bad input (exit 2) or a failed check (exit 1).
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
}

pub fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
