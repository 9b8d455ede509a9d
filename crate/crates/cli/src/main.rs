//! `trilat`: predict, enumerate and transform color maps on `T_n`.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

/// Exit status for a property that was checked and found false.
const FALSIFIED: u8 = 1;
/// Exit status for malformed input or flags.
const USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "trilat",
    version,
    about = "Color maps on the triangular lattice T_n"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for enumeration sweeps (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predict label-7 and soft-crossing counts from three 012 strings.
    Predict { u: String, v: String, w: String },
    /// Enumerate every color map with a given boundary.
    Enumerate {
        #[command(flatten)]
        boundary: BoundaryArgs,
        /// Directory receiving one map file per enumerated map.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include every map in the report.
        #[arg(long)]
        maps: bool,
    },
    /// Check the count formulas on every boundary up to size N.
    Verify {
        /// Largest lattice size to sweep.
        #[arg(long)]
        n: usize,
        /// Refuse sizes above this bound.
        #[arg(long, default_value_t = 5)]
        guard: usize,
        /// Corrupt one enumerated map before checking it (negative control).
        #[arg(long)]
        inject_fault: bool,
    },
    /// Reduce a map with G2 = 0 to its column form and extract its paths.
    Reduce {
        map: PathBuf,
        /// Print every applied move.
        #[arg(long)]
        trace: bool,
        /// Write the resulting map here instead of into the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower G2 by one through gash propagation.
    Decrement {
        map: PathBuf,
        /// Print every propagation step.
        #[arg(long)]
        trace: bool,
        /// Write the resulting map here instead of into the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Determinant count of reduced maps for a side-1 string.
    Lgv {
        side1: String,
        /// Compare against exhaustive enumeration.
        #[arg(long)]
        check: bool,
        /// Refuse enumeration above this size.
        #[arg(long, default_value_t = 5)]
        guard: usize,
    },
    /// Draw a map file as SVG.
    Render {
        map: PathBuf,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Corner where the clockwise reading of `--boundary` starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Corner {
    BottomLeft,
    Apex,
    BottomRight,
}

#[derive(Args, Debug)]
pub struct BoundaryArgs {
    /// Three 0/1 strings separated by commas.
    ///
    /// Each string reads its side in increasing height: side 0 (bottom) east
    /// to west, side 1 (right) from the apex down, side 2 (left) upward.
    /// Without --clockwise-from the strings are sides 0, 1, 2 in that order.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    boundary: Vec<String>,
    /// Treat --boundary as the clockwise reading of the boundary starting at
    /// this corner: bottom-left gives sides 2,1,0; apex gives 1,0,2;
    /// bottom-right gives 0,2,1.
    #[arg(long, value_enum)]
    clockwise_from: Option<Corner>,
    /// Expected lattice size; checked against the string lengths.
    #[arg(long)]
    n: Option<usize>,
}

/// A failed command and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Falsified(String),
}

impl From<trilat_core::Error> for Failure {
    fn from(e: trilat_core::Error) -> Self {
        use trilat_core::Error::*;
        match e {
            Internal(_) | Overflow(_) => Failure::Falsified(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    }
    match commands::run(cli.command, cli.format) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Falsified(msg)) => {
            eprintln!("falsified: {msg}");
            ExitCode::from(FALSIFIED)
        }
    }
}
