//! `muchnik`: Brouwer algebras, Kripke frames, p-morphisms and splitting
//! constructions from the command line.
//!
//! Exit codes: 0 success or the property holds, 1 checked and fails, 2 usage
//! or input error.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "muchnik", version, about)]
struct Cli {
    /// Machine-readable JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// Frames are `chain:N`, `antichain:N`, `tree:N`, `fork`, `diamond`, or a
/// poset JSON file; algebras are `upsets:<frame>` or an algebra JSON file.
#[derive(Subcommand, Debug)]
enum Command {
    /// List the upsets of a frame.
    Upsets { frame: String },
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    #[command(subcommand)]
    Muchnik(MuchnikCmd),
    /// Decide whether a formula is in the theory of a frame or algebra.
    Check(CheckArgs),
    /// Compare frame and algebra theories of a frame over a formula corpus.
    Theory {
        frame: String,
        /// One formula per line; defaults to the bundled mixed corpus.
        #[arg(long)]
        corpus: Option<String>,
    },
    /// Search binary trees 2^{<1} .. 2^{<n} for a countermodel (JSON on stdout).
    Ipc {
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_height: usize,
    },
    #[command(subcommand)]
    Pmorphism(PmorphismCmd),
    #[command(subcommand)]
    Split(SplitCmd),
    #[command(subcommand)]
    ExportDot(DotCmd),
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Check the Brouwer algebra axioms.
    Verify { algebra: String },
    /// Quotient by the principal filter of an element, compared with its interval.
    Quotient {
        algebra: String,
        /// Carrier label of the generating element.
        #[arg(long)]
        by: String,
    },
    /// Print an algebra as JSON.
    Dump { algebra: String },
}

#[derive(Subcommand, Debug)]
enum MuchnikCmd {
    /// Check that Muchnik degrees over a finite join-semilattice match its upsets.
    IsoCheck { frame: String },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Mode {
    Frame,
    Algebra,
}

#[derive(Args, Debug)]
struct CheckArgs {
    formula: String,
    #[arg(long, conflicts_with = "frame", required_unless_present = "frame")]
    algebra: Option<String>,
    #[arg(long, alias = "poset")]
    frame: Option<String>,
    /// Frame mode forces at points; algebra mode evaluates in the upset algebra.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Subcommand, Debug)]
enum PmorphismCmd {
    /// Verify a p-morphism JSON document (`-` for stdin).
    Verify { file: String },
    /// Find the first p-morphism from one frame onto another.
    Search {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ModelArgs {
    /// Shuffle seed for the enumeration of the synthetic model.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shuffle window; 1 keeps the natural order.
    #[arg(long, default_value_t = 8)]
    window: usize,
}

#[derive(Subcommand, Debug)]
enum SplitCmd {
    /// Sample the split oracle of the synthetic model.
    Verify {
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Build a p-morphism from the synthetic model onto 2^{<height} (JSON on stdout).
    Build {
        #[arg(long)]
        height: usize,
        /// Rounds to run; without it, run until the tree is covered.
        #[arg(long)]
        steps: Option<usize>,
        /// Round limit when running until covered.
        #[arg(long, default_value_t = muchnik_core::splitting::DEFAULT_ROUND_CAP)]
        cap: usize,
        #[command(flatten)]
        model: ModelArgs,
        /// Write the stage trace as line-delimited JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the partial map as JSON.
        #[arg(long)]
        partial_out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum DotCmd {
    /// Hasse diagram of a frame.
    Frame {
        frame: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Source and target of a p-morphism JSON document with mapping edges.
    Pmorphism {
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A countermodel JSON document (or `ipc` output), points labelled with
    /// the atoms they force.
    Countermodel {
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command, cli.json) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
