//! `gtp`: build complexes, compute bigraded Betti numbers, test Golodness
//! and check closed-form predictions.
//!
//! Exit codes: 0 success or property holds, 1 property violated, 2 invalid
//! input or a bound exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gtp", version, about = "Face rings, moment-angle complexes and generalized truncation polytopes")]
pub struct Cli {
    /// Worker threads; 1 runs sequentially. Defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest ground set accepted by subset-enumeration engines.
    #[arg(long, global = true, default_value_t = gtp_core::hochster::DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    /// Print progress details to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct a complex and write it as JSON.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Transform existing complexes.
    #[command(subcommand)]
    Ops(OpsCommand),
    /// Bigraded Betti numbers of the face ring.
    Betti(BettiArgs),
    /// Ring-level Golodness of the face ring.
    Golod(GolodArgs),
    /// Closed-form topological predictions.
    #[command(subcommand)]
    Predict(PredictCommand),
    /// Check a property; exit 1 when it fails.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand, Debug)]
pub enum BuildCommand {
    /// Dual boundary complex of a generalized truncation polytope (k; n_1, ..., n_r).
    Gtp {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Lex)]
        strategy: StrategyArg,
        /// Seed for the random strategy.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Boundary of the cyclic polytope C(m, n).
    Cyclic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Join of two complexes.
    Join {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OpsCommand {
    /// Stellar subdivision of a facet by a new vertex.
    Stack {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        facet: Vec<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Full subcomplex on all vertices but one.
    Delete {
        file: PathBuf,
        #[arg(long)]
        vertex: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Glue B onto A along a common simplex.
    Glue {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sigma1: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        sigma2: Vec<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct BettiArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = CoeffArg::Rational)]
    pub coeff: CoeffArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Hochster)]
    pub engine: EngineArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    #[command(flatten)]
    pub taylor: TaylorArgs,
}

#[derive(Args, Debug)]
pub struct TaylorArgs {
    /// Taylor basis: the full complex, the Lyubeznik subcomplex, or the
    /// full complex when within the generator bound and Lyubeznik beyond.
    #[arg(long, value_enum, default_value_t = TaylorBasisArg::Auto)]
    pub taylor_basis: TaylorBasisArg,
    #[arg(long, default_value_t = gtp_core::taylor::DEFAULT_MAX_GENERATORS)]
    pub max_generators: usize,
}

#[derive(Args, Debug)]
pub struct GolodArgs {
    pub file: PathBuf,
    /// Also test every single-vertex deletion.
    #[arg(long)]
    pub minimal: bool,
    /// Skip the chordality shortcut and run the full product scan.
    #[arg(long)]
    pub no_prefilter: bool,
}

#[derive(Subcommand, Debug)]
pub enum PredictCommand {
    /// Sphere-product decomposition of the moment-angle manifold of k
    /// truncations of the n-simplex.
    Mcgavran {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Read a connected sum of sphere products off the Betti numbers and
    /// check it against the cup-product structure.
    Spheres { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Closed form against the Hochster engine.
    Formula {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Lex)]
        strategy: StrategyArg,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Bigraded Poincaré duality of the Betti table.
    Duality { file: PathBuf },
    /// Hochster engine against the Taylor complex.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        taylor: TaylorArgs,
    },
    /// Integral homology of every full subcomplex is torsion-free.
    Torsion { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Lex,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    Rational,
    Integer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Hochster,
    Taylor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TaylorBasisArg {
    Auto,
    Full,
    Lyubeznik,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
