//! Command-line front end: certify spheres, dump parametrizations, verify
//! shipped certificates, and batch-run directories.
//!
//! Exit codes: 0 success / certificate found, 1 no certificate in the pool,
//! 2 invalid input, 3 internal invariant failure, 4 time limit.

mod batch;
mod render;
mod run;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "spherecert", version, about = "Non-realizability certificates for abstract polytopal spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
pub struct OverrideArgs {
    /// Flag of facets, 1-based indices: --flag 2,3,4,5
    #[arg(long, value_delimiter = ',')]
    flag: Option<Vec<usize>>,

    /// Facet basis override, repeatable: --basis 3:1,2,5
    #[arg(long = "basis", action = clap::ArgAction::Append)]
    bases: Vec<String>,

    /// Facet orientation override, repeatable: --orientation 3:+1
    #[arg(long = "orientation", action = clap::ArgAction::Append)]
    orientations: Vec<String>,
}

#[derive(Args, Clone)]
pub struct HeuristicArgs {
    /// Drop rows of these vertices and columns of facets meeting them
    #[arg(long, value_delimiter = ',')]
    avoid: Vec<usize>,

    /// Keep only entries whose vertex/facet union covers these vertices
    #[arg(long, value_delimiter = ',')]
    fix: Vec<usize>,

    /// Strip positive monomial content from each pool entry
    #[arg(long)]
    monomial_simplify: bool,

    /// Add a column per alternative basis of non-simplicial flag facets
    #[arg(long)]
    redundant_bases: bool,
}

#[derive(Args, Clone)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Wall-clock limit in seconds for the heavy stages
    #[arg(long, default_value_t = 3600)]
    time_limit: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a positive-combination certificate of non-realizability
    Certify {
        input: std::path::PathBuf,
        #[arg(short, default_value_t = 2)]
        k: usize,
        #[arg(short, default_value_t = 3)]
        l: usize,
        #[command(flatten)]
        overrides: OverrideArgs,
        #[command(flatten)]
        heuristics: HeuristicArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Trials for the final-polynomial minor check
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Print the reduced and reconstructed matrices before searching
        #[arg(long)]
        dump_matrices: bool,
        /// Print the linearization triplets to stderr before solving
        #[arg(long)]
        dump_lp: bool,
        /// Write the certificate JSON here (defaults to stdout inclusion only)
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },

    /// Build and print the reduced and reconstructed slack matrices
    Parametrize {
        input: std::path::PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Also add redundant columns for non-simplicial flag facets
        #[arg(long)]
        redundant_bases: bool,
    },

    /// Infer and report the column orientation signs
    Orient {
        input: std::path::PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
        #[command(flatten)]
        common: CommonArgs,
    },

    /// Re-verify a certificate file against a sphere file
    Verify {
        certificate: std::path::PathBuf,
        #[arg(long)]
        against: std::path::PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },

    /// Check a certificate's final polynomial on random exact matrices
    CheckFinal {
        certificate: std::path::PathBuf,
        #[arg(long)]
        against: std::path::PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        common: CommonArgs,
    },

    /// Run every sphere file in a directory against a (k,l,heuristics) grid
    Batch {
        dir: std::path::PathBuf,
        /// Semicolon-separated cells: "1,2;2,2,ms;2,3,a=2|4|7,rb"
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    if let Ok(n) = std::env::var("SPHERECERT_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Certify {
            input,
            k,
            l,
            overrides,
            heuristics,
            common,
            trials,
            dump_matrices,
            dump_lp,
            output,
        } => run::certify(
            &input,
            k,
            l,
            &overrides,
            &heuristics,
            &common,
            trials,
            dump_matrices,
            dump_lp,
            output.as_deref(),
        ),
        Command::Parametrize {
            input,
            overrides,
            common,
            redundant_bases,
        } => run::parametrize(&input, &overrides, &common, redundant_bases),
        Command::Orient {
            input,
            overrides,
            common,
        } => run::orient(&input, &overrides, &common),
        Command::Verify {
            certificate,
            against,
            common,
        } => run::verify(&certificate, &against, &common),
        Command::CheckFinal {
            certificate,
            against,
            trials,
            common,
        } => run::check_final(&certificate, &against, trials, &common),
        Command::Batch { dir, grid, common } => batch::run(&dir, &grid, &common),
    };
    std::process::exit(code);
}

/// Maps library errors onto the exit-code contract.
pub fn exit_code_for(err: &spherecert::Error) -> i32 {
    use spherecert::Error::*;
    match err {
        TimeLimit => 4,
        Internal(_) | CertificateInvalid(_) => 3,
        _ => 2,
    }
}
