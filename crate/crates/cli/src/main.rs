mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser)]
#[command(name = "uniclass", version, about = "Canonical filtrations and pieces of unipotent elements in finite orthogonal groups")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output format (default: json with --out, text otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest group, orbit or enumeration to attempt.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    guard: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical filtration and labels of one unipotent element.
    Classify {
        #[arg(long)]
        space: String,
        #[arg(long)]
        q: u32,
        /// Matrix file: header `rows cols q`, then row-major entries.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Enumerate the unipotent elements and compare piece sizes with the formulas.
    Pieces {
        #[arg(long)]
        space: String,
        #[arg(long)]
        q: u32,
        /// Also split each piece into conjugacy classes.
        #[arg(long)]
        orbits: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        dmax: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        qlist: Vec<u32>,
        /// Corrupt one formula or construction step; the suite should then fail.
        #[arg(long, value_enum)]
        mutation: Option<Mutation>,
    },
    /// Admissible labels of a space with their predicted piece polynomials.
    Labels {
        #[arg(long)]
        space: String,
        #[arg(long)]
        q: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem17,
    Counts,
    Invariants,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mutation {
    /// P_(s/2−k) in place of P_(s−k) when counting odd subspaces.
    LiteralTMinusK,
    /// The λ = 0 index window for every reduction step.
    DropLambdaShift,
}

/// Exit status: 0 pass, 1 verification mismatch, 2 usage or input error.
pub enum Verdict {
    Pass,
    Mismatch,
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    let format = cli.format.unwrap_or(if cli.out.is_some() { Format::Json } else { Format::Text });
    let sink = output::Sink { format, out: cli.out };
    match cli.command {
        Command::Classify { space, q, matrix } => commands::classify(&sink, &space, q, &matrix),
        Command::Pieces { space, q, orbits } => commands::pieces(&sink, &space, q, orbits, cli.guard),
        Command::Verify { suite, dmax, qlist, mutation } => commands::verify(&sink, suite, dmax, &qlist, mutation, cli.guard),
        Command::Labels { space, q } => commands::labels(&sink, &space, q),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
