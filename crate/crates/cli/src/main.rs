use std::path::PathBuf;
use std::process::ExitCode;

use algmatch::field::DEFAULT_PRIME;
use algmatch_cli::bench::{run_bench, to_csv, Family};
use algmatch_cli::commands::{cmd_bpm, cmd_intersect, cmd_match, Algorithm, Options};
use algmatch_cli::{CliError, RunReport};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "algmatch", version, about = "Algebraic matching, path-matching and matroid intersection")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Prime for graph inputs and benchmarks.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Parts per recursion level of the path-matching solver (even, >= 4).
    #[arg(long, global = true, default_value_t = 4)]
    alpha: usize,
    /// Use schoolbook matrix multiplication everywhere.
    #[arg(long, global = true)]
    naive_mul: bool,
    /// Re-check results independently (default).
    #[arg(long, global = true, overrides_with = "no_verify")]
    verify: bool,
    /// Skip the independent re-check; solver-side verification still runs.
    #[arg(long, global = true)]
    no_verify: bool,
    #[arg(long, global = true)]
    json: bool,
    /// Compare against the exhaustive reference solver when the input is small.
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true, default_value_t = 3)]
    retries: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum matching of a graph file.
    Match { graph: PathBuf },
    /// Maximum common independent set of two matroid files.
    Intersect {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Alg2)]
        algorithm: Algorithm,
    },
    /// Basic path-matching of an instance file.
    Bpm {
        instance: PathBuf,
        /// Only decide existence.
        #[arg(long)]
        exists_only: bool,
    },
    /// Field-multiplication counts on generated instances, as CSV.
    Bench {
        #[arg(value_enum)]
        family: Family,
        /// Comma-separated instance sizes.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        sizes: Vec<usize>,
        /// Matroid rank for the intersection families.
        #[arg(long, default_value_t = 16)]
        r: usize,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        seed: cli.seed,
        prime: cli.prime,
        alpha: cli.alpha,
        naive_mul: cli.naive_mul,
        verify: !cli.no_verify,
        oracle: cli.oracle,
        retries: cli.retries,
    };
    let result = match &cli.command {
        Command::Match { graph } => read(graph).and_then(|t| cmd_match(&t, &opts)),
        Command::Intersect { first, second, algorithm } => {
            read(first).and_then(|a| read(second).and_then(|b| cmd_intersect(&a, &b, *algorithm, &opts)))
        }
        Command::Bpm { instance, exists_only } => read(instance).and_then(|t| cmd_bpm(&t, *exists_only, &opts)),
        Command::Bench { family, sizes, r } => match run_bench(*family, sizes, *r, &opts) {
            Ok(rows) => {
                print!("{}", to_csv(&rows));
                return ExitCode::SUCCESS;
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(report) => {
            emit(&report, cli.json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(report) = e.report() {
                emit(report, cli.json);
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
