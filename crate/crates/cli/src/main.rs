use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anclab_cli::bench::{run_bench, BenchConfig};
use anclab_cli::checks::{selftest, universal_check};
use anclab_cli::error::{CliError, Result, EXIT_OK, EXIT_USAGE};
use anclab_cli::ingest::ingest_any;
use anclab_cli::labelfile::LabelFile;
use anclab_cli::{label_ingested, render_params};
use anclab_core::decoder::{is_adjacent, is_ancestor, AdjLabel};
use anclab_core::params::{LabelValue, ParamTable};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;

#[derive(Parser)]
#[command(
    name = "anclab",
    version,
    about = "Compact ancestry labels for bounded-depth forests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parameter table of the family F(n, d).
    Params { n: u64, d: u64 },
    /// Label a parent-list or XML file.
    Label {
        input: PathBuf,
        /// Output label file; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Answer a query from two labels and the family header of a label file.
    Query {
        labelfile: PathBuf,
        u: String,
        v: String,
        /// Treat u and v as packed adjacency labels and test for an edge.
        #[arg(long)]
        adjacent: bool,
    },
    /// Compare label sizes and speed with the interval baseline.
    Bench {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check that random forests embed into the universal graph.
    UniversalCheck {
        n: u64,
        d: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = anclab_cli::bench::DEFAULT_SEED)]
        seed: u64,
        /// Write the universal graph as an edge list (tiny families only).
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Exhaustively check all forests up to a size against the oracles.
    Selftest {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn parse_int(what: &str, s: &str) -> Result<BigUint> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("{what} `{s}` is not a non-negative integer")))
}

fn query(params: &ParamTable, u: &str, v: &str, adjacent: bool) -> Result<bool> {
    if adjacent {
        let a = AdjLabel::unpack(params, &parse_int("label", u)?)?;
        let b = AdjLabel::unpack(params, &parse_int("label", v)?)?;
        Ok(is_adjacent(params, &a, &b)?)
    } else {
        let a = LabelValue(parse_int("label", u)?);
        let b = LabelValue(parse_int("label", v)?);
        Ok(is_ancestor(params, &a, &b)?)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Params { n, d } => emit(None, &render_params(&ParamTable::new(n, d)?)),
        Command::Label { input, output } => {
            let file = label_ingested(&ingest_any(&read(&input)?)?)?;
            emit(output.as_deref(), &file.to_text())
        }
        Command::Query {
            labelfile,
            u,
            v,
            adjacent,
        } => {
            let file = LabelFile::parse(&read(&labelfile)?)?;
            let answer = query(&file.params, &u, &v, adjacent)?;
            emit(None, &format!("{answer}\n"))
        }
        Command::Bench {
            config,
            output,
            seed,
        } => {
            let mut cfg = BenchConfig::parse(&read(&config)?)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = run_bench(&cfg)?;
            emit(output.as_deref(), &report.to_csv())?;
            match report.total_mismatches() {
                0 => Ok(()),
                m => Err(CliError::Internal(format!(
                    "{m} oracle mismatches in bench spot checks"
                ))),
            }
        }
        Command::UniversalCheck {
            n,
            d,
            trials,
            seed,
            export,
        } => {
            let mut sink = match &export {
                Some(path) => Some(fs::File::create(path).map_err(|e| CliError::io(path, e))?),
                None => None,
            };
            let report = universal_check(
                n,
                d,
                trials,
                seed,
                sink.as_mut().map(|f| f as &mut dyn Write),
            )?;
            let mut text = format!(
                "trials={} failures={} vertices={}\n",
                report.trials, report.failures, report.vertex_count
            );
            if let Some(edges) = report.exported_edges {
                text.push_str(&format!("exported_edges={edges}\n"));
            }
            emit(None, &text)?;
            match report.failures {
                0 => Ok(()),
                f => Err(CliError::Internal(format!("{f} forests failed to embed"))),
            }
        }
        Command::Selftest { max_n } => {
            let r = selftest(max_n)?;
            let c = r.check;
            emit(
                None,
                &format!(
                    "forests={} pairs={} ancestry_mismatches={} adjacency_mismatches={} baseline_mismatches={}\n",
                    r.forests, c.pairs, c.ancestry_mismatches, c.adjacency_mismatches, c.baseline_mismatches
                ),
            )?;
            match c.mismatches() {
                0 => Ok(()),
                m => Err(CliError::Internal(format!("{m} oracle mismatches"))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("anclab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
