//! `flagmotive`: query upper motives of flag varieties from a JSON model document.

mod commands;
mod document;
mod error;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flagmotive::oracles::SweepConfig;

use crate::commands::Outcome;
use crate::document::Document;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "flagmotive", version, about)]
struct Cli {
    /// Model document (JSON); read from stdin when omitted.
    #[arg(long, global = true)]
    model: Option<PathBuf>,

    /// Prime p; overrides the document's "p".
    #[arg(long, global = true)]
    p: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exponent, index and p-primary decomposition of an algebra.
    Index { algebra: String },
    /// Mu profile and index of D over the function field of X(p^k; D').
    Reduce { d: String, k: u32, d_prime: String },
    /// Compare upper motives of two flag varieties given as "d1,d2,...@Name".
    Iso { x: String, y: String },
    /// Upper p-motives of PGL_1(A)-homogeneous varieties.
    Enumerate { algebra: String },
    /// Whether two algebras share all upper p-motives or only the Tate motive.
    Dichotomy { a: String, a_prime: String },
    /// Differential sweep of the criterion against the oracles.
    Check {
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random global models per prime (built-in sweep only).
        #[arg(long, default_value_t = 500)]
        global_models: usize,
    },
}

fn read_document(path: Option<&PathBuf>) -> Result<Document, CliError> {
    let text = match path {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            s
        }
    };
    Document::parse(&text)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Command::Check {
        max_n,
        primes,
        seed,
        global_models,
    } = &cli.command
    {
        let config = SweepConfig {
            primes: primes.clone(),
            max_n: *max_n,
            seed: *seed,
            global_models: *global_models,
            ..SweepConfig::default()
        };
        let doc = cli
            .model
            .as_ref()
            .map(|m| read_document(Some(m)))
            .transpose()?;
        return commands::check_cmd(doc.as_ref(), &config);
    }
    let doc = read_document(cli.model.as_ref())?;
    match &cli.command {
        Command::Index { algebra } => commands::index_cmd(&doc, algebra),
        Command::Reduce { d, k, d_prime } => commands::reduce_cmd(&doc, d, *k, d_prime, cli.p),
        Command::Iso { x, y } => commands::iso_cmd(&doc, x, y, cli.p),
        Command::Enumerate { algebra } => commands::enumerate_cmd(&doc, algebra, cli.p),
        Command::Dichotomy { a, a_prime } => commands::dichotomy_cmd(&doc, a, a_prime, cli.p),
        Command::Check { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let written = serde_json::to_writer_pretty(&mut out, &outcome.document)
                .map_err(std::io::Error::from)
                .and_then(|()| writeln!(out));
            // a closed pipe on stdout is the reader's choice, not an error
            if let Err(e) = written.and_then(|()| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(2);
                }
            }
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("{}", e.report());
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("{}", e.report());
            e.exit_code()
        }
    }
}
