//! Command-line driver for the learncomp experiments.

mod commands;
mod config;
mod payload;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Version tag embedded in every report.
pub const REPORT_FORMAT: &str = "learncomp-report/1";

#[derive(Debug, Parser, Serialize)]
#[command(name = "learncomp", version, about = "Predictors, compressors and sample complexity on toy program spaces")]
pub struct Cli {
    /// `key = value` file supplying defaults for any flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub report: Option<PathBuf>,

    /// Include wall-clock time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Compress a string with the predictor-based compressor.
    Compress(commands::CompressArgs),
    /// Invert `compress`.
    Decompress(commands::DecompressArgs),
    /// Branch and length statistics over all (or sampled) strings of one length.
    Stats(commands::StatsArgs),
    /// δ_n curve and minimal sample size for one target and distribution.
    SampleComplexity(commands::SampleComplexityArgs),
    /// VC dimension of the class of targets with l(η) <= k.
    Vc(commands::VcArgs),
    /// Simple strings a compressor does not shorten.
    Lemma1(commands::Lemma1Args),
    /// Toy complexity of a string or program length of a target.
    Complexity(commands::ComplexityArgs),
    /// List programs in canonical order.
    Enumerate(commands::EnumerateArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Compress(_) => "compress",
            Command::Decompress(_) => "decompress",
            Command::Stats(_) => "stats",
            Command::SampleComplexity(_) => "sample-complexity",
            Command::Vc(_) => "vc",
            Command::Lemma1(_) => "lemma1",
            Command::Complexity(_) => "complexity",
            Command::Enumerate(_) => "enumerate",
        }
    }
}

/// Rows for CSV output.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Outcome {
    pub result: serde_json::Value,
    pub table: Option<Table>,
}

#[derive(Serialize)]
struct Report<'a> {
    format: &'static str,
    command: &'static str,
    config: &'a Cli,
    result: &'a serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<u128>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn render(cli: &Cli, outcome: &Outcome, elapsed: Option<u128>) -> anyhow::Result<String> {
    Ok(match cli.format {
        Format::Json => {
            let report = Report {
                format: REPORT_FORMAT,
                command: cli.command.name(),
                config: cli,
                result: &outcome.result,
                wall_time_ms: elapsed,
            };
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => {
            let mut out = format!("# {REPORT_FORMAT} {}\n", cli.command.name());
            out += &format!("# config {}\n", serde_json::to_string(cli)?);
            if let Some(ms) = elapsed {
                out += &format!("# wall_time_ms {ms}\n");
            }
            let fallback;
            let table = match &outcome.table {
                Some(t) => t,
                None => {
                    fallback = key_value_table(&outcome.result);
                    &fallback
                }
            };
            out += &table.header.join(",");
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
                out += &cells.join(",");
                out.push('\n');
            }
            out
        }
    })
}

fn key_value_table(v: &serde_json::Value) -> Table {
    let rows = match v {
        serde_json::Value::Object(map) => map
            .iter()
            .map(|(k, v)| {
                let cell = match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                vec![k.clone(), cell]
            })
            .collect(),
        other => vec![vec!["value".into(), other.to_string()]],
    };
    Table { header: vec!["key", "value"], rows }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<learncomp::Error>() {
            return match e {
                learncomp::Error::CapExceeded { .. } => 3,
                learncomp::Error::Parse(_) | learncomp::Error::UnknownName { .. } => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<commands::UsageError>().is_some() {
            return 2;
        }
    }
    1
}

fn run(args: Vec<OsString>) -> Result<(), (u8, String)> {
    let args = config::merge(args).map_err(|e| (2, format!("{e:#}")))?;
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let code = if e.use_stderr() { 2 } else { 0 };
        (code, e.render().to_string())
    })?;
    let start = Instant::now();
    let outcome = commands::execute(&cli.command).map_err(|e| (exit_code(&e), format!("error: {e:#}")))?;
    let elapsed = cli.timing.then(|| start.elapsed().as_millis());
    let text = render(&cli, &outcome, elapsed).map_err(|e| (1, format!("error: {e:#}")))?;
    match &cli.report {
        Some(path) => std::fs::write(path, text).map_err(|e| (1, format!("error: writing {}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| (1, format!("error: {e}"))),
    }
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((0, msg)) => {
            print!("{msg}");
            ExitCode::SUCCESS
        }
        Err((code, msg)) => {
            eprintln!("{}", msg.trim_end());
            ExitCode::from(code)
        }
    }
}
