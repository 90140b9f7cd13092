use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dq_cli::{run, Command, ReportFormat, RunConfig, Streams};
use dq_core::spec_dsl::Severity;

#[derive(Parser)]
#[command(name = "dq", version, about = "Check tabular data against declarative quality specifications")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Measure data files against specs and report error rates.
    Validate(ValidateArgs),
    /// Explore data files and draft a spec from what they contain.
    Profile(ProfileArgs),
    /// Parse and check specs without any data.
    CheckSpec(CheckSpecArgs),
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long = "spec", required = true, value_name = "PATH")]
    specs: Vec<PathBuf>,
    #[arg(long = "data", required = true, value_name = "PATH")]
    data: Vec<PathBuf>,
    /// Pair an object with a data file, overriding its `source` hint.
    #[arg(long = "bind", value_name = "OBJECT=PATH", value_parser = parse_binding)]
    bindings: Vec<(String, PathBuf)>,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
    /// Error protocol destination; `.csv` selects CSV, anything else JSON Lines.
    #[arg(long, value_name = "PATH")]
    out_protocol: Option<PathBuf>,
    /// Report destination; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out_report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Evaluation threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Flag values seen at most this many times in `frequency_min` rules.
    #[arg(long)]
    anomaly_k: Option<u64>,
    /// Lowest severity that makes the run exit with status 1.
    #[arg(long, value_enum, default_value_t = Level::Error)]
    fail_on: Level,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long = "data", required = true, value_name = "PATH")]
    data: Vec<PathBuf>,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
    /// Draft spec destination; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out_spec: Option<PathBuf>,
    /// JSON profile destination.
    #[arg(long, value_name = "PATH")]
    out_report: Option<PathBuf>,
}

#[derive(Args)]
struct CheckSpecArgs {
    #[arg(long = "spec", required = true, value_name = "PATH")]
    specs: Vec<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Error,
    Warning,
    Anomaly,
}

fn parse_binding(text: &str) -> Result<(String, PathBuf), String> {
    match text.split_once('=') {
        Some((object, path)) if !object.is_empty() && !path.is_empty() => {
            Ok((object.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected OBJECT=PATH, got `{text}`")),
    }
}

fn parse_delimiter(text: &str) -> Result<u8, String> {
    match text {
        "\\t" | "tab" => Ok(b'\t'),
        _ if text.len() == 1 && text.is_ascii() => Ok(text.as_bytes()[0]),
        _ => Err(format!("delimiter must be one ASCII character, got `{text}`")),
    }
}

fn config(cli: Cli) -> RunConfig {
    match cli.command {
        Sub::Validate(a) => RunConfig {
            spec_paths: a.specs,
            data_paths: a.data,
            bindings: a.bindings,
            delimiter: a.delimiter,
            out_protocol: a.out_protocol,
            out_report: a.out_report,
            format: match a.format {
                Format::Markdown => ReportFormat::Markdown,
                Format::Csv => ReportFormat::Csv,
                Format::Json => ReportFormat::Json,
            },
            workers: a
                .workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            anomaly_k: a.anomaly_k,
            fail_on: match a.fail_on {
                Level::Error => Severity::Error,
                Level::Warning => Severity::Warning,
                Level::Anomaly => Severity::Anomaly,
            },
            ..RunConfig::new(Command::Validate)
        },
        Sub::Profile(a) => RunConfig {
            data_paths: a.data,
            delimiter: a.delimiter,
            out_spec: a.out_spec,
            out_report: a.out_report,
            ..RunConfig::new(Command::Profile)
        },
        Sub::CheckSpec(a) => RunConfig {
            spec_paths: a.specs,
            ..RunConfig::new(Command::CheckSpec)
        },
    }
}

fn main() -> ExitCode {
    let config = config(Cli::parse());
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = run(&config, &mut Streams { out: &mut out, err: &mut err });
    ExitCode::from(code as u8)
}
