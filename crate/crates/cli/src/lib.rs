//! The `dq` command: spec checking, validation and profiling.
//!
//! Exit codes: 0 clean, 1 findings at or above `fail_on`, 2 spec or
//! binding errors, 3 I/O errors.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use dq_core::dataset_io::{read_csv, CsvOptions, Dataset};
use dq_core::engine::{evaluate_dataset, ErrorProtocol, EvalOptions, Evaluation};
use dq_core::profiler::{generate_draft_spec_with, profile_dataset, DraftOptions};
use dq_core::report::{render_csv_many, render_markdown, report_json, SummaryReport};
use dq_core::spec_dsl::{check_spec_semantics, parse_spec, QualitySpec, Severity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Profile,
    CheckSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub spec_paths: Vec<PathBuf>,
    pub data_paths: Vec<PathBuf>,
    /// Explicit `OBJECT=PATH` pairs; they win over source hints.
    pub bindings: Vec<(String, PathBuf)>,
    pub delimiter: u8,
    pub out_protocol: Option<PathBuf>,
    pub out_report: Option<PathBuf>,
    /// Where `profile` writes the draft spec; standard output otherwise.
    pub out_spec: Option<PathBuf>,
    pub format: ReportFormat,
    pub workers: usize,
    pub anomaly_k: Option<u64>,
    pub fail_on: Severity,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            spec_paths: Vec::new(),
            data_paths: Vec::new(),
            bindings: Vec::new(),
            delimiter: b',',
            out_protocol: None,
            out_report: None,
            out_spec: None,
            format: ReportFormat::Markdown,
            workers: 1,
            anomaly_k: None,
            fail_on: Severity::Error,
        }
    }
}

/// Standard output and standard error, swappable in tests.
pub struct Streams<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

struct Failure(i32);

type Step<T> = Result<T, Failure>;

fn spec_failure(err: &mut dyn Write, message: impl std::fmt::Display) -> Failure {
    let _ = writeln!(err, "error: {message}");
    Failure(EXIT_SPEC)
}

fn io_failure(err: &mut dyn Write, message: impl std::fmt::Display) -> Failure {
    let _ = writeln!(err, "error: {message}");
    Failure(EXIT_IO)
}

pub fn run(config: &RunConfig, streams: &mut Streams<'_>) -> i32 {
    let result = match config.command {
        Command::Validate => validate(config, streams),
        Command::Profile => profile(config, streams),
        Command::CheckSpec => check_specs(config, streams).map(|_| EXIT_OK),
    };
    result.unwrap_or_else(|Failure(code)| code)
}

pub fn run_validate(config: &RunConfig, streams: &mut Streams<'_>) -> i32 {
    validate(config, streams).unwrap_or_else(|Failure(code)| code)
}

pub fn run_profile(config: &RunConfig, streams: &mut Streams<'_>) -> i32 {
    profile(config, streams).unwrap_or_else(|Failure(code)| code)
}

pub fn run_check_spec(config: &RunConfig, streams: &mut Streams<'_>) -> i32 {
    check_specs(config, streams).map_or_else(|Failure(code)| code, |_| EXIT_OK)
}

/// Parses every spec, printing warnings, and rejects object names defined
/// in more than one file.
fn load_specs(config: &RunConfig, err: &mut dyn Write) -> Step<Vec<QualitySpec>> {
    if config.spec_paths.is_empty() {
        return Err(spec_failure(err, "at least one --spec is required"));
    }
    let mut specs = Vec::new();
    let mut seen: HashMap<String, PathBuf> = HashMap::new();
    for path in &config.spec_paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| io_failure(err, format!("cannot read {}: {e}", path.display())))?;
        let spec = parse_spec(&text).map_err(|e| spec_failure(err, format!("{}:{e}", path.display())))?;
        for diag in check_spec_semantics(&spec) {
            let _ = writeln!(err, "{}:{diag}", path.display());
        }
        for object in &spec.objects {
            if let Some(first) = seen.insert(object.name.clone(), path.clone()) {
                return Err(spec_failure(
                    err,
                    format!(
                        "{}:{}: object `{}` is already defined in {}",
                        path.display(),
                        object.span,
                        object.name,
                        first.display()
                    ),
                ));
            }
        }
        specs.push(spec);
    }
    Ok(specs)
}

fn check_specs(config: &RunConfig, streams: &mut Streams<'_>) -> Step<()> {
    let specs = load_specs(config, streams.err)?;
    for (path, spec) in config.spec_paths.iter().zip(&specs) {
        let fields: usize = spec.objects.iter().map(|o| o.fields.len()).sum();
        let _ = writeln!(
            streams.out,
            "{}: ok ({} objects, {} fields)",
            path.display(),
            spec.objects.len(),
            fields
        );
    }
    Ok(())
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Pairs objects with data files: explicit bindings, then source hints,
/// then a single leftover object with a single leftover file.
fn bind<'s>(
    config: &RunConfig,
    specs: &'s [QualitySpec],
    err: &mut dyn Write,
) -> Step<Vec<(&'s dq_core::spec_dsl::DataObjectClass, PathBuf)>> {
    let objects: Vec<_> = specs.iter().flat_map(|s| &s.objects).collect();
    let mut pairs = Vec::new();
    let mut bound_objects: Vec<&str> = Vec::new();
    let mut data: Vec<PathBuf> = config.data_paths.clone();
    for (name, path) in &config.bindings {
        let Some(object) = objects.iter().find(|o| &o.name == name) else {
            return Err(spec_failure(err, format!("--bind names unknown object `{name}`")));
        };
        if bound_objects.contains(&name.as_str()) {
            return Err(spec_failure(err, format!("object `{name}` is bound twice")));
        }
        bound_objects.push(name);
        data.retain(|p| p != path);
        pairs.push((*object, path.clone()));
    }
    let mut unbound = Vec::new();
    for path in data {
        let name = file_name(&path);
        let hinted: Vec<_> = objects
            .iter()
            .filter(|o| !bound_objects.contains(&o.name.as_str()))
            .filter(|o| {
                o.source_hint
                    .as_deref()
                    .is_some_and(|h| h == name || file_name(Path::new(h)) == name)
            })
            .collect();
        match hinted.as_slice() {
            [object] => {
                bound_objects.push(&object.name);
                pairs.push((**object, path));
            }
            [] => unbound.push(path),
            many => {
                let names: Vec<_> = many.iter().map(|o| o.name.as_str()).collect();
                return Err(spec_failure(
                    err,
                    format!("{} matches the source of several objects: {}", path.display(), names.join(", ")),
                ));
            }
        }
    }
    let free: Vec<_> = objects
        .iter()
        .filter(|o| !bound_objects.contains(&o.name.as_str()))
        .collect();
    match (unbound.as_slice(), free.as_slice()) {
        ([], _) => {}
        ([path], [object]) => pairs.push((**object, path.clone())),
        (paths, _) => {
            let names: Vec<_> = paths.iter().map(|p| p.display().to_string()).collect();
            return Err(spec_failure(
                err,
                format!("cannot tell which object describes {}; use --bind OBJECT=PATH", names.join(", ")),
            ));
        }
    }
    if pairs.is_empty() {
        return Err(spec_failure(err, "at least one --data file is required"));
    }
    Ok(pairs)
}

fn load(path: &Path, delimiter: u8, err: &mut dyn Write) -> Step<Dataset> {
    read_csv(
        path,
        &CsvOptions {
            delimiter,
            has_header: true,
        },
    )
    .map_err(|e| io_failure(err, e))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write, err: &mut dyn Write) -> Step<()> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| io_failure(err, format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(err, format!("cannot write to standard output: {e}"))),
    }
}

fn validate(config: &RunConfig, streams: &mut Streams<'_>) -> Step<i32> {
    let specs = load_specs(config, streams.err)?;
    let pairs = bind(config, &specs, streams.err)?;
    let options = EvalOptions {
        workers: config.workers.max(1),
        anomaly_k: config.anomaly_k,
        current_year: None,
    };
    let mut evaluations: Vec<(Evaluation, &QualitySpec)> = Vec::new();
    for (object, path) in &pairs {
        let dataset = load(path, config.delimiter, streams.err)?;
        let evaluation = evaluate_dataset(&dataset, object, &options)
            .map_err(|e| spec_failure(streams.err, format!("{}: {e}", path.display())))?;
        let spec = specs
            .iter()
            .find(|s| s.object(&object.name).is_some())
            .expect("bound objects come from the loaded specs");
        evaluations.push((evaluation, spec));
    }

    if let Some(path) = &config.out_protocol {
        // One protocol after another, in binding order.
        let text = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            protocol_csv(&evaluations)
        } else {
            evaluations.iter().map(|(e, _)| e.protocol.to_jsonl()).collect()
        };
        write_output(Some(path), &text, streams.out, streams.err)?;
    }

    let reports: Vec<SummaryReport> = evaluations
        .iter()
        .map(|(e, _)| SummaryReport::from_evaluation(e))
        .collect();
    let text = match config.format {
        ReportFormat::Markdown => reports
            .iter()
            .zip(&evaluations)
            .map(|(r, (_, spec))| render_markdown(r, spec))
            .collect::<Vec<_>>()
            .join("\n"),
        ReportFormat::Csv => render_csv_many(&reports),
        ReportFormat::Json => {
            let value = match reports.as_slice() {
                [one] => report_json(one),
                many => serde_json::Value::Array(many.iter().map(report_json).collect()),
            };
            let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            text.push('\n');
            text
        }
    };
    write_output(config.out_report.as_deref(), &text, streams.out, streams.err)?;

    let failing = evaluations.iter().any(|(e, _)| e.fails_at(config.fail_on));
    Ok(if failing { EXIT_FINDINGS } else { EXIT_OK })
}

fn protocol_csv(evaluations: &[(Evaluation, &QualitySpec)]) -> String {
    let mut text = String::new();
    for (i, (e, _)) in evaluations.iter().enumerate() {
        let part = e.protocol.to_csv();
        if i == 0 {
            text.push_str(&part);
        } else {
            // Drop the repeated header line.
            text.push_str(part.split_once("\r\n").map_or("", |(_, rest)| rest));
        }
    }
    if evaluations.is_empty() {
        text = ErrorProtocol::default().to_csv();
    }
    text
}

fn profile(config: &RunConfig, streams: &mut Streams<'_>) -> Step<i32> {
    if config.data_paths.is_empty() {
        return Err(spec_failure(streams.err, "at least one --data file is required"));
    }
    let mut drafts = Vec::new();
    let mut profiles_json = Vec::new();
    for path in &config.data_paths {
        let dataset = load(path, config.delimiter, streams.err)?;
        if dataset.record_count() == 0 {
            let _ = writeln!(
                streams.err,
                "warning: {} has no records; every field is drafted as nullable text",
                path.display()
            );
        }
        let profiles = profile_dataset(&dataset);
        let stem = path
            .file_stem()
            .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
        let draft = generate_draft_spec_with(
            &profiles,
            &stem,
            &DraftOptions {
                source_hint: Some(file_name(path)),
                ..DraftOptions::default()
            },
        );
        drafts.push(draft);
        profiles_json.push(serde_json::json!({
            "source": file_name(path),
            "records": dataset.record_count(),
            "fields": profiles,
        }));
    }
    let mut text = String::new();
    for (i, draft) in drafts.iter().enumerate() {
        if i == 0 {
            text.push_str(draft);
        } else {
            // Later drafts contribute only their object block.
            let body = draft.split_once("version 1;\n").map_or(draft.as_str(), |(_, b)| b);
            text.push_str(body);
        }
    }
    write_output(config.out_spec.as_deref(), &text, streams.out, streams.err)?;
    if let Some(path) = &config.out_report {
        let value = match profiles_json.len() {
            1 => profiles_json.remove(0),
            _ => serde_json::Value::Array(profiles_json),
        };
        let mut json = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        json.push('\n');
        write_output(Some(path), &json, streams.out, streams.err)?;
    }
    Ok(EXIT_OK)
}
