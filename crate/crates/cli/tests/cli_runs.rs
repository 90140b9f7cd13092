mod common;

use std::path::{Path, PathBuf};
use std::process::Command as Process;

use common::*;
use dq_cli::{Command, ReportFormat, RunConfig, EXIT_FINDINGS, EXIT_IO, EXIT_OK, EXIT_SPEC};
use dq_core::spec_dsl::{parse_spec, Severity};
use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn markdown(config: RunConfig) -> RunConfig {
    RunConfig {
        format: ReportFormat::Markdown,
        ..config
    }
}

#[test]
fn government_is_report_goes_to_stdout() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "government_is.csv", &government_is_csv());
    let out = run_cli(&markdown(validate_config(&spec_path("government_is.dq"), &data)));
    assert_eq!(out.code, EXIT_FINDINGS, "{}", out.stderr);
    assert!(out.stdout.starts_with("## government_is (245 records)\n"), "{}", out.stdout);
    assert!(out.stdout.contains("| holder_code | "), "{}", out.stdout);
    assert!(out.stdout.contains("25 of 36 columns (69.4%) affected"));
    assert_eq!(out.stderr, "");
}

#[test]
fn clean_data_exits_zero_until_warnings_count() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "licences.csv", &licences_csv(40, 0));
    let config = validate_config(&spec_path("licences.dq"), &data);
    let out = run_cli(&config);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    let rule = &report["collection_rules"][0];
    assert_eq!(rule["rule"], "hours_mostly_empty");
    assert_eq!(rule["passed"], false);
    assert_eq!(rule["metric_value"], 100.0);

    let strict = RunConfig {
        fail_on: Severity::Warning,
        ..config
    };
    assert_eq!(run_cli(&strict).code, EXIT_FINDINGS);

    let filled = write(dir.path(), "licences.csv", &licences_csv(40, 4));
    let out = run_cli(&RunConfig {
        data_paths: vec![filled],
        ..strict
    });
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
}

#[test]
fn rare_topic_groups_are_anomalies() {
    let dir = TempDir::new().unwrap();
    let groups = [("Būvniecība", 40), ("Izglītība", 25), ("Sports", 4), ("Kultūra", 3), ("Tūrisms", 1)];
    let data = write(dir.path(), "communication.csv", &communication_csv(&groups, 0));
    let protocol = dir.path().join("protocol.csv");
    let config = RunConfig {
        out_protocol: Some(protocol.clone()),
        ..validate_config(&spec_path("communication.dq"), &data)
    };
    let out = run_cli(&config);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    let anomalies: Vec<(String, u64)> = report["anomalies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a["value"].as_str().unwrap().to_string(), a["count"].as_u64().unwrap()))
        .collect();
    assert_eq!(anomalies, vec![("Tūrisms".to_string(), 1), ("Kultūra".to_string(), 3)]);

    let csv = std::fs::read_to_string(&protocol).unwrap();
    let mut lines = csv.split("\r\n").filter(|l| !l.is_empty());
    assert_eq!(lines.next(), Some("object,row,field,rule,severity,value,message"));
    assert_eq!(lines.count(), 4);

    let strict = RunConfig {
        fail_on: Severity::Anomaly,
        ..config
    };
    assert_eq!(run_cli(&strict).code, EXIT_FINDINGS);
}

#[test]
fn undocumented_channels_are_errors() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "communication.csv", &communication_csv(&[("Sports", 20)], 3));
    let out = run_cli(&validate_config(&spec_path("communication.dq"), &data));
    assert_eq!(out.code, EXIT_FINDINGS);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    let channel = report["fields"].as_array().unwrap().iter().find(|f| f["field"] == "channel").unwrap();
    assert_eq!(channel["records_with_error"], 3);
    assert_eq!(channel["error_rate"]["display"], "15.00");
}

#[test]
fn broken_spec_exits_two_and_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let spec = write(dir.path(), "bad.dq", "object o {\n  field a: text {\n    digits(b, 3);\n  }\n}\n");
    let data = write(dir.path(), "o.csv", "a\n1\n");
    let report = dir.path().join("report.md");
    let protocol = dir.path().join("protocol.jsonl");
    let out = run_cli(&RunConfig {
        out_report: Some(report.clone()),
        out_protocol: Some(protocol.clone()),
        ..validate_config(&spec, &data)
    });
    assert_eq!(out.code, EXIT_SPEC);
    assert!(out.stderr.starts_with("error: "), "{}", out.stderr);
    assert!(out.stderr.contains("bad.dq:3:12"), "{}", out.stderr);
    assert!(!report.exists() && !protocol.exists());
    assert_eq!(out.stdout, "");
}

#[test]
fn unreadable_inputs_exit_three() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("licences.csv");
    let out = run_cli(&validate_config(&spec_path("licences.dq"), &missing));
    assert_eq!(out.code, EXIT_IO, "{}", out.stderr);

    let data = write(dir.path(), "licences.csv", &licences_csv(3, 0));
    let out = run_cli(&validate_config(&dir.path().join("none.dq"), &data));
    assert_eq!(out.code, EXIT_IO);

    let ragged = write(dir.path(), "licences.csv", "requester,reg_number\nx\n");
    let out = run_cli(&validate_config(&spec_path("licences.dq"), &ragged));
    assert_eq!(out.code, EXIT_IO, "{}", out.stderr);
}

#[test]
fn missing_column_is_a_spec_problem() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "licences.csv", "requester,reg_number\nx,40008000001\n");
    let out = run_cli(&validate_config(&spec_path("licences.dq"), &data));
    assert_eq!(out.code, EXIT_SPEC);
    assert!(out.stderr.contains("program"), "{}", out.stderr);
}

#[test]
fn objects_bind_by_source_hint_and_explicit_pairs() {
    let dir = TempDir::new().unwrap();
    let licences = write(dir.path(), "licences.csv", &licences_csv(5, 5));
    let comms = write(dir.path(), "communication.csv", &communication_csv(&[("Sports", 5)], 0));
    let both = RunConfig {
        spec_paths: vec![spec_path("licences.dq"), spec_path("communication.dq")],
        data_paths: vec![comms.clone(), licences.clone()],
        format: ReportFormat::Json,
        ..RunConfig::new(Command::Validate)
    };
    let out = run_cli(&both);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let reports: Value = serde_json::from_str(&out.stdout).unwrap();
    let objects: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["object"].as_str().unwrap()).collect();
    assert_eq!(objects, ["communication", "licence"]);

    // Renamed files need explicit pairs.
    let renamed = write(dir.path(), "2019.csv", &licences_csv(5, 5));
    let other = write(dir.path(), "2020.csv", &communication_csv(&[("Sports", 5)], 0));
    let unbound = RunConfig {
        data_paths: vec![renamed.clone(), other.clone()],
        ..both.clone()
    };
    let out = run_cli(&unbound);
    assert_eq!(out.code, EXIT_SPEC);
    assert!(out.stderr.contains("--bind"), "{}", out.stderr);

    let bound = RunConfig {
        bindings: vec![("licence".into(), renamed.clone())],
        ..unbound
    };
    assert_eq!(run_cli(&bound).code, EXIT_OK);

    let unknown = RunConfig {
        bindings: vec![("nothing".into(), renamed)],
        ..both
    };
    assert_eq!(run_cli(&unknown).code, EXIT_SPEC);
}

#[test]
fn single_object_takes_any_file_name() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "licences_2018.csv", &licences_csv(5, 5));
    let out = run_cli(&validate_config(&spec_path("licences.dq"), &data));
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
}

#[test]
fn check_spec_reports_counts_and_duplicates() {
    let config = RunConfig {
        spec_paths: vec![spec_path("register_lv.dq"), spec_path("government_is.dq")],
        ..RunConfig::new(Command::CheckSpec)
    };
    let out = run_cli(&config);
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert!(lines[0].ends_with("register_lv.dq: ok (1 objects, 22 fields)"), "{}", out.stdout);
    assert!(lines[1].ends_with("government_is.dq: ok (1 objects, 36 fields)"));

    let twice = RunConfig {
        spec_paths: vec![spec_path("licences.dq"), spec_path("licences.dq")],
        ..RunConfig::new(Command::CheckSpec)
    };
    let out = run_cli(&twice);
    assert_eq!(out.code, EXIT_SPEC);
    assert!(out.stderr.contains("already defined"), "{}", out.stderr);
}

#[test]
fn check_spec_prints_warnings_without_failing() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        dir.path(),
        "w.dq",
        "object o { field a: text nullable; field b: text nullable; rule r: a == b; }",
    );
    let out = run_cli(&RunConfig {
        spec_paths: vec![spec],
        ..RunConfig::new(Command::CheckSpec)
    });
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stderr.contains("warning"), "{}", out.stderr);
}

#[test]
fn profile_drafts_a_spec_that_validates() {
    let dir = TempDir::new().unwrap();
    let groups = [("Būvniecība", 40), ("Izglītība", 25), ("Sports", 4), ("Kultūra", 3)];
    let data = write(dir.path(), "communication.csv", &communication_csv(&groups, 0));
    let draft = dir.path().join("draft.dq");
    let profile = dir.path().join("profile.json");
    let out = run_cli(&RunConfig {
        data_paths: vec![data.clone()],
        out_spec: Some(draft.clone()),
        out_report: Some(profile.clone()),
        ..RunConfig::new(Command::Profile)
    });
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = std::fs::read_to_string(&draft).unwrap();
    let spec = parse_spec(&text).unwrap();
    assert_eq!(spec.objects[0].source_hint.as_deref(), Some("communication.csv"));
    assert_eq!(spec.objects[0].fields.len(), 8);

    let json: Value = serde_json::from_str(&std::fs::read_to_string(&profile).unwrap()).unwrap();
    assert_eq!(json["records"], 72);
    assert_eq!(json["fields"][0]["field_name"], "id");

    // Values too rare to enter a drafted set are what validation flags.
    let out = run_cli(&validate_config(&draft, &data));
    assert_eq!(out.code, EXIT_FINDINGS, "{}", out.stderr);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    let flagged: Vec<(&str, u64)> = report["fields"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["records_with_error"] != 0)
        .map(|f| (f["field"].as_str().unwrap(), f["records_with_error"].as_u64().unwrap()))
        .collect();
    assert_eq!(flagged, [("topic_group", 3), ("topic", 4 + 3)], "{text}");
}

#[test]
fn profile_warns_on_empty_file() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "empty.csv", "a,b\n");
    let out = run_cli(&RunConfig {
        data_paths: vec![data],
        ..RunConfig::new(Command::Profile)
    });
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stderr.contains("no records"), "{}", out.stderr);
    let spec = parse_spec(&out.stdout).unwrap();
    assert_eq!(spec.objects[0].fields.len(), 2);
}

#[test]
fn binary_honours_delimiter_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let tsv = licences_csv(5, 5).replace(',', "\t");
    let data = write(dir.path(), "licences.tsv", &tsv);
    let run = |extra: &[&str]| {
        Process::new(env!("CARGO_BIN_EXE_dq"))
            .arg("validate")
            .arg("--spec")
            .arg(spec_path("licences.dq"))
            .arg("--data")
            .arg(&data)
            .args(extra)
            .output()
            .unwrap()
    };
    let ok = run(&["--delimiter", "tab", "--format", "csv"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let stdout = String::from_utf8(ok.stdout).unwrap();
    assert!(stdout.starts_with("field,requirement,"), "{stdout}");

    // Read as commas, every row is one unparseable column.
    let wrong = run(&[]);
    assert_eq!(wrong.status.code(), Some(EXIT_SPEC));

    let usage = run(&["--fail-on", "sometimes"]);
    assert_eq!(usage.status.code(), Some(2));
}
