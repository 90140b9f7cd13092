//! Summary tables in Markdown, CSV and JSON.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::engine::{
    AffectedColumns, Anomaly, CollectionOutcome, Evaluation, FieldReport, Rate, RuleReport,
};
use crate::spec_dsl::{QualitySpec, Severity, Threshold};

pub const CSV_HEADER: [&str; 7] = [
    "field",
    "requirement",
    "error_count",
    "error_rate_pct",
    "null_count",
    "placeholder_count",
    "breakdown",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryReport {
    pub object_name: String,
    pub records_total: u64,
    /// In spec field order.
    pub field_reports: Vec<FieldReport>,
    pub rule_reports: Vec<RuleReport>,
    pub collection_outcomes: Vec<CollectionOutcome>,
    pub affected_columns: AffectedColumns,
    pub anomalies: Vec<Anomaly>,
}

impl SummaryReport {
    pub fn from_evaluation(evaluation: &Evaluation) -> Self {
        Self {
            object_name: evaluation.object_name.clone(),
            records_total: evaluation.records_total,
            field_reports: evaluation.field_reports.clone(),
            rule_reports: evaluation.rule_reports.clone(),
            collection_outcomes: evaluation.collection_outcomes.clone(),
            affected_columns: evaluation.affected_columns(),
            anomalies: evaluation.anomalies.clone(),
        }
    }
}

fn percent(rate: Rate) -> String {
    format!("{}%", rate.display())
}

fn rule_phrase(rule: &str) -> &str {
    match rule {
        "not_null" => "NULL values",
        "placeholder" => "placeholder values",
        "type" => "wrong type or format",
        other => other,
    }
}

/// Comment column: `-` when nothing fired, the phrase alone for a single
/// error rule, otherwise `count phrase` items joined by `; `.
fn comment(report: &FieldReport, severity_of: impl Fn(&str) -> Severity) -> String {
    let items: Vec<(&str, u64, Severity)> = report
        .per_rule_breakdown
        .iter()
        .map(|(rule, c)| (rule.as_str(), c.count, severity_of(rule)))
        .collect();
    match items.as_slice() {
        [] => "-".to_string(),
        [(rule, count, Severity::Error)] if *count == report.records_with_error => {
            rule_phrase(rule).to_string()
        }
        _ => items
            .iter()
            .map(|(rule, count, severity)| match severity {
                Severity::Error => format!("{count} {}", rule_phrase(rule)),
                other => format!("{count} {} ({other})", rule_phrase(rule)),
            })
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn cell(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', " ")
}

fn threshold_text(outcome: &CollectionOutcome) -> String {
    match outcome.threshold {
        Threshold::Percent(_) => format!("{}%", format_number(outcome.metric_value)),
        Threshold::Count(_) => format_number(outcome.metric_value),
    }
}

fn format_number(value: f64) -> String {
    if value.fract() == 0.0 {
        format!("{value:.0}")
    } else {
        format!("{value:.4}").trim_end_matches('0').to_string()
    }
}

/// One table row per field, then the affected-column share, record rules,
/// collection rules and anomalies.
pub fn render_markdown(report: &SummaryReport, spec: &QualitySpec) -> String {
    let object = spec.object(&report.object_name);
    let severity_of = |field: &str, rule: &str| -> Severity {
        let Some(f) = object.and_then(|o| o.field(field)) else {
            return Severity::Error;
        };
        match rule {
            "not_null" | "type" => f.severity_default,
            "placeholder" => f.placeholder_severity(),
            name => f
                .checks
                .iter()
                .find(|c| c.name == name)
                .map_or(f.severity_default, |c| f.check_severity(c)),
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "## {} ({} records)\n", report.object_name, report.records_total);
    out.push_str("| Field | Requirement | Error count | Error rate | Comment |\n");
    out.push_str("|---|---|---:|---:|---|\n");
    for fr in &report.field_reports {
        let requirement = object
            .and_then(|o| o.field(&fr.field_name))
            .map_or_else(|| fr.requirement.clone(), |f| f.requirement_summary());
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            cell(&fr.field_name),
            cell(&requirement),
            fr.records_with_error,
            percent(fr.error_rate),
            cell(&comment(fr, |rule| severity_of(&fr.field_name, rule))),
        );
    }
    let affected = report.affected_columns;
    let _ = writeln!(
        out,
        "\n{} of {} columns ({}%) affected",
        affected.count,
        affected.total,
        affected.fraction_display()
    );
    if !report.rule_reports.is_empty() {
        out.push_str("\nRecord rules:\n");
        for r in &report.rule_reports {
            let _ = writeln!(
                out,
                "- {} ({}): {} violations, {}",
                r.rule_name,
                r.severity,
                r.violations,
                percent(r.rate)
            );
        }
    }
    if !report.collection_outcomes.is_empty() {
        out.push_str("\nCollection rules:\n");
        for o in &report.collection_outcomes {
            let verdict = match (o.passed, o.vacuous) {
                (true, true) => "passed (nothing to measure)".to_string(),
                (true, false) => "passed".to_string(),
                (false, _) => format!("FAILED ({})", o.severity),
            };
            let _ = writeln!(
                out,
                "- {}: {}({}) {} {}, measured {}: {}",
                o.rule_name,
                o.metric.keyword(),
                o.target,
                o.comparator.symbol(),
                o.threshold,
                threshold_text(o),
                verdict
            );
        }
    }
    if !report.anomalies.is_empty() {
        out.push_str("\nRare values:\n");
        for a in &report.anomalies {
            let _ = writeln!(out, "- {} {:?}: {} record(s)", a.field_name, a.value, a.count);
        }
    }
    out
}

fn rate_json(rate: Rate) -> Value {
    json!({
        "count": rate.count,
        "total": rate.total,
        "pct": rate.pct(),
        "display": rate.display(),
    })
}

pub fn report_json(report: &SummaryReport) -> Value {
    json!({
        "object": report.object_name,
        "records_total": report.records_total,
        "fields": report.field_reports.iter().map(|f| json!({
            "field": f.field_name,
            "requirement": f.requirement,
            "records_total": f.records_total,
            "records_with_error": f.records_with_error,
            "error_rate": rate_json(f.error_rate),
            "null_count": f.null_count,
            "placeholder_count": f.placeholder_count,
            "breakdown": f.per_rule_breakdown.iter().map(|(rule, c)| {
                (rule.clone(), json!({ "count": c.count, "rate": rate_json(c.rate) }))
            }).collect::<serde_json::Map<_, _>>(),
        })).collect::<Vec<_>>(),
        "record_rules": report.rule_reports.iter().map(|r| json!({
            "rule": r.rule_name,
            "severity": r.severity,
            "violations": r.violations,
            "rate": rate_json(r.rate),
        })).collect::<Vec<_>>(),
        "collection_rules": report.collection_outcomes.iter().map(|o| json!({
            "rule": o.rule_name,
            "metric": o.metric.keyword(),
            "target": o.target,
            "comparator": o.comparator.symbol(),
            "threshold": o.threshold.value(),
            "threshold_is_percent": matches!(o.threshold, Threshold::Percent(_)),
            "severity": o.severity,
            "metric_value": o.metric_value,
            "vacuous": o.vacuous,
            "passed": o.passed,
        })).collect::<Vec<_>>(),
        "affected_columns": {
            "count": report.affected_columns.count,
            "total": report.affected_columns.total,
            "pct": report.affected_columns.fraction_display(),
        },
        "anomalies": report.anomalies.iter().map(|a| json!({
            "rule": a.rule_name,
            "field": a.field_name,
            "value": a.value,
            "count": a.count,
        })).collect::<Vec<_>>(),
    })
}

/// Pretty-printed JSON with keys in sorted order.
pub fn render_json(report: &SummaryReport) -> String {
    let mut text = serde_json::to_string_pretty(&report_json(report)).expect("JSON values serialize");
    text.push('\n');
    text
}

/// One CSV row per field under [`CSV_HEADER`]. The breakdown column holds
/// `rule=count` pairs joined by `;`.
pub fn render_csv(report: &SummaryReport) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    write_csv_rows(&mut writer, report);
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
}

/// Data rows of several reports under a single header.
pub fn render_csv_many(reports: &[SummaryReport]) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    for report in reports {
        write_csv_rows(&mut writer, report);
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
}

fn write_csv_rows(writer: &mut csv::Writer<Vec<u8>>, report: &SummaryReport) {
    for f in &report.field_reports {
        let breakdown: Vec<String> = f
            .per_rule_breakdown
            .iter()
            .map(|(rule, c)| format!("{rule}={}", c.count))
            .collect();
        writer
            .write_record([
                f.field_name.clone(),
                f.requirement.clone(),
                f.records_with_error.to_string(),
                f.error_rate.display(),
                f.null_count.to_string(),
                f.placeholder_count.to_string(),
                breakdown.join(";"),
            ])
            .expect("in-memory write");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset_io::{read_csv_bytes, CsvOptions};
    use crate::engine::{error_rate, evaluate_dataset, EvalOptions};
    use crate::spec_dsl::parse_spec;

    const SPEC: &str = r#"object register {
      field name: text not_null;
      field post_code: integer not_null { check post_digits: digits(4); }
      field note: text { placeholders {"-"} warning; }
      rule pair: present(name) == present(post_code);
      expect error_rate(name) <= 1%;
    }"#;

    fn evaluate(data: &str) -> (QualitySpec, SummaryReport) {
        let spec = parse_spec(SPEC).unwrap();
        let ds = read_csv_bytes("r.csv", data.as_bytes(), &CsvOptions::default()).unwrap();
        let ev = evaluate_dataset(&ds, &spec.objects[0], &EvalOptions::default()).unwrap();
        (spec.clone(), SummaryReport::from_evaluation(&ev))
    }

    #[test]
    fn markdown_rows() {
        let (spec, report) = evaluate("name,post_code,note\n,1234,a\nSIA,123,-\nAS,,\nSIA,12a,x\n");
        let md = render_markdown(&report, &spec);
        assert!(md.contains("| name | text, NOT NULL | 1 | 25.00% | NULL values |"), "{md}");
        assert!(md.contains(
            "| post_code | integer, 4 digits, NOT NULL | 3 | 75.00% | 1 NULL values; 2 post_digits; 1 wrong type or format |"
        ), "{md}");
        assert!(md.contains("| note | text, no placeholders {-}, NULL | 0 | 0% | 1 placeholder values (warning) |"), "{md}");
        assert!(md.contains("\n2 of 3 columns (66.7%) affected\n"), "{md}");
        assert!(md.contains("- pair (error): 2 violations, 50.00%"), "{md}");
        assert!(md.contains("- error_rate_name: error_rate(name) <= 1%, measured 25%: FAILED (error)"), "{md}");
        assert_eq!(md, render_markdown(&report, &spec));
    }

    #[test]
    fn clean_data_renders_dashes() {
        let (spec, report) = evaluate("name,post_code,note\nSIA,1234,\n");
        let md = render_markdown(&report, &spec);
        for field in ["name", "post_code", "note"] {
            let row = md.lines().find(|l| l.starts_with(&format!("| {field} |"))).unwrap();
            assert!(row.ends_with("| 0 | 0% | - |"), "{row}");
        }
        assert!(md.contains("0 of 3 columns (0.0%) affected"));
    }

    #[test]
    fn json_keeps_raw_and_display_rates() {
        let (_, report) = evaluate("name,post_code,note\n,1234,a\nSIA,1234,a\nSIA,1234,a\n");
        let value: Value = serde_json::from_str(&render_json(&report)).unwrap();
        let rate = &value["fields"][0]["error_rate"];
        assert_eq!(rate["count"], 1);
        assert_eq!(rate["total"], 3);
        assert_eq!(rate["display"], "33.33");
        assert!((rate["pct"].as_f64().unwrap() - 100.0 / 3.0).abs() < 1e-12);
        assert_eq!(value["affected_columns"]["count"], 1);
        assert_eq!(value["fields"][1]["breakdown"], json!({}));
    }

    #[test]
    fn csv_reingests() {
        let (_, mut report) = evaluate("name,post_code,note\n,1234,a\nSIA,1,-\n");
        report.field_reports[0].requirement = "text, \"quoted\", NOT NULL".into();
        let text = render_csv(&report);
        let ds = read_csv_bytes("s.csv", text.as_bytes(), &CsvOptions::default()).unwrap();
        assert_eq!(ds.header, CSV_HEADER);
        assert_eq!(ds.record_count(), 3);
        let first: Vec<&str> = ds.records[0].cells.iter().map(|c| c.raw()).collect();
        assert_eq!(first, ["name", "text, \"quoted\", NOT NULL", "1", "50.00", "1", "0", "not_null=1"]);
        assert_eq!(ds.records[1].cells[6].raw(), "post_digits=1");
        assert_eq!(ds.records[1].cells[3].raw(), error_rate(1, 2).display());
        let both = render_csv_many(&[report.clone(), report]);
        assert_eq!(both.lines().count(), 7);
    }
}
