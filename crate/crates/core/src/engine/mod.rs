//! The quality-measuring process: per-record checks, record rules, the error
//! protocol, per-field accounting and collection rules.

mod eval;
mod export;
mod rate;
mod truth;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use chrono::Datelike;
use serde::Serialize;
use thiserror::Error;

pub use eval::DEFAULT_MIN_YEAR;
pub use rate::{error_rate, round_pct, Rate};
pub use truth::Truth;

use crate::checks::{check_date, check_placeholder, DateCheck};
use crate::dataset_io::{coerce_value, CellValue, Dataset, Record};
use crate::spec_dsl::{
    CheckExpr, Comparator, DataObjectClass, FieldSpec, FieldType, Metric, Nullability, Severity,
    Threshold,
};

/// Rare-value cut-off used by `frequency_min` rules whose comparator does
/// not imply one.
pub const DEFAULT_ANOMALY_K: u64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("object `{object}`: field `{field}` has no matching column in the data")]
    MissingField { object: String, field: String },
    #[error("object `{object}`: field `{field}` matches several columns: {}", candidates.join(", "))]
    AmbiguousField {
        object: String,
        field: String,
        candidates: Vec<String>,
    },
    #[error("no column named `{0}`")]
    UnknownColumn(String),
}

/// One failed requirement on one record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(rename = "object")]
    pub object_name: Arc<str>,
    #[serde(rename = "row")]
    pub row_index: usize,
    /// Empty for record rules.
    #[serde(rename = "field")]
    pub field_name: Arc<str>,
    #[serde(rename = "rule")]
    pub rule_name: Arc<str>,
    pub severity: Severity,
    #[serde(rename = "value")]
    pub observed: Box<str>,
    pub message: Arc<str>,
}

impl Violation {
    fn key(&self) -> (usize, &str, &str) {
        (self.row_index, &self.field_name, &self.rule_name)
    }
}

/// Violations in canonical `(row, field, rule)` order without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ErrorProtocol {
    violations: Vec<Violation>,
}

impl ErrorProtocol {
    pub fn new(mut violations: Vec<Violation>) -> Self {
        violations.sort_by(|a, b| a.key().cmp(&b.key()));
        violations.dedup_by(|a, b| a.key() == b.key());
        Self { violations }
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Violation> {
        self.violations.iter()
    }

    pub fn count_at_least(&self, severity: Severity) -> usize {
        self.violations.iter().filter(|v| v.severity >= severity).count()
    }
}

impl<'a> IntoIterator for &'a ErrorProtocol {
    type Item = &'a Violation;
    type IntoIter = std::slice::Iter<'a, Violation>;

    fn into_iter(self) -> Self::IntoIter {
        self.violations.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleCount {
    pub count: u64,
    pub rate: Rate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldReport {
    pub field_name: String,
    pub requirement: String,
    pub records_total: u64,
    /// Distinct records with at least one error-severity violation.
    pub records_with_error: u64,
    pub error_rate: Rate,
    /// Every rule that fired on the field, at any severity.
    pub per_rule_breakdown: BTreeMap<String, RuleCount>,
    pub null_count: u64,
    pub placeholder_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleReport {
    pub rule_name: String,
    pub severity: Severity,
    pub violations: u64,
    pub rate: Rate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectionOutcome {
    pub rule_name: String,
    pub metric: Metric,
    pub target: String,
    pub comparator: Comparator,
    pub threshold: Threshold,
    pub severity: Severity,
    /// A percentage for rate metrics, a count for `frequency_min`.
    pub metric_value: f64,
    /// Passed because there was nothing to measure.
    pub vacuous: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anomaly {
    pub rule_name: String,
    pub field_name: String,
    pub value: String,
    pub count: u64,
}

/// Fields with at least one error-severity record, out of all fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffectedColumns {
    pub count: usize,
    pub total: usize,
}

impl AffectedColumns {
    /// Share of affected fields as a percentage with one decimal.
    pub fn fraction_display(self) -> String {
        round_pct(self.count as u64, self.total as u64, 1)
    }
}

pub fn affected_columns(reports: &[FieldReport]) -> AffectedColumns {
    AffectedColumns {
        count: reports.iter().filter(|r| r.records_with_error > 0).count(),
        total: reports.len(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub object_name: String,
    pub records_total: u64,
    pub protocol: ErrorProtocol,
    pub field_reports: Vec<FieldReport>,
    pub rule_reports: Vec<RuleReport>,
    pub collection_outcomes: Vec<CollectionOutcome>,
    pub anomalies: Vec<Anomaly>,
}

impl Evaluation {
    pub fn affected_columns(&self) -> AffectedColumns {
        affected_columns(&self.field_reports)
    }

    /// Whether anything at or above `severity` was found, counting failed
    /// collection rules.
    pub fn fails_at(&self, severity: Severity) -> bool {
        self.protocol.iter().any(|v| v.severity >= severity)
            || self
                .collection_outcomes
                .iter()
                .any(|o| !o.passed && o.severity >= severity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub workers: usize,
    /// Overrides the rare-value cut-off of every `frequency_min` rule.
    pub anomaly_k: Option<u64>,
    /// Upper bound for `year_between` without one; defaults to this year.
    pub current_year: Option<i32>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            anomaly_k: None,
            current_year: None,
        }
    }
}

const NOT_NULL: usize = 0;
const PLACEHOLDER: usize = 1;
const TYPE: usize = 2;
const FIRST_CHECK: usize = 3;

struct FieldPlan {
    name: Arc<str>,
    /// Indexed by NOT_NULL, PLACEHOLDER, TYPE, then one per named check.
    rules: Vec<Arc<str>>,
    messages: Vec<Arc<str>>,
    wrong_date_format: Option<Arc<str>>,
}

/// An object bound to the columns of a particular header.
pub struct Evaluator<'a> {
    object: &'a DataObjectClass,
    object_name: Arc<str>,
    columns: Vec<usize>,
    slots: HashMap<&'a str, usize>,
    plans: Vec<FieldPlan>,
    rule_names: Vec<Arc<str>>,
    rule_messages: Vec<Arc<str>>,
    current_year: i32,
}

/// Lowercase with every non-alphanumeric character replaced by `_`.
pub fn normalize_column_name(name: &str) -> String {
    name.trim()
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

impl<'a> Evaluator<'a> {
    /// Binds each field to the column with the same name, falling back to
    /// the normalized column name.
    pub fn new(object: &'a DataObjectClass, header: &[String]) -> Result<Self, EvalError> {
        let mut columns = Vec::with_capacity(object.fields.len());
        for field in &object.fields {
            if let Some(i) = header.iter().position(|h| *h == field.name) {
                columns.push(i);
                continue;
            }
            let matches: Vec<usize> = (0..header.len())
                .filter(|&i| normalize_column_name(&header[i]) == field.name)
                .collect();
            match matches.as_slice() {
                [i] => columns.push(*i),
                [] => {
                    return Err(EvalError::MissingField {
                        object: object.name.clone(),
                        field: field.name.clone(),
                    })
                }
                _ => {
                    return Err(EvalError::AmbiguousField {
                        object: object.name.clone(),
                        field: field.name.clone(),
                        candidates: matches.iter().map(|&i| header[i].clone()).collect(),
                    })
                }
            }
        }
        Ok(Self {
            object,
            object_name: object.name.as_str().into(),
            columns,
            slots: object
                .fields
                .iter()
                .enumerate()
                .map(|(i, f)| (f.name.as_str(), i))
                .collect(),
            plans: object.fields.iter().map(plan_field).collect(),
            rule_names: object.record_rules.iter().map(|r| r.name.as_str().into()).collect(),
            rule_messages: object
                .record_rules
                .iter()
                .map(|r| format!("rule violated: {}", r.expr).into())
                .collect(),
            current_year: chrono::Utc::now().year(),
        })
    }

    pub fn with_current_year(mut self, year: i32) -> Self {
        self.current_year = year;
        self
    }

    pub fn object(&self) -> &DataObjectClass {
        self.object
    }

    /// Column index bound to each field, in field order.
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// All violations of one record, in canonical order. Collection rules
    /// are not involved.
    pub fn evaluate_record(&self, record: &Record) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut acc = Accumulator::new(self);
        self.visit(record, &mut out, &mut acc);
        ErrorProtocol::new(out).violations
    }

    /// Three-valued value of `expr` on `record`.
    pub fn truth(&self, expr: &CheckExpr, record: &Record) -> Truth {
        eval::eval(expr, &BoundRow { ev: self, record })
    }

    fn visit(&self, record: &Record, out: &mut Vec<Violation>, acc: &mut Accumulator) {
        let row = BoundRow { ev: self, record };
        for (slot, field) in self.object.fields.iter().enumerate() {
            let cell = &record.cells[self.columns[slot]];
            let plan = &self.plans[slot];
            let FieldAccumulator {
                nulls,
                placeholders,
                records_with_error,
                rule_counts,
                frequencies,
            } = &mut acc.fields[slot];
            if let Some(freq) = frequencies.as_mut() {
                if !cell.is_null() {
                    *freq.entry(cell.trimmed().into()).or_insert(0) += 1;
                }
            }
            let mut error_seen = false;
            let mut push = |rule: usize, severity: Severity, message: &Arc<str>| {
                rule_counts[rule] += 1;
                error_seen |= severity == Severity::Error;
                out.push(Violation {
                    object_name: self.object_name.clone(),
                    row_index: record.row_index,
                    field_name: plan.name.clone(),
                    rule_name: plan.rules[rule].clone(),
                    severity,
                    observed: cell.raw().into(),
                    message: message.clone(),
                });
            };
            if cell.is_null() {
                *nulls += 1;
                if field.nullability == Nullability::NotNull {
                    push(NOT_NULL, field.severity_default, &plan.messages[NOT_NULL]);
                }
            } else if field
                .placeholder_tokens
                .as_ref()
                .is_some_and(|tokens| check_placeholder(cell.trimmed(), tokens))
            {
                *placeholders += 1;
                push(PLACEHOLDER, field.placeholder_severity(), &plan.messages[PLACEHOLDER]);
            } else {
                if let Some(message) = type_failure(field, plan, cell) {
                    push(TYPE, field.severity_default, message);
                }
                for (i, check) in field.checks.iter().enumerate() {
                    if eval::eval(&check.expr, &row).is_false() {
                        let rule = FIRST_CHECK + i;
                        push(rule, field.check_severity(check), &plan.messages[rule]);
                    }
                }
            }
            if error_seen {
                *records_with_error += 1;
            }
        }
        for (i, rule) in self.object.record_rules.iter().enumerate() {
            if eval::eval(&rule.expr, &row).is_false() {
                acc.rule_counts[i] += 1;
                out.push(Violation {
                    object_name: self.object_name.clone(),
                    row_index: record.row_index,
                    field_name: "".into(),
                    rule_name: self.rule_names[i].clone(),
                    severity: rule.severity,
                    observed: rule_observed(rule.expr.field_refs().iter().map(|f| f.name.as_str()), &row),
                    message: self.rule_messages[i].clone(),
                });
            }
        }
    }
}

fn plan_field(field: &FieldSpec) -> FieldPlan {
    let mut rules: Vec<Arc<str>> = vec!["not_null".into(), "placeholder".into(), "type".into()];
    let mut messages: Vec<Arc<str>> = vec![
        "NULL value".into(),
        "placeholder value".into(),
        format!("not a valid {}", field.declared_type).into(),
    ];
    for check in &field.checks {
        rules.push(check.name.as_str().into());
        messages.push(format!("check failed: {}", check.expr).into());
    }
    let wrong_date_format = field
        .date_format()
        .map(|f| format!("does not match date format {f}").into());
    FieldPlan {
        name: field.name.as_str().into(),
        rules,
        messages,
        wrong_date_format,
    }
}

fn type_failure<'p>(field: &FieldSpec, plan: &'p FieldPlan, cell: &CellValue) -> Option<&'p Arc<str>> {
    match &field.declared_type {
        FieldType::Text => None,
        FieldType::Date(fmt) => match check_date(cell.trimmed(), fmt) {
            DateCheck::Valid(_) => None,
            DateCheck::WrongFormat => plan.wrong_date_format.as_ref(),
            DateCheck::InvalidDate => Some(&plan.messages[TYPE]),
        },
        ty => coerce_value(cell.trimmed(), ty)
            .is_none()
            .then(|| &plan.messages[TYPE]),
    }
}

/// `name=value` pairs for the fields a rule mentions, in first-use order.
fn rule_observed<'n>(names: impl Iterator<Item = &'n str>, row: &BoundRow<'_, '_>) -> Box<str> {
    let mut seen = HashSet::new();
    let mut parts = Vec::new();
    for name in names {
        if seen.insert(name) {
            let value = eval::Row::lookup(row, name).map_or("", |(_, c)| c.raw());
            parts.push(format!("{name}={value}"));
        }
    }
    parts.join("; ").into()
}

struct BoundRow<'e, 'r> {
    ev: &'e Evaluator<'e>,
    record: &'r Record,
}

impl eval::Row for BoundRow<'_, '_> {
    fn lookup(&self, name: &str) -> Option<(&FieldSpec, &CellValue)> {
        let slot = *self.ev.slots.get(name)?;
        Some((&self.ev.object.fields[slot], &self.record.cells[self.ev.columns[slot]]))
    }

    fn current_year(&self) -> i32 {
        self.ev.current_year
    }
}

#[derive(Default)]
struct FieldAccumulator {
    nulls: u64,
    placeholders: u64,
    records_with_error: u64,
    rule_counts: Vec<u64>,
    frequencies: Option<HashMap<Box<str>, u64>>,
}

struct Accumulator {
    fields: Vec<FieldAccumulator>,
    rule_counts: Vec<u64>,
}

impl Accumulator {
    fn new(ev: &Evaluator<'_>) -> Self {
        let targets: HashSet<&str> = ev
            .object
            .collection_rules
            .iter()
            .filter(|r| r.metric == Metric::FrequencyMin)
            .map(|r| r.target.as_str())
            .collect();
        Self {
            fields: ev
                .object
                .fields
                .iter()
                .map(|f| FieldAccumulator {
                    rule_counts: vec![0; FIRST_CHECK + f.checks.len()],
                    frequencies: targets.contains(f.name.as_str()).then(HashMap::new),
                    ..FieldAccumulator::default()
                })
                .collect(),
            rule_counts: vec![0; ev.object.record_rules.len()],
        }
    }

    fn merge(&mut self, other: Accumulator) {
        for (a, b) in self.fields.iter_mut().zip(other.fields) {
            a.nulls += b.nulls;
            a.placeholders += b.placeholders;
            a.records_with_error += b.records_with_error;
            for (x, y) in a.rule_counts.iter_mut().zip(b.rule_counts) {
                *x += y;
            }
            if let (Some(fa), Some(fb)) = (a.frequencies.as_mut(), b.frequencies) {
                for (value, n) in fb {
                    *fa.entry(value).or_insert(0) += n;
                }
            }
        }
        for (x, y) in self.rule_counts.iter_mut().zip(other.rule_counts) {
            *x += y;
        }
    }
}

/// Evaluates every record of `dataset` against `object` and aggregates the
/// results. Output does not depend on `options.workers`.
pub fn evaluate_dataset(
    dataset: &Dataset,
    object: &DataObjectClass,
    options: &EvalOptions,
) -> Result<Evaluation, EvalError> {
    let mut ev = Evaluator::new(object, &dataset.header)?;
    if let Some(year) = options.current_year {
        ev.current_year = year;
    }
    let records = &dataset.records;
    let workers = options.workers.clamp(1, records.len().max(1));
    let chunk_size = records.len().div_ceil(workers).max(1);
    let run = |chunk: &[Record]| {
        let mut out = Vec::new();
        let mut acc = Accumulator::new(&ev);
        for record in chunk {
            ev.visit(record, &mut out, &mut acc);
        }
        (out, acc)
    };
    let parts: Vec<(Vec<Violation>, Accumulator)> = if workers == 1 {
        vec![run(records)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = records
                .chunks(chunk_size)
                .map(|chunk| s.spawn(move || run(chunk)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("evaluation worker panicked"))
                .collect()
        })
    };
    let mut violations = Vec::new();
    let mut acc = Accumulator::new(&ev);
    for (part, part_acc) in parts {
        violations.extend(part);
        acc.merge(part_acc);
    }

    let total = records.len() as u64;
    let field_reports: Vec<FieldReport> = object
        .fields
        .iter()
        .zip(&acc.fields)
        .zip(&ev.plans)
        .map(|((field, fa), plan)| FieldReport {
            field_name: field.name.clone(),
            requirement: field.requirement_summary(),
            records_total: total,
            records_with_error: fa.records_with_error,
            error_rate: error_rate(fa.records_with_error, total),
            per_rule_breakdown: fa
                .rule_counts
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(|(i, &n)| {
                    (
                        plan.rules[i].to_string(),
                        RuleCount {
                            count: n,
                            rate: error_rate(n, total),
                        },
                    )
                })
                .collect(),
            null_count: fa.nulls,
            placeholder_count: fa.placeholders,
        })
        .collect();
    let rule_reports: Vec<RuleReport> = object
        .record_rules
        .iter()
        .zip(&acc.rule_counts)
        .map(|(rule, &n)| RuleReport {
            rule_name: rule.name.clone(),
            severity: rule.severity,
            violations: n,
            rate: error_rate(n, total),
        })
        .collect();

    let mut outcomes = Vec::new();
    let mut anomalies = Vec::new();
    for rule in &object.collection_rules {
        let slot = ev.slots.get(rule.target.as_str()).copied();
        let (value, vacuous) = match rule.metric {
            Metric::ErrorRate => {
                let count = match slot {
                    Some(s) => acc.fields[s].records_with_error,
                    None => object
                        .record_rules
                        .iter()
                        .position(|r| r.name == rule.target)
                        .map_or(0, |i| acc.rule_counts[i]),
                };
                (error_rate(count, total).pct(), total == 0)
            }
            Metric::NullRate => {
                let nulls = slot.map_or(0, |s| acc.fields[s].nulls);
                (error_rate(nulls, total).pct(), total == 0)
            }
            Metric::FrequencyMin => {
                let empty = HashMap::new();
                let freq = slot
                    .and_then(|s| acc.fields[s].frequencies.as_ref())
                    .unwrap_or(&empty);
                let k = options.anomaly_k.unwrap_or_else(|| anomaly_cutoff(rule.comparator, rule.threshold));
                let rare = rare_values(freq, k);
                for (value, count) in &rare {
                    anomalies.push(Anomaly {
                        rule_name: rule.name.clone(),
                        field_name: rule.target.clone(),
                        value: value.clone(),
                        count: *count,
                    });
                }
                if let Some(s) = slot {
                    attach_anomalies(&ev, rule, s, &rare, k, records, &mut violations);
                }
                let min = freq.values().min().copied();
                (min.unwrap_or(0) as f64, min.is_none())
            }
        };
        outcomes.push(CollectionOutcome {
            rule_name: rule.name.clone(),
            metric: rule.metric,
            target: rule.target.clone(),
            comparator: rule.comparator,
            threshold: rule.threshold,
            severity: rule.severity,
            metric_value: value,
            vacuous,
            passed: vacuous || rule.comparator.holds(value, rule.threshold.value()),
        });
    }

    Ok(Evaluation {
        object_name: object.name.clone(),
        records_total: total,
        protocol: ErrorProtocol::new(violations),
        field_reports,
        rule_reports,
        collection_outcomes: outcomes,
        anomalies,
    })
}

/// Largest count still considered rare for a `frequency_min` rule.
fn anomaly_cutoff(comparator: Comparator, threshold: Threshold) -> u64 {
    let t = match threshold {
        Threshold::Count(c) => c,
        Threshold::Percent(_) => return DEFAULT_ANOMALY_K,
    };
    match comparator {
        Comparator::Ge => t.saturating_sub(1),
        Comparator::Gt => t,
        _ => DEFAULT_ANOMALY_K,
    }
}

fn rare_values(freq: &HashMap<Box<str>, u64>, k: u64) -> Vec<(String, u64)> {
    let mut rare: Vec<(String, u64)> = freq
        .iter()
        .filter(|(_, &n)| n <= k)
        .map(|(v, &n)| (v.to_string(), n))
        .collect();
    rare.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    rare
}

fn attach_anomalies(
    ev: &Evaluator<'_>,
    rule: &crate::spec_dsl::CollectionRule,
    slot: usize,
    rare: &[(String, u64)],
    k: u64,
    records: &[Record],
    out: &mut Vec<Violation>,
) {
    if rare.is_empty() {
        return;
    }
    let counts: HashMap<&str, u64> = rare.iter().map(|(v, n)| (v.as_str(), *n)).collect();
    let rule_name: Arc<str> = rule.name.as_str().into();
    let mut messages: HashMap<u64, Arc<str>> = HashMap::new();
    let column = ev.columns[slot];
    for record in records {
        let cell = &record.cells[column];
        if cell.is_null() {
            continue;
        }
        if let Some(&n) = counts.get(cell.trimmed()) {
            let message = messages
                .entry(n)
                .or_insert_with(|| format!("rare value: {n} occurrence(s), cut-off {k}").into())
                .clone();
            out.push(Violation {
                object_name: ev.object_name.clone(),
                row_index: record.row_index,
                field_name: ev.plans[slot].name.clone(),
                rule_name: rule_name.clone(),
                severity: Severity::Anomaly,
                observed: cell.raw().into(),
                message,
            });
        }
    }
}

/// Distinct non-null values of `column` occurring at most `k` times,
/// ordered by count, then value.
pub fn frequency_anomalies(dataset: &Dataset, column: &str, k: u64) -> Result<Vec<(String, u64)>, EvalError> {
    let index = dataset
        .column_index(column)
        .ok_or_else(|| EvalError::UnknownColumn(column.to_string()))?;
    let mut freq: HashMap<Box<str>, u64> = HashMap::new();
    for record in &dataset.records {
        let cell = &record.cells[index];
        if !cell.is_null() {
            *freq.entry(cell.trimmed().into()).or_insert(0) += 1;
        }
    }
    Ok(rare_values(&freq, k))
}
