use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::checks::{DateFormat, LikePattern};

/// Source location (1-based line and column, columns counted in characters).
///
/// Spans never take part in equality, so two specs that differ only in
/// layout compare equal.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub line: u32,
    pub column: u32,
}

impl Span {
    pub fn new(line: u32, column: u32) -> Self {
        Self { line, column }
    }
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Anomaly,
    Warning,
    #[default]
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Anomaly => "anomaly",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "anomaly" => Ok(Severity::Anomaly),
            "warning" => Ok(Severity::Warning),
            "error" => Ok(Severity::Error),
            other => Err(format!("unknown severity {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Nullability {
    NotNull,
    Nullable,
}

impl Nullability {
    pub fn keyword(self) -> &'static str {
        match self {
            Nullability::NotNull => "not_null",
            Nullability::Nullable => "nullable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldType {
    Text,
    Integer,
    Decimal,
    Date(DateFormat),
}

impl fmt::Display for FieldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldType::Text => f.write_str("text"),
            FieldType::Integer => f.write_str("integer"),
            FieldType::Decimal => f.write_str("decimal"),
            FieldType::Date(fmt) => write!(f, "date({fmt})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualitySpec {
    pub version: u32,
    pub objects: Vec<DataObjectClass>,
}

impl QualitySpec {
    pub fn object(&self, name: &str) -> Option<&DataObjectClass> {
        self.objects.iter().find(|o| o.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataObjectClass {
    pub name: String,
    pub source_hint: Option<String>,
    pub fields: Vec<FieldSpec>,
    pub record_rules: Vec<RecordRule>,
    pub collection_rules: Vec<CollectionRule>,
    pub span: Span,
}

impl DataObjectClass {
    pub fn field(&self, name: &str) -> Option<&FieldSpec> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn record_rule(&self, name: &str) -> Option<&RecordRule> {
        self.record_rules.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub name: String,
    pub declared_type: FieldType,
    pub nullability: Nullability,
    pub severity_default: Severity,
    /// `None` disables placeholder detection for the field.
    pub placeholder_tokens: Option<Vec<String>>,
    pub placeholder_severity: Option<Severity>,
    pub checks: Vec<NamedCheck>,
    pub span: Span,
}

impl FieldSpec {
    pub fn new(name: impl Into<String>, declared_type: FieldType, nullability: Nullability) -> Self {
        Self {
            name: name.into(),
            declared_type,
            nullability,
            severity_default: Severity::Error,
            placeholder_tokens: None,
            placeholder_severity: None,
            checks: Vec::new(),
            span: Span::default(),
        }
    }

    pub fn placeholder_severity(&self) -> Severity {
        self.placeholder_severity.unwrap_or(self.severity_default)
    }

    pub fn check_severity(&self, check: &NamedCheck) -> Severity {
        check.severity.unwrap_or(self.severity_default)
    }

    pub fn date_format(&self) -> Option<&DateFormat> {
        match &self.declared_type {
            FieldType::Date(fmt) => Some(fmt),
            _ => None,
        }
    }

    /// Compact one-line description such as `integer, 11 digits, NOT NULL`.
    pub fn requirement_summary(&self) -> String {
        let mut parts = vec![self.declared_type.to_string()];
        for check in &self.checks {
            parts.push(describe_check(&self.name, &check.expr));
        }
        if let Some(tokens) = &self.placeholder_tokens {
            parts.push(format!("no placeholders {{{}}}", tokens.join(", ")));
        }
        parts.push(match self.nullability {
            Nullability::NotNull => "NOT NULL".to_string(),
            Nullability::Nullable => "NULL".to_string(),
        });
        parts.join(", ")
    }
}

fn describe_check(field: &str, expr: &CheckExpr) -> String {
    let CheckExpr::Call(pred) = expr else {
        return expr.to_string();
    };
    if pred.field().name != field {
        return expr.to_string();
    }
    match pred {
        Predicate::Present(_) => "present".to_string(),
        Predicate::Matches { pattern, .. } => format!("match pattern \"{}\"", pattern.source()),
        Predicate::Digits { n, .. } => format!("{n} digits"),
        Predicate::Length { n, .. } => format!("length {n}"),
        Predicate::StartsWith { prefix, .. } => format!("starts with \"{prefix}\""),
        Predicate::InSet { values, .. } => format!("one of {{{}}}", values.join(", ")),
        Predicate::DateValid { format: Some(f), .. } => format!("valid date {f}"),
        Predicate::DateValid { format: None, .. } => "valid date".to_string(),
        Predicate::YearBetween { lo, hi, .. } => format!(
            "year in [{}, {}]",
            lo.map_or("..".to_string(), |y| y.to_string()),
            hi.map_or("now".to_string(), |y| y.to_string())
        ),
        Predicate::IsInteger(_) => "integer text".to_string(),
        Predicate::IsDecimal(_) => "decimal text".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedCheck {
    pub name: String,
    pub expr: CheckExpr,
    pub severity: Option<Severity>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordRule {
    pub name: String,
    pub expr: CheckExpr,
    pub severity: Severity,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    ErrorRate,
    NullRate,
    FrequencyMin,
}

impl Metric {
    pub fn keyword(self) -> &'static str {
        match self {
            Metric::ErrorRate => "error_rate",
            Metric::NullRate => "null_rate",
            Metric::FrequencyMin => "frequency_min",
        }
    }

    pub fn is_rate(self) -> bool {
        !matches!(self, Metric::FrequencyMin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Percent(f64),
    Count(u64),
}

impl Threshold {
    pub fn value(self) -> f64 {
        match self {
            Threshold::Percent(p) => p,
            Threshold::Count(c) => c as f64,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Percent(p) => write!(f, "{p}%"),
            Threshold::Count(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectionRule {
    pub name: String,
    pub metric: Metric,
    pub target: String,
    pub comparator: Comparator,
    pub threshold: Threshold,
    pub severity: Severity,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Eq => "==",
            Comparator::Ne => "!=",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }

    pub fn holds<T: PartialOrd>(self, lhs: T, rhs: T) -> bool {
        match self {
            Comparator::Eq => lhs == rhs,
            Comparator::Ne => lhs != rhs,
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Ge => lhs >= rhs,
        }
    }

    pub fn holds_ordering(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            Comparator::Eq => ord == Equal,
            Comparator::Ne => ord != Equal,
            Comparator::Lt => ord == Less,
            Comparator::Le => ord != Greater,
            Comparator::Gt => ord == Greater,
            Comparator::Ge => ord != Less,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    And,
    Or,
    Implies,
    Compare(Comparator),
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::And => "and",
            BinaryOp::Or => "or",
            BinaryOp::Implies => "implies",
            BinaryOp::Compare(c) => c.symbol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldRef {
    pub name: String,
    pub span: Span,
}

impl FieldRef {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            span: Span::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Str(String),
    Int(i64),
    Dec(f64),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    Present(FieldRef),
    Matches { field: FieldRef, pattern: LikePattern },
    Digits { field: FieldRef, n: u32 },
    Length { field: FieldRef, n: u32 },
    StartsWith { field: FieldRef, prefix: String },
    InSet { field: FieldRef, values: Vec<String> },
    DateValid { field: FieldRef, format: Option<DateFormat> },
    YearBetween { field: FieldRef, lo: Option<i32>, hi: Option<i32> },
    IsInteger(FieldRef),
    IsDecimal(FieldRef),
}

impl Predicate {
    pub fn name(&self) -> &'static str {
        match self {
            Predicate::Present(_) => "present",
            Predicate::Matches { .. } => "matches",
            Predicate::Digits { .. } => "digits",
            Predicate::Length { .. } => "length",
            Predicate::StartsWith { .. } => "starts_with",
            Predicate::InSet { .. } => "in_set",
            Predicate::DateValid { .. } => "date_valid",
            Predicate::YearBetween { .. } => "year_between",
            Predicate::IsInteger(_) => "is_integer",
            Predicate::IsDecimal(_) => "is_decimal",
        }
    }

    pub fn field(&self) -> &FieldRef {
        match self {
            Predicate::Present(f) | Predicate::IsInteger(f) | Predicate::IsDecimal(f) => f,
            Predicate::Matches { field, .. }
            | Predicate::Digits { field, .. }
            | Predicate::Length { field, .. }
            | Predicate::StartsWith { field, .. }
            | Predicate::InSet { field, .. }
            | Predicate::DateValid { field, .. }
            | Predicate::YearBetween { field, .. } => field,
        }
    }
}

/// Logical expression over field operands.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckExpr {
    Literal(Literal),
    Field(FieldRef),
    Call(Predicate),
    Not(Box<CheckExpr>),
    Binary {
        op: BinaryOp,
        lhs: Box<CheckExpr>,
        rhs: Box<CheckExpr>,
    },
}

impl CheckExpr {
    pub fn binary(op: BinaryOp, lhs: CheckExpr, rhs: CheckExpr) -> Self {
        CheckExpr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn not(inner: CheckExpr) -> Self {
        CheckExpr::Not(Box::new(inner))
    }

    /// Every field reference in the expression, in source order.
    pub fn field_refs(&self) -> Vec<&FieldRef> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a FieldRef>) {
        match self {
            CheckExpr::Literal(_) => {}
            CheckExpr::Field(f) => out.push(f),
            CheckExpr::Call(p) => out.push(p.field()),
            CheckExpr::Not(inner) => inner.collect_refs(out),
            CheckExpr::Binary { lhs, rhs, .. } => {
                lhs.collect_refs(out);
                rhs.collect_refs(out);
            }
        }
    }

    /// True for expressions producing a boolean (connectives, comparisons,
    /// predicate calls and boolean literals).
    pub fn is_boolean(&self) -> bool {
        !matches!(
            self,
            CheckExpr::Field(_)
                | CheckExpr::Literal(Literal::Str(_) | Literal::Int(_) | Literal::Dec(_))
        )
    }
}

/// Renders a number so that it re-lexes as the same literal kind.
pub(crate) fn number_text(value: f64) -> String {
    let text = value.to_string();
    if text.contains('.') || !value.is_finite() {
        text
    } else {
        format!("{text}.0")
    }
}
