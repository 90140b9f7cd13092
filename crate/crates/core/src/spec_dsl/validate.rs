//! Semantic checks over a parsed spec.

use std::collections::HashSet;

use super::ast::*;
use super::error::{SpecError, SpecErrorKind};
use super::parser::{IMPLICIT_CHECKS, RESERVED_WORDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiagnosticLevel {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub level: DiagnosticLevel,
    pub kind: SpecErrorKind,
    pub span: Span,
}

impl Diagnostic {
    fn error(kind: SpecErrorKind, span: Span) -> Self {
        Self {
            level: DiagnosticLevel::Error,
            kind,
            span,
        }
    }

    fn warning(message: String, span: Span) -> Self {
        Self {
            level: DiagnosticLevel::Warning,
            kind: SpecErrorKind::Invalid(message),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.level == DiagnosticLevel::Error
    }

    pub fn into_error(self) -> SpecError {
        SpecError::new(self.kind, self.span)
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let level = match self.level {
            DiagnosticLevel::Warning => "warning",
            DiagnosticLevel::Error => "error",
        };
        write!(f, "{}: {level}: {}", self.span, self.kind)
    }
}

/// Errors for broken invariants plus warnings for suspicious constructs.
///
/// Errors come out in source order; `parse_spec` reports the first.
pub fn check_spec_semantics(spec: &QualitySpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if spec.objects.is_empty() {
        out.push(Diagnostic::error(
            SpecErrorKind::Invalid("a specification must declare at least one object".into()),
            Span::default(),
        ));
    }
    let mut objects = HashSet::new();
    for object in &spec.objects {
        if !objects.insert(object.name.as_str()) {
            out.push(Diagnostic::error(
                SpecErrorKind::Duplicate {
                    what: "object",
                    name: object.name.clone(),
                },
                object.span,
            ));
        }
        check_object(object, &mut out);
    }
    out
}

fn check_identifier(name: &str, span: Span, out: &mut Vec<Diagnostic>) {
    let mut chars = name.chars();
    let valid = chars
        .next()
        .is_some_and(super::lexer::is_ident_start)
        && chars.all(super::lexer::is_ident_continue);
    if !valid {
        out.push(Diagnostic::error(
            SpecErrorKind::Invalid(format!("`{name}` is not a valid identifier")),
            span,
        ));
    } else if RESERVED_WORDS.contains(&name) {
        out.push(Diagnostic::error(
            SpecErrorKind::Invalid(format!("`{name}` is a reserved word")),
            span,
        ));
    }
}

fn check_object(object: &DataObjectClass, out: &mut Vec<Diagnostic>) {
    check_identifier(&object.name, object.span, out);
    let mut names = HashSet::new();
    for field in &object.fields {
        check_identifier(&field.name, field.span, out);
        if !names.insert(field.name.as_str()) {
            out.push(Diagnostic::error(
                SpecErrorKind::Duplicate {
                    what: "field",
                    name: field.name.clone(),
                },
                field.span,
            ));
        }
    }

    for field in &object.fields {
        let mut checks: HashSet<&str> = IMPLICIT_CHECKS.into_iter().collect();
        if let Some(tokens) = &field.placeholder_tokens {
            if tokens.is_empty() {
                out.push(Diagnostic::error(
                    SpecErrorKind::Invalid(format!(
                        "placeholders of field `{}` must list at least one token",
                        field.name
                    )),
                    field.span,
                ));
            }
            let mut seen = HashSet::new();
            for token in tokens {
                if !seen.insert(token.to_lowercase()) {
                    out.push(Diagnostic::warning(
                        format!("placeholder {token:?} listed twice in field `{}`", field.name),
                        field.span,
                    ));
                }
            }
        }
        for check in &field.checks {
            check_identifier(&check.name, check.span, out);
            if !checks.insert(check.name.as_str()) {
                out.push(Diagnostic::error(
                    SpecErrorKind::Duplicate {
                        what: "check",
                        name: format!("{}.{}", field.name, check.name),
                    },
                    check.span,
                ));
            }
            check_expr(object, &check.expr, check.span, out);
        }
    }

    let mut rules = HashSet::new();
    for rule in &object.record_rules {
        check_identifier(&rule.name, rule.span, out);
        if !rules.insert(rule.name.as_str()) || names.contains(rule.name.as_str()) {
            out.push(Diagnostic::error(
                SpecErrorKind::Duplicate {
                    what: "rule",
                    name: rule.name.clone(),
                },
                rule.span,
            ));
        }
        if rule.expr.field_refs().is_empty() {
            out.push(Diagnostic::error(
                SpecErrorKind::Invalid(format!(
                    "rule `{}` must reference at least one field",
                    rule.name
                )),
                rule.span,
            ));
        }
        check_expr(object, &rule.expr, rule.span, out);
        nullable_comparison_lint(object, rule, out);
    }

    for rule in &object.collection_rules {
        check_identifier(&rule.name, rule.span, out);
        if !rules.insert(rule.name.as_str()) || names.contains(rule.name.as_str()) {
            out.push(Diagnostic::error(
                SpecErrorKind::Duplicate {
                    what: "rule",
                    name: rule.name.clone(),
                },
                rule.span,
            ));
        }
        let is_field = object.field(&rule.target).is_some();
        let is_rule = object.record_rule(&rule.target).is_some();
        let target_ok = match rule.metric {
            Metric::ErrorRate => is_field || is_rule,
            Metric::NullRate | Metric::FrequencyMin => is_field,
        };
        if !target_ok {
            let kind = if is_rule {
                SpecErrorKind::Invalid(format!(
                    "{} applies to fields, but `{}` is a rule",
                    rule.metric.keyword(),
                    rule.target
                ))
            } else {
                SpecErrorKind::UnknownTarget {
                    name: rule.target.clone(),
                }
            };
            out.push(Diagnostic::error(kind, rule.span));
        }
        match (rule.metric.is_rate(), rule.threshold) {
            (true, Threshold::Percent(p)) if !(0.0..=100.0).contains(&p) => {
                out.push(Diagnostic::error(
                    SpecErrorKind::ThresholdOutOfRange(format!(
                        "{p}% is outside [0, 100] in rule `{}`",
                        rule.name
                    )),
                    rule.span,
                ))
            }
            (true, Threshold::Count(_)) | (false, Threshold::Percent(_)) => {
                out.push(Diagnostic::error(
                    SpecErrorKind::Invalid(format!(
                        "rule `{}`: {} needs a {} threshold",
                        rule.name,
                        rule.metric.keyword(),
                        if rule.metric.is_rate() { "percentage" } else { "count" }
                    )),
                    rule.span,
                ))
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Bool,
    Value,
}

fn check_expr(object: &DataObjectClass, expr: &CheckExpr, span: Span, out: &mut Vec<Diagnostic>) {
    for field_ref in expr.field_refs() {
        if object.field(&field_ref.name).is_none() {
            let at = if field_ref.span.line == 0 { span } else { field_ref.span };
            out.push(Diagnostic::error(
                SpecErrorKind::UnknownField {
                    name: field_ref.name.clone(),
                },
                at,
            ));
        }
    }
    match type_of(object, expr, span, out) {
        Some(Ty::Bool) | None => {}
        Some(Ty::Value) => out.push(Diagnostic::error(
            SpecErrorKind::Type(format!("`{expr}` is a value, not a condition")),
            span,
        )),
    }
}

// Returns None once an error has been reported for the subtree.
fn type_of(
    object: &DataObjectClass,
    expr: &CheckExpr,
    span: Span,
    out: &mut Vec<Diagnostic>,
) -> Option<Ty> {
    match expr {
        CheckExpr::Literal(Literal::Bool(_)) => Some(Ty::Bool),
        CheckExpr::Literal(_) | CheckExpr::Field(_) => Some(Ty::Value),
        CheckExpr::Call(pred) => {
            check_predicate(object, pred, span, out);
            Some(Ty::Bool)
        }
        CheckExpr::Not(inner) => {
            let ty = type_of(object, inner, span, out)?;
            if ty != Ty::Bool {
                out.push(Diagnostic::error(
                    SpecErrorKind::Type(format!("`not` needs a condition, found `{inner}`")),
                    span,
                ));
                return None;
            }
            Some(Ty::Bool)
        }
        CheckExpr::Binary { op, lhs, rhs } => {
            let l = type_of(object, lhs, span, out);
            let r = type_of(object, rhs, span, out);
            let (l, r) = (l?, r?);
            match op {
                BinaryOp::And | BinaryOp::Or | BinaryOp::Implies => {
                    if l != Ty::Bool || r != Ty::Bool {
                        out.push(Diagnostic::error(
                            SpecErrorKind::Type(format!(
                                "operands of `{}` must be conditions in `{expr}`",
                                op.symbol()
                            )),
                            span,
                        ));
                        return None;
                    }
                }
                BinaryOp::Compare(cmp) => {
                    let ok = match (l, r) {
                        (Ty::Value, Ty::Value) => true,
                        (Ty::Bool, Ty::Bool) => matches!(cmp, Comparator::Eq | Comparator::Ne),
                        _ => false,
                    };
                    if !ok {
                        out.push(Diagnostic::error(
                            SpecErrorKind::Type(format!("cannot compare operands in `{expr}`")),
                            span,
                        ));
                        return None;
                    }
                }
            }
            Some(Ty::Bool)
        }
    }
}

fn check_predicate(object: &DataObjectClass, pred: &Predicate, span: Span, out: &mut Vec<Diagnostic>) {
    let Some(field) = object.field(&pred.field().name) else {
        return;
    };
    let needs_date = match pred {
        Predicate::DateValid { format: None, .. } => true,
        Predicate::YearBetween { .. } => true,
        _ => false,
    };
    if needs_date && field.date_format().is_none() {
        out.push(Diagnostic::error(
            SpecErrorKind::Type(format!(
                "`{}` needs a date-typed field, but `{}` is {}",
                pred.name(),
                field.name,
                field.declared_type
            )),
            span,
        ));
    }
    match pred {
        Predicate::YearBetween {
            lo: Some(lo),
            hi: Some(hi),
            ..
        } if lo > hi => out.push(Diagnostic::error(
            SpecErrorKind::Invalid(format!("year range [{lo}, {hi}] is empty")),
            span,
        )),
        Predicate::YearBetween {
            lo: None,
            hi: Some(_),
            ..
        } => out.push(Diagnostic::error(
            SpecErrorKind::Invalid("year_between upper bound given without a lower bound".into()),
            span,
        )),
        Predicate::Digits { n: 0, .. } | Predicate::Length { n: 0, .. } => {
            out.push(Diagnostic::error(
                SpecErrorKind::Invalid(format!("`{}` length must be positive", pred.name())),
                span,
            ))
        }
        Predicate::InSet { values, .. } => {
            let mut seen = HashSet::new();
            for value in values {
                if !seen.insert(value.as_str()) {
                    out.push(Diagnostic::warning(
                        format!("value {value:?} appears more than once in in_set"),
                        span,
                    ));
                }
            }
        }
        _ => {}
    }
}

/// Comparisons against a nullable field are UNKNOWN on NULL and never fire;
/// warn when the rule never tests that field with `present`.
fn nullable_comparison_lint(object: &DataObjectClass, rule: &RecordRule, out: &mut Vec<Diagnostic>) {
    let mut compared = Vec::new();
    let mut guarded = HashSet::new();
    walk(&rule.expr, &mut |e| match e {
        CheckExpr::Call(Predicate::Present(f)) => {
            guarded.insert(f.name.clone());
        }
        CheckExpr::Binary {
            op: BinaryOp::Compare(_),
            lhs,
            rhs,
        } => {
            for side in [lhs, rhs] {
                if let CheckExpr::Field(f) = side.as_ref() {
                    compared.push(f.name.clone());
                }
            }
        }
        _ => {}
    });
    for name in compared {
        let nullable = object
            .field(&name)
            .is_some_and(|f| f.nullability == Nullability::Nullable);
        if nullable && !guarded.contains(&name) {
            out.push(Diagnostic::warning(
                format!(
                    "rule `{}` compares nullable field `{name}` without present({name}); NULL values never violate it",
                    rule.name
                ),
                rule.span,
            ));
            guarded.insert(name);
        }
    }
}

fn walk(expr: &CheckExpr, visit: &mut impl FnMut(&CheckExpr)) {
    visit(expr);
    match expr {
        CheckExpr::Not(inner) => walk(inner, visit),
        CheckExpr::Binary { lhs, rhs, .. } => {
            walk(lhs, visit);
            walk(rhs, visit);
        }
        _ => {}
    }
}
