//! Canonical text form: two-space indentation, one statement per line,
//! explicit nullability, explicit field arguments and check names.

use std::fmt::{self, Write as _};

use super::ast::*;
use super::lexer::quote;

pub fn serialize_spec(spec: &QualitySpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "version {};", spec.version);
    for object in &spec.objects {
        out.push('\n');
        write_object(&mut out, object);
    }
    out
}

fn write_object(out: &mut String, object: &DataObjectClass) {
    let _ = writeln!(out, "object {} {{", object.name);
    if let Some(hint) = &object.source_hint {
        let _ = writeln!(out, "  source {};", quote(hint));
    }
    for field in &object.fields {
        write_field(out, field);
    }
    for rule in &object.record_rules {
        let _ = write!(out, "  rule {}: {}", rule.name, rule.expr);
        write_severity(out, non_default(rule.severity));
        out.push_str(";\n");
    }
    for rule in &object.collection_rules {
        let _ = write!(
            out,
            "  expect {}: {}({}) {} {}",
            rule.name,
            rule.metric.keyword(),
            rule.target,
            rule.comparator.symbol(),
            rule.threshold
        );
        write_severity(out, non_default(rule.severity));
        out.push_str(";\n");
    }
    out.push_str("}\n");
}

fn write_field(out: &mut String, field: &FieldSpec) {
    let _ = write!(
        out,
        "  field {}: {} {}",
        field.name,
        type_text(&field.declared_type),
        field.nullability.keyword()
    );
    write_severity(out, non_default(field.severity_default));
    if field.checks.is_empty() && field.placeholder_tokens.is_none() {
        out.push_str(";\n");
        return;
    }
    out.push_str(" {\n");
    if let Some(tokens) = &field.placeholder_tokens {
        let _ = write!(out, "    placeholders {}", string_set(tokens));
        write_severity(out, field.placeholder_severity);
        out.push_str(";\n");
    }
    for check in &field.checks {
        let _ = write!(out, "    check {}: {}", check.name, check.expr);
        write_severity(out, check.severity);
        out.push_str(";\n");
    }
    out.push_str("  }\n");
}

// Check and placeholder severities are optional, so an explicit `error`
// there must survive; elsewhere `error` is the default and stays implicit.
fn non_default(severity: Severity) -> Option<Severity> {
    Some(severity).filter(|s| *s != Severity::Error)
}

fn write_severity(out: &mut String, severity: Option<Severity>) {
    if let Some(sev) = severity {
        let _ = write!(out, " {sev}");
    }
}

pub(crate) fn type_text(ty: &FieldType) -> String {
    match ty {
        FieldType::Date(fmt) => format!("date({})", quote(&fmt.to_string())),
        other => other.to_string(),
    }
}

fn string_set(values: &[String]) -> String {
    let items: Vec<String> = values.iter().map(|v| quote(v)).collect();
    format!("{{{}}}", items.join(", "))
}

// Binding strength; larger binds tighter.
fn precedence(expr: &CheckExpr) -> u8 {
    match expr {
        CheckExpr::Binary { op, .. } => match op {
            BinaryOp::Implies => 1,
            BinaryOp::Or => 2,
            BinaryOp::And => 3,
            BinaryOp::Compare(_) => 5,
        },
        CheckExpr::Not(_) => 4,
        _ => 6,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, expr: &CheckExpr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({expr})")
    } else {
        write!(f, "{expr}")
    }
}

impl fmt::Display for CheckExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckExpr::Literal(lit) => match lit {
                Literal::Str(s) => f.write_str(&quote(s)),
                Literal::Int(i) => write!(f, "{i}"),
                Literal::Dec(d) => f.write_str(&number_text(*d)),
                Literal::Bool(b) => write!(f, "{b}"),
            },
            CheckExpr::Field(field) => f.write_str(&field.name),
            CheckExpr::Call(pred) => write!(f, "{pred}"),
            CheckExpr::Not(inner) => {
                f.write_str("not ")?;
                write_operand(f, inner, precedence(inner) < 4)
            }
            CheckExpr::Binary { op, lhs, rhs } => {
                let mine = precedence(self);
                let (lhs_parens, rhs_parens) = match op {
                    // Right-associative.
                    BinaryOp::Implies => (precedence(lhs) <= mine, precedence(rhs) < mine),
                    // Comparison operands are primaries.
                    BinaryOp::Compare(_) => (precedence(lhs) < 6, precedence(rhs) < 6),
                    _ => (precedence(lhs) < mine, precedence(rhs) <= mine),
                };
                write_operand(f, lhs, lhs_parens)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, rhs, rhs_parens)
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = &self.field().name;
        write!(f, "{}({field}", self.name())?;
        match self {
            Predicate::Present(_) | Predicate::IsInteger(_) | Predicate::IsDecimal(_) => {}
            Predicate::Matches { pattern, .. } => {
                write!(f, ", {}", quote(pattern.source()))?;
                if pattern.is_case_insensitive() {
                    f.write_str(", nocase")?;
                }
            }
            Predicate::Digits { n, .. } | Predicate::Length { n, .. } => write!(f, ", {n}")?,
            Predicate::StartsWith { prefix, .. } => write!(f, ", {}", quote(prefix))?,
            Predicate::InSet { values, .. } => write!(f, ", {}", string_set(values))?,
            Predicate::DateValid { format, .. } => {
                if let Some(fmt) = format {
                    write!(f, ", {}", quote(&fmt.to_string()))?;
                }
            }
            Predicate::YearBetween { lo, hi, .. } => {
                if let Some(lo) = lo {
                    write!(f, ", {lo}")?;
                }
                if let Some(hi) = hi {
                    write!(f, ", {hi}")?;
                }
            }
        }
        f.write_str(")")
    }
}
