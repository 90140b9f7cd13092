//! Three-valued evaluation of check expressions against one record.

use chrono::NaiveDate;

use super::truth::Truth;
use crate::checks::{
    check_date, check_digits, check_in_set, check_length, check_starts_with, check_year_between,
    is_decimal_text, is_integer_text, DateFormat,
};
use crate::dataset_io::{coerce_value, CellValue, TypedValue};
use crate::spec_dsl::{BinaryOp, CheckExpr, Comparator, FieldSpec, Literal, Predicate};

/// Resolves field names to their spec and the record's cell.
pub(crate) trait Row {
    fn lookup(&self, name: &str) -> Option<(&FieldSpec, &CellValue)>;
    fn current_year(&self) -> i32;
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Value<'a> {
    Null,
    Bool(bool),
    Int(i64),
    Dec(f64),
    Date(NaiveDate),
    Text(&'a str),
}

impl Value<'_> {
    fn as_number(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Dec(d) => Some(*d),
            Value::Text(t) if is_decimal_text(t) => t.parse().ok(),
            _ => None,
        }
    }

    fn as_date(&self) -> Option<NaiveDate> {
        match self {
            Value::Date(d) => Some(*d),
            Value::Text(t) => check_date(t, &DateFormat::iso()).date(),
            _ => None,
        }
    }

    fn text(&self) -> String {
        match self {
            Value::Null => String::new(),
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Dec(d) => d.to_string(),
            Value::Date(d) => d.format("%Y-%m-%d").to_string(),
            Value::Text(t) => t.to_string(),
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Dec(_))
    }
}

pub(crate) fn eval<R: Row>(expr: &CheckExpr, row: &R) -> Truth {
    match expr {
        CheckExpr::Literal(Literal::Bool(b)) => Truth::from(*b),
        // Rejected by validation; a bare value is never a condition.
        CheckExpr::Literal(_) | CheckExpr::Field(_) => Truth::Unknown,
        CheckExpr::Call(pred) => eval_predicate(pred, row),
        CheckExpr::Not(inner) => eval(inner, row).not(),
        CheckExpr::Binary { op, lhs, rhs } => match op {
            BinaryOp::And => {
                let l = eval(lhs, row);
                if l.is_false() {
                    return Truth::False;
                }
                l.and(eval(rhs, row))
            }
            BinaryOp::Or => {
                let l = eval(lhs, row);
                if l == Truth::True {
                    return Truth::True;
                }
                l.or(eval(rhs, row))
            }
            BinaryOp::Implies => {
                let l = eval(lhs, row);
                if l.is_false() {
                    return Truth::True;
                }
                l.implies(eval(rhs, row))
            }
            BinaryOp::Compare(cmp) => compare(*cmp, value(lhs, row), value(rhs, row)),
        },
    }
}

fn value<'a, R: Row>(expr: &'a CheckExpr, row: &'a R) -> Value<'a> {
    match expr {
        CheckExpr::Literal(lit) => match lit {
            Literal::Str(s) => Value::Text(s),
            Literal::Int(i) => Value::Int(*i),
            Literal::Dec(d) => Value::Dec(*d),
            Literal::Bool(b) => Value::Bool(*b),
        },
        CheckExpr::Field(f) => match row.lookup(&f.name) {
            None => Value::Null,
            Some((_, cell)) if cell.is_null() => Value::Null,
            Some((spec, cell)) => {
                let text = cell.trimmed();
                match coerce_value(text, &spec.declared_type) {
                    Some(TypedValue::Integer(i)) => Value::Int(i),
                    Some(TypedValue::Decimal(d)) => Value::Dec(d),
                    Some(TypedValue::Date(d)) => Value::Date(d),
                    Some(TypedValue::Text) | None => Value::Text(text),
                }
            }
        },
        other => match eval(other, row) {
            Truth::Unknown => Value::Null,
            t => Value::Bool(t == Truth::True),
        },
    }
}

fn compare(cmp: Comparator, lhs: Value<'_>, rhs: Value<'_>) -> Truth {
    let ordering = match (lhs, rhs) {
        (Value::Null, _) | (_, Value::Null) => return Truth::Unknown,
        (Value::Bool(a), Value::Bool(b)) => a.cmp(&b),
        (Value::Int(a), Value::Int(b)) => a.cmp(&b),
        (Value::Date(a), b) | (b, Value::Date(a)) if b.as_date().is_some() => {
            let b = b.as_date().unwrap();
            if matches!(lhs, Value::Date(_)) {
                a.cmp(&b)
            } else {
                b.cmp(&a)
            }
        }
        (a, b) if (a.is_numeric() || b.is_numeric()) && a.as_number().is_some() && b.as_number().is_some() => {
            match a.as_number().unwrap().partial_cmp(&b.as_number().unwrap()) {
                Some(ord) => ord,
                None => return Truth::Unknown,
            }
        }
        (a, b) => a.text().cmp(&b.text()),
    };
    Truth::from(cmp.holds_ordering(ordering))
}

fn eval_predicate<R: Row>(pred: &Predicate, row: &R) -> Truth {
    let Some((spec, cell)) = row.lookup(&pred.field().name) else {
        return Truth::Unknown;
    };
    if let Predicate::Present(_) = pred {
        return Truth::from(!cell.is_null());
    }
    if cell.is_null() {
        return Truth::Unknown;
    }
    let text = cell.trimmed();
    let result = match pred {
        Predicate::Present(_) => unreachable!(),
        Predicate::Matches { pattern, .. } => pattern.matches(text),
        Predicate::Digits { n, .. } => check_digits(text, *n as usize),
        Predicate::Length { n, .. } => check_length(text, *n as usize),
        Predicate::StartsWith { prefix, .. } => check_starts_with(text, prefix),
        Predicate::InSet { values, .. } => check_in_set(text, values),
        Predicate::IsInteger(_) => is_integer_text(text),
        Predicate::IsDecimal(_) => is_decimal_text(text),
        Predicate::DateValid { format, .. } => {
            match format.as_ref().or(spec.date_format()) {
                Some(fmt) => check_date(text, fmt).is_valid(),
                None => return Truth::Unknown,
            }
        }
        Predicate::YearBetween { lo, hi, .. } => {
            let Some(date) = spec.date_format().and_then(|f| check_date(text, f).date()) else {
                return Truth::Unknown;
            };
            let lo = lo.unwrap_or(DEFAULT_MIN_YEAR);
            let hi = hi.unwrap_or_else(|| row.current_year());
            check_year_between(date, lo, hi)
        }
    };
    Truth::from(result)
}

/// Lower bound for `year_between` when none is given.
pub const DEFAULT_MIN_YEAR: i32 = 1800;
