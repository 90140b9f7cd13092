//! Primitive predicates used by check expressions.
//!
//! Every function here is pure. Value arguments are expected to be the
//! trimmed, non-null cell text.

mod date;
mod like;

pub use date::{
    check_date, check_year_between, days_in_month, is_leap_year, DateCheck, DateFormat,
    DateFormatError, DateToken,
};
pub use like::{match_like, LikePattern, PatternAtom, PatternError};

use crate::dataset_io::CellValue;

/// Placeholder tokens flagged when a field enables placeholder detection
/// without listing its own.
pub const DEFAULT_PLACEHOLDERS: [&str; 2] = ["-", "nav"];

/// Existence of a value: anything that is not NULL, placeholders included.
pub fn check_present(cell: &CellValue) -> bool {
    !cell.is_null()
}

/// Only ASCII digits, exactly `n` of them. Leading zeros count.
pub fn check_digits(value: &str, n: usize) -> bool {
    value.len() == n && value.bytes().all(|b| b.is_ascii_digit())
}

/// Length in characters.
pub fn check_length(value: &str, n: usize) -> bool {
    value.chars().count() == n
}

pub fn check_starts_with(value: &str, prefix: &str) -> bool {
    value.starts_with(prefix)
}

/// Exact, case-sensitive membership.
pub fn check_in_set<S: AsRef<str>>(value: &str, allowed: &[S]) -> bool {
    allowed.iter().any(|a| a.as_ref() == value)
}

/// True when the whole trimmed value equals one of `tokens`, ignoring case.
pub fn check_placeholder<S: AsRef<str>>(value: &str, tokens: &[S]) -> bool {
    let value = trim_ascii(value);
    tokens.iter().any(|t| {
        let t = t.as_ref();
        t == value || t.to_lowercase() == value.to_lowercase()
    })
}

/// Optional leading minus followed by one or more ASCII digits.
pub fn is_integer_text(value: &str) -> bool {
    let digits = value.strip_prefix('-').unwrap_or(value);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Integer text, optionally with a single dot; at least one digit overall.
pub fn is_decimal_text(value: &str) -> bool {
    let body = value.strip_prefix('-').unwrap_or(value);
    let mut dots = 0;
    let mut digits = 0;
    for b in body.bytes() {
        match b {
            b'.' => dots += 1,
            b'0'..=b'9' => digits += 1,
            _ => return false,
        }
    }
    dots <= 1 && digits > 0
}

pub(crate) fn trim_ascii(value: &str) -> &str {
    value.trim_matches(|c: char| c.is_ascii_whitespace())
}
