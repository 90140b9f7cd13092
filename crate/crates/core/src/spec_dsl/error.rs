use std::fmt;

use thiserror::Error;

use super::ast::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecErrorKind {
    Syntax(String),
    UnknownField { name: String },
    UnknownTarget { name: String },
    Duplicate { what: &'static str, name: String },
    MalformedDateFormat(String),
    MalformedPattern(String),
    ThresholdOutOfRange(String),
    Type(String),
    Invalid(String),
}

impl fmt::Display for SpecErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            SpecErrorKind::UnknownField { name } => write!(f, "unknown field `{name}`"),
            SpecErrorKind::UnknownTarget { name } => {
                write!(f, "unknown field or rule `{name}`")
            }
            SpecErrorKind::Duplicate { what, name } => write!(f, "duplicate {what} `{name}`"),
            SpecErrorKind::MalformedDateFormat(msg) => write!(f, "malformed date format: {msg}"),
            SpecErrorKind::MalformedPattern(msg) => write!(f, "malformed pattern: {msg}"),
            SpecErrorKind::ThresholdOutOfRange(msg) => write!(f, "threshold out of range: {msg}"),
            SpecErrorKind::Type(msg) => write!(f, "type error: {msg}"),
            SpecErrorKind::Invalid(msg) => f.write_str(msg),
        }
    }
}

/// A spec problem with the location it was found at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct SpecError {
    pub kind: SpecErrorKind,
    pub line: u32,
    pub column: u32,
}

impl SpecError {
    pub fn new(kind: SpecErrorKind, span: Span) -> Self {
        Self {
            kind,
            line: span.line,
            column: span.column,
        }
    }

    pub fn span(&self) -> Span {
        Span::new(self.line, self.column)
    }
}
