//! Fixed-layout date formats built from `DD`, `MM`, `YYYY` and separators.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DateFormatError {
    #[error("date format {0:?} must contain each of DD, MM and YYYY exactly once")]
    MissingOrRepeatedToken(String),
    #[error("date format {format:?} contains unsupported character {found:?}")]
    UnsupportedCharacter { format: String, found: char },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DateToken {
    Day,
    Month,
    Year,
    Literal(char),
}

impl DateToken {
    fn width(self) -> usize {
        match self {
            DateToken::Day | DateToken::Month => 2,
            DateToken::Year => 4,
            DateToken::Literal(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DateFormat {
    tokens: Vec<DateToken>,
}

impl DateFormat {
    pub fn tokens(&self) -> &[DateToken] {
        &self.tokens
    }

    /// ISO `YYYY-MM-DD`.
    pub fn iso() -> Self {
        "YYYY-MM-DD".parse().expect("static format")
    }

    pub fn format(&self, date: NaiveDate) -> String {
        let mut out = String::new();
        for token in &self.tokens {
            match token {
                DateToken::Day => out.push_str(&format!("{:02}", date.day())),
                DateToken::Month => out.push_str(&format!("{:02}", date.month())),
                DateToken::Year => out.push_str(&format!("{:04}", date.year())),
                DateToken::Literal(c) => out.push(*c),
            }
        }
        out
    }
}

impl FromStr for DateFormat {
    type Err = DateFormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = Vec::new();
        let mut rest = s;
        while let Some(c) = rest.chars().next() {
            let (token, len) = if rest.starts_with("YYYY") {
                (DateToken::Year, 4)
            } else if rest.starts_with("DD") {
                (DateToken::Day, 2)
            } else if rest.starts_with("MM") {
                (DateToken::Month, 2)
            } else if c.is_alphanumeric() {
                return Err(DateFormatError::UnsupportedCharacter {
                    format: s.to_string(),
                    found: c,
                });
            } else {
                (DateToken::Literal(c), c.len_utf8())
            };
            tokens.push(token);
            rest = &rest[len..];
        }
        for required in [DateToken::Day, DateToken::Month, DateToken::Year] {
            if tokens.iter().filter(|t| **t == required).count() != 1 {
                return Err(DateFormatError::MissingOrRepeatedToken(s.to_string()));
            }
        }
        Ok(Self { tokens })
    }
}

impl fmt::Display for DateFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for token in &self.tokens {
            match token {
                DateToken::Day => f.write_str("DD")?,
                DateToken::Month => f.write_str("MM")?,
                DateToken::Year => f.write_str("YYYY")?,
                DateToken::Literal(c) => write!(f, "{c}")?,
            }
        }
        Ok(())
    }
}

/// Outcome of checking a value against a [`DateFormat`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DateCheck {
    Valid(NaiveDate),
    /// Layout or separators do not match the format.
    WrongFormat,
    /// Layout matches but no such calendar day exists.
    InvalidDate,
}

impl DateCheck {
    pub fn is_valid(self) -> bool {
        matches!(self, DateCheck::Valid(_))
    }

    pub fn date(self) -> Option<NaiveDate> {
        match self {
            DateCheck::Valid(d) => Some(d),
            _ => None,
        }
    }
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub fn days_in_month(year: i32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap_year(year) => 29,
        2 => 28,
        _ => 0,
    }
}

pub fn check_date(value: &str, fmt: &DateFormat) -> DateCheck {
    let bytes = value.as_bytes();
    let (mut day, mut month, mut year) = (0u32, 0u32, 0i32);
    let mut pos = 0usize;
    for token in &fmt.tokens {
        if let DateToken::Literal(c) = token {
            let mut buf = [0u8; 4];
            let lit = c.encode_utf8(&mut buf).as_bytes();
            if !bytes[pos..].starts_with(lit) {
                return DateCheck::WrongFormat;
            }
            pos += lit.len();
            continue;
        }
        let width = token.width();
        let Some(digits) = bytes.get(pos..pos + width) else {
            return DateCheck::WrongFormat;
        };
        if !digits.iter().all(u8::is_ascii_digit) {
            return DateCheck::WrongFormat;
        }
        let n = digits.iter().fold(0u32, |acc, d| acc * 10 + u32::from(d - b'0'));
        match token {
            DateToken::Day => day = n,
            DateToken::Month => month = n,
            _ => year = n as i32,
        }
        pos += width;
    }
    if pos != bytes.len() {
        return DateCheck::WrongFormat;
    }
    if !(1..=12).contains(&month) || day == 0 || day > days_in_month(year, month) {
        return DateCheck::InvalidDate;
    }
    match NaiveDate::from_ymd_opt(year, month, day) {
        Some(date) => DateCheck::Valid(date),
        None => DateCheck::InvalidDate,
    }
}

/// Inclusive year range test.
pub fn check_year_between(value: NaiveDate, lo: i32, hi: i32) -> bool {
    (lo..=hi).contains(&value.year())
}
