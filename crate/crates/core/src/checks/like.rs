//! SQL-LIKE style wildcard patterns.
//!
//! `%` matches any run of characters (including none), `_` matches exactly
//! one character, and a backslash makes the next character literal. Matching
//! is anchored at both ends of the value.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern ends with a dangling escape character")]
    DanglingEscape,
}

/// One compiled element of a [`LikePattern`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternAtom {
    Literal(String),
    AnySequence,
    AnyOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LikePattern {
    source: String,
    atoms: Vec<PatternAtom>,
    case_insensitive: bool,
}

impl LikePattern {
    pub fn new(source: &str) -> Result<Self, PatternError> {
        let mut atoms = Vec::new();
        let mut literal = String::new();
        let mut chars = source.chars();
        while let Some(c) = chars.next() {
            match c {
                '\\' => literal.push(chars.next().ok_or(PatternError::DanglingEscape)?),
                '%' | '_' => {
                    if !literal.is_empty() {
                        atoms.push(PatternAtom::Literal(std::mem::take(&mut literal)));
                    }
                    atoms.push(if c == '%' {
                        PatternAtom::AnySequence
                    } else {
                        PatternAtom::AnyOne
                    });
                }
                _ => literal.push(c),
            }
        }
        if !literal.is_empty() {
            atoms.push(PatternAtom::Literal(literal));
        }
        Ok(Self {
            source: source.to_string(),
            atoms,
            case_insensitive: false,
        })
    }

    pub fn with_case_insensitive(mut self, case_insensitive: bool) -> Self {
        self.case_insensitive = case_insensitive;
        self
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn atoms(&self) -> &[PatternAtom] {
        &self.atoms
    }

    pub fn is_case_insensitive(&self) -> bool {
        self.case_insensitive
    }

    /// Rebuilds pattern text from the compiled atoms, escaping only `%`, `_`
    /// and `\` inside literal runs.
    pub fn decompile(&self) -> String {
        let mut out = String::with_capacity(self.source.len());
        for atom in &self.atoms {
            match atom {
                PatternAtom::AnySequence => out.push('%'),
                PatternAtom::AnyOne => out.push('_'),
                PatternAtom::Literal(text) => {
                    for c in text.chars() {
                        if matches!(c, '%' | '_' | '\\') {
                            out.push('\\');
                        }
                        out.push(c);
                    }
                }
            }
        }
        out
    }

    pub fn matches(&self, value: &str) -> bool {
        if self.case_insensitive {
            let folded: Vec<Tok> = self.tokens(true);
            let value: Vec<char> = value.to_lowercase().chars().collect();
            wildcard_match(&value, &folded)
        } else {
            let value: Vec<char> = value.chars().collect();
            wildcard_match(&value, &self.tokens(false))
        }
    }

    fn tokens(&self, fold: bool) -> Vec<Tok> {
        let mut toks = Vec::new();
        for atom in &self.atoms {
            match atom {
                PatternAtom::AnySequence => {
                    if toks.last() != Some(&Tok::Seq) {
                        toks.push(Tok::Seq);
                    }
                }
                PatternAtom::AnyOne => toks.push(Tok::One),
                PatternAtom::Literal(text) if fold => {
                    toks.extend(text.to_lowercase().chars().map(Tok::Char))
                }
                PatternAtom::Literal(text) => toks.extend(text.chars().map(Tok::Char)),
            }
        }
        toks
    }
}

impl fmt::Display for LikePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Char(char),
    One,
    Seq,
}

// Iterative matcher that backtracks only to the most recent `%`; worst case
// O(len(value) * len(pattern)).
fn wildcard_match(value: &[char], pattern: &[Tok]) -> bool {
    let (mut v, mut p) = (0usize, 0usize);
    let mut star: Option<(usize, usize)> = None;
    while v < value.len() {
        match pattern.get(p) {
            Some(Tok::Char(c)) if *c == value[v] => {
                v += 1;
                p += 1;
            }
            Some(Tok::One) => {
                v += 1;
                p += 1;
            }
            Some(Tok::Seq) => {
                star = Some((p, v));
                p += 1;
            }
            _ => match star {
                Some((sp, sv)) => {
                    p = sp + 1;
                    v = sv + 1;
                    star = Some((sp, sv + 1));
                }
                None => return false,
            },
        }
    }
    pattern[p..].iter().all(|t| *t == Tok::Seq)
}

/// Anchored LIKE match of `value` against `pattern`.
pub fn match_like(value: &str, pattern: &LikePattern) -> bool {
    pattern.matches(value)
}
