use super::ast::Span;
use super::error::{SpecError, SpecErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Ident(String),
    Str(String),
    /// Unsigned numeric text; a dot makes it a decimal.
    Number(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Percent,
    Minus,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Token {
    pub(crate) fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Str(s) => format!("string {s:?}"),
            Token::Number(s) => format!("number {s}"),
            Token::Eof => "end of input".to_string(),
            other => format!("`{}`", other.punct()),
        }
    }

    fn punct(&self) -> &'static str {
        match self {
            Token::LBrace => "{",
            Token::RBrace => "}",
            Token::LParen => "(",
            Token::RParen => ")",
            Token::Colon => ":",
            Token::Semi => ";",
            Token::Comma => ",",
            Token::Percent => "%",
            Token::Minus => "-",
            Token::EqEq => "==",
            Token::NotEq => "!=",
            Token::Lt => "<",
            Token::Le => "<=",
            Token::Gt => ">",
            Token::Ge => ">=",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub token: Token,
    pub span: Span,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span::new(self.line, self.column)
    }
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Spanned>, SpecError> {
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '#' {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let span = cur.span();
        let Some(c) = cur.bump() else {
            out.push(Spanned {
                token: Token::Eof,
                span,
            });
            return Ok(out);
        };
        let token = match c {
            '{' => Token::LBrace,
            '}' => Token::RBrace,
            '(' => Token::LParen,
            ')' => Token::RParen,
            ':' => Token::Colon,
            ';' => Token::Semi,
            ',' => Token::Comma,
            '%' => Token::Percent,
            '-' => Token::Minus,
            '=' | '!' | '<' | '>' => {
                let eq = cur.peek() == Some('=');
                if eq {
                    cur.bump();
                }
                match (c, eq) {
                    ('=', true) => Token::EqEq,
                    ('!', true) => Token::NotEq,
                    ('<', false) => Token::Lt,
                    ('<', true) => Token::Le,
                    ('>', false) => Token::Gt,
                    ('>', true) => Token::Ge,
                    _ => {
                        return Err(SpecError::new(
                            SpecErrorKind::Syntax(format!(
                                "unexpected `{c}`; comparisons are written ==, !=, <, <=, >, >="
                            )),
                            span,
                        ))
                    }
                }
            }
            '"' => Token::Str(lex_string(&mut cur, span)?),
            c if c.is_ascii_digit() => {
                let mut text = String::from(c);
                while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                    text.push(cur.bump().unwrap());
                }
                if cur.peek() == Some('.') {
                    text.push(cur.bump().unwrap());
                    if !cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(SpecError::new(
                            SpecErrorKind::Syntax(format!("malformed number `{text}`")),
                            span,
                        ));
                    }
                    while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                        text.push(cur.bump().unwrap());
                    }
                }
                Token::Number(text)
            }
            c if is_ident_start(c) => {
                let mut text = String::from(c);
                while cur.peek().is_some_and(is_ident_continue) {
                    text.push(cur.bump().unwrap());
                }
                Token::Ident(text)
            }
            other => {
                return Err(SpecError::new(
                    SpecErrorKind::Syntax(format!("unexpected character {other:?}")),
                    span,
                ))
            }
        };
        out.push(Spanned { token, span });
    }
}

fn lex_string(cur: &mut Cursor<'_>, start: Span) -> Result<String, SpecError> {
    let mut text = String::new();
    loop {
        let span = cur.span();
        match cur.bump() {
            None => {
                return Err(SpecError::new(
                    SpecErrorKind::Syntax("unterminated string literal".to_string()),
                    start,
                ))
            }
            Some('"') => return Ok(text),
            Some('\\') => match cur.bump() {
                Some('"') => text.push('"'),
                Some('\\') => text.push('\\'),
                Some('n') => text.push('\n'),
                Some('t') => text.push('\t'),
                Some('r') => text.push('\r'),
                Some(other) => {
                    return Err(SpecError::new(
                        SpecErrorKind::Syntax(format!(
                            "unknown escape `\\{other}` (write `\\\\` for a backslash)"
                        )),
                        span,
                    ))
                }
                None => {
                    return Err(SpecError::new(
                        SpecErrorKind::Syntax("unterminated string literal".to_string()),
                        start,
                    ))
                }
            },
            Some(c) => text.push(c),
        }
    }
}

/// Quotes `value` as a string literal the lexer reads back unchanged.
pub(crate) fn quote(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
