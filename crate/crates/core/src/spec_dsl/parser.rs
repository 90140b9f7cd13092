//! Recursive-descent parser for `.dq` specification files.
//!
//! ```text
//! spec        := ("version" INT ";")? object+
//! object      := "object" IDENT "{" item* "}"
//! item        := "source" STRING ";"
//!              | "field" IDENT ":" type nullability? severity? (";" | "{" field_item* "}")
//!              | "rule" IDENT ":" expr severity? ";"
//!              | "expect" (IDENT ":")? metric "(" IDENT ")" cmp NUMBER "%"? severity? ";"
//! field_item  := "placeholders" ("{" STRING ("," STRING)* "}")? severity? ";"
//!              | "check" IDENT ":" expr severity? ";"
//!              | expr severity? ";"
//! expr        := or ("implies" expr)?
//! or          := and ("or" and)*
//! and         := unary ("and" unary)*
//! unary       := "not" unary | comparison
//! comparison  := primary (cmp primary)?
//! primary     := "(" expr ")" | STRING | "-"? NUMBER | "true" | "false"
//!              | IDENT "(" args? ")" | IDENT
//! ```
//!
//! Inside a field block a predicate may omit its leading field argument;
//! the enclosing field is filled in.

use super::ast::*;
use super::error::{SpecError, SpecErrorKind};
use super::lexer::{tokenize, Spanned, Token};
use crate::checks::{DateFormat, LikePattern, DEFAULT_PLACEHOLDERS};

/// Words that cannot be used as field or rule names.
pub const RESERVED_WORDS: [&str; 7] = ["and", "or", "not", "implies", "true", "false", "nocase"];

/// Check names the engine uses for built-in field checks.
pub const IMPLICIT_CHECKS: [&str; 3] = ["not_null", "type", "placeholder"];

pub(crate) const PREDICATES: [&str; 10] = [
    "present",
    "matches",
    "digits",
    "length",
    "starts_with",
    "in_set",
    "date_valid",
    "year_between",
    "is_integer",
    "is_decimal",
];

type PResult<T> = Result<T, SpecError>;

pub(crate) fn parse_syntax(source: &str) -> PResult<QualitySpec> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0 };
    parser.spec()
}

/// Parses a standalone expression, e.g. for tests and tooling.
pub fn parse_expr(source: &str, field_context: Option<&str>) -> PResult<CheckExpr> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr(field_context)?;
    parser.expect(&Token::Eof)?;
    Ok(expr)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

#[derive(Debug)]
enum ArgKind {
    Ident(String),
    Str(String),
    Int(i64),
    Dec,
    Set(Vec<String>),
}

#[derive(Debug)]
struct Arg {
    kind: ArgKind,
    span: Span,
}

fn syntax(msg: impl Into<String>, span: Span) -> SpecError {
    SpecError::new(SpecErrorKind::Syntax(msg.into()), span)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].token
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn advance(&mut self) -> Spanned {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == token {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &Token) -> PResult<Span> {
        if self.peek() == token {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&format!("`{}`", token_text(token))))
        }
    }

    fn unexpected(&self, wanted: &str) -> SpecError {
        syntax(
            format!("expected {wanted}, found {}", self.peek().describe()),
            self.span(),
        )
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Token::Ident(w) if w == word)
    }

    fn expect_word(&mut self, word: &str) -> PResult<Span> {
        if self.is_word(word) {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&format!("`{word}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Token::Ident(name) => {
                let span = self.advance().span;
                Ok((name, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn string(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Token::Str(s) => {
                let span = self.advance().span;
                Ok((s, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn severity_opt(&mut self) -> Option<Severity> {
        if let Token::Ident(word) = self.peek() {
            if let Ok(sev) = word.parse::<Severity>() {
                self.advance();
                return Some(sev);
            }
        }
        None
    }

    fn spec(&mut self) -> PResult<QualitySpec> {
        let mut version = 1;
        if self.is_word("version") {
            self.advance();
            let span = self.span();
            match self.advance().token {
                Token::Number(n) if !n.contains('.') => {
                    version = n
                        .parse()
                        .map_err(|_| syntax(format!("version {n} is out of range"), span))?;
                }
                other => {
                    return Err(syntax(
                        format!("expected version number, found {}", other.describe()),
                        span,
                    ))
                }
            }
            self.expect(&Token::Semi)?;
        }
        let mut objects = Vec::new();
        while *self.peek() != Token::Eof {
            objects.push(self.object()?);
        }
        if objects.is_empty() {
            return Err(syntax(
                "a specification must declare at least one object",
                self.span(),
            ));
        }
        Ok(QualitySpec { version, objects })
    }

    fn object(&mut self) -> PResult<DataObjectClass> {
        let span = self.expect_word("object")?;
        let (name, _) = self.ident("object name")?;
        self.expect(&Token::LBrace)?;
        let mut object = DataObjectClass {
            name,
            source_hint: None,
            fields: Vec::new(),
            record_rules: Vec::new(),
            collection_rules: Vec::new(),
            span,
        };
        loop {
            let span = self.span();
            match self.peek() {
                Token::RBrace => {
                    self.advance();
                    return Ok(object);
                }
                Token::Ident(word) => match word.as_str() {
                    "source" => {
                        self.advance();
                        let (hint, _) = self.string("source file name")?;
                        self.expect(&Token::Semi)?;
                        if object.source_hint.replace(hint).is_some() {
                            return Err(SpecError::new(
                                SpecErrorKind::Duplicate {
                                    what: "source",
                                    name: object.name.clone(),
                                },
                                span,
                            ));
                        }
                    }
                    "field" => object.fields.push(self.field()?),
                    "rule" => object.record_rules.push(self.record_rule()?),
                    "expect" => object.collection_rules.push(self.collection_rule()?),
                    _ => return Err(self.unexpected("`field`, `rule`, `expect`, `source` or `}`")),
                },
                _ => return Err(self.unexpected("`field`, `rule`, `expect`, `source` or `}`")),
            }
        }
    }

    fn field(&mut self) -> PResult<FieldSpec> {
        let span = self.expect_word("field")?;
        let (name, _) = self.ident("field name")?;
        self.expect(&Token::Colon)?;
        let declared_type = self.field_type()?;
        let nullability = if self.is_word("not_null") {
            self.advance();
            Nullability::NotNull
        } else if self.is_word("nullable") {
            self.advance();
            Nullability::Nullable
        } else {
            Nullability::Nullable
        };
        let mut field = FieldSpec::new(name, declared_type, nullability);
        field.span = span;
        if let Some(sev) = self.severity_opt() {
            field.severity_default = sev;
        }
        if self.eat(&Token::Semi) {
            return Ok(field);
        }
        self.expect(&Token::LBrace)?;
        // Anonymous checks are named after explicit ones are known.
        let mut pending: Vec<(Option<String>, NamedCheck)> = Vec::new();
        while !self.eat(&Token::RBrace) {
            let item_span = self.span();
            if self.is_word("placeholders")
                && (matches!(self.peek_at(1), Token::LBrace | Token::Semi)
                    || matches!(self.peek_at(1), Token::Ident(w) if w.parse::<Severity>().is_ok()))
            {
                self.advance();
                let tokens = if *self.peek() == Token::LBrace {
                    self.string_set()?
                } else {
                    DEFAULT_PLACEHOLDERS.iter().map(|s| s.to_string()).collect()
                };
                let severity = self.severity_opt();
                self.expect(&Token::Semi)?;
                if field.placeholder_tokens.replace(tokens).is_some() {
                    return Err(SpecError::new(
                        SpecErrorKind::Duplicate {
                            what: "placeholders declaration in field",
                            name: field.name.clone(),
                        },
                        item_span,
                    ));
                }
                field.placeholder_severity = severity;
                continue;
            }
            let explicit = if self.is_word("check")
                && matches!(self.peek_at(1), Token::Ident(_))
                && *self.peek_at(2) == Token::Colon
            {
                self.advance();
                let (name, _) = self.ident("check name")?;
                self.advance();
                Some(name)
            } else {
                None
            };
            let expr = self.expr(Some(&field.name))?;
            let severity = self.severity_opt();
            self.expect(&Token::Semi)?;
            pending.push((
                explicit,
                NamedCheck {
                    name: String::new(),
                    expr,
                    severity,
                    span: item_span,
                },
            ));
        }
        let explicit: Vec<String> = pending.iter().filter_map(|(n, _)| n.clone()).collect();
        let mut taken: Vec<String> = Vec::new();
        for (name, mut check) in pending {
            check.name = match name {
                Some(name) => name,
                None => {
                    let base = match &check.expr {
                        CheckExpr::Call(p) => p.name(),
                        _ => "check",
                    };
                    let mut candidate = base.to_string();
                    let mut n = 2;
                    while explicit.contains(&candidate) || taken.contains(&candidate) {
                        candidate = format!("{base}_{n}");
                        n += 1;
                    }
                    candidate
                }
            };
            taken.push(check.name.clone());
            field.checks.push(check);
        }
        Ok(field)
    }

    fn field_type(&mut self) -> PResult<FieldType> {
        let (word, span) = self.ident("a type (text, integer, decimal, date(\"...\"))")?;
        match word.as_str() {
            "text" => Ok(FieldType::Text),
            "integer" => Ok(FieldType::Integer),
            "decimal" => Ok(FieldType::Decimal),
            "date" => {
                self.expect(&Token::LParen)?;
                let (fmt, fmt_span) = self.string("date format string")?;
                self.expect(&Token::RParen)?;
                let fmt = parse_date_format(&fmt, fmt_span)?;
                Ok(FieldType::Date(fmt))
            }
            other => Err(syntax(
                format!("unknown type `{other}`; expected text, integer, decimal or date"),
                span,
            )),
        }
    }

    fn string_set(&mut self) -> PResult<Vec<String>> {
        self.expect(&Token::LBrace)?;
        let mut values = Vec::new();
        if self.eat(&Token::RBrace) {
            return Ok(values);
        }
        loop {
            let (value, _) = self.string("string literal")?;
            values.push(value);
            if self.eat(&Token::RBrace) {
                return Ok(values);
            }
            self.expect(&Token::Comma)?;
        }
    }

    fn record_rule(&mut self) -> PResult<RecordRule> {
        let span = self.expect_word("rule")?;
        let (name, _) = self.ident("rule name")?;
        self.expect(&Token::Colon)?;
        let expr = self.expr(None)?;
        let severity = self.severity_opt().unwrap_or_default();
        self.expect(&Token::Semi)?;
        Ok(RecordRule {
            name,
            expr,
            severity,
            span,
        })
    }

    fn collection_rule(&mut self) -> PResult<CollectionRule> {
        let span = self.expect_word("expect")?;
        let name = if matches!(self.peek(), Token::Ident(_)) && *self.peek_at(1) == Token::Colon {
            let (name, _) = self.ident("rule name")?;
            self.advance();
            Some(name)
        } else {
            None
        };
        let (metric_word, metric_span) = self.ident("a metric")?;
        let metric = match metric_word.as_str() {
            "error_rate" => Metric::ErrorRate,
            "null_rate" => Metric::NullRate,
            "frequency_min" => Metric::FrequencyMin,
            other => {
                return Err(syntax(
                    format!("unknown metric `{other}`; expected error_rate, null_rate or frequency_min"),
                    metric_span,
                ))
            }
        };
        self.expect(&Token::LParen)?;
        let (target, _) = self.ident("target field or rule name")?;
        self.expect(&Token::RParen)?;
        let comparator = self
            .comparator()
            .ok_or_else(|| self.unexpected("a comparison operator"))?;
        let threshold_span = self.span();
        let negative = self.eat(&Token::Minus);
        let number = match self.advance().token {
            Token::Number(n) => n,
            other => {
                return Err(syntax(
                    format!("expected threshold, found {}", other.describe()),
                    threshold_span,
                ))
            }
        };
        let percent = self.eat(&Token::Percent);
        let threshold = if metric.is_rate() {
            if !percent {
                return Err(syntax(
                    format!("{} threshold must be a percentage like `1%`", metric.keyword()),
                    threshold_span,
                ));
            }
            let value: f64 = number.parse().map_err(|_| syntax("bad number", threshold_span))?;
            Threshold::Percent(if negative { -value } else { value })
        } else {
            if percent {
                return Err(syntax(
                    "frequency_min threshold is a count, not a percentage",
                    threshold_span,
                ));
            }
            if negative {
                return Err(SpecError::new(
                    SpecErrorKind::ThresholdOutOfRange(format!("count -{number} is negative")),
                    threshold_span,
                ));
            }
            let count = number.parse::<u64>().map_err(|_| {
                syntax(
                    format!("frequency_min threshold must be a whole count, found {number}"),
                    threshold_span,
                )
            })?;
            Threshold::Count(count)
        };
        let severity = self.severity_opt().unwrap_or_default();
        self.expect(&Token::Semi)?;
        Ok(CollectionRule {
            name: name.unwrap_or_else(|| format!("{}_{}", metric.keyword(), target)),
            metric,
            target,
            comparator,
            threshold,
            severity,
            span,
        })
    }

    fn comparator(&mut self) -> Option<Comparator> {
        let cmp = match self.peek() {
            Token::EqEq => Comparator::Eq,
            Token::NotEq => Comparator::Ne,
            Token::Lt => Comparator::Lt,
            Token::Le => Comparator::Le,
            Token::Gt => Comparator::Gt,
            Token::Ge => Comparator::Ge,
            _ => return None,
        };
        self.advance();
        Some(cmp)
    }

    fn expr(&mut self, ctx: Option<&str>) -> PResult<CheckExpr> {
        let lhs = self.or_expr(ctx)?;
        if self.is_word("implies") {
            self.advance();
            let rhs = self.expr(ctx)?;
            return Ok(CheckExpr::binary(BinaryOp::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self, ctx: Option<&str>) -> PResult<CheckExpr> {
        let mut lhs = self.and_expr(ctx)?;
        while self.is_word("or") {
            self.advance();
            let rhs = self.and_expr(ctx)?;
            lhs = CheckExpr::binary(BinaryOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self, ctx: Option<&str>) -> PResult<CheckExpr> {
        let mut lhs = self.unary(ctx)?;
        while self.is_word("and") {
            self.advance();
            let rhs = self.unary(ctx)?;
            lhs = CheckExpr::binary(BinaryOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self, ctx: Option<&str>) -> PResult<CheckExpr> {
        if self.is_word("not") {
            self.advance();
            return Ok(CheckExpr::not(self.unary(ctx)?));
        }
        self.comparison(ctx)
    }

    fn comparison(&mut self, ctx: Option<&str>) -> PResult<CheckExpr> {
        let lhs = self.primary(ctx)?;
        let Some(cmp) = self.comparator() else {
            return Ok(lhs);
        };
        let rhs = self.primary(ctx)?;
        if matches!(
            self.peek(),
            Token::EqEq | Token::NotEq | Token::Lt | Token::Le | Token::Gt | Token::Ge
        ) {
            return Err(syntax(
                "comparisons cannot be chained; add parentheses",
                self.span(),
            ));
        }
        Ok(CheckExpr::binary(BinaryOp::Compare(cmp), lhs, rhs))
    }

    fn primary(&mut self, ctx: Option<&str>) -> PResult<CheckExpr> {
        let span = self.span();
        match self.peek().clone() {
            Token::LParen => {
                self.advance();
                let inner = self.expr(ctx)?;
                self.expect(&Token::RParen)?;
                Ok(inner)
            }
            Token::Str(s) => {
                self.advance();
                Ok(CheckExpr::Literal(Literal::Str(s)))
            }
            Token::Minus | Token::Number(_) => {
                let negative = self.eat(&Token::Minus);
                let Token::Number(text) = self.advance().token else {
                    return Err(syntax("expected a number after `-`", span));
                };
                Ok(CheckExpr::Literal(number_literal(&text, negative, span)?))
            }
            Token::Ident(word) => {
                self.advance();
                match word.as_str() {
                    "true" => return Ok(CheckExpr::Literal(Literal::Bool(true))),
                    "false" => return Ok(CheckExpr::Literal(Literal::Bool(false))),
                    _ => {}
                }
                if *self.peek() == Token::LParen {
                    return self.call(word, span, ctx);
                }
                if RESERVED_WORDS.contains(&word.as_str()) {
                    return Err(syntax(format!("unexpected keyword `{word}`"), span));
                }
                Ok(CheckExpr::Field(FieldRef { name: word, span }))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn call(&mut self, name: String, span: Span, ctx: Option<&str>) -> PResult<CheckExpr> {
        if !PREDICATES.contains(&name.as_str()) {
            return Err(syntax(
                format!("unknown predicate `{name}`; expected one of {}", PREDICATES.join(", ")),
                span,
            ));
        }
        self.expect(&Token::LParen)?;
        let mut args = Vec::new();
        if !self.eat(&Token::RParen) {
            loop {
                args.push(self.arg()?);
                if self.eat(&Token::RParen) {
                    break;
                }
                self.expect(&Token::Comma)?;
            }
        }
        resolve_call(&name, span, args, ctx).map(CheckExpr::Call)
    }

    fn arg(&mut self) -> PResult<Arg> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Token::Ident(id) => {
                self.advance();
                ArgKind::Ident(id)
            }
            Token::Str(s) => {
                self.advance();
                ArgKind::Str(s)
            }
            Token::Minus | Token::Number(_) => {
                let negative = self.eat(&Token::Minus);
                let Token::Number(text) = self.advance().token else {
                    return Err(syntax("expected a number after `-`", span));
                };
                match number_literal(&text, negative, span)? {
                    Literal::Int(i) => ArgKind::Int(i),
                    Literal::Dec(_) => ArgKind::Dec,
                    _ => unreachable!("number_literal returns numbers"),
                }
            }
            Token::LBrace => ArgKind::Set(self.string_set()?),
            _ => return Err(self.unexpected("a predicate argument")),
        };
        Ok(Arg { kind, span })
    }
}

fn token_text(token: &Token) -> String {
    match token {
        Token::Ident(s) | Token::Str(s) | Token::Number(s) => s.clone(),
        Token::Eof => "end of input".to_string(),
        other => other.describe().trim_matches('`').to_string(),
    }
}

fn number_literal(text: &str, negative: bool, span: Span) -> PResult<Literal> {
    if text.contains('.') {
        let value: f64 = text
            .parse()
            .map_err(|_| syntax(format!("malformed number `{text}`"), span))?;
        Ok(Literal::Dec(if negative { -value } else { value }))
    } else {
        let signed = if negative { format!("-{text}") } else { text.to_string() };
        signed
            .parse::<i64>()
            .map(Literal::Int)
            .map_err(|_| syntax(format!("integer `{signed}` is out of range"), span))
    }
}

fn parse_date_format(text: &str, span: Span) -> PResult<DateFormat> {
    text.parse()
        .map_err(|e: crate::checks::DateFormatError| {
            SpecError::new(SpecErrorKind::MalformedDateFormat(e.to_string()), span)
        })
}

fn resolve_call(name: &str, span: Span, args: Vec<Arg>, ctx: Option<&str>) -> PResult<Predicate> {
    let mut args = args.into_iter().peekable();
    let field = match args.peek() {
        Some(Arg {
            kind: ArgKind::Ident(id),
            ..
        }) if id != "nocase" => {
            let arg = args.next().unwrap();
            let ArgKind::Ident(id) = arg.kind else { unreachable!() };
            FieldRef {
                name: id,
                span: arg.span,
            }
        }
        _ => match ctx {
            Some(field) => FieldRef {
                name: field.to_string(),
                span,
            },
            None => {
                return Err(syntax(
                    format!("`{name}` needs a field as its first argument"),
                    span,
                ))
            }
        },
    };
    let rest: Vec<Arg> = args.collect();
    let usage = |expected: &str| {
        syntax(
            format!("`{name}` expects ({expected})"),
            rest.first().map_or(span, |a| a.span),
        )
    };
    let positive = |arg: &Arg| -> PResult<u32> {
        match arg.kind {
            ArgKind::Int(n) if n >= 1 && n <= u32::MAX as i64 => Ok(n as u32),
            _ => Err(syntax(
                format!("`{name}` expects a positive whole length"),
                arg.span,
            )),
        }
    };
    let year = |arg: &Arg| -> PResult<i32> {
        match arg.kind {
            ArgKind::Int(n) if (i32::MIN as i64..=i32::MAX as i64).contains(&n) => Ok(n as i32),
            _ => Err(syntax(format!("`{name}` expects whole years"), arg.span)),
        }
    };
    let pred = match (name, rest.as_slice()) {
        ("present", []) => Predicate::Present(field),
        ("is_integer", []) => Predicate::IsInteger(field),
        ("is_decimal", []) => Predicate::IsDecimal(field),
        ("present" | "is_integer" | "is_decimal", _) => return Err(usage("field")),
        ("matches", [pat]) | ("matches", [pat, _]) => {
            let ArgKind::Str(src) = &pat.kind else {
                return Err(usage("field, \"pattern\"[, nocase]"));
            };
            let nocase = match rest.get(1) {
                None => false,
                Some(Arg {
                    kind: ArgKind::Ident(w),
                    ..
                }) if w == "nocase" => true,
                Some(_) => return Err(usage("field, \"pattern\"[, nocase]")),
            };
            let pattern = LikePattern::new(src)
                .map_err(|e| SpecError::new(SpecErrorKind::MalformedPattern(e.to_string()), pat.span))?
                .with_case_insensitive(nocase);
            Predicate::Matches { field, pattern }
        }
        ("matches", _) => return Err(usage("field, \"pattern\"[, nocase]")),
        ("digits", [n]) => Predicate::Digits {
            field,
            n: positive(n)?,
        },
        ("length", [n]) => Predicate::Length {
            field,
            n: positive(n)?,
        },
        ("digits" | "length", _) => return Err(usage("field, n")),
        ("starts_with", [Arg {
            kind: ArgKind::Str(prefix),
            ..
        }]) => Predicate::StartsWith {
            field,
            prefix: prefix.clone(),
        },
        ("starts_with", _) => return Err(usage("field, \"prefix\"")),
        ("in_set", [Arg {
            kind: ArgKind::Set(values),
            ..
        }]) => Predicate::InSet {
            field,
            values: values.clone(),
        },
        ("in_set", _) => return Err(usage("field, {\"a\", \"b\", ...}")),
        ("date_valid", []) => Predicate::DateValid {
            field,
            format: None,
        },
        ("date_valid", [Arg {
            kind: ArgKind::Str(fmt),
            span,
        }]) => Predicate::DateValid {
            field,
            format: Some(parse_date_format(fmt, *span)?),
        },
        ("date_valid", _) => return Err(usage("field[, \"format\"]")),
        ("year_between", []) => Predicate::YearBetween {
            field,
            lo: None,
            hi: None,
        },
        ("year_between", [lo]) => Predicate::YearBetween {
            field,
            lo: Some(year(lo)?),
            hi: None,
        },
        ("year_between", [lo, hi]) => Predicate::YearBetween {
            field,
            lo: Some(year(lo)?),
            hi: Some(year(hi)?),
        },
        ("year_between", _) => return Err(usage("field[, low_year[, high_year]]")),
        _ => unreachable!("predicate names are checked before resolution"),
    };
    Ok(pred)
}
