//! The `.dq` quality-specification language: data objects, field
//! requirements, record rules and collection rules.
//!
//! ```text
//! version 1;
//!
//! object register {
//!   source "register.csv";
//!   field name: text not_null;
//!   field post_code: integer not_null {
//!     digits(4);
//!   }
//!   rule address_pair: present(address) == present(address_id);
//!   expect name_rate: error_rate(name) <= 1%;
//! }
//! ```

mod ast;
mod error;
mod lexer;
mod parser;
mod serialize;
mod validate;

pub use ast::*;
pub(crate) use lexer::{is_ident_continue, is_ident_start, quote};
pub use error::{SpecError, SpecErrorKind};
pub use parser::{parse_expr, IMPLICIT_CHECKS, RESERVED_WORDS};
pub use serialize::serialize_spec;
pub(crate) use serialize::type_text;
pub use validate::{check_spec_semantics, Diagnostic, DiagnosticLevel};

/// Parses and semantically validates a spec. Returns the first error found.
pub fn parse_spec(source: &str) -> Result<QualitySpec, SpecError> {
    let spec = parser::parse_syntax(source)?;
    if let Some(diag) = check_spec_semantics(&spec)
        .into_iter()
        .find(Diagnostic::is_error)
    {
        return Err(diag.into_error());
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "object licence { field requester: text not_null; }";

    #[test]
    fn minimal_spec() {
        let spec = parse_spec(MINIMAL).unwrap();
        assert_eq!(spec.version, 1);
        assert_eq!(spec.objects.len(), 1);
        assert_eq!(spec.objects[0].fields.len(), 1);
        assert_eq!(spec.objects[0].fields[0].nullability, Nullability::NotNull);
    }

    #[test]
    fn digits_check_on_post_code() {
        let spec = parse_spec("object r { field post_code: integer { digits(4) } }");
        // Missing `;` after the check is a syntax error.
        assert!(spec.is_err());
        let spec = parse_spec("object r { field post_code: integer { digits(4); } }").unwrap();
        let field = &spec.objects[0].fields[0];
        assert_eq!(field.declared_type, FieldType::Integer);
        assert_eq!(field.checks.len(), 1);
        assert_eq!(field.checks[0].name, "digits");
        assert_eq!(
            field.checks[0].expr,
            CheckExpr::Call(Predicate::Digits {
                field: FieldRef::new("post_code"),
                n: 4
            })
        );
    }

    #[test]
    fn phone_rule_is_or_of_ands() {
        let src = r#"
            object gis {
              field phone: integer not_null;
              rule phone_ok: (digits(phone,8) and starts_with(phone,"6")) or (digits(phone,11) and starts_with(phone,"371"));
            }
        "#;
        let spec = parse_spec(src).unwrap();
        let rule = &spec.objects[0].record_rules[0];
        let CheckExpr::Binary { op: BinaryOp::Or, lhs, rhs } = &rule.expr else {
            panic!("expected or at the root, got {}", rule.expr)
        };
        for side in [lhs, rhs] {
            assert!(matches!(side.as_ref(), CheckExpr::Binary { op: BinaryOp::And, .. }));
        }
        assert_eq!(
            rule.expr.to_string(),
            r#"digits(phone, 8) and starts_with(phone, "6") or digits(phone, 11) and starts_with(phone, "371")"#
        );
    }

    #[test]
    fn unknown_field_is_located() {
        let src = "object o {\n  field a: text;\n  rule r: present(a) and foo == \"x\";\n}";
        let err = parse_spec(src).unwrap_err();
        assert_eq!(err.kind, SpecErrorKind::UnknownField { name: "foo".into() });
        assert_eq!((err.line, err.column), (3, 26));
    }

    #[test]
    fn semantic_errors() {
        let cases = [
            ("object o { field a: text; field a: text; }", "duplicate field"),
            ("object o { field a: text; } object o { field b: text; }", "duplicate object"),
            ("object o { field a: date(\"MM/YYYY\"); }", "malformed date format"),
            ("object o { field a: text; expect e: error_rate(a) <= 101%; }", "threshold out of range"),
            ("object o { field a: text; expect e: error_rate(a) <= -1%; }", "threshold out of range"),
            ("object o { field a: text; expect e: error_rate(b) <= 1%; }", "unknown field or rule"),
            ("object o { field a: text; expect e: frequency_min(a) >= -4; }", "threshold out of range"),
            ("object o { field a: text { check c: present(); check c: present(); } }", "duplicate check"),
            ("object o { field a: text { check type: present(); } }", "duplicate check"),
            ("object o { field a: text; rule r: a; }", "type error"),
            ("object o { field a: text; rule r: present(a) and a; }", "type error"),
            ("object o { field a: text; rule r: present(a) < present(a); }", "type error"),
            ("object o { field a: text { year_between(1800); } }", "type error"),
            ("object o { field a: text; rule a: present(a); }", "duplicate rule"),
            ("object o { field a: text; rule r: true; }", "at least one field"),
            ("object o { field not: text; }", "reserved"),
            ("version 1;", "at least one object"),
        ];
        for (src, needle) in cases {
            let err = parse_spec(src).expect_err(src);
            assert!(
                err.to_string().contains(needle),
                "{src}: {err} should mention {needle}"
            );
            assert!(err.line >= 1 && err.column >= 1, "{src}: {err}");
        }
    }

    #[test]
    fn severities_and_placeholders() {
        let src = r#"
            object gis {
              field closing_date: date("MM/DD/YYYY") nullable warning {
                placeholders;
                check old: year_between(1800, 2100) error;
              }
              field status: text not_null {
                placeholders {"-", "nav"} anomaly;
              }
              rule closed: present(closing_date) implies status == "slēgts" warning;
              expect frequency_min(status) >= 4;
            }
        "#;
        let spec = parse_spec(src).unwrap();
        let obj = &spec.objects[0];
        let date = &obj.fields[0];
        assert_eq!(date.severity_default, Severity::Warning);
        assert_eq!(date.placeholder_tokens, Some(vec!["-".into(), "nav".into()]));
        assert_eq!(date.placeholder_severity(), Severity::Warning);
        assert_eq!(date.check_severity(&date.checks[0]), Severity::Error);
        assert_eq!(obj.fields[1].placeholder_severity(), Severity::Anomaly);
        assert_eq!(obj.record_rules[0].severity, Severity::Warning);
        assert_eq!(obj.collection_rules[0].name, "frequency_min_status");
        assert_eq!(obj.collection_rules[0].threshold, Threshold::Count(4));
    }

    #[test]
    fn anonymous_check_names_avoid_explicit_ones() {
        let src = "object o { field a: text { digits(2) or digits(3); digits(4); check digits: length(4); digits(5); } }";
        let spec = parse_spec(src).unwrap();
        let names: Vec<_> = spec.objects[0].fields[0].checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["check", "digits_2", "digits", "digits_3"]);
    }

    #[test]
    fn canonical_form_of_empty_field() {
        let spec = parse_spec("object o { field a: text; field b: integer not_null {} }").unwrap();
        let text = serialize_spec(&spec);
        assert_eq!(
            text,
            "version 1;\n\nobject o {\n  field a: text nullable;\n  field b: integer not_null;\n}\n"
        );
    }

    #[test]
    fn serialize_round_trip_is_stable() {
        let src = r#"
            # comment
            version 2;
            object register {
              source "reg \"lv\".csv";
              field reg_number: integer not_null { digits(11); }
              field name: text not_null;
              field registered: date("DD.MM.YYYY") not_null { year_between(1800); date_valid("DD.MM.YYYY") warning; }
              field website: text { check pattern: matches("http://www.%.%") or matches("http://%.lv%", nocase); }
              field hours: decimal { is_decimal(); check positive: hours > 0.5 and not hours >= 1000; }
              field t: text { in_set({"a", "b"}); length(3); starts_with("x\\y"); is_integer(); placeholders {"-"} warning; }
              rule r1: not (present(name) and present(reg_number)) implies (name == "x" implies reg_number != -3);
              rule r2: (present(name) == present(hours)) == true anomaly;
              expect e1: error_rate(name) <= 0.5%;
              expect e2: error_rate(r1) < 1% warning;
              expect e3: null_rate(hours) > 89%;
            }
        "#;
        let first = parse_spec(src).unwrap();
        let text = serialize_spec(&first);
        let second = parse_spec(&text).unwrap();
        assert_eq!(first, second);
        assert_eq!(serialize_spec(&second), text);
    }

    #[test]
    fn explicit_error_severity_survives() {
        let src = "object o { field a: text warning { digits(2) error; placeholders error; } }";
        let first = parse_spec(src).unwrap();
        let text = serialize_spec(&first);
        assert!(text.contains("digits(a, 2) error;"), "{text}");
        assert_eq!(parse_spec(&text).unwrap(), first);
    }

    #[test]
    fn diagnostics() {
        let spec = parse_spec(
            r#"object o {
                 field a: text not_null { in_set({"x", "y", "x"}); }
                 field b: text nullable;
                 rule r1: present(a) implies a == "x";
                 rule r2: a == b;
                 rule r3: present(b) implies b == "y";
               }"#,
        )
        .unwrap();
        let diags = check_spec_semantics(&spec);
        assert!(diags.iter().all(|d| !d.is_error()));
        let messages: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        assert_eq!(messages.len(), 2, "{messages:?}");
        assert!(messages[0].contains("more than once"));
        assert!(messages[1].contains("rule `r2`") && messages[1].contains("`b`"));

        let mut broken = spec.clone();
        broken.objects[0].collection_rules.push(CollectionRule {
            name: "e".into(),
            metric: Metric::ErrorRate,
            target: "nope".into(),
            comparator: Comparator::Le,
            threshold: Threshold::Percent(1.0),
            severity: Severity::Error,
            span: Span::default(),
        });
        let diags = check_spec_semantics(&broken);
        assert!(diags
            .iter()
            .any(|d| d.is_error() && d.kind == SpecErrorKind::UnknownTarget { name: "nope".into() }));
    }
}
