//! Data exploration: per-column statistics, type and nullability
//! inference, enumeration candidates and draft specifications.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::checks::{check_placeholder, DateFormat, DEFAULT_PLACEHOLDERS};
use crate::dataset_io::{coerce_value, Dataset};
use crate::engine::normalize_column_name;
use crate::spec_dsl::{
    is_ident_continue, is_ident_start, quote, type_text, FieldType, Nullability, RESERVED_WORDS,
};

/// Columns with more distinct values than this keep no frequency table.
const FREQUENCY_LIMIT: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOptions {
    /// Tried in order after integer and decimal.
    pub date_formats: Vec<DateFormat>,
    pub placeholder_tokens: Vec<String>,
    pub top_n: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            date_formats: ["DD.MM.YYYY", "MM/DD/YYYY", "YYYY-MM-DD"]
                .iter()
                .map(|f| f.parse().expect("built-in date format"))
                .collect(),
            placeholder_tokens: DEFAULT_PLACEHOLDERS.iter().map(|t| t.to_string()).collect(),
            top_n: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueCount {
    pub value: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldProfile {
    pub field_name: String,
    pub record_count: u64,
    pub non_null_count: u64,
    pub null_count: u64,
    pub null_rate_pct: f64,
    #[serde(serialize_with = "display")]
    pub inferred_type: FieldType,
    pub distinct_count: u64,
    pub top_values: Vec<ValueCount>,
    pub placeholder_hits: u64,
    /// Placeholder tokens actually seen, in first-seen order.
    pub placeholders_seen: Vec<String>,
    pub enum_candidate: Option<Vec<String>>,
    /// Every distinct value by descending count, kept only for columns
    /// with few distinct values.
    #[serde(skip)]
    pub frequencies: Option<Vec<ValueCount>>,
}

fn display<T: std::fmt::Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumSuggestion {
    /// Values seen at least `min_support` times, sorted.
    pub members: Vec<String>,
    /// Values below the support threshold, as in `frequency_anomalies`.
    pub rare: Vec<ValueCount>,
}

pub fn profile_dataset(dataset: &Dataset) -> Vec<FieldProfile> {
    profile_dataset_with(dataset, &ProfileOptions::default())
}

pub fn profile_dataset_with(dataset: &Dataset, options: &ProfileOptions) -> Vec<FieldProfile> {
    (0..dataset.header.len())
        .map(|column| profile_column(dataset, column, options))
        .collect()
}

fn profile_column(dataset: &Dataset, column: usize, options: &ProfileOptions) -> FieldProfile {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    let mut nulls = 0u64;
    for record in &dataset.records {
        let cell = &record.cells[column];
        if cell.is_null() {
            nulls += 1;
        } else {
            *counts.entry(cell.trimmed()).or_insert(0) += 1;
        }
    }
    let total = dataset.record_count() as u64;

    let mut candidates: Vec<FieldType> = vec![FieldType::Integer, FieldType::Decimal];
    candidates.extend(options.date_formats.iter().cloned().map(FieldType::Date));
    if counts.is_empty() {
        candidates.clear();
    }
    for value in counts.keys() {
        candidates.retain(|ty| coerce_value(value, ty).is_some());
        if candidates.is_empty() {
            break;
        }
    }
    let inferred_type = candidates.into_iter().next().unwrap_or(FieldType::Text);

    let mut placeholder_hits = 0;
    let mut placeholders_seen: Vec<String> = Vec::new();
    for token in &options.placeholder_tokens {
        for (value, n) in &counts {
            if check_placeholder(value, std::slice::from_ref(token)) {
                placeholder_hits += n;
                if !placeholders_seen.contains(token) {
                    placeholders_seen.push(token.clone());
                }
            }
        }
    }

    let mut sorted: Vec<ValueCount> = counts
        .iter()
        .map(|(v, &n)| ValueCount {
            value: v.to_string(),
            count: n,
        })
        .collect();
    sorted.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.value.cmp(&b.value)));
    let top_values = sorted.iter().take(options.top_n).cloned().collect();
    let distinct_count = sorted.len() as u64;
    let frequencies = (sorted.len() <= FREQUENCY_LIMIT).then_some(sorted);

    let mut profile = FieldProfile {
        field_name: dataset.header[column].clone(),
        record_count: total,
        non_null_count: total - nulls,
        null_count: nulls,
        null_rate_pct: if total == 0 { 0.0 } else { 100.0 * nulls as f64 / total as f64 },
        inferred_type,
        distinct_count,
        top_values,
        placeholder_hits,
        placeholders_seen,
        enum_candidate: None,
        frequencies,
    };
    if profile.inferred_type == FieldType::Text {
        profile.enum_candidate =
            suggest_enum(&profile, DEFAULT_MAX_DISTINCT, DEFAULT_MIN_SUPPORT).map(|s| s.members);
    }
    profile
}

pub const DEFAULT_NULL_THRESHOLD_PCT: f64 = 3.0;
pub const DEFAULT_MAX_DISTINCT: usize = 12;
pub const DEFAULT_MIN_SUPPORT: u64 = 4;

/// `NotNull` when the null rate is strictly below `threshold_pct`. A column
/// without records is always `Nullable`.
pub fn suggest_nullability(profile: &FieldProfile, threshold_pct: f64) -> Nullability {
    // Compared as 100 * nulls < threshold * records to keep the boundary exact.
    let lhs = 100.0 * profile.null_count as f64;
    let rhs = threshold_pct * profile.record_count as f64;
    if profile.record_count > 0 && lhs < rhs {
        Nullability::NotNull
    } else {
        Nullability::Nullable
    }
}

/// Proposes an enumeration from the values seen at least `min_support`
/// times, provided there are at most `max_distinct` of them. Placeholder
/// tokens never become members.
pub fn suggest_enum(profile: &FieldProfile, max_distinct: usize, min_support: u64) -> Option<EnumSuggestion> {
    let frequencies = profile.frequencies.as_ref()?;
    let (mut members, mut rare) = (Vec::new(), Vec::new());
    for vc in frequencies {
        if profile.placeholders_seen.iter().any(|t| check_placeholder(&vc.value, std::slice::from_ref(t))) {
            continue;
        }
        if vc.count >= min_support {
            members.push(vc.value.clone());
        } else {
            rare.push(vc.clone());
        }
    }
    if members.is_empty() || members.len() > max_distinct {
        return None;
    }
    members.sort();
    rare.sort_by(|a, b| a.count.cmp(&b.count).then_with(|| a.value.cmp(&b.value)));
    Some(EnumSuggestion { members, rare })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DraftOptions {
    pub source_hint: Option<String>,
    pub null_threshold_pct: f64,
    pub max_distinct: usize,
    pub min_support: u64,
}

impl Default for DraftOptions {
    fn default() -> Self {
        Self {
            source_hint: None,
            null_threshold_pct: DEFAULT_NULL_THRESHOLD_PCT,
            max_distinct: DEFAULT_MAX_DISTINCT,
            min_support: DEFAULT_MIN_SUPPORT,
        }
    }
}

pub fn generate_draft_spec(profiles: &[FieldProfile], object_name: &str) -> String {
    generate_draft_spec_with(profiles, object_name, &DraftOptions::default())
}

/// Renders a `.dq` draft. Every suggestion is preceded by a comment with
/// the counts it rests on.
pub fn generate_draft_spec_with(profiles: &[FieldProfile], object_name: &str, options: &DraftOptions) -> String {
    let records = profiles.first().map_or(0, |p| p.record_count);
    let mut out = String::new();
    let _ = writeln!(out, "# Draft inferred from {records} records. Review every line before use.");
    out.push_str("version 1;\n\n");
    let _ = writeln!(out, "object {} {{", identifier(object_name, &mut HashSet::new()));
    if let Some(hint) = &options.source_hint {
        let _ = writeln!(out, "  source {};", quote(hint));
    }
    let mut taken = HashSet::new();
    for profile in profiles {
        let name = identifier(&profile.field_name, &mut taken);
        let nullability = suggest_nullability(profile, options.null_threshold_pct);
        let _ = writeln!(
            out,
            "\n  # column {}: {} NULL of {} ({}%), {} distinct",
            quote(&profile.field_name),
            profile.null_count,
            profile.record_count,
            crate::engine::round_pct(profile.null_count, profile.record_count, 2),
            profile.distinct_count,
        );
        let mut items = Vec::new();
        if !profile.placeholders_seen.is_empty() {
            let tokens: Vec<String> = profile.placeholders_seen.iter().map(|t| quote(t)).collect();
            items.push(format!("# {} placeholder values", profile.placeholder_hits));
            items.push(format!("placeholders {{{}}};", tokens.join(", ")));
        }
        if profile.inferred_type == FieldType::Text {
            if let Some(suggestion) = suggest_enum(profile, options.max_distinct, options.min_support) {
                let values: Vec<String> = suggestion.members.iter().map(|v| quote(v)).collect();
                items.push(format!(
                    "# {} values seen at least {} times; {} rarer values left out",
                    suggestion.members.len(),
                    options.min_support,
                    suggestion.rare.len()
                ));
                items.push(format!("in_set({{{}}});", values.join(", ")));
            }
        }
        if let FieldType::Date(fmt) = &profile.inferred_type {
            items.push(format!("# every non-NULL value is a date in {fmt}"));
            items.push("date_valid();".to_string());
        }
        let head = format!(
            "  field {name}: {} {}",
            type_text(&profile.inferred_type),
            nullability.keyword()
        );
        if items.is_empty() {
            let _ = writeln!(out, "{head};");
        } else {
            let _ = writeln!(out, "{head} {{");
            for item in items {
                let _ = writeln!(out, "    {item}");
            }
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    out
}

/// A valid, unused identifier derived from a column name.
fn identifier(raw: &str, taken: &mut HashSet<String>) -> String {
    let mut base = normalize_column_name(raw);
    let valid = base.chars().next().is_some_and(is_ident_start) && base.chars().all(is_ident_continue);
    if !valid || RESERVED_WORDS.contains(&base.as_str()) {
        base = format!("f_{base}");
    }
    let mut name = base.clone();
    let mut n = 2;
    while !taken.insert(name.clone()) {
        name = format!("{base}_{n}");
        n += 1;
    }
    name
}
