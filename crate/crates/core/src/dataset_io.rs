//! Delimited-file ingestion with explicit NULL semantics.
//!
//! A cell is NULL exactly when it is empty after trimming ASCII whitespace.
//! Placeholder tokens such as `-` are ordinary values here.

use std::path::Path;

use chrono::NaiveDate;
use thiserror::Error;

use crate::checks::{check_date, is_decimal_text, is_integer_text, trim_ascii};
use crate::spec_dsl::FieldType;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}: invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { source_name: String, offset: usize },
    #[error("{source_name}: row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        source_name: String,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{source_name}: {message}")]
    Csv { source_name: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TypedValue {
    Integer(i64),
    Decimal(f64),
    Date(NaiveDate),
    /// Text values are the trimmed raw string.
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellValue {
    raw: Box<str>,
    is_null: bool,
    coerced: Option<TypedValue>,
    coercion_failed: bool,
}

impl CellValue {
    /// An uncoerced cell.
    pub fn new(raw: &str) -> Self {
        Self {
            raw: raw.into(),
            is_null: trim_ascii(raw).is_empty(),
            coerced: None,
            coercion_failed: false,
        }
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    /// Raw text without leading/trailing ASCII whitespace.
    pub fn trimmed(&self) -> &str {
        trim_ascii(&self.raw)
    }

    pub fn is_null(&self) -> bool {
        self.is_null
    }

    pub fn coerced(&self) -> Option<TypedValue> {
        self.coerced
    }

    pub fn coercion_failed(&self) -> bool {
        self.coercion_failed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub row_index: usize,
    pub cells: Vec<CellValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub source_name: String,
    pub header: Vec<String>,
    pub records: Vec<Record>,
}

impl Dataset {
    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Coerces a non-null value; `None` means the value does not fit `ty`.
pub fn coerce_value(trimmed: &str, ty: &FieldType) -> Option<TypedValue> {
    match ty {
        FieldType::Text => Some(TypedValue::Text),
        FieldType::Integer => {
            if is_integer_text(trimmed) {
                trimmed.parse().ok().map(TypedValue::Integer)
            } else {
                None
            }
        }
        FieldType::Decimal => {
            if is_decimal_text(trimmed) {
                trimmed.parse().ok().map(TypedValue::Decimal)
            } else {
                None
            }
        }
        FieldType::Date(fmt) => check_date(trimmed, fmt).date().map(TypedValue::Date),
    }
}

/// Builds a typed cell. Failure to coerce is recorded on the cell, never
/// raised.
pub fn coerce_cell(raw: &str, declared_type: &FieldType) -> CellValue {
    let mut cell = CellValue::new(raw);
    if !cell.is_null {
        cell.coerced = coerce_value(trim_ascii(raw), declared_type);
        cell.coercion_failed = cell.coerced.is_none();
    }
    cell
}

pub fn read_csv(path: &Path, options: &CsvOptions) -> Result<Dataset, DatasetError> {
    let bytes = std::fs::read(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    read_csv_bytes(&name, &bytes, options)
}

/// Parses an in-memory file. `source_name` is used in errors and reports.
pub fn read_csv_bytes(
    source_name: &str,
    bytes: &[u8],
    options: &CsvOptions,
) -> Result<Dataset, DatasetError> {
    let text = std::str::from_utf8(bytes).map_err(|e| DatasetError::InvalidUtf8 {
        source_name: source_name.to_string(),
        offset: e.valid_up_to(),
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let csv_err = |e: csv::Error| DatasetError::Csv {
        source_name: source_name.to_string(),
        message: e.to_string(),
    };
    let mut rows = reader.records();
    let mut header: Option<Vec<String>> = None;
    if options.has_header {
        match rows.next() {
            Some(row) => header = Some(row.map_err(csv_err)?.iter().map(str::to_string).collect()),
            None => header = Some(Vec::new()),
        }
    }
    let mut records = Vec::new();
    for row in rows {
        let row = row.map_err(csv_err)?;
        let header = header.get_or_insert_with(|| {
            (1..=row.len()).map(|i| format!("col_{i}")).collect()
        });
        let row_index = records.len() + 1;
        if row.len() != header.len() {
            return Err(DatasetError::RaggedRow {
                source_name: source_name.to_string(),
                row: row_index,
                expected: header.len(),
                found: row.len(),
            });
        }
        records.push(Record {
            row_index,
            cells: row.iter().map(CellValue::new).collect(),
        });
    }
    Ok(Dataset {
        source_name: source_name.to_string(),
        header: header.unwrap_or_default(),
        records,
    })
}

/// Writes the dataset back out as RFC 4180 with minimal quoting.
pub fn write_csv(dataset: &Dataset, delimiter: u8) -> String {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    // Writing into a Vec cannot fail.
    writer.write_record(&dataset.header).expect("in-memory write");
    for record in &dataset.records {
        writer
            .write_record(record.cells.iter().map(CellValue::raw))
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}
