//! Protocol export as JSON Lines or CSV, both with the columns
//! `object, row, field, rule, severity, value, message`.

use super::{ErrorProtocol, Violation};

pub const PROTOCOL_COLUMNS: [&str; 7] = ["object", "row", "field", "rule", "severity", "value", "message"];

impl ErrorProtocol {
    /// One JSON object per line, each line terminated by `\n`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for v in self {
            out.push_str(&serde_json::to_string(v).expect("violations always serialize"));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        writer.write_record(PROTOCOL_COLUMNS).expect("in-memory write");
        for v in self {
            writer.write_record(csv_row(v)).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
    }
}

fn csv_row(v: &Violation) -> [String; 7] {
    [
        v.object_name.to_string(),
        v.row_index.to_string(),
        v.field_name.to_string(),
        v.rule_name.to_string(),
        v.severity.to_string(),
        v.observed.to_string(),
        v.message.to_string(),
    ]
}
