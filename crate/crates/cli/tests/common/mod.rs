//! Deterministic data fixtures shared by the integration and acceptance tests.
//!
//! Each generator seeds a fixed number of defects into otherwise clean rows,
//! so the expected error counts are known up front.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use dq_cli::{run, Command, ReportFormat, RunConfig, Streams};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};

pub fn spec_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

pub fn spec_path(name: &str) -> PathBuf {
    spec_dir().join(name)
}

/// Quotes a CSV cell when it needs it.
pub fn csv_cell(value: &str) -> String {
    if value.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

pub fn csv_line(cells: &[&str]) -> String {
    let mut line = cells.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Output of one in-process CLI run.
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(config: &RunConfig) -> RunOutput {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(config, &mut Streams { out: &mut out, err: &mut err });
    RunOutput {
        code,
        stdout: String::from_utf8(out).expect("stdout is UTF-8"),
        stderr: String::from_utf8(err).expect("stderr is UTF-8"),
    }
}

pub fn validate_config(spec: &Path, data: &Path) -> RunConfig {
    RunConfig {
        spec_paths: vec![spec.to_path_buf()],
        data_paths: vec![data.to_path_buf()],
        format: ReportFormat::Json,
        ..RunConfig::new(Command::Validate)
    }
}

// ---------------------------------------------------------------------------
// Register of enterprises

pub const REGISTER_HEADER: [&str; 22] = [
    "reg_number",
    "sepa",
    "name",
    "name_before_quotes",
    "name_in_quotes",
    "name_after_quotes",
    "without_quotes",
    "reg_type",
    "reg_type_text",
    "type",
    "type_text",
    "registered",
    "terminated",
    "closed",
    "address",
    "post_code",
    "address_id",
    "region_code",
    "city_code",
    "atv_code",
    "reregistration_term",
    "last_modified",
];

/// How many defects of each kind the register fixture carries.
#[derive(Debug, Clone, Copy, Default)]
pub struct RegisterSeeds {
    pub rows: usize,
    pub name_null: usize,
    pub type_text_null: usize,
    /// Rows missing both the address and its identifier.
    pub address_both_null: usize,
    pub address_only_null: usize,
    pub address_id_only_null: usize,
    pub region_code_null: usize,
    pub city_code_null: usize,
    pub post_code_null: usize,
    pub post_code_short: usize,
    pub atv_code_null: usize,
    pub atv_code_short: usize,
    pub registered_null: usize,
    /// Terminated entities without a closing reason.
    pub terminated_open: usize,
    /// Terminated entities with a valid closing reason.
    pub terminated_closed: usize,
}

impl RegisterSeeds {
    pub fn clean(rows: usize) -> Self {
        Self {
            rows,
            ..Self::default()
        }
    }

    /// Defect counts of the published register snapshot.
    pub fn published() -> Self {
        Self {
            rows: 396_952,
            name_null: 10,
            type_text_null: 1_403,
            address_both_null: 364,
            address_only_null: 2,
            address_id_only_null: 4_523 - 364,
            region_code_null: 280_662,
            city_code_null: 99_049,
            post_code_null: 20_496,
            post_code_short: 2,
            atv_code_null: 4_574,
            atv_code_short: 947,
            registered_null: 94,
            terminated_open: 646,
            terminated_closed: 41_000,
        }
    }
}

/// Marks `count` rows per flag, drawing disjoint rows for flags in the same group.
fn mark(rng: &mut StdRng, rows: usize, groups: &[&[usize]]) -> Vec<Vec<u8>> {
    let mut marks = Vec::with_capacity(groups.len());
    for group in groups {
        let total: usize = group.iter().sum();
        let picked = sample(rng, rows, total).into_vec();
        let mut flags = vec![0u8; rows];
        let mut start = 0;
        for (k, &count) in group.iter().enumerate() {
            for &row in &picked[start..start + count] {
                flags[row] = k as u8 + 1;
            }
            start += count;
        }
        marks.push(flags);
    }
    marks
}

const FORMS: [(&str, &str); 6] = [
    ("SIA", "Sabiedrība ar ierobežotu atbildību"),
    ("AS", "Akciju sabiedrība"),
    ("IK", "Individuālais komersants"),
    ("KS", "Komandītsabiedrība"),
    ("ZEM", "Zemnieku saimniecība"),
    ("BDR", "Biedrība"),
];

/// Forms the register leaves without a description.
const UNDESCRIBED_FORMS: [&str; 6] = ["ASF", "KOR", "PRO", "SAA", "SPA", "SPO"];

fn random_date(rng: &mut StdRng, from_year: i32, to_year: i32) -> String {
    let year = rng.gen_range(from_year..=to_year);
    let month = rng.gen_range(1..=12);
    let day = rng.gen_range(1..=28);
    format!("{day:02}.{month:02}.{year}")
}

/// Writes a register CSV with exactly the seeded defects.
pub fn write_register(path: &Path, seeds: &RegisterSeeds, seed: u64) -> io::Result<()> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = seeds.rows;
    let marks = mark(
        &mut rng,
        n,
        &[
            &[seeds.name_null],
            &[seeds.type_text_null],
            &[seeds.address_both_null, seeds.address_only_null, seeds.address_id_only_null],
            &[seeds.region_code_null],
            &[seeds.city_code_null],
            &[seeds.post_code_null, seeds.post_code_short],
            &[seeds.atv_code_null, seeds.atv_code_short],
            &[seeds.registered_null],
            &[seeds.terminated_open, seeds.terminated_closed],
        ],
    );
    let [name, type_text, address, region, city, post, atv, registered, terminated] =
        <[Vec<u8>; 9]>::try_from(marks).expect("nine groups");

    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(csv_line(&REGISTER_HEADER).as_bytes())?;
    for row in 0..n {
        let number = format!("{}", 40_003_000_000u64 + row as u64);
        let in_quotes = format!("Uzņēmums {row}");
        let (form, form_text) = if type_text[row] == 1 {
            (UNDESCRIBED_FORMS[row % UNDESCRIBED_FORMS.len()], "")
        } else {
            FORMS[rng.gen_range(0..FORMS.len())]
        };
        let full_name = match name[row] {
            1 => String::new(),
            _ => format!("{form} \"{in_quotes}\""),
        };
        let registered_on = match registered[row] {
            1 => String::new(),
            _ => random_date(&mut rng, 1991, 2018),
        };
        let (terminated_on, closed) = match terminated[row] {
            1 => (random_date(&mut rng, 2000, 2018), ""),
            2 => (random_date(&mut rng, 2000, 2018), if row % 2 == 0 { "L" } else { "R" }),
            _ => (String::new(), ""),
        };
        let street = format!("Rīga, Brīvības iela {}", row % 500 + 1);
        let (address_text, address_id) = match address[row] {
            1 => (String::new(), String::new()),
            2 => (String::new(), format!("{}", 100_000_000 + row % 800_000_000)),
            3 => (street, String::new()),
            _ => (street, format!("{}", 100_000_000 + row % 800_000_000)),
        };
        let post_code = match post[row] {
            1 => String::new(),
            2 => format!("{}", 100 + row % 900),
            _ => format!("{}", 1001 + row % 3000),
        };
        let atv_code = match atv[row] {
            1 => String::new(),
            2 => format!("{}", 10_000 + row % 90_000),
            _ => format!("0{}", 100_000 + row % 900_000),
        };
        let region_code = if region[row] == 1 { "" } else { "100003003" };
        let city_code = if city[row] == 1 { "" } else { "100003011" };
        let sepa = format!("LV{:02}ZZZ{number}", row % 100);
        let cells: [&str; 22] = [
            &number,
            &sepa,
            &full_name,
            form,
            &in_quotes,
            "",
            "0",
            "K",
            "Komercreģistrs",
            form,
            form_text,
            &registered_on,
            &terminated_on,
            closed,
            &address_text,
            &post_code,
            &address_id,
            region_code,
            city_code,
            &atv_code,
            "",
            "01.01.2019",
        ];
        out.write_all(csv_line(&cells).as_bytes())?;
    }
    out.flush()
}

// ---------------------------------------------------------------------------
// Government information systems

pub const GIS_ROWS: usize = 245;

pub const GIS_HEADER: [&str; 36] = [
    "is_number",
    "is_name",
    "is_short_name",
    "registration_date",
    "controller_name",
    "controller_address",
    "higher_authority",
    "legal_basis",
    "purpose",
    "personal_data",
    "financial_data",
    "service_rate",
    "data_protocols",
    "data_sources",
    "data_recipients",
    "users",
    "platform",
    "hosting",
    "security_class",
    "creation_date",
    "website",
    "resp_person_number",
    "resp_person_name",
    "resp_person_surname",
    "resp_person_company",
    "resp_person_address",
    "resp_person_phone",
    "officer_name",
    "officer_phone",
    "officer_email",
    "manager_name",
    "manager_code",
    "holder_name",
    "holder_code",
    "status",
    "closing_date",
];

/// Fields left empty in the one record that has almost nothing filled in.
pub const GIS_BLANK_ROW_FIELDS: [&str; 17] = [
    "personal_data",
    "financial_data",
    "service_rate",
    "manager_code",
    "holder_code",
    "controller_address",
    "higher_authority",
    "legal_basis",
    "purpose",
    "data_protocols",
    "data_sources",
    "data_recipients",
    "users",
    "platform",
    "hosting",
    "manager_name",
    "officer_phone",
];

/// The government information system register with its seeded defects.
pub fn government_is_csv() -> String {
    let mut text = csv_line(&GIS_HEADER);
    for row in 0..GIS_ROWS {
        let mut cells: BTreeMap<&str, String> = BTreeMap::new();
        let mut put = |field: &'static str, value: String| {
            cells.insert(field, value);
        };
        put("is_number", format!("{}", 1000 + row));
        put("is_name", format!("Informācijas sistēma {row}"));
        put("is_short_name", if row % 3 == 0 { String::new() } else { format!("IS{row}") });
        put("registration_date", format!("{:02}.{:02}.{}", row % 28 + 1, row % 12 + 1, 2000 + row % 18));
        put("controller_name", match row {
            70 => "-".into(),
            _ => format!("Ministrija {}", row % 13),
        });
        put("controller_address", format!("Rīga, Pils laukums {}", row % 9 + 1));
        put("higher_authority", "Ministru kabinets".into());
        put("legal_basis", match row {
            74 => "-".into(),
            _ => format!("Likums Nr. {row}"),
        });
        put("purpose", match row {
            75 => "nav".into(),
            _ => format!("Uzdevums {row}"),
        });
        put("personal_data", if row % 2 == 0 { "satur" } else { "nesatur" }.into());
        put("financial_data", if row % 5 == 0 { "satur" } else { "nesatur" }.into());
        put("service_rate", match row {
            1..=45 => "-".into(),
            46..=79 => "nav".into(),
            _ => ["augsts", "vidējs", "zems"][row % 3].into(),
        });
        put("data_protocols", "reģistrēti".into());
        put("data_sources", match row {
            76 => "-".into(),
            _ => "iestādes dati".into(),
        });
        put("data_recipients", "valsts iestādes".into());
        put("users", "darbinieki".into());
        put("platform", match row {
            77 => "nav".into(),
            _ => "Linux".into(),
        });
        put("hosting", match row {
            78 => "-".into(),
            _ => "VRAA".into(),
        });
        put("security_class", match row {
            72 => "-".into(),
            _ => ["A", "B", "C"][row % 3].into(),
        });
        put("creation_date", match row {
            73 => "-".into(),
            _ => format!("{:02}.{:02}.{}", row % 28 + 1, row % 12 + 1, 1995 + row % 20),
        });
        put("website", match row {
            100..=157 => String::new(),
            158..=206 => format!("www.sistema{row}.gov.lv"),
            207..=228 => "http://-".into(),
            229..=230 => "http://".into(),
            231 => "http://Nav".into(),
            232..=234 => "http://Nav%".into(),
            _ if row % 2 == 0 => format!("http://www.sistema{row}.gov.lv"),
            _ => format!("http://sistema{row}.lv/"),
        });
        put("resp_person_number", format!("{}", 500 + row));
        put("resp_person_name", format!("Vārds{row}"));
        put("resp_person_surname", format!("Uzvārds{row}"));
        put("resp_person_company", format!("Iestāde {}", row % 21));
        put("resp_person_address", "Rīga, Smilšu iela 1".into());
        put("resp_person_phone", match row {
            10 => "6123456".into(),
            11 => "29123456".into(),
            _ if row % 4 == 0 => format!("371670{:05}", row),
            _ => format!("670{:05}", row),
        });
        put("officer_name", match row {
            71 => "nav".into(),
            _ => format!("Speciālists {row}"),
        });
        put("officer_phone", format!("6700{:04}", row));
        put("officer_email", match row {
            20 => "info@vid.gov".into(),
            21 => "nav".into(),
            22 => "info.vid.lv".into(),
            _ => format!("is{row}@iestade.gov.lv"),
        });
        put("manager_name", format!("Vadītājs {}", row % 17));
        put("manager_code", match row {
            30 => String::new(),
            31 => "1234567890".into(),
            32 => "9000001234A".into(),
            _ => format!("{}", 90_000_012_000u64 + row as u64),
        });
        put("holder_name", match row {
            60..=64 => "-".into(),
            _ => format!("Turētājs {}", row % 11),
        });
        put("holder_code", match row {
            40 => String::new(),
            41..=42 => "-".into(),
            43..=52 => format!("4000{row}"),
            _ => format!("{}", 40_003_000_000u64 + row as u64),
        });
        let (status, closing) = match row {
            200..=226 => ("slēgts", format!("{:02}.{:02}.2015", row % 12 + 1, row % 28 + 1)),
            227..=244 => ("slēgts", format!("{:02}/{:02}/2016", row % 12 + 1, row % 28 + 1)),
            _ => ("aktīvs", String::new()),
        };
        put("status", status.into());
        put("closing_date", closing);
        if row == 0 {
            for field in GIS_BLANK_ROW_FIELDS {
                cells.insert(field, String::new());
            }
        }
        let ordered: Vec<&str> = GIS_HEADER.iter().map(|h| cells[h].as_str()).collect();
        text.push_str(&csv_line(&ordered));
    }
    text
}

// ---------------------------------------------------------------------------
// Licences and communication statistics

pub const LICENCE_HEADER: [&str; 9] = [
    "requester",
    "reg_number",
    "program",
    "program_type",
    "place",
    "stundas",
    "decision",
    "term",
    "licence_number",
];

/// One year of licences; every hours value but `filled_hours` is empty.
pub fn licences_csv(rows: usize, filled_hours: usize) -> String {
    let mut text = csv_line(&LICENCE_HEADER);
    for row in 0..rows {
        let reg = format!("{}", 40_008_000_000u64 + row as u64);
        let hours = if row < filled_hours { format!("{}", 16 + row % 100) } else { String::new() };
        let number = format!("L-{row:04}");
        let cells = [
            "Biedrība Zinātne",
            reg.as_str(),
            "Angļu valoda bērniem",
            "interešu izglītība",
            "Rīga, Skolas iela 3",
            hours.as_str(),
            "izsniegt",
            "uz 2 gadiem",
            number.as_str(),
        ];
        text.push_str(&csv_line(&cells));
    }
    text
}

pub const COMMUNICATION_HEADER: [&str; 8] = [
    "id",
    "direction",
    "channel",
    "topic_group",
    "topic",
    "client_type",
    "record_date",
    "count",
];

/// Contact statistics with topic groups of known frequency.
///
/// `groups` lists each topic group with the number of rows it appears in.
pub fn communication_csv(groups: &[(&str, usize)], undocumented_channel_rows: usize) -> String {
    let mut text = csv_line(&COMMUNICATION_HEADER);
    let channels = ["e-pasts", "portāls", "tikšanās"];
    let mut id = 0usize;
    for (group, count) in groups {
        for _ in 0..*count {
            id += 1;
            let channel = if id <= undocumented_channel_rows { "tālrunis" } else { channels[id % 3] };
            let row = [
                format!("{id}"),
                if id % 2 == 0 { "ienākošā" } else { "izejošā" }.to_string(),
                channel.to_string(),
                group.to_string(),
                format!("{group} / jautājums {}", id % 5),
                if id % 4 == 0 { "juridiska persona" } else { "fiziska persona" }.to_string(),
                format!("{:02}.{:02}.2018", id % 28 + 1, id % 12 + 1),
                format!("{}", id % 7 + 1),
            ];
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            text.push_str(&csv_line(&cells));
        }
    }
    text
}
