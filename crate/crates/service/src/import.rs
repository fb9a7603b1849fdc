//! Bulk employee import from CSV with the header
//! `full_name,date_of_birth,doctoral_degree,staff_group,employment_start`.
//!
//! Every row is attempted. Bad rows are reported with their line number and
//! do not stop the import. A row whose person (normalized name plus birth
//! date) already exists is skipped.

use chrono::NaiveDate;
use hrm_core::people::StaffGroup;
use hrm_core::{Error, Hrm, Result};
use serde::{Deserialize, Serialize};

use crate::store::Audited;

pub const COLUMNS: [&str; 5] = [
    "full_name",
    "date_of_birth",
    "doctoral_degree",
    "staff_group",
    "employment_start",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowIssue {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportReport {
    pub created: usize,
    pub skipped: Vec<RowIssue>,
    pub errors: Vec<RowIssue>,
}

impl Audited for ImportReport {}

struct Row {
    full_name: String,
    date_of_birth: NaiveDate,
    doctoral_degree: bool,
    staff_group: StaffGroup,
    employment_start: NaiveDate,
}

fn parse_date(field: &str, value: &str) -> std::result::Result<NaiveDate, String> {
    NaiveDate::parse_from_str(value, "%Y-%m-%d")
        .map_err(|_| format!("{field}: {value:?} is not a YYYY-MM-DD date"))
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value.to_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" | "" => Ok(false),
        other => Err(format!("doctoral_degree: {other:?} is not a boolean")),
    }
}

fn parse_row(
    record: &csv::StringRecord,
    index: &[usize; 5],
    width: usize,
) -> std::result::Result<Row, String> {
    if record.len() != width {
        return Err(format!("expected {width} fields, found {}", record.len()));
    }
    let field = |i: usize| record.get(index[i]).unwrap_or("").trim();
    Ok(Row {
        full_name: field(0).to_string(),
        date_of_birth: parse_date("date_of_birth", field(1))?,
        doctoral_degree: parse_bool(field(2))?,
        staff_group: field(3).parse().map_err(|e: Error| e.to_string())?,
        employment_start: parse_date("employment_start", field(4))?,
    })
}

pub fn import_employees(hrm: &mut Hrm, text: &str) -> Result<ImportReport> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Validation(format!("employee csv header: {e}")))?
        .clone();
    let mut index = [0usize; 5];
    for (slot, column) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == column)
            .ok_or_else(|| Error::Validation(format!("employee csv lacks the {column} column")))?;
    }

    let mut report = ImportReport::default();
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                report.errors.push(RowIssue {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        let row = match parse_row(&record, &index, headers.len()) {
            Ok(row) => row,
            Err(reason) => {
                report.errors.push(RowIssue { line, reason });
                continue;
            }
        };
        if let Some(existing) = hrm
            .state()
            .directory
            .find_by_key(&row.full_name, row.date_of_birth)
        {
            report.skipped.push(RowIssue {
                line,
                reason: format!("person already exists as {}", existing.person_id),
            });
            continue;
        }
        let today = hrm.clock().today();
        if row.employment_start > today {
            report.errors.push(RowIssue {
                line,
                reason: format!("employment_start {} is in the future", row.employment_start),
            });
            continue;
        }
        let outcome = hrm
            .register_person(&row.full_name, row.date_of_birth, row.doctoral_degree)
            .and_then(|p| hrm.hire(p.person_id, row.staff_group, row.employment_start));
        match outcome {
            Ok(_) => report.created += 1,
            Err(e) => report.errors.push(RowIssue {
                line,
                reason: e.to_string(),
            }),
        }
    }
    Ok(report)
}
