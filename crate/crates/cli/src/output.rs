//! Report rendering with the fixed column order `case_id, quantity, value, reference, verdict`.

use clap::ValueEnum;
use prophet_core::report::sig6;
use prophet_core::Row;

use crate::error::CliError;

pub const COLUMNS: [&str; 5] = ["case_id", "quantity", "value", "reference", "verdict"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

pub fn render(rows: &[Row], format: Format) -> Result<String, CliError> {
    match format {
        Format::Table => Ok(table(rows)),
        Format::Csv => csv(rows),
        Format::Json => serde_json::to_string_pretty(rows)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Output(e.to_string())),
    }
}

fn cells(r: &Row) -> [String; 5] {
    [
        r.case_id.clone(),
        r.quantity.clone(),
        sig6(r.value),
        r.reference.clone(),
        r.verdict.as_str().to_string(),
    ]
}

fn table(rows: &[Row]) -> String {
    let body: Vec<[String; 5]> = rows.iter().map(cells).collect();
    let mut width = COLUMNS.map(|c| c.chars().count());
    for row in &body {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |row: &[String]| {
        let padded: Vec<String> = row.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(&COLUMNS.map(String::from));
    for row in &body {
        line(row);
    }
    out
}

fn csv(rows: &[Row]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(COLUMNS).map_err(err)?;
    for r in rows {
        w.write_record(cells(r)).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}
