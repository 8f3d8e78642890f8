//! Versioned CSV reports. The first line is `#schema=<name>.v<version>`,
//! the second the column header.

use std::io::{BufRead, Write};

use super::NotationError;

#[derive(Clone, Debug, PartialEq)]
pub struct CsvReport {
    pub schema: String,
    pub version: u32,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvReport {
    pub fn new(schema: &str, version: u32, columns: &[&str]) -> CsvReport {
        CsvReport {
            schema: schema.to_string(),
            version,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; panics if its width differs from the header.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn schema_line(&self) -> String {
        format!("#schema={}.v{}", self.schema, self.version)
    }
}

pub fn write_csv_report<W: Write>(out: &mut W, report: &CsvReport) -> Result<(), NotationError> {
    writeln!(out, "{}", report.schema_line())?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(&report.columns).map_err(csv_error)?;
    for row in &report.rows {
        w.write_record(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv_report<R: BufRead>(mut input: R) -> Result<CsvReport, NotationError> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    let tag = first
        .trim_end()
        .strip_prefix("#schema=")
        .ok_or_else(|| NotationError::syntax("missing #schema line"))?;
    let (schema, version) = tag
        .rsplit_once(".v")
        .and_then(|(s, v)| Some((s.to_string(), v.parse().ok()?)))
        .ok_or_else(|| NotationError::syntax(format!("bad schema tag '{tag}'")))?;
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let columns = r.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(csv_error)?.iter().map(str::to_string).collect());
    }
    Ok(CsvReport {
        schema,
        version,
        columns,
        rows,
    })
}

fn csv_error(e: csv::Error) -> NotationError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => NotationError::Io(io),
            _ => unreachable!("checked is_io_error"),
        }
    } else {
        NotationError::syntax(e.to_string())
    }
}

/// Shortest round-trip decimal form, so reruns produce identical text.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
