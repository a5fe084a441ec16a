use std::path::Path;

use super::{Cell, SweepResult, SweepRow};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 7] = [
    "nominal_sep_n",
    "measured_sep",
    "count",
    "sigma_min",
    "proxy",
    "bound",
    "runtime_ms",
];

const SKIPPED_PREFIX: &str = "skipped: ";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn record(row: &SweepRow) -> [String; 7] {
    let (sigma, proxy) = match &row.cell {
        Cell::Computed { sigma_min, proxy } => (sigma_min.to_string(), proxy.to_string()),
        Cell::Skipped(reason) => (String::new(), format!("{SKIPPED_PREFIX}{reason}")),
    };
    [
        row.nominal_sep_n.to_string(),
        opt(row.measured_sep),
        row.count.to_string(),
        sigma,
        proxy,
        opt(row.bound),
        row.runtime_ms.to_string(),
    ]
}

fn write_rows<W: std::io::Write>(result: &SweepResult, sink: W) -> Result<csv::Writer<W>> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for row in &result.rows {
        w.write_record(record(row))?;
    }
    Ok(w)
}

pub fn to_csv_string(result: &SweepResult) -> Result<String> {
    let w = write_rows(result, Vec::new())?;
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Write the sweep as CSV with the fixed header.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = write_rows(result, std::io::BufWriter::new(file))?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn parse_f64(field: &str, name: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|e| Error::Config(format!("bad {name} value {field:?}: {e}")))
}

fn parse_opt(field: &str, name: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_f64(field, name).map(Some)
    }
}

/// Inverse of [`to_csv_string`].
pub fn parse_csv(text: &str) -> Result<SweepResult> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!(
            "unexpected sweep CSV header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let proxy_field = field(4);
        let cell = match proxy_field.strip_prefix(SKIPPED_PREFIX) {
            Some(reason) => Cell::Skipped(reason.to_string()),
            None => Cell::Computed {
                sigma_min: parse_f64(field(3), "sigma_min")?,
                proxy: parse_f64(proxy_field, "proxy")?,
            },
        };
        rows.push(SweepRow {
            nominal_sep_n: parse_f64(field(0), "nominal_sep_n")?,
            measured_sep: parse_opt(field(1), "measured_sep")?,
            count: field(2)
                .parse()
                .map_err(|e| Error::Config(format!("bad count {:?}: {e}", field(2))))?,
            cell,
            bound: parse_opt(field(5), "bound")?,
            runtime_ms: field(6)
                .parse()
                .map_err(|e| Error::Config(format!("bad runtime_ms {:?}: {e}", field(6))))?,
        });
    }
    Ok(SweepResult { rows })
}

pub fn read_csv(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}
