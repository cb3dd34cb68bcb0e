use std::io::{Read, Write};
use std::path::Path;

use super::experiment::{ResultRow, ResultTable};
use crate::error::{Error, Result};
use crate::mcsim::SnapshotRecord;
use crate::scenario::Side;

/// Column order of result CSV files.
pub const RESULT_COLUMNS: [&str; 6] = ["axis_value", "curve", "value", "ci_low", "ci_high", "n"];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes the table with a header row. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_csv<W: Write>(table: &ResultTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_COLUMNS).map_err(csv_err)?;
    for r in &table.rows {
        w.write_record([
            opt(r.axis_value),
            r.curve.clone(),
            r.value.to_string(),
            opt(r.ci_low),
            opt(r.ci_high),
            opt(r.n),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(table: &ResultTable, path: &Path) -> Result<()> {
    write_csv(table, std::fs::File::create(path)?)
}

fn parse_opt<T: std::str::FromStr>(s: &str, column: &str, line: u64) -> Result<Option<T>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::config(column, format!("line {line}: cannot parse '{s}'")))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(RESULT_COLUMNS) {
        return Err(Error::config("csv header", format!("expected {RESULT_COLUMNS:?}")));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        rows.push(ResultRow {
            axis_value: parse_opt(&rec[0], "axis_value", line)?,
            curve: rec[1].to_string(),
            value: parse_opt(&rec[2], "value", line)?.unwrap_or(f64::NAN),
            ci_low: parse_opt(&rec[3], "ci_low", line)?,
            ci_high: parse_opt(&rec[4], "ci_high", line)?,
            n: parse_opt(&rec[5], "n", line)?,
        });
    }
    Ok(rows)
}

/// Snapshot trace: trial, time, serving side, LOS flag and SINR in dB.
pub fn write_trace<W: Write>(records: &[SnapshotRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trial", "time_s", "serving_side", "los", "sinr_db"])
        .map_err(csv_err)?;
    for r in records {
        let side = match r.serving_side {
            Side::Upper => "upper",
            Side::Bottom => "bottom",
        };
        w.write_record([
            r.trial.to_string(),
            r.time.to_string(),
            side.to_string(),
            (r.serving_los as u8).to_string(),
            (10.0 * r.sinr.log10()).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
