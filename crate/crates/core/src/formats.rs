//! Text and CSV formats.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! `f64`. CSV files use LF line endings.

use std::io::{Read, Write};

use thiserror::Error;

use crate::harness::{ConvergenceRow, ReplicationRecord};
use crate::process::Side;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: cannot parse `{text}` as a number")]
    BadNumber { line: usize, text: String },
    #[error("unexpected CSV header `{found}`, expected `{expected}`")]
    BadHeader { expected: String, found: String },
    #[error("CSV row {row}: {message}")]
    BadRow { row: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const RECORDS_HEADER: [&str; 8] = [
    "n",
    "replication",
    "v",
    "tau",
    "r_index",
    "r_over_n",
    "normalized",
    "side",
];

pub const TABLE_HEADER: [&str; 6] = [
    "n",
    "ks_to_gumbel",
    "mass_interior",
    "p_tau_le_half",
    "mean_v_over_an",
    "independence_tv",
];

pub const DENSITY_HEADER: [&str; 3] = ["x", "y", "f"];

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Newline-delimited floats; surrounding whitespace and blank lines are
/// ignored. Domain checks happen when the values become a sample.
pub fn parse_sample_text(text: &str) -> Result<Vec<f64>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let v = t.parse::<f64>().map_err(|_| FormatError::BadNumber {
            line: i + 1,
            text: t.chars().take(64).collect(),
        })?;
        out.push(v);
    }
    Ok(out)
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(r)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<(), FormatError> {
    let found = rdr.headers()?;
    if found.iter().ne(expected.iter().copied()) {
        return Err(FormatError::BadHeader {
            expected: expected.join(","),
            found: found.iter().collect::<Vec<_>>().join(","),
        });
    }
    Ok(())
}

fn field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    idx: usize,
    row: usize,
) -> Result<T, FormatError> {
    let raw = rec.get(idx).ok_or_else(|| FormatError::BadRow {
        row,
        message: format!("missing column {idx}"),
    })?;
    raw.parse().map_err(|_| FormatError::BadRow {
        row,
        message: format!("cannot parse `{raw}` in column {idx}"),
    })
}

fn optional_f64(
    rec: &csv::StringRecord,
    idx: usize,
    row: usize,
) -> Result<Option<f64>, FormatError> {
    match rec.get(idx) {
        Some("") => Ok(None),
        Some(_) => field(rec, idx, row).map(Some),
        None => Err(FormatError::BadRow {
            row,
            message: format!("missing column {idx}"),
        }),
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_records_csv<W: Write>(w: W, records: &[ReplicationRecord]) -> Result<(), FormatError> {
    let mut wtr = writer(w);
    wtr.write_record(RECORDS_HEADER)?;
    for r in records {
        wtr.write_record([
            r.n.to_string(),
            r.replication.to_string(),
            fmt_f64(r.v),
            fmt_f64(r.tau),
            r.r_index.to_string(),
            fmt_f64(r.r_over_n),
            fmt_opt(r.normalized),
            r.side.as_str().to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(r: R) -> Result<Vec<ReplicationRecord>, FormatError> {
    let mut rdr = reader(r);
    check_header(&mut rdr, &RECORDS_HEADER)?;
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let side = rec
            .get(7)
            .unwrap_or_default()
            .parse::<Side>()
            .map_err(|message| FormatError::BadRow { row, message })?;
        out.push(ReplicationRecord {
            n: field(&rec, 0, row)?,
            replication: field(&rec, 1, row)?,
            v: field(&rec, 2, row)?,
            tau: field(&rec, 3, row)?,
            r_index: field(&rec, 4, row)?,
            r_over_n: field(&rec, 5, row)?,
            normalized: optional_f64(&rec, 6, row)?,
            side,
        });
    }
    Ok(out)
}

pub fn write_table_csv<W: Write>(w: W, rows: &[ConvergenceRow]) -> Result<(), FormatError> {
    let mut wtr = writer(w);
    wtr.write_record(TABLE_HEADER)?;
    for r in rows {
        wtr.write_record([
            r.n.to_string(),
            fmt_f64(r.ks_to_gumbel),
            fmt_f64(r.mass_interior),
            fmt_f64(r.p_tau_le_half),
            fmt_f64(r.mean_v_over_an),
            fmt_opt(r.independence_tv),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_table_csv<R: Read>(r: R) -> Result<Vec<ConvergenceRow>, FormatError> {
    let mut rdr = reader(r);
    check_header(&mut rdr, &TABLE_HEADER)?;
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        out.push(ConvergenceRow {
            n: field(&rec, 0, row)?,
            ks_to_gumbel: field(&rec, 1, row)?,
            mass_interior: field(&rec, 2, row)?,
            p_tau_le_half: field(&rec, 3, row)?,
            mean_v_over_an: field(&rec, 4, row)?,
            independence_tv: optional_f64(&rec, 5, row)?,
        });
    }
    Ok(out)
}

pub fn write_density_csv<W: Write>(w: W, rows: &[(f64, f64, f64)]) -> Result<(), FormatError> {
    let mut wtr = writer(w);
    wtr.write_record(DENSITY_HEADER)?;
    for &(x, y, f) in rows {
        wtr.write_record([fmt_f64(x), fmt_f64(y), fmt_f64(f)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_density_csv<R: Read>(r: R) -> Result<Vec<(f64, f64, f64)>, FormatError> {
    let mut rdr = reader(r);
    check_header(&mut rdr, &DENSITY_HEADER)?;
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        out.push((
            field(&rec, 0, row)?,
            field(&rec, 1, row)?,
            field(&rec, 2, row)?,
        ));
    }
    Ok(out)
}
