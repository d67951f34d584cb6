use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::period::{validate_index, Frequency, Period};
use super::Dataset;
use crate::{Error, Result};

/// Loads a CSV file: header row, period labels in column 1, numeric columns after.
pub fn load_csv(path: impl AsRef<Path>, frequency: Frequency) -> Result<Dataset> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    parse_csv(&text, frequency)
}

/// Parses CSV text in the [`load_csv`] layout.
pub fn parse_csv(text: &str, frequency: Frequency) -> Result<Dataset> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 {
        return Err(Error::Parse { row: 1, col: headers.len(), msg: "need an index column and at least one series".into() });
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let mut index = Vec::new();
    let mut columns = vec![Vec::new(); names.len()];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        if rec.len() != headers.len() {
            return Err(Error::Parse {
                row,
                col: rec.len(),
                msg: format!("expected {} fields, found {}", headers.len(), rec.len()),
            });
        }
        let period = Period::parse(&rec[0], frequency).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { row, col: 1, msg },
            other => other,
        })?;
        index.push(period);
        for (j, cell) in rec.iter().skip(1).enumerate() {
            let v = parse_plain_decimal(cell).ok_or_else(|| Error::Parse {
                row,
                col: j + 2,
                msg: format!("not a plain decimal number: `{cell}`"),
            })?;
            columns[j].push(v);
        }
    }
    if index.is_empty() {
        return Err(Error::Empty);
    }
    validate_index(&index)?;
    Dataset::from_columns(index, names.into_iter().zip(columns).collect())
}

/// Accepts `[+-]digits[.digits]` or `[+-].digits`; no exponents, no
/// grouping separators, no special values.
fn parse_plain_decimal(cell: &str) -> Option<f64> {
    let body = cell.strip_prefix(['+', '-']).unwrap_or(cell);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    let ok = digits(int)
        && frac.is_none_or(|f| !f.is_empty() && digits(f))
        && (!int.is_empty() || frac.is_some());
    if !ok {
        return None;
    }
    cell.parse().ok()
}

/// Writes a dataset in the layout [`load_csv`] reads, with round-trip precision.
pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut f = File::create(path)?;
    write_csv_to(ds, &mut f)
}

pub fn write_csv_to(ds: &Dataset, w: &mut impl Write) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["period".to_string()];
    header.extend(ds.names().iter().cloned());
    wtr.write_record(&header)?;
    for (t, p) in ds.index().iter().enumerate() {
        let mut rec = vec![p.to_string()];
        // `Display` for f64 is the shortest representation that round-trips
        // and never uses exponent notation.
        rec.extend((0..ds.n_series()).map(|j| format!("{}", ds.column_at(j)[t])));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}
