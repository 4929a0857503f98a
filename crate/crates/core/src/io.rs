//! Headerless numeric CSV in and out.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lagcov::SampleMatrix;

/// Parse `n` rows of `p` comma-separated numbers. With `header`, the first line
/// is skipped. Errors carry the 1-based line and column of the first failure.
pub fn read_sample<R: Read>(reader: R, header: bool) -> Result<SampleMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::Input {
                row: line,
                col: 0,
                msg: e.to_string(),
            }
        })?;
        let line = record
            .position()
            .map_or(rows.len() + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Input {
                row: line,
                col: 0,
                msg: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Input {
                    row: line,
                    col: j + 1,
                    msg: format!("not a finite number: {field:?}"),
                }),
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.len() < 2 {
        return Err(Error::Input {
            row: rows.len(),
            col: 0,
            msg: format!("need at least 2 observations, found {}", rows.len()),
        });
    }
    SampleMatrix::from_rows(&rows)
}

pub fn read_sample_file(path: &Path, header: bool) -> Result<SampleMatrix> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(format!("cannot open {}: {e}", path.display())))?;
    read_sample(std::io::BufReader::new(file), header)
}

/// One line per row, 17 significant digits, so values survive a round trip.
pub fn write_matrix_csv<W: Write>(mut out: W, m: &DMatrix<f64>) -> Result<()> {
    for i in 0..m.nrows() {
        let line: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.16e}", m[(i, j)]))
            .collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}
