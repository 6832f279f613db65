use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

/// Reads a comma-separated feature table, one sample per line.
///
/// Cells are parsed with Rust's locale-independent float grammar, so `1e-3`
/// and `-2.5E+4` are accepted and `,` is never a decimal separator.
pub fn read_csv(path: impl AsRef<Path>, has_header: bool) -> Result<FeatureMatrix> {
    let file = std::fs::File::open(path)?;
    parse_csv(file, has_header)
}

pub fn parse_csv<R: Read>(input: R, has_header: bool) -> Result<FeatureMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let mut cols = None;
    let mut rows = 0;
    let mut data = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        let expected = *cols.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRows {
                line,
                expected,
                found: record.len(),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                col: col + 1,
                text: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonFinite { row: rows, col });
            }
            data.push(value);
        }
        rows += 1;
    }
    FeatureMatrix::new(rows, cols.unwrap_or(0), data)
}
