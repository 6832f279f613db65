//! Reading feature matrices and writing reports.

pub mod csv;
pub mod npy;
pub mod report;

use std::path::Path;

use crate::error::Result;
use crate::matrix::FeatureMatrix;

pub use self::csv::{parse_csv, read_csv};
pub use self::npy::{decode_npy, encode_npy, read_npy, write_npy, write_npy_as, NpyDtype, NpyHeader};
pub use self::report::{read_report, write_report, BaselineDocument, Report, ScoreDocument, SCHEMA};

/// Loads a `.csv` file with [`read_csv`] and anything else with [`read_npy`].
pub fn read_features(path: impl AsRef<Path>, csv_header: bool) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        read_csv(path, csv_header)
    } else {
        read_npy(path)
    }
}
