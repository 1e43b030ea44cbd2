//! The matrix document shared by every input and output file.
//!
//! ```json
//! { "dim": 2, "entries": [[0.7071, 0.0], [-0.7071, 0.0], [0.7071, 0.0], [0.7071, 0.0]] }
//! ```
//!
//! `entries` is row-major, each element an `[re, im]` pair. In transition
//! terms row `j`, column `i` is the amplitude (or probability) for input `i`
//! going to output `j`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix, RealMatrix, UnitaryMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<ComplexMatrix> for MatrixDoc {
    fn from(m: ComplexMatrix) -> Self {
        MatrixDoc {
            dim: m.dim(),
            entries: m.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl From<RealMatrix> for MatrixDoc {
    fn from(m: RealMatrix) -> Self {
        MatrixDoc {
            dim: m.dim(),
            entries: m.row_major().iter().map(|&x| [x, 0.0]).collect(),
        }
    }
}

impl TryFrom<MatrixDoc> for ComplexMatrix {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        if doc.dim == 0 {
            return Err(Error::Format("dim must be positive".into()));
        }
        let entries: Vec<Complex64> = doc
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::from_row_major(doc.dim, &entries)
    }
}

impl TryFrom<MatrixDoc> for RealMatrix {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        if let Some(k) = doc.entries.iter().position(|e| e[1] != 0.0) {
            return Err(Error::Format(format!(
                "real matrix has nonzero imaginary part at entry {k}"
            )));
        }
        let re: Vec<f64> = doc.entries.iter().map(|e| e[0]).collect();
        RealMatrix::from_row_major(doc.dim, &re)
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let doc: MatrixDoc = serde_json::from_str(text)?;
    ComplexMatrix::try_from(doc)
}

pub fn parse_unitary(text: &str, tol: f64) -> Result<UnitaryMatrix> {
    UnitaryMatrix::new(parse_matrix(text)?, tol)
}

pub fn parse_density(text: &str, tol: f64) -> Result<DensityMatrix> {
    DensityMatrix::new(parse_matrix(text)?, tol)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Json(j) => Error::Format(format!("{}: {j}", path.display())),
        other => other,
    })
}

pub fn to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string_pretty(&MatrixDoc::from(m.clone())).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reports_line_of_syntax_error() {
        let text = "{\n  \"dim\": 2,\n  \"entries\": [[1, 0], [0, 0],\n  oops ]\n}";
        let err = parse_matrix(text).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn wrong_entry_count_is_rejected() {
        let err = parse_matrix(r#"{"dim": 2, "entries": [[1,0],[0,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(
            err,
            Error::EntryCount {
                expected: 4,
                found: 3
            }
        ));
    }

    #[test]
    fn unitary_loader_names_violation() {
        let text = r#"{"dim": 2, "entries": [[1.01,0],[0,0],[0,0],[1,0]]}"#;
        let err = parse_unitary(text, 1e-10).unwrap_err();
        match err {
            Error::NotUnitary { deviation, .. } => assert!((deviation - 0.0201).abs() < 1e-9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn density_loader_rejects_bad_trace() {
        let text = r#"{"dim": 2, "entries": [[0.6,0],[0,0],[0,0],[0.6,0]]}"#;
        assert!(matches!(
            parse_density(text, 1e-10),
            Err(Error::BadTrace { .. })
        ));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = crate::qcore::random_unitary(3, 7);
        let back = parse_matrix(&to_json(m.matrix())).unwrap();
        assert_eq!(&back, m.matrix());
    }
}
