//! Matrix generator files.
//!
//! ```json
//! {"generators": [
//!   {"name": "a", "matrix": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}
//! ]}
//! ```
//!
//! Matrices are row-major; each entry is a `[re, im]` pair.

use serde::{Deserialize, Serialize};

use super::group::MatrixGroupSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrixDocument {
    pub name: String,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSetDocument {
    pub generators: Vec<NamedMatrixDocument>,
}

pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    linalg::to_rows(m)
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!(
            "row {i} has {} entries, expected {n} (matrices must be square)",
            r.len()
        )));
    }
    let rows: Vec<Vec<_>> = rows
        .iter()
        .map(|r| r.iter().map(|[re, im]| linalg::c(*re, *im)).collect())
        .collect();
    Ok(linalg::from_rows(&rows))
}

impl MatrixSetDocument {
    pub fn from_spec(spec: &MatrixGroupSpec) -> Self {
        MatrixSetDocument {
            generators: spec
                .alphabet()
                .names()
                .iter()
                .zip(spec.generators())
                .map(|(name, m)| NamedMatrixDocument {
                    name: name.clone(),
                    matrix: matrix_to_rows(m),
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<MatrixGroupSpec> {
        let named = self
            .generators
            .iter()
            .map(|g| Ok((g.name.clone(), matrix_from_rows(&g.matrix)?)))
            .collect::<Result<Vec<_>>>()?;
        MatrixGroupSpec::new(named)
    }
}

pub fn parse_matrix_set(text: &str) -> Result<MatrixGroupSpec> {
    serde_json::from_str::<MatrixSetDocument>(text)?.to_spec()
}

pub fn matrix_set_to_string(spec: &MatrixGroupSpec) -> String {
    serde_json::to_string(&MatrixSetDocument::from_spec(spec)).expect("matrix documents serialize")
}
