//! The shared matrix file format:
//! `{"n": 2, "data": [[[re, im], [re, im]], [[re, im], [re, im]]]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    n: usize,
    data: Vec<Vec<[f64; 2]>>,
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let doc: MatrixDoc = serde_json::from_str(text)?;
    if doc.data.len() != doc.n {
        return Err(Error::Parse(format!(
            "\"n\" is {} but \"data\" has {} rows",
            doc.n,
            doc.data.len()
        )));
    }
    let rows: Vec<Vec<C64>> = doc
        .data
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let doc = MatrixDoc {
        n: m.dim(),
        data: m
            .rows()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("matrix documents always serialize")
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)?;
    matrix_from_json(&text)
}
