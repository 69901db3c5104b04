//! Canonical JSON frame format:
//!
//! ```json
//! {"n": 2, "m": 2, "field": "complex", "vectors": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}
//! ```
//!
//! Each vector is a list of `n` `[re, im]` pairs. Real frames carry
//! `"field": "real"` and zero imaginary parts. Matrices are written row-major
//! as nested arrays.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{ComplexFrame, Field};
use crate::linalg::CVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub n: usize,
    pub m: usize,
    pub field: Field,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl From<&ComplexFrame> for FrameDoc {
    fn from(fr: &ComplexFrame) -> Self {
        Self {
            n: fr.n(),
            m: fr.m(),
            field: fr.field(),
            vectors: fr
                .vectors()
                .iter()
                .map(|v| v.iter().map(|c| [c.re, c.im]).collect())
                .collect(),
        }
    }
}

impl TryFrom<FrameDoc> for ComplexFrame {
    type Error = Error;

    fn try_from(doc: FrameDoc) -> Result<Self> {
        if doc.n == 0 {
            return Err(Error::InvalidFrame("field `n`: must be positive".into()));
        }
        if doc.vectors.is_empty() {
            return Err(Error::InvalidFrame("field `vectors`: list is empty".into()));
        }
        if doc.m != doc.vectors.len() {
            return Err(Error::InvalidFrame(format!(
                "field `m`: declared {} but `vectors` has {} rows",
                doc.m,
                doc.vectors.len()
            )));
        }
        for (k, row) in doc.vectors.iter().enumerate() {
            if row.len() != doc.n {
                return Err(Error::InvalidFrame(format!(
                    "field `vectors[{k}]`: has {} entries, expected n = {}",
                    row.len(),
                    doc.n
                )));
            }
            if doc.field == Field::Real {
                if let Some(i) = row.iter().position(|p| p[1] != 0.0) {
                    return Err(Error::InvalidFrame(format!(
                        "field `vectors[{k}][{i}]`: nonzero imaginary part in a real frame"
                    )));
                }
            }
        }
        let vectors = doc
            .vectors
            .iter()
            .map(|row| CVector::from_iterator(doc.n, row.iter().map(|p| Complex64::new(p[0], p[1]))))
            .collect();
        ComplexFrame::with_field(doc.n, doc.field, vectors)
    }
}

pub fn parse_frame(text: &str) -> Result<ComplexFrame> {
    let doc: FrameDoc = serde_json::from_str(text).map_err(|e| Error::InvalidFrame(e.to_string()))?;
    ComplexFrame::try_from(doc)
}

pub fn frame_to_json(fr: &ComplexFrame) -> String {
    serde_json::to_string(&FrameDoc::from(fr)).expect("frame serializes")
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}
