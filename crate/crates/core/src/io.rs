//! JSON matrix documents.
//!
//! ```json
//! {"rows": 2, "cols": 2, "data": [[2, 0], [1, 0], [0, 0], [1, 0]]}
//! {"jordan": {"M": {"rows": 2, ...}, "blocks": [[2, 0, 1], [1, 0, 1]]}}
//! {"group": "sl", "rows": 2, "cols": 2, "data": [...]}
//! ```
//!
//! `data` is row-major, each entry `[re, im]` or a bare real number. A
//! `"group": "sl"` tag marks the matrix as an element of `SL(n, R)`.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::jordan::{assemble, cmjd_numeric, JordanBlock, JordanSpec};
use crate::liebridge::SlnElement;
use crate::numlin::{CMatrix, C64};
use crate::tolerance::Tolerances;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Domain(#[from] Error),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DenseDoc {
    rows: usize,
    cols: usize,
    data: Vec<Entry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JordanDoc {
    #[serde(rename = "M")]
    m: DenseDoc,
    blocks: Vec<[f64; 3]>,
}

/// Contents of a matrix document.
#[derive(Debug, Clone)]
pub enum MatrixBody {
    Dense(CMatrix),
    Jordan(JordanSpec),
}

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub body: MatrixBody,
    /// Set by `"group": "sl"`.
    pub sl: bool,
}

impl MatrixFile {
    /// The dense matrix (assembled from the spec for Jordan documents).
    pub fn matrix(&self) -> CMatrix {
        match &self.body {
            MatrixBody::Dense(m) => m.clone(),
            MatrixBody::Jordan(s) => assemble(s),
        }
    }

    /// The Jordan spec: as given, or found numerically for dense input.
    pub fn spec(&self, tol: &Tolerances) -> Result<JordanSpec> {
        match &self.body {
            MatrixBody::Dense(m) => Ok(cmjd_numeric(m, tol)?.0),
            MatrixBody::Jordan(s) => Ok(s.clone()),
        }
    }

    /// The matrix as an `SL(n, R)` element; fails on `det != 1`.
    pub fn sl_element(&self) -> Result<SlnElement> {
        SlnElement::new(self.matrix())
    }
}

pub fn parse_matrix_file(text: &str) -> std::result::Result<MatrixFile, ParseError> {
    let value: Value = serde_json::from_str(text)?;
    let Value::Object(mut obj) = value else {
        return Err(ParseError::Schema("top level must be an object".into()));
    };
    let sl = match obj.remove("group") {
        None => false,
        Some(Value::String(s)) if s == "sl" => true,
        Some(other) => return Err(ParseError::Schema(format!("unknown group {other}"))),
    };
    let body = if let Some(j) = obj.remove("jordan") {
        if !obj.is_empty() {
            return Err(ParseError::Schema("unexpected keys next to \"jordan\"".into()));
        }
        let doc: JordanDoc = serde_json::from_value(j)?;
        MatrixBody::Jordan(jordan_from_doc(doc)?)
    } else {
        let doc: DenseDoc = serde_json::from_value(Value::Object(obj))?;
        MatrixBody::Dense(dense_from_doc(doc)?)
    };
    let file = MatrixFile { body, sl };
    if sl {
        file.sl_element()?;
    }
    Ok(file)
}

fn dense_from_doc(doc: DenseDoc) -> std::result::Result<CMatrix, ParseError> {
    if doc.rows == 0 || doc.cols == 0 {
        return Err(ParseError::Schema("empty matrix".into()));
    }
    if doc.data.len() != doc.rows * doc.cols {
        return Err(ParseError::Schema(format!(
            "{}x{} matrix needs {} entries, found {}",
            doc.rows,
            doc.cols,
            doc.rows * doc.cols,
            doc.data.len()
        )));
    }
    let data: Vec<C64> = doc
        .data
        .iter()
        .map(|e| match *e {
            Entry::Complex([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        })
        .collect();
    if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(ParseError::Schema("non-finite entry".into()));
    }
    Ok(CMatrix::new(doc.rows, doc.cols, data)?)
}

fn jordan_from_doc(doc: JordanDoc) -> std::result::Result<JordanSpec, ParseError> {
    let m = dense_from_doc(doc.m)?;
    let mut blocks = Vec::with_capacity(doc.blocks.len());
    for [re, im, size] in doc.blocks {
        if !(size >= 1.0 && size.fract() == 0.0) {
            return Err(ParseError::Schema(format!("block size {size} is not a positive integer")));
        }
        if !(re.is_finite() && im.is_finite()) {
            return Err(ParseError::Schema("non-finite eigenvalue".into()));
        }
        blocks.push(JordanBlock::new(C64::new(re, im), size as usize));
    }
    Ok(JordanSpec::new(m, blocks)?)
}

fn dense_doc(m: &CMatrix) -> DenseDoc {
    DenseDoc {
        rows: m.rows(),
        cols: m.cols(),
        data: m.data().iter().map(|z| Entry::Complex([z.re, z.im])).collect(),
    }
}

/// Dense document; floats are written in shortest round-trip form.
pub fn matrix_to_json(m: &CMatrix) -> Value {
    serde_json::to_value(dense_doc(m)).expect("plain data")
}

pub fn spec_to_json(spec: &JordanSpec) -> Value {
    let doc = JordanDoc {
        m: dense_doc(spec.m()),
        blocks: spec.blocks().iter().map(|b| [b.mu.re, b.mu.im, b.size as f64]).collect(),
    };
    let mut obj = Map::new();
    obj.insert("jordan".into(), serde_json::to_value(doc).expect("plain data"));
    Value::Object(obj)
}

pub fn sl_to_json(g: &SlnElement) -> Value {
    let mut v = matrix_to_json(g.matrix());
    v.as_object_mut().unwrap().insert("group".into(), Value::String("sl".into()));
    v
}
