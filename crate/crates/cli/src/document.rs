//! Matrix documents: `{"rows": r, "cols": c, "field": "R"|"C", "data": [...]}`.
//!
//! Real data is a flat row-major array of numbers; complex data is a flat
//! row-major array of `[re, im]` pairs. Vectors are `1×n` or `n×1`
//! documents.

use matgeo::{Field, Matrix, Scalar, Vector};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("data entry {index}: {message}")]
    Entry { index: usize, message: String },
    #[error("data entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    rows: usize,
    cols: usize,
    field: FieldTag,
    data: Vec<Value>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
enum FieldTag {
    R,
    C,
}

fn number(v: &Value, index: usize) -> Result<f64, DocumentError> {
    let x = v.as_f64().ok_or_else(|| DocumentError::Entry {
        index,
        message: format!("expected a number, got {v}"),
    })?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(DocumentError::NonFinite { index })
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix, DocumentError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.rows == 0 || raw.cols == 0 {
        return Err(DocumentError::Shape {
            expected: "positive rows and cols".into(),
            got: format!("{}×{}", raw.rows, raw.cols),
        });
    }
    let len = raw.rows * raw.cols;
    if raw.data.len() != len {
        return Err(DocumentError::Shape {
            expected: format!("{len} entries for {}×{}", raw.rows, raw.cols),
            got: raw.data.len().to_string(),
        });
    }
    let (field, data) = match raw.field {
        FieldTag::R => {
            let data = raw
                .data
                .iter()
                .enumerate()
                .map(|(i, v)| Ok(Complex64::new(number(v, i)?, 0.0)))
                .collect::<Result<Vec<Scalar>, DocumentError>>()?;
            (Field::Real, data)
        }
        FieldTag::C => {
            let data = raw
                .data
                .iter()
                .enumerate()
                .map(|(i, v)| match v.as_array().map(Vec::as_slice) {
                    Some([re, im]) => Ok(Complex64::new(number(re, i)?, number(im, i)?)),
                    _ => Err(DocumentError::Entry {
                        index: i,
                        message: format!("expected an [re, im] pair, got {v}"),
                    }),
                })
                .collect::<Result<Vec<Scalar>, DocumentError>>()?;
            (Field::Complex, data)
        }
    };
    Ok(Matrix::new(raw.rows, raw.cols, field, data).expect("shape checked above"))
}

/// A `1×n` or `n×1` document as a vector.
pub fn parse_vector(text: &str) -> Result<Vector, DocumentError> {
    let m = parse_matrix(text)?;
    match m.shape() {
        (1, _) | (_, 1) => Ok(Vector::new(m.field(), m.entries().to_vec()).expect("nonempty")),
        (r, c) => Err(DocumentError::Shape {
            expected: "a 1×n or n×1 vector".into(),
            got: format!("{r}×{c}"),
        }),
    }
}

pub fn matrix_value(m: &Matrix) -> Value {
    let data: Vec<Value> = match m.field() {
        Field::Real => m.entries().iter().map(|z| json!(z.re)).collect(),
        Field::Complex => m.entries().iter().map(|z| json!([z.re, z.im])).collect(),
    };
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "field": match m.field() { Field::Real => "R", Field::Complex => "C" },
        "data": data,
    })
}

/// Column vector document.
pub fn vector_value(v: &Vector) -> Value {
    matrix_value(&Matrix::new(v.dim(), 1, v.field(), v.entries().to_vec()).expect("nonempty"))
}

pub fn scalar_value(z: Scalar) -> Value {
    json!([z.re, z.im])
}
