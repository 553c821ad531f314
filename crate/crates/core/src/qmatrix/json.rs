//! JSON encoding of matrices and vectors.
//!
//! A complex number is a `[re, im]` pair, a vector is an array of pairs and a
//! matrix is an array of rows (row-major):
//!
//! ```json
//! [[[1.0, 0.0], [0.0, 0.0]],
//!  [[0.0, 0.0], [-1.0, 0.0]]]
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CMatrix;
use crate::error::{Error, Result};

pub type JsonComplex = [f64; 2];
pub type JsonVector = Vec<JsonComplex>;
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

/// Either a state vector or a matrix; told apart by nesting depth.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonTensor {
    Vector(JsonVector),
    Matrix(JsonMatrix),
}

/// A list of coin matrices, either bare or as `{"coins": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CoinFile {
    Wrapped { coins: Vec<JsonMatrix> },
    Bare(Vec<JsonMatrix>),
}

fn to_complex(z: &JsonComplex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn vector_from_json(v: &JsonVector) -> Vec<Complex64> {
    v.iter().map(to_complex).collect()
}

pub fn vector_to_json(v: &[Complex64]) -> JsonVector {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn matrix_from_json(m: &JsonMatrix) -> Result<CMatrix> {
    let rows: Vec<Vec<Complex64>> = m.iter().map(|r| r.iter().map(to_complex).collect()).collect();
    CMatrix::from_rows(&rows)
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    matrix_from_json(&serde_json::from_str(text)?)
}

pub fn matrix_to_string(m: &CMatrix) -> String {
    serde_json::to_string(&matrix_to_json(m)).expect("matrix serialization cannot fail")
}

/// Parses a coin fixture file; every coin must be 2x2.
pub fn parse_coins(text: &str) -> Result<Vec<CMatrix>> {
    let file: CoinFile = serde_json::from_str(text)?;
    let raw = match file {
        CoinFile::Wrapped { coins } => coins,
        CoinFile::Bare(coins) => coins,
    };
    raw.iter()
        .map(|m| {
            let c = matrix_from_json(m)?;
            if c.shape() != (2, 2) {
                return Err(Error::Parse(format!(
                    "coin must be 2x2, got {}x{}",
                    c.rows(),
                    c.cols()
                )));
            }
            Ok(c)
        })
        .collect()
}
