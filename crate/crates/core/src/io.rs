//! JSON formats for matrices and root subgroup coordinates.
//!
//! Matrices: `{"n": 3, "rows": [[[re, im], ...], ...]}`.
//! Coordinates: `{"word": [2, 1], "zeta": [[re, im], ...], "torus": [theta, ...]}`
//! where `word` lists 1-based simple root indices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        MatrixJson {
            n: m.nrows(),
            rows: (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.rows.len() != self.n {
            return Err(Error::Input(format!(
                "matrix declares n = {} but has {} rows",
                self.n,
                self.rows.len()
            )));
        }
        let cols = self.rows.first().map(|r| r.len()).unwrap_or(0);
        if self.rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Input("ragged matrix rows".into()));
        }
        Ok(CMatrix::from_fn(self.n, cols, |r, c| {
            let [re, im] = self.rows[r][c];
            Complex64::new(re, im)
        }))
    }

    pub fn to_square_matrix(&self) -> Result<CMatrix> {
        let m = self.to_matrix()?;
        if m.ncols() != self.n {
            return Err(Error::Input(format!("expected a {0}x{0} matrix", self.n)));
        }
        Ok(m)
    }
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let json: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("bad matrix JSON: {e}")))?;
    json.to_square_matrix()
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string_pretty(&MatrixJson::from_matrix(m)).expect("matrix serializes")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordsJson {
    pub word: Vec<usize>,
    pub zeta: Vec<[f64; 2]>,
    pub torus: Vec<f64>,
}

impl CoordsJson {
    pub fn zetas(&self) -> Vec<Complex64> {
        self.zeta.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }
}

/// `#[serde(with = ...)]` adaptor writing a `CMatrix` as [`MatrixJson`].
pub mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let json = MatrixJson::deserialize(d)?;
        json.to_matrix().map_err(serde::de::Error::custom)
    }
}
