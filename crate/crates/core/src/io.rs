//! The matrix JSON schema shared by circuit files and the command line.
//!
//! A matrix is either explicit, `{"u": [[[re,im],[re,im]],[[re,im],[re,im]]]}`,
//! or one of the named forms `{"name": "X"}`, `{"rz": θ}`, `{"ry": θ}`,
//! `{"phase": φ}` (radians).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c, Complex, Mat2};

/// Row-major 2×2 matrix of `[re, im]` pairs.
pub type MatrixArray = [[[f64; 2]; 2]; 2];

pub fn mat2_to_array(m: &Mat2) -> MatrixArray {
    let e = |i: usize, j: usize| [m.0[i][j].re, m.0[i][j].im];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat2_from_array(a: &MatrixArray) -> Result<Mat2> {
    let e = |i: usize, j: usize| c(a[i][j][0], a[i][j][1]);
    Mat2::try_new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
}

pub fn complex_pair(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum MatrixSpec {
    Explicit { u: MatrixArray },
    Named { name: String },
    Rz { rz: f64 },
    Ry { ry: f64 },
    Phase { phase: f64 },
}

impl MatrixSpec {
    pub fn to_matrix(&self) -> Result<Mat2> {
        match self {
            MatrixSpec::Explicit { u } => mat2_from_array(u),
            MatrixSpec::Named { name } => named_matrix(name),
            MatrixSpec::Rz { rz } => finite_angle(*rz).map(Mat2::rz),
            MatrixSpec::Ry { ry } => finite_angle(*ry).map(Mat2::ry),
            MatrixSpec::Phase { phase } => finite_angle(*phase).map(Mat2::phase),
        }
    }
}

fn finite_angle(theta: f64) -> Result<f64> {
    if theta.is_finite() {
        Ok(theta)
    } else {
        Err(Error::NonFinite)
    }
}

/// One of `I, X, Z, H, S, T`.
pub fn named_matrix(name: &str) -> Result<Mat2> {
    match name {
        "I" => Ok(Mat2::IDENTITY),
        "X" => Ok(Mat2::X),
        "Z" => Ok(Mat2::Z),
        "H" => Ok(Mat2::H),
        "S" => Ok(Mat2::phase(PI / 2.0)),
        "T" => Ok(Mat2::phase(PI / 4.0)),
        other => Err(Error::Parse(format!("unknown matrix name {other:?}"))),
    }
}

/// Parses any matrix JSON form. Unitarity is not checked here.
pub fn parse_matrix_json(text: &str) -> Result<Mat2> {
    let spec: MatrixSpec = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("not a matrix document: {e}")))?;
    spec.to_matrix()
}

/// Explicit `{"u": ...}` form.
pub fn matrix_json(m: &Mat2) -> serde_json::Value {
    serde_json::to_value(MatrixSpec::Explicit {
        u: mat2_to_array(m),
    })
    .expect("matrix serialization is infallible")
}
