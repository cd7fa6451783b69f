//! Dense complex matrix helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// A component is invertible when its smallest singular value exceeds this
/// fraction of its largest one.
pub const INVERTIBILITY_RTOL: f64 = 1e-9;

/// Singular values below this fraction of the largest are treated as zero
/// when extracting nullspaces.
pub const NULLSPACE_RTOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a complex matrix from real row-major data.
pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    assert_eq!(data.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

/// `‖M − I‖_F` for a square matrix.
pub fn distance_to_identity(m: &CMatrix) -> f64 {
    debug_assert!(m.is_square());
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = if i == j { m[(i, j)] - 1.0 } else { m[(i, j)] };
            acc += z.norm_sqr();
        }
    }
    acc.sqrt()
}

/// Ratio of smallest to largest singular value. Empty matrices count as
/// perfectly conditioned; the zero matrix has ratio 0.
pub fn singular_value_ratio(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 1.0;
    }
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0.0;
    }
    sv.min() / max
}

pub fn is_invertible(m: &CMatrix) -> bool {
    m.is_square() && singular_value_ratio(m) > INVERTIBILITY_RTOL
}

/// Inverse of a square matrix that passes the invertibility threshold.
pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    if !is_invertible(m) {
        return None;
    }
    if m.nrows() == 0 {
        return Some(m.clone());
    }
    m.clone().try_inverse()
}

pub fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut c0) = (0, 0);
    for b in blocks {
        out.view_mut((r, c0), b.shape()).copy_from(b);
        r += b.nrows();
        c0 += b.ncols();
    }
    out
}

/// Orthonormal basis of `{x : K x = 0}`, read off the right singular vectors.
///
/// Singular values up to `rtol · max(σ_max, scale)` count as zero. `scale`
/// is the magnitude of the data `K` was assembled from, so a `K` that is zero
/// up to rounding is recognized as zero.
pub fn nullspace(k: &CMatrix, rtol: f64, scale: f64) -> Vec<CVector> {
    let cols = k.ncols();
    if cols == 0 {
        return Vec::new();
    }
    let rows = k.nrows();
    if rows == 0 {
        return (0..cols)
            .map(|j| CVector::from_fn(cols, |i, _| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }))
            .collect();
    }
    // Tall systems are compressed to their triangular factor first; the SVD
    // needs at least `cols` rows to return the full right singular basis.
    let square = if rows > 2 * cols {
        k.clone().qr().r()
    } else {
        k.clone()
    };
    let square = if square.nrows() < cols {
        let mut padded = CMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), square.shape()).copy_from(&square);
        padded
    } else {
        square
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let max = svd.singular_values.max();
    let cutoff = rtol * max.max(scale);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s <= cutoff)
        .map(|(idx, _)| v_t.row(idx).transpose().map(|z| z.conj()))
        .collect()
}

/// A standard complex Gaussian: real and imaginary parts independent with
/// variance 1/2 each.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    // Fill row-major so the draw order matches the serialized layout.
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

/// JSON form of a matrix: shape plus row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixDoc {
    fn from(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixDoc {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

impl TryFrom<MatrixDoc> for CMatrix {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        if doc.data.len() != doc.rows * doc.cols {
            return Err(Error::InvalidArgument(format!(
                "matrix declares {}x{} but carries {} entries",
                doc.rows,
                doc.cols,
                doc.data.len()
            )));
        }
        Ok(CMatrix::from_fn(doc.rows, doc.cols, |i, j| {
            let [re, im] = doc.data[i * doc.cols + j];
            c(re, im)
        }))
    }
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string_pretty(&MatrixDoc::from(m)).expect("matrix serializes")
}

pub fn matrix_from_json(text: &str) -> Result<CMatrix> {
    let doc: MatrixDoc = serde_json::from_str(text)?;
    doc.try_into()
}

/// Serde adapter for matrix fields in the row-major JSON layout.
pub mod matrix_serde {
    use super::{CMatrix, MatrixDoc};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        MatrixDoc::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let doc = MatrixDoc::deserialize(d)?;
        CMatrix::try_from(doc).map_err(serde::de::Error::custom)
    }
}
