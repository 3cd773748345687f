//! Small dense complex matrix helpers.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::EPS_PIV;

pub type CMatrix = DMatrix<Complex64>;
pub type CMatrix2 = Matrix2<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diagonal(entries: &[Complex64]) -> CMatrix {
    let n = entries.len();
    let mut m = CMatrix::zeros(n, n);
    for (k, &d) in entries.iter().enumerate() {
        m[(k, k)] = d;
    }
    m
}

pub fn real_diagonal(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    let mut m = CMatrix::zeros(n, n);
    for (k, &d) in entries.iter().enumerate() {
        m[(k, k)] = Complex64::new(d, 0.0);
    }
    m
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||a - b||_F / max(||b||_F, tiny)`.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = frobenius(b).max(f64::MIN_POSITIVE);
    frobenius(&(a - b)) / scale
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Input("matrix is singular".into()))
}

/// Places a 2x2 block at rows/cols `(a, b)` of the n x n identity.
pub fn embed_block(n: usize, a: usize, b: usize, m: &CMatrix2) -> CMatrix {
    let mut out = identity(n);
    out[(a, a)] = m[(0, 0)];
    out[(a, b)] = m[(0, 1)];
    out[(b, a)] = m[(1, 0)];
    out[(b, b)] = m[(1, 1)];
    out
}

/// Logarithm of a unipotent matrix as a finite series.
pub fn unipotent_log(l: &CMatrix) -> CMatrix {
    let n = l.nrows();
    let nil = l - identity(n);
    let mut out = CMatrix::zeros(n, n);
    let mut power = nil.clone();
    for k in 1..n.max(2) {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        out += &power * Complex64::new(sign / k as f64, 0.0);
        power = &power * &nil;
    }
    out
}

/// Exponential of a nilpotent matrix as a finite series.
pub fn nilpotent_exp(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let mut out = identity(n);
    let mut term = identity(n);
    for k in 1..n.max(2) {
        term = &term * x * Complex64::new(1.0 / k as f64, 0.0);
        out += &term;
    }
    out
}

/// Triangular factorization `g = l * diag(d) * u` without pivoting.
#[derive(Debug, Clone)]
pub struct Ldu {
    pub l: CMatrix,
    pub d: Vec<Complex64>,
    pub u: CMatrix,
}

/// Doolittle elimination. Fails with `StratumBoundary` when a leading
/// principal minor is numerically zero.
pub fn ldu(g: &CMatrix) -> Result<Ldu> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(Error::Input("matrix is not square".into()));
    }
    let scale = frobenius(g).max(f64::MIN_POSITIVE);
    let mut work = g.clone();
    let mut l = identity(n);
    for k in 0..n {
        let pivot = work[(k, k)];
        if pivot.norm() <= EPS_PIV * scale {
            return Err(Error::StratumBoundary(format!(
                "leading principal minor {} vanishes",
                k + 1
            )));
        }
        for i in (k + 1)..n {
            let factor = work[(i, k)] / pivot;
            l[(i, k)] = factor;
            for j in k..n {
                let v = work[(k, j)];
                work[(i, j)] -= factor * v;
            }
            work[(i, k)] = ZERO;
        }
    }
    let d: Vec<Complex64> = (0..n).map(|k| work[(k, k)]).collect();
    let mut u = identity(n);
    for i in 0..n {
        for j in (i + 1)..n {
            u[(i, j)] = work[(i, j)] / d[i];
        }
    }
    Ok(Ldu { l, d, u })
}

/// Inverse of a unit upper triangular matrix by back substitution.
pub fn unit_upper_inverse(u: &CMatrix) -> CMatrix {
    let n = u.nrows();
    let mut inv = identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut acc = ZERO;
            for k in (i + 1)..=j {
                acc += u[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -acc;
        }
    }
    inv
}

/// Determinant of a small complex matrix via LU.
pub fn det(m: &CMatrix) -> Complex64 {
    m.clone().lu().determinant()
}

pub fn expm(x: &CMatrix) -> CMatrix {
    x.exp()
}
