//! Birkhoff factorization `g = l w m a u`, the minor formula for the
//! diagonal, and the block triangular factorization for SU(p,q).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::realize::weyl_representative;
use crate::rootsys::WeylElement;
use crate::tol::{EPS_FAC, EPS_PIV, EPS_PIV_AMBIGUOUS};

#[derive(Clone, Debug, Serialize)]
pub struct BirkhoffFactors {
    pub w: WeylElement,
    /// Lower unipotent, in `N- ∩ w N- w^{-1}`.
    #[serde(with = "crate::io::matrix_serde")]
    pub l: CMatrix,
    /// Signed permutation representing `w`.
    #[serde(with = "crate::io::matrix_serde")]
    pub wrep: CMatrix,
    /// Unit-modulus diagonal.
    #[serde(with = "crate::io::matrix_serde")]
    pub m: CMatrix,
    /// Positive diagonal.
    #[serde(with = "crate::io::matrix_serde")]
    pub a: CMatrix,
    /// Upper unipotent.
    #[serde(with = "crate::io::matrix_serde")]
    pub u: CMatrix,
}

impl BirkhoffFactors {
    pub fn product(&self) -> CMatrix {
        &self.l * &self.wrep * &self.m * &self.a * &self.u
    }

    pub fn a_diagonal(&self) -> Vec<f64> {
        (0..self.a.nrows()).map(|k| self.a[(k, k)].re).collect()
    }

    pub fn m_diagonal(&self) -> Vec<Complex64> {
        (0..self.m.nrows()).map(|k| self.m[(k, k)]).collect()
    }
}

/// Factors `g` in `N- w H N+`.
///
/// Columns are processed left to right. Column `j` is first cleared at the
/// pivot rows of earlier columns, then its pivot is the topmost remaining
/// entry that is not zero relative to the column norm. The pivot rows give
/// the permutation `w(j)`.
pub fn birkhoff_factorize(g: &CMatrix) -> Result<BirkhoffFactors> {
    let n = g.nrows();
    if g.ncols() != n || n == 0 {
        return Err(Error::Input("matrix is not square".into()));
    }
    let mut reduced = g.clone();
    // column operations accumulated as a unit upper triangular matrix
    let mut ops = linalg::identity(n);
    let mut pivots: Vec<usize> = Vec::with_capacity(n);

    for j in 0..n {
        for (i, &row) in pivots.iter().enumerate() {
            let factor = reduced[(row, j)] / reduced[(row, i)];
            if factor == ZERO {
                continue;
            }
            for r in 0..n {
                let v = reduced[(r, i)];
                reduced[(r, j)] -= factor * v;
            }
            for r in 0..n {
                let v = ops[(r, i)];
                ops[(r, j)] -= factor * v;
            }
            reduced[(row, j)] = ZERO;
        }
        let norm = (0..n).map(|r| reduced[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Input("matrix is singular".into()));
        }
        let mut chosen = None;
        for r in (0..n).filter(|r| !pivots.contains(r)) {
            let rel = reduced[(r, j)].norm() / norm;
            if rel <= EPS_PIV {
                continue;
            }
            if rel < EPS_PIV_AMBIGUOUS {
                return Err(Error::StratumBoundary(format!(
                    "column {} has an entry of relative size {rel:.3e} at row {}",
                    j + 1,
                    r + 1
                )));
            }
            chosen = Some(r);
            break;
        }
        let row = chosen.ok_or_else(|| Error::Input("matrix is singular".into()))?;
        // entries above the pivot count as zero
        for r in (0..row).filter(|r| !pivots.contains(r)) {
            reduced[(r, j)] = ZERO;
        }
        pivots.push(row);
    }

    let w = WeylElement::from_perm(pivots.clone())?;
    let wrep = weyl_representative(n, &w);
    let mut l = linalg::identity(n);
    let mut d = Vec::with_capacity(n);
    for (j, &row) in pivots.iter().enumerate() {
        let pivot = reduced[(row, j)];
        for r in (row + 1)..n {
            l[(r, row)] = reduced[(r, j)] / pivot;
        }
        d.push(pivot / wrep[(row, j)]);
    }
    let m: Vec<Complex64> = d.iter().map(|z| z / z.norm()).collect();
    let a: Vec<f64> = d.iter().map(|z| z.norm()).collect();
    Ok(BirkhoffFactors {
        w,
        l,
        wrep,
        m: linalg::diagonal(&m),
        a: linalg::real_diagonal(&a),
        u: linalg::unit_upper_inverse(&ops),
    })
}

/// `d(g) = prod_j sigma_j(g)^{h_{alpha_j}}` with `sigma_j` the leading
/// principal j x j minor, i.e. `d_k = sigma_k / sigma_{k-1}`.
pub fn diagonal_via_minors(g: &CMatrix) -> Result<CMatrix> {
    let n = g.nrows();
    let scale = linalg::frobenius(g).max(f64::MIN_POSITIVE);
    let mut prev = ONE;
    let mut d = Vec::with_capacity(n);
    for k in 1..=n {
        let minor = linalg::det(&g.view((0, 0), (k, k)).into_owned());
        if minor.norm() <= EPS_PIV * scale.powi(k as i32) {
            return Err(Error::StratumBoundary(format!("principal minor {k} vanishes")));
        }
        d.push(minor / prev);
        prev = minor;
    }
    Ok(linalg::diagonal(&d))
}

/// `g = l_p g_k u_p` relative to the `(p, q)` block structure.
#[derive(Clone, Debug, Serialize)]
pub struct BlockFactors {
    #[serde(with = "crate::io::matrix_serde")]
    pub l_p: CMatrix,
    #[serde(with = "crate::io::matrix_serde")]
    pub g_k: CMatrix,
    #[serde(with = "crate::io::matrix_serde")]
    pub u_p: CMatrix,
    /// The q x p lower-left block `C A^{-1}` of `l_p`.
    #[serde(with = "crate::io::matrix_serde")]
    pub z: CMatrix,
}

impl BlockFactors {
    pub fn product(&self) -> CMatrix {
        &self.l_p * &self.g_k * &self.u_p
    }

    pub fn z_norm(&self) -> f64 {
        linalg::op_norm(&self.z)
    }
}

pub fn block_factorize(g: &CMatrix, signature: (usize, usize)) -> Result<BlockFactors> {
    let (p, q) = signature;
    let n = p + q;
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::Input(format!("expected a {n}x{n} matrix")));
    }
    let a = g.view((0, 0), (p, p)).into_owned();
    let b = g.view((0, p), (p, q)).into_owned();
    let c = g.view((p, 0), (q, p)).into_owned();
    let d = g.view((p, p), (q, q)).into_owned();
    let a_inv = a
        .clone()
        .try_inverse()
        .filter(|inv| inv.iter().all(|z| z.is_finite()))
        .ok_or_else(|| Error::InvariantViolation("upper-left block is singular".into()))?;
    let z = &c * &a_inv;
    let schur = &d - &z * &b;
    let y = &a_inv * &b;

    let mut l_p = linalg::identity(n);
    l_p.view_mut((p, 0), (q, p)).copy_from(&z);
    let mut g_k = CMatrix::zeros(n, n);
    g_k.view_mut((0, 0), (p, p)).copy_from(&a);
    g_k.view_mut((p, p), (q, q)).copy_from(&schur);
    let mut u_p = linalg::identity(n);
    u_p.view_mut((0, p), (p, q)).copy_from(&y);
    Ok(BlockFactors { l_p, g_k, u_p, z })
}

/// Block factorization followed by the Birkhoff factorization of `g_k`
/// inside `K^C`; the Weyl element must land in W(K).
pub fn refined_factorize(g: &CMatrix, signature: (usize, usize)) -> Result<(BlockFactors, BirkhoffFactors)> {
    let block = block_factorize(g, signature)?;
    let inner = birkhoff_factorize(&block.g_k)?;
    let p = signature.0;
    if !inner.w.perm().iter().enumerate().all(|(i, &wi)| (i < p) == (wi < p)) {
        return Err(Error::InvariantViolation(format!(
            "Weyl component {} of the block diagonal factor is not in W(K)",
            inner.w
        )));
    }
    let rebuilt = &block.l_p * inner.product() * &block.u_p;
    let err = linalg::rel_diff(&rebuilt, g);
    if err > EPS_FAC {
        return Err(Error::InvariantViolation(format!(
            "refined factorization reconstructs to {err:.3e}"
        )));
    }
    Ok((block, inner))
}
