//! Root subgroup coordinates on a Birkhoff component.
//!
//! For a word `gamma_1 .. gamma_n` of `w` the coordinates are
//! `(zeta_1 .. zeta_n, t)` and the group element is
//!
//! ```text
//! g = wrep * iota_{tau_n}(g(zeta_n)) ... iota_{tau_1}(g(zeta_1)) * t
//! ```
//!
//! with `g(zeta) = k(zeta)` on compact roots and `q(zeta)` (|zeta| < 1) on
//! noncompact ones. The inverse peels one factor at a time from the left:
//! the lower unipotent part of what remains is `exp(zeta_j f_{tau_j}) * (terms
//! in earlier root spaces)`, so `zeta_j` is read off `log l` directly.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::birkhoff_factorize;
use crate::linalg::{self, CMatrix};
use crate::realize::{
    a_minus, a_plus, check_disk, elementary_factor, weyl_representative, GroupElement, GroupTag,
    RealizationConfig, RootFrame,
};
use crate::rootsys::{is_in_wk, ReducedWordData, RootSystem};
use crate::tol::EPS_FAC;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RSFCoordinates {
    pub word: ReducedWordData,
    pub zetas: Vec<Complex64>,
    /// `theta_1 .. theta_r`; the last diagonal entry of `t` is `exp(-i sum theta)`.
    pub torus_angles: Vec<f64>,
}

/// Wraps into `(-pi, pi]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// `diag(e^{i theta_1}, .., e^{i theta_r}, e^{-i sum theta})`.
pub fn torus_element(angles: &[f64]) -> CMatrix {
    let last = -angles.iter().sum::<f64>();
    let entries: Vec<Complex64> = angles
        .iter()
        .chain(std::iter::once(&last))
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    linalg::diagonal(&entries)
}

/// Precomputed realization of a word: root types, the closed form of each
/// `iota_{tau_j}` and the representative of `w`.
#[derive(Clone, Debug)]
pub struct Chart {
    rs: RootSystem,
    config: RealizationConfig,
    word: ReducedWordData,
    noncompact: Vec<bool>,
    frames: Vec<RootFrame>,
    wrep: CMatrix,
}

impl Chart {
    pub fn new(rs: &RootSystem, word: ReducedWordData) -> Result<Self> {
        let config = RealizationConfig::from_root_system(rs);
        if word.n() != config.n {
            return Err(Error::Config(format!(
                "word acts on {} letters, root system on {}",
                word.n(),
                config.n
            )));
        }
        for tau in &word.taus {
            if !tau.is_positive() || !word.target.act(*tau).is_positive() {
                return Err(Error::Config(format!(
                    "{tau} is not a positive root kept positive by {}",
                    word.target
                )));
            }
        }
        if rs.signature.is_some() && !is_in_wk(rs, &word.target)? {
            return Err(Error::Stratum(format!(
                "the component of {} meets SU(p,q) only for w in W(K)",
                word.target
            )));
        }
        let noncompact = word.taus.iter().map(|&t| rs.kind(t).is_noncompact()).collect();
        let frames = (0..word.len()).map(|j| RootFrame::new(&config, &word, j)).collect();
        let wrep = weyl_representative(config.n, &word.target);
        Ok(Chart {
            rs: rs.clone(),
            config,
            word,
            noncompact,
            frames,
            wrep,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn config(&self) -> &RealizationConfig {
        &self.config
    }

    pub fn word(&self) -> &ReducedWordData {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_noncompact(&self, j: usize) -> bool {
        self.noncompact[j]
    }

    pub fn frame(&self, j: usize) -> &RootFrame {
        &self.frames[j]
    }

    pub fn wrep(&self) -> &CMatrix {
        &self.wrep
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn torus_dim(&self) -> usize {
        self.config.n - 1
    }

    pub fn group_tag(&self) -> GroupTag {
        if self.config.signature.is_some() {
            GroupTag::SUpq
        } else {
            GroupTag::SU
        }
    }

    pub fn check_coords(&self, zetas: &[Complex64], angles: &[f64]) -> Result<()> {
        if zetas.len() != self.len() {
            return Err(Error::Input(format!(
                "expected {} zeta coordinates, got {}",
                self.len(),
                zetas.len()
            )));
        }
        if angles.len() != self.torus_dim() {
            return Err(Error::Input(format!(
                "expected {} torus angles, got {}",
                self.torus_dim(),
                angles.len()
            )));
        }
        for (j, &z) in zetas.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::Input("non-finite coordinate".into()));
            }
            if self.noncompact[j] {
                check_disk(z)?;
            }
        }
        Ok(())
    }

    /// `iota_{tau_n}(g(zeta_n)) .. iota_{tau_1}(g(zeta_1))`, right-multiplied by `right`.
    fn ordered_product(&self, zetas: &[Complex64], right: CMatrix) -> Result<CMatrix> {
        let mut acc = right;
        for (j, &z) in zetas.iter().enumerate() {
            let m = elementary_factor(z, self.noncompact[j])?;
            self.frames[j].left_mul(&m, &mut acc);
        }
        Ok(acc)
    }

    /// The product of root subgroup factors without `wrep` and `t`.
    pub fn root_product(&self, zetas: &[Complex64]) -> Result<CMatrix> {
        if zetas.len() != self.len() {
            return Err(Error::Input("coordinate count does not match the word".into()));
        }
        self.ordered_product(zetas, linalg::identity(self.n()))
    }

    pub fn forward(&self, zetas: &[Complex64], angles: &[f64]) -> Result<CMatrix> {
        self.check_coords(zetas, angles)?;
        let body = self.ordered_product(zetas, torus_element(angles))?;
        Ok(&self.wrep * body)
    }

    /// `prod_j a(zeta_j)^{h_{tau_j}}` as a diagonal vector.
    pub fn a_product(&self, zetas: &[Complex64]) -> Result<Vec<f64>> {
        if zetas.len() != self.len() {
            return Err(Error::Input("coordinate count does not match the word".into()));
        }
        let mut diag = vec![1.0; self.n()];
        for (j, &z) in zetas.iter().enumerate() {
            let a = if self.noncompact[j] { a_minus(z)? } else { a_plus(z) };
            let frame = &self.frames[j];
            diag[frame.a] *= a;
            diag[frame.b] /= a;
        }
        Ok(diag)
    }

    /// Lower unipotent factor of the root product (before conjugation by `wrep`).
    pub fn nilpotent_part(&self, zetas: &[Complex64]) -> Result<CMatrix> {
        Ok(linalg::ldu(&self.root_product(zetas)?)?.l)
    }

    /// Coefficients of `log l` along `f_{tau_1} .. f_{tau_n}`.
    pub fn l_coordinates(&self, l: &CMatrix) -> Result<Vec<Complex64>> {
        let n = self.n();
        if l.nrows() != n || l.ncols() != n {
            return Err(Error::Input(format!("expected a {n}x{n} matrix")));
        }
        let log = linalg::unipotent_log(l);
        let scale = linalg::frobenius(&log).max(1.0);
        let mut stray = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let on_support = self.frames.iter().any(|f| f.b == r && f.a == c);
                if !on_support {
                    stray = stray.max(log[(r, c)].norm());
                }
            }
        }
        if stray > EPS_FAC * scale {
            return Err(Error::InvariantViolation(format!(
                "log l has weight {stray:.3e} outside the root spaces of the word"
            )));
        }
        Ok(self
            .frames
            .iter()
            .map(|f| log[(f.b, f.a)] / f.lower_phase)
            .collect())
    }

    /// Recovers `(zeta, theta)` from `g` in the component of the word's `w`.
    pub fn inverse(&self, g: &CMatrix) -> Result<(Vec<Complex64>, Vec<f64>)> {
        let n = self.n();
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::Input(format!("expected a {n}x{n} matrix")));
        }
        let detected = birkhoff_factorize(g)?;
        if detected.w != self.word.target {
            return Err(Error::Stratum(format!(
                "element lies in the component of {}, not {}",
                detected.w, self.word.target
            )));
        }
        let mut rho = self.wrep.adjoint() * g;
        let mut zetas = vec![Complex64::new(0.0, 0.0); self.len()];
        for j in (0..self.len()).rev() {
            let l = linalg::ldu(&rho)?.l;
            let log = linalg::unipotent_log(&l);
            let frame = &self.frames[j];
            let z = log[(frame.b, frame.a)] / frame.lower_phase;
            if self.noncompact[j] && check_disk(z).is_err() {
                return Err(Error::InvariantViolation(format!(
                    "recovered |zeta_{}| = {:.6} at a noncompact root",
                    j + 1,
                    z.norm()
                )));
            }
            zetas[j] = z;
            let undo = elementary_factor(-z, self.noncompact[j])?;
            frame.left_mul(&undo, &mut rho);
        }
        let rest = linalg::ldu(&rho)?;
        let id = linalg::identity(n);
        let residual = linalg::frobenius(&(&rest.l - &id))
            .max(linalg::frobenius(&(&rest.u - &id)))
            .max(rest.d.iter().map(|d| (d.norm() - 1.0).abs()).fold(0.0, f64::max));
        if residual > EPS_FAC {
            return Err(Error::InvariantViolation(format!(
                "peeled remainder is {residual:.3e} away from the torus"
            )));
        }
        let angles = rest.d[..n - 1].iter().map(|d| normalize_angle(d.arg())).collect();
        Ok((zetas, angles))
    }
}

pub fn forward(rs: &RootSystem, coords: &RSFCoordinates) -> Result<GroupElement> {
    let chart = Chart::new(rs, coords.word.clone())?;
    let matrix = chart.forward(&coords.zetas, &coords.torus_angles)?;
    Ok(GroupElement {
        matrix,
        tag: chart.group_tag(),
        config: *chart.config(),
    })
}

pub fn inverse(rs: &RootSystem, g: &CMatrix, word: &ReducedWordData) -> Result<RSFCoordinates> {
    let chart = Chart::new(rs, word.clone())?;
    let (zetas, torus_angles) = chart.inverse(g)?;
    Ok(RSFCoordinates {
        word: word.clone(),
        zetas,
        torus_angles,
    })
}

pub fn a_product(rs: &RootSystem, coords: &RSFCoordinates) -> Result<CMatrix> {
    let chart = Chart::new(rs, coords.word.clone())?;
    Ok(linalg::real_diagonal(&chart.a_product(&coords.zetas)?))
}

pub fn l_coordinates(rs: &RootSystem, l: &CMatrix, word: &ReducedWordData) -> Result<Vec<Complex64>> {
    Chart::new(rs, word.clone())?.l_coordinates(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{nilpotent_exp, rel_diff, ONE, ZERO};
    use crate::realize::{k_factor, q_factor};
    use crate::rootsys::{build_root_system, reduced_word_for, WeylElement};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn chart(rank: usize, sig: Option<(usize, usize)>, w: WeylElement) -> Chart {
        let rs = build_root_system(rank, sig).unwrap();
        let word = reduced_word_for(&rs, &w);
        Chart::new(&rs, word).unwrap()
    }

    #[test]
    fn zero_coordinates_give_wrep() {
        let ch = chart(2, None, WeylElement::simple(3, 0));
        let g = ch.forward(&[ZERO; 2], &[0.0, 0.0]).unwrap();
        assert!(rel_diff(&g, ch.wrep()) < 1e-15);
        let (z, t) = ch.inverse(&g).unwrap();
        assert!(z.iter().all(|z| z.norm() < 1e-15));
        assert!(t.iter().all(|t| t.abs() < 1e-15));
    }

    #[test]
    fn rank_one_compact() {
        let ch = chart(1, None, WeylElement::identity(2));
        let zeta = c(0.7, -1.2);
        let g = ch.forward(&[zeta], &[0.4]).unwrap();
        let k = k_factor(zeta);
        let t = torus_element(&[0.4]);
        let expected = CMatrix::from_fn(2, 2, |r, col| k[(r, col)]) * t;
        assert!(rel_diff(&g, &expected) < 1e-15);
        let f = birkhoff_factorize(&g).unwrap();
        assert!((f.l[(1, 0)] - zeta).norm() < 1e-14);
    }

    #[test]
    fn two_letter_prefix_l_factor() {
        // l = exp(zeta_2 f_2 + zeta_1 a(zeta_2)^{-tau_1(h_tau_2)} f_1)
        for sig in [None, Some((2, 1)), Some((1, 2))] {
            let ch = chart(2, sig, WeylElement::identity(3));
            let (z1, z2) = (c(0.3, 0.2), c(-0.25, 0.5));
            let l = ch.nilpotent_part(&[z1, z2, ZERO]).unwrap();
            let tau1 = ch.word().taus[0];
            let tau2 = ch.word().taus[1];
            let a2 = if ch.is_noncompact(1) { a_minus(z2).unwrap() } else { a_plus(z2) };
            let coeff = z1 * a2.powi(-tau1.pairing(tau2) as i32);
            let mut x = CMatrix::zeros(3, 3);
            x[(tau2.j, tau2.i)] = z2 * ch.frame(1).lower_phase;
            x[(tau1.j, tau1.i)] = coeff * ch.frame(0).lower_phase;
            assert!(rel_diff(&l, &nilpotent_exp(&x)) < 1e-14);
        }
    }

    #[test]
    fn a_product_examples() {
        let ch = chart(1, None, WeylElement::identity(2));
        assert_eq!(ch.a_product(&[ZERO]).unwrap(), vec![1.0, 1.0]);
        let a = ch.a_product(&[ONE]).unwrap();
        assert!((a[0] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((a[1] - 2f64.sqrt()).abs() < 1e-15);
        let ch = chart(1, Some((1, 1)), WeylElement::identity(2));
        let a = ch.a_product(&[c(0.5, 0.0)]).unwrap();
        assert!((a[0] - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((a[1] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(ch.a_product(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn su11_forward_is_q_times_t() {
        let ch = chart(1, Some((1, 1)), WeylElement::identity(2));
        let g = ch.forward(&[c(0.5, 0.1)], &[0.3]).unwrap();
        let q = q_factor(c(0.5, 0.1)).unwrap();
        let expected = CMatrix::from_fn(2, 2, |r, col| q[(r, col)]) * torus_element(&[0.3]);
        assert!(rel_diff(&g, &expected) < 1e-15);
    }

    #[test]
    fn round_trip_small() {
        let ch = chart(2, None, WeylElement::identity(3));
        let zetas = [c(1.5, -0.3), c(-0.2, 1.9), c(0.7, 0.7)];
        let angles = [0.3, -2.9];
        let g = ch.forward(&zetas, &angles).unwrap();
        let (z, t) = ch.inverse(&g).unwrap();
        for (a, b) in z.iter().zip(&zetas) {
            assert!((a - b).norm() < 1e-12);
        }
        for (a, b) in t.iter().zip(&angles) {
            assert!(normalize_angle(a - b).abs() < 1e-12);
        }
        let ch = chart(2, Some((2, 1)), WeylElement::simple(3, 0));
        let zetas = [c(0.5, -0.3), c(-0.2, 0.8)];
        let g = ch.forward(&zetas, &[1.0, 0.5]).unwrap();
        let (z, _) = ch.inverse(&g).unwrap();
        for (a, b) in z.iter().zip(&zetas) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_rejects_wrong_component() {
        let ch = chart(2, None, WeylElement::simple(3, 0));
        let other = chart(2, None, WeylElement::identity(3));
        let g = other.forward(&[c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0)], &[0.0, 0.0]).unwrap();
        assert!(matches!(ch.inverse(&g), Err(Error::Stratum(_))));
    }

    #[test]
    fn disk_and_shape_errors() {
        let ch = chart(2, Some((2, 1)), WeylElement::identity(3));
        // tau_2 = lambda_1 - lambda_3 is noncompact
        let bad = [c(0.1, 0.0), c(1.2, 0.0), c(0.1, 0.0)];
        assert!(matches!(ch.forward(&bad, &[0.0, 0.0]), Err(Error::DomainViolation { .. })));
        assert!(matches!(ch.forward(&bad[..2], &[0.0, 0.0]), Err(Error::Input(_))));
        let rs = build_root_system(2, Some((2, 1))).unwrap();
        let word = reduced_word_for(&rs, &WeylElement::simple(3, 1));
        assert!(matches!(Chart::new(&rs, word), Err(Error::Stratum(_))));
    }

    #[test]
    fn l_coordinates_examples() {
        let ch = chart(1, None, WeylElement::identity(2));
        assert_eq!(ch.l_coordinates(&linalg::identity(2)).unwrap(), vec![ZERO]);
        let mut x = CMatrix::zeros(2, 2);
        x[(1, 0)] = c(0.4, 2.0);
        let got = ch.l_coordinates(&nilpotent_exp(&x)).unwrap();
        assert!((got[0] - c(0.4, 2.0)).norm() < 1e-15);
        let ch = chart(2, None, WeylElement::simple(3, 0));
        let mut bad = linalg::identity(3);
        bad[(1, 0)] = ONE;
        assert!(matches!(ch.l_coordinates(&bad), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn free_function_surface() {
        let rs = build_root_system(2, Some((1, 2))).unwrap();
        let word = reduced_word_for(&rs, &WeylElement::simple(3, 1));
        let coords = RSFCoordinates {
            word: word.clone(),
            zetas: vec![c(0.2, 0.1), c(-0.3, 0.4)],
            torus_angles: vec![0.5, -0.25],
        };
        let g = forward(&rs, &coords).unwrap();
        assert!(g.membership_error().unwrap() < 1e-12);
        let back = inverse(&rs, &g.matrix, &word).unwrap();
        for (a, b) in back.zetas.iter().zip(&coords.zetas) {
            assert!((a - b).norm() < 1e-12);
        }
        let a = a_product(&rs, &coords).unwrap();
        let f = birkhoff_factorize(&g.matrix).unwrap();
        assert_eq!(f.w, word.target);
        assert!(rel_diff(&a, &f.a) < 1e-12);
        let l = Chart::new(&rs, word.clone()).unwrap().nilpotent_part(&coords.zetas).unwrap();
        assert_eq!(l_coordinates(&rs, &l, &word).unwrap().len(), 2);
    }
}
