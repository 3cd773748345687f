//! Matrix realizations of SL(n,C), SU(n) and SU(p,q) and of the root
//! homomorphisms used by the factorizations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CMatrix2, I, ONE, ZERO};
use crate::rootsys::{is_in_wk, ReducedWordData, RootPair, RootSystem, WeylElement};
use crate::tol::{EPS_DISK, EPS_GRP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationConfig {
    pub n: usize,
    pub signature: Option<(usize, usize)>,
}

impl RealizationConfig {
    pub fn new(n: usize, signature: Option<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("matrix size must be at least 2".into()));
        }
        if let Some((p, q)) = signature {
            if p == 0 || q == 0 || p + q != n {
                return Err(Error::Config(format!("signature ({p},{q}) does not split {n}")));
            }
        }
        Ok(RealizationConfig { n, signature })
    }

    pub fn compact(n: usize) -> Self {
        RealizationConfig { n, signature: None }
    }

    pub fn from_root_system(rs: &RootSystem) -> Self {
        RealizationConfig {
            n: rs.n(),
            signature: rs.signature,
        }
    }

    /// `diag(I_p, -I_q)`, or the identity without a signature.
    pub fn j_form(&self) -> CMatrix {
        let p = self.signature.map(|(p, _)| p).unwrap_or(self.n);
        let entries: Vec<f64> = (0..self.n).map(|k| if k < p { 1.0 } else { -1.0 }).collect();
        linalg::real_diagonal(&entries)
    }

    /// The Cartan involution `Ad(diag(i I_p, -i I_q))`.
    pub fn cartan_involution(&self, x: &CMatrix) -> Result<CMatrix> {
        let (p, _) = self
            .signature
            .ok_or_else(|| Error::Config("Cartan involution needs a signature".into()))?;
        let phases: Vec<Complex64> = (0..self.n).map(|k| if k < p { I } else { -I }).collect();
        let d = linalg::diagonal(&phases);
        let d_inv = linalg::diagonal(&phases.iter().map(|z| z.inv()).collect::<Vec<_>>());
        Ok(&d * x * d_inv)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupTag {
    #[serde(rename = "sl")]
    SL,
    #[serde(rename = "su")]
    SU,
    #[serde(rename = "supq")]
    SUpq,
    #[serde(rename = "torus")]
    Torus,
}

/// A square matrix tagged with the group it is claimed to lie in.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: CMatrix,
    pub tag: GroupTag,
    pub config: RealizationConfig,
}

impl GroupElement {
    /// Validates membership to `EPS_GRP` before wrapping.
    pub fn new(matrix: CMatrix, tag: GroupTag, config: RealizationConfig) -> Result<Self> {
        let el = GroupElement { matrix, tag, config };
        let err = el.membership_error()?;
        if err > EPS_GRP {
            return Err(Error::Input(format!(
                "matrix is not in {:?} (defect {err:.3e})",
                el.tag
            )));
        }
        Ok(el)
    }

    /// Relative defect of the group law defining `tag`.
    pub fn membership_error(&self) -> Result<f64> {
        let m = &self.matrix;
        let n = self.config.n;
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Input(format!("expected a {n}x{n} matrix")));
        }
        let det_err = (linalg::det(m) - ONE).norm();
        let scale = linalg::frobenius(m).powi(2).max(1.0);
        let form_err = match self.tag {
            GroupTag::SL => 0.0,
            GroupTag::SU => linalg::frobenius(&(m.adjoint() * m - linalg::identity(n))) / scale,
            GroupTag::SUpq => {
                if self.config.signature.is_none() {
                    return Err(Error::Config("SU(p,q) element needs a signature".into()));
                }
                let j = self.config.j_form();
                linalg::frobenius(&(m.adjoint() * &j * m - &j)) / scale
            }
            GroupTag::Torus => {
                let mut off = 0.0f64;
                for r in 0..n {
                    for c in 0..n {
                        if r == c {
                            off = off.max((m[(r, c)].norm() - 1.0).abs());
                        } else {
                            off = off.max(m[(r, c)].norm());
                        }
                    }
                }
                off
            }
        };
        Ok(det_err.max(form_err))
    }
}

/// Traceless matrix in sl(n,C).
#[derive(Clone, Debug)]
pub struct LieElement {
    pub matrix: CMatrix,
}

impl LieElement {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let tr = matrix.trace().norm();
        if tr > EPS_GRP * linalg::frobenius(&matrix).max(1.0) {
            return Err(Error::Input(format!("trace {tr:.3e} is not zero")));
        }
        Ok(LieElement { matrix })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    H,
}

fn sl2_generator(which: Generator) -> CMatrix2 {
    match which {
        Generator::E => CMatrix2::new(ZERO, ONE, ZERO, ZERO),
        Generator::F => CMatrix2::new(ZERO, ZERO, ONE, ZERO),
        Generator::H => CMatrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

/// Chevalley generator for a simple root: `E_{k,k+1}`, `E_{k+1,k}` or
/// `E_kk - E_{k+1,k+1}`. Non-simple roots need a word, see [`root_vector`].
pub fn chevalley(config: &RealizationConfig, root: RootPair, which: Generator) -> Result<LieElement> {
    if !root.is_positive() || root.j != root.i + 1 || root.j >= config.n {
        return Err(Error::Config(format!(
            "{root} is not simple; non-simple root vectors depend on a word"
        )));
    }
    let m = sl2_embed(config.n, root.i, &sl2_generator(which));
    Ok(LieElement { matrix: m })
}

/// `iota_{tau_j}` applied to an sl(2) generator (`j` is 0-based).
pub fn root_vector(config: &RealizationConfig, word: &ReducedWordData, j: usize, which: Generator) -> LieElement {
    let conj = prefix_rep(config.n, &word.gammas[..j]);
    let conj_inv = conj.adjoint();
    let x = sl2_embed(config.n, word.gammas[j], &sl2_generator(which));
    LieElement {
        matrix: conj_inv * x * conj,
    }
}

fn sl2_embed(n: usize, k: usize, m: &CMatrix2) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    out[(k, k)] = m[(0, 0)];
    out[(k, k + 1)] = m[(0, 1)];
    out[(k + 1, k)] = m[(1, 0)];
    out[(k + 1, k + 1)] = m[(1, 1)];
    out
}

/// `a_+(zeta) = (1 + |zeta|^2)^{-1/2}`.
pub fn a_plus(zeta: Complex64) -> f64 {
    (1.0 + zeta.norm_sqr()).powf(-0.5)
}

/// `a_-(zeta) = (1 - |zeta|^2)^{-1/2}`; requires `|zeta| < 1 - EPS_DISK`.
pub fn a_minus(zeta: Complex64) -> Result<f64> {
    check_disk(zeta)?;
    Ok((1.0 - zeta.norm_sqr()).powf(-0.5))
}

pub fn check_disk(zeta: Complex64) -> Result<()> {
    let modulus = zeta.norm();
    if modulus.is_finite() && modulus < 1.0 - EPS_DISK {
        Ok(())
    } else {
        Err(Error::DomainViolation {
            modulus,
            limit: 1.0 - EPS_DISK,
        })
    }
}

/// `a_+(zeta) [[1, -conj(zeta)], [zeta, 1]]`, an element of SU(2).
pub fn k_factor(zeta: Complex64) -> CMatrix2 {
    let a = Complex64::new(a_plus(zeta), 0.0);
    CMatrix2::new(a, -zeta.conj() * a, zeta * a, a)
}

/// `a_-(zeta) [[1, conj(zeta)], [zeta, 1]]`, an element of SU(1,1).
pub fn q_factor(zeta: Complex64) -> Result<CMatrix2> {
    let a = Complex64::new(a_minus(zeta)?, 0.0);
    Ok(CMatrix2::new(a, zeta.conj() * a, zeta * a, a))
}

/// `k_factor` or `q_factor` according to the root type.
pub fn elementary_factor(zeta: Complex64, noncompact: bool) -> Result<CMatrix2> {
    if noncompact {
        q_factor(zeta)
    } else {
        Ok(k_factor(zeta))
    }
}

/// `iota_{alpha_k}(m)`: `m` placed at rows/cols `(k, k+1)`.
pub fn simple_embedding(n: usize, k: usize, m: &CMatrix2) -> CMatrix {
    linalg::embed_block(n, k, k + 1, m)
}

/// `r_k = iota_{alpha_k}([[0, i], [i, 0]])`.
pub fn simple_reflection_rep(n: usize, k: usize) -> CMatrix {
    simple_embedding(n, k, &CMatrix2::new(ZERO, I, I, ZERO))
}

/// `r_{gamma_j} .. r_{gamma_1}` for the given letters.
pub fn prefix_rep(n: usize, gammas: &[usize]) -> CMatrix {
    let mut out = linalg::identity(n);
    for &g in gammas {
        out = simple_reflection_rep(n, g) * out;
    }
    out
}

/// `iota_{tau_j}(m) = (w'_{j-1})^{-1} iota_{gamma_j}(m) w'_{j-1}` with `j` 0-based.
///
/// Conjugating this way round places the image in the root spaces of
/// `+-tau_j`, so lower/diagonal/upper 2x2 matrices map into N-/H/N+.
pub fn root_hom(config: &RealizationConfig, word: &ReducedWordData, j: usize, m: &CMatrix2) -> Result<CMatrix> {
    if j >= word.len() {
        return Err(Error::Input(format!("word has no letter {}", j + 1)));
    }
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if (det - ONE).norm() > EPS_GRP {
        return Err(Error::Input(format!("2x2 factor has determinant {det}")));
    }
    let conj = prefix_rep(config.n, &word.gammas[..j]);
    let embedded = simple_embedding(config.n, word.gammas[j], m);
    Ok(conj.adjoint() * embedded * conj)
}

/// Closed form of `iota_{tau_j}`: the block `(a, b)` of `tau_j = lambda_a - lambda_b`
/// with the off-diagonal entries twisted by unit phases.
#[derive(Clone, Copy, Debug)]
pub struct RootFrame {
    pub a: usize,
    pub b: usize,
    /// `f_{tau_j}[b, a]`.
    pub lower_phase: Complex64,
    /// `e_{tau_j}[a, b]`.
    pub upper_phase: Complex64,
}

impl RootFrame {
    pub fn new(config: &RealizationConfig, word: &ReducedWordData, j: usize) -> Self {
        let tau = word.taus[j];
        let f = root_vector(config, word, j, Generator::F).matrix;
        let e = root_vector(config, word, j, Generator::E).matrix;
        RootFrame {
            a: tau.i,
            b: tau.j,
            lower_phase: f[(tau.j, tau.i)],
            upper_phase: e[(tau.i, tau.j)],
        }
    }

    pub fn twist(&self, m: &CMatrix2) -> CMatrix2 {
        CMatrix2::new(
            m[(0, 0)],
            m[(0, 1)] * self.upper_phase,
            m[(1, 0)] * self.lower_phase,
            m[(1, 1)],
        )
    }

    pub fn embed(&self, n: usize, m: &CMatrix2) -> CMatrix {
        linalg::embed_block(n, self.a, self.b, &self.twist(m))
    }

    /// `target <- iota_{tau}(m) * target` touching only rows `a`, `b`.
    pub fn left_mul(&self, m: &CMatrix2, target: &mut CMatrix) {
        let t = self.twist(m);
        for c in 0..target.ncols() {
            let x = target[(self.a, c)];
            let y = target[(self.b, c)];
            target[(self.a, c)] = t[(0, 0)] * x + t[(0, 1)] * y;
            target[(self.b, c)] = t[(1, 0)] * x + t[(1, 1)] * y;
        }
    }
}

/// Product of `r_k` along the canonical reduced word of `w`.
pub fn weyl_representative(n: usize, w: &WeylElement) -> CMatrix {
    w.canonical_word()
        .iter()
        .fold(linalg::identity(n), |acc, &k| acc * simple_reflection_rep(n, k))
}

/// Representative of `w` in N_K(T); `w` must lie in W(K) when a signature is set.
pub fn weyl_rep(rs: &RootSystem, w: &WeylElement) -> Result<GroupElement> {
    let config = RealizationConfig::from_root_system(rs);
    if rs.signature.is_some() && !is_in_wk(rs, w)? {
        return Err(Error::Stratum(format!("{w} is not in W(K)")));
    }
    Ok(GroupElement {
        matrix: weyl_representative(config.n, w),
        tag: if rs.signature.is_some() { GroupTag::SUpq } else { GroupTag::SU },
        config,
    })
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Divides by an n-th root of the determinant.
fn normalize_det(m: CMatrix) -> CMatrix {
    let n = m.nrows();
    let d = linalg::det(&m);
    let root = d.powf(1.0 / n as f64);
    m / root
}

/// Haar-distributed SU(n) element: QR of a complex Gaussian matrix with
/// the phases of R's diagonal moved into Q, then det-normalized.
pub fn haar_su<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<Complex64> = (0..n)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                ONE
            }
        })
        .collect();
    normalize_det(q * linalg::diagonal(&phases))
}

/// Random element of su(p,q) with coefficients uniform in `[-scale, scale]`.
fn random_supq_algebra<R: Rng + ?Sized>(p: usize, q: usize, scale: f64, rng: &mut R) -> CMatrix {
    let n = p + q;
    let mut x = CMatrix::zeros(n, n);
    let coeff = |rng: &mut R| rng.random_range(-scale..=scale);
    // skew-Hermitian blocks (compact part)
    for (lo, hi) in [(0, p), (p, n)] {
        for r in lo..hi {
            x[(r, r)] = Complex64::new(0.0, coeff(rng));
            for c in (r + 1)..hi {
                let z = Complex64::new(coeff(rng), coeff(rng));
                x[(r, c)] = z;
                x[(c, r)] = -z.conj();
            }
        }
    }
    let shift = x.trace() / Complex64::new(n as f64, 0.0);
    for k in 0..n {
        x[(k, k)] -= shift;
    }
    // Hermitian off-diagonal blocks (noncompact part)
    for r in 0..p {
        for c in p..n {
            let z = Complex64::new(coeff(rng), coeff(rng));
            x[(r, c)] = z;
            x[(c, r)] = z.conj();
        }
    }
    x
}

/// Element of SU(p,q) as a product of three exponentials of bounded
/// random Lie algebra elements. Not Haar distributed.
pub fn random_supq<R: Rng + ?Sized>(p: usize, q: usize, rng: &mut R) -> CMatrix {
    let mut g = linalg::identity(p + q);
    for _ in 0..3 {
        g *= linalg::expm(&random_supq_algebra(p, q, 1.0, rng));
    }
    g
}

/// Random element of the requested group using the caller's RNG.
pub fn random_element_with<R: Rng + ?Sized>(config: &RealizationConfig, tag: GroupTag, rng: &mut R) -> Result<GroupElement> {
    let n = config.n;
    let matrix = match tag {
        GroupTag::SU => haar_su(n, rng),
        GroupTag::SUpq => {
            let (p, q) = config
                .signature
                .ok_or_else(|| Error::Config("SU(p,q) sampling needs a signature".into()))?;
            random_supq(p, q, rng)
        }
        GroupTag::SL => {
            let z = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
            normalize_det(z)
        }
        GroupTag::Torus => {
            let mut angles: Vec<f64> = (0..n - 1)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            angles.push(-angles.iter().sum::<f64>());
            linalg::diagonal(&angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect::<Vec<_>>())
        }
    };
    Ok(GroupElement {
        matrix,
        tag,
        config: *config,
    })
}

/// Deterministic per seed.
pub fn random_element(config: &RealizationConfig, tag: GroupTag, seed: u64) -> Result<GroupElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(config, tag, &mut rng)
}
