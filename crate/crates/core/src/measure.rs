//! Haar density in root subgroup coordinates, samplers and Jacobian checks.
//!
//! On the top component the Haar measure is, up to a constant,
//! `prod_j (1 +- |zeta_j|^2)^{-(1 + delta(h_{tau_j}))} |d zeta_j|` times torus
//! Haar measure, with `+` on compact and `-` on noncompact roots. `|d zeta|`
//! is planar Lebesgue measure.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::realize::{check_disk, haar_su, GroupElement};
use crate::rootsys::{build_root_system, reduced_word_for, ReducedWordData, RootSystem, WeylElement};
use crate::rsf::{normalize_angle, Chart, RSFCoordinates};
use crate::tol::EPS_JACOBIAN;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensitySpec {
    pub word: ReducedWordData,
    pub exponents: Vec<i64>,
    pub signs: Vec<Sign>,
}

impl DensitySpec {
    pub fn new(rs: &RootSystem, word: &ReducedWordData) -> Self {
        DensitySpec {
            word: word.clone(),
            exponents: word.taus.iter().map(|&t| rs.delta_of(t)).collect(),
            signs: word
                .taus
                .iter()
                .map(|&t| if rs.kind(t).is_noncompact() { Sign::Minus } else { Sign::Plus })
                .collect(),
        }
    }

    pub fn from_chart(chart: &Chart) -> Self {
        Self::new(chart.root_system(), chart.word())
    }

    pub fn all_compact(&self) -> bool {
        self.signs.iter().all(|&s| s == Sign::Plus)
    }

    /// `1 +- |zeta_j|^2`.
    pub fn base(&self, j: usize, zeta: Complex64) -> Result<f64> {
        match self.signs[j] {
            Sign::Plus => Ok(1.0 + zeta.norm_sqr()),
            Sign::Minus => {
                check_disk(zeta)?;
                Ok(1.0 - zeta.norm_sqr())
            }
        }
    }

    fn check_len(&self, zetas: &[Complex64]) -> Result<()> {
        if zetas.len() != self.exponents.len() {
            return Err(Error::Input(format!(
                "expected {} coordinates, got {}",
                self.exponents.len(),
                zetas.len()
            )));
        }
        Ok(())
    }

    /// `prod_j base_j^{power(delta_j)}`.
    fn product_with(&self, zetas: &[Complex64], power: impl Fn(i64) -> i32) -> Result<f64> {
        self.check_len(zetas)?;
        let mut out = 1.0;
        for (j, &z) in zetas.iter().enumerate() {
            out *= self.base(j, z)?.powi(power(self.exponents[j]));
        }
        Ok(out)
    }

    pub fn density(&self, zetas: &[Complex64]) -> Result<f64> {
        self.product_with(zetas, |h| -(1 + h) as i32)
    }

    /// Predicted `|det d x / d zeta|` for the exponential coordinates of `l`.
    pub fn nilpotent_jacobian(&self, zetas: &[Complex64]) -> Result<f64> {
        self.product_with(zetas, |h| (h - 1) as i32)
    }

    /// `prod_j base_j^{-2 delta_j}`.
    pub fn a4delta_closed(&self, zetas: &[Complex64]) -> Result<f64> {
        self.product_with(zetas, |h| -(2 * h) as i32)
    }
}

pub fn density(spec: &DensitySpec, coords: &RSFCoordinates) -> Result<f64> {
    spec.density(&coords.zetas)
}

/// `a^{4 delta}` from the closed-form `a` (as `prod_{i<k} (a_i/a_k)^2`) and
/// from the product over the word, in that order.
pub fn a4delta(chart: &Chart, zetas: &[Complex64]) -> Result<(f64, f64)> {
    let a = chart.a_product(zetas)?;
    let mut lhs = 1.0;
    for i in 0..a.len() {
        for k in (i + 1)..a.len() {
            lhs *= (a[i] / a[k]).powi(2);
        }
    }
    let rhs = DensitySpec::from_chart(chart).a4delta_closed(zetas)?;
    Ok((lhs, rhs))
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn to_real(zetas: &[Complex64]) -> Vec<f64> {
    zetas.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

/// Central differences; `diff` forms `f(x + h) - f(x - h)` componentwise.
fn central_jacobian<F, D>(f: &F, diff: &D, x: &[f64], h: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
    D: Fn(&[f64], &[f64]) -> Vec<f64>,
{
    let m = f(x)?.len();
    let mut jac = DMatrix::zeros(m, x.len());
    let mut probe = x.to_vec();
    for k in 0..x.len() {
        probe[k] = x[k] + h;
        let plus = f(&probe)?;
        probe[k] = x[k] - h;
        let minus = f(&probe)?;
        probe[k] = x[k];
        for (r, d) in diff(&plus, &minus).into_iter().enumerate() {
            jac[(r, k)] = d / (2.0 * h);
        }
    }
    Ok(jac)
}

/// `|det J|` at step `h`, and the Richardson combination of steps `h` and
/// `h/2` when `refine` is set.
fn fd_abs_det<F, D>(f: &F, diff: &D, x: &[f64], h: f64, refine: bool) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
    D: Fn(&[f64], &[f64]) -> Vec<f64>,
{
    let coarse = central_jacobian(f, diff, x, h)?;
    if !refine {
        return Ok(coarse.determinant().abs());
    }
    let fine = central_jacobian(f, diff, x, h / 2.0)?;
    Ok(((fine * 4.0 - coarse) / 3.0).determinant().abs())
}

fn plain_diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn check_fd_margin(chart: &Chart, zetas: &[Complex64], h: f64) -> Result<()> {
    for (j, z) in zetas.iter().enumerate() {
        if chart.is_noncompact(j) && z.norm() + 2.0 * h >= 1.0 {
            return Err(Error::NumericalWarning(format!(
                "finite-difference stencil at |zeta_{}| = {:.6} crosses the unit circle",
                j + 1,
                z.norm()
            )));
        }
    }
    Ok(())
}

/// Relative error between the finite-difference `|det d x / d zeta|` of
/// `zeta -> l_coordinates(l(zeta))` and its product formula.
pub fn nilpotent_jacobian_test(chart: &Chart, zetas: &[Complex64], fd_step: f64) -> Result<f64> {
    let spec = DensitySpec::from_chart(chart);
    let want = spec.nilpotent_jacobian(zetas)?;
    if chart.is_empty() {
        return Ok(0.0);
    }
    check_fd_margin(chart, zetas, fd_step)?;
    let map = |v: &[f64]| -> Result<Vec<f64>> {
        let l = chart.nilpotent_part(&to_complex(v))?;
        Ok(to_real(&chart.l_coordinates(&l)?))
    };
    let x = to_real(zetas);
    let mut err = rel_err(fd_abs_det(&map, &plain_diff, &x, fd_step, false)?, want);
    if err > EPS_JACOBIAN {
        err = rel_err(fd_abs_det(&map, &plain_diff, &x, fd_step, true)?, want);
    }
    Ok(err)
}

/// Full real coordinates `(Re zeta, Im zeta, theta)`.
pub fn pack_coords(zetas: &[Complex64], angles: &[f64]) -> Vec<f64> {
    let mut v = to_real(zetas);
    v.extend_from_slice(angles);
    v
}

pub fn unpack_coords(v: &[f64], len: usize) -> (Vec<Complex64>, Vec<f64>) {
    (to_complex(&v[..2 * len]), v[2 * len..].to_vec())
}

/// The translated coordinates `inverse(g0 * forward(c))`.
pub fn translate(chart: &Chart, g0: &CMatrix, zetas: &[Complex64], angles: &[f64]) -> Result<(Vec<Complex64>, Vec<f64>)> {
    chart.inverse(&(g0 * chart.forward(zetas, angles)?))
}

/// Relative error in `density(c) = density(c') |det dc'/dc|` for
/// `c' = inverse(g0 * forward(c))`.
pub fn invariance_jacobian_test(chart: &Chart, g0: &GroupElement, zetas: &[Complex64], angles: &[f64], fd_step: f64) -> Result<f64> {
    let spec = DensitySpec::from_chart(chart);
    let len = chart.len();
    check_fd_margin(chart, zetas, fd_step)?;
    let (z1, _) = translate(chart, &g0.matrix, zetas, angles)?;
    check_fd_margin(chart, &z1, fd_step)?;
    let map = |v: &[f64]| -> Result<Vec<f64>> {
        let (z, t) = unpack_coords(v, len);
        let (z, t) = translate(chart, &g0.matrix, &z, &t)?;
        Ok(pack_coords(&z, &t))
    };
    let wrapped = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(k, (x, y))| if k >= 2 * len { normalize_angle(x - y) } else { x - y })
            .collect()
    };
    let x = pack_coords(zetas, angles);
    let want = spec.density(zetas)?;
    let d1 = spec.density(&z1)?;
    let mut err = rel_err(d1 * fd_abs_det(&map, &wrapped, &x, fd_step, false)?, want);
    if err > EPS_JACOBIAN {
        err = rel_err(d1 * fd_abs_det(&map, &wrapped, &x, fd_step, true)?, want);
    }
    Ok(err)
}

/// Rank one: `zeta' = (C + D zeta) / (A + B zeta)` for `g0 = [[A, B], [C, D]]`,
/// with `|d zeta'/d zeta|^2 = |A + B zeta|^{-4}`.
pub fn mobius(g0: &CMatrix, zeta: Complex64) -> (Complex64, f64) {
    let den = g0[(0, 0)] + g0[(0, 1)] * zeta;
    ((g0[(1, 0)] + g0[(1, 1)] * zeta) / den, den.norm_sqr().powi(-2))
}

fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-PI..PI)
}

fn compact_coordinate<R: Rng + ?Sized>(h: i64, rng: &mut R) -> Complex64 {
    let u: f64 = rng.random();
    let s = (1.0 - u).powf(-1.0 / h as f64) - 1.0;
    Complex64::from_polar(s.sqrt(), uniform_angle(rng))
}

/// Density of `compact_coordinate` on the plane: `(h/pi) (1 + |zeta|^2)^{-(1+h)}`.
fn compact_proposal(h: i64, zeta: Complex64) -> f64 {
    h as f64 / PI * (1.0 + zeta.norm_sqr()).powi(-(1 + h as i32))
}

fn uniform_torus<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| uniform_angle(rng)).collect()
}

/// Exact draw from the product density of an all-compact word.
pub fn sample_compact<R: Rng + ?Sized>(spec: &DensitySpec, rng: &mut R) -> Result<RSFCoordinates> {
    if !spec.all_compact() {
        return Err(Error::Config("word has noncompact roots; use sample_truncated".into()));
    }
    let zetas = spec.exponents.iter().map(|&h| compact_coordinate(h, rng)).collect();
    let torus_angles = uniform_torus(spec.word.n() - 1, rng);
    Ok(RSFCoordinates {
        word: spec.word.clone(),
        zetas,
        torus_angles,
    })
}

/// Noncompact coordinates uniform on `|zeta| < rmax`, compact ones as in
/// [`sample_compact`]; returns the importance weight density / proposal.
pub fn sample_truncated<R: Rng + ?Sized>(spec: &DensitySpec, rng: &mut R, rmax: f64) -> Result<(RSFCoordinates, f64)> {
    if !(rmax > 0.0 && rmax < 1.0) {
        return Err(Error::Config(format!("rmax must lie in (0, 1), got {rmax}")));
    }
    let mut zetas = Vec::with_capacity(spec.exponents.len());
    let mut proposal = 1.0;
    for (&h, &sign) in spec.exponents.iter().zip(&spec.signs) {
        let z = match sign {
            Sign::Plus => {
                let z = compact_coordinate(h, rng);
                proposal *= compact_proposal(h, z);
                z
            }
            Sign::Minus => {
                let u: f64 = rng.random();
                proposal /= PI * rmax * rmax;
                Complex64::from_polar(rmax * u.sqrt(), uniform_angle(rng))
            }
        };
        zetas.push(z);
    }
    let weight = spec.density(&zetas)? / proposal;
    let torus_angles = uniform_torus(spec.word.n() - 1, rng);
    Ok((
        RSFCoordinates {
            word: spec.word.clone(),
            zetas,
            torus_angles,
        },
        weight,
    ))
}

/// Worker count: `RSFACTOR_THREADS` if set to a positive integer, else rayon's default.
pub fn worker_count() -> usize {
    std::env::var("RSFACTOR_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

pub const CHUNK: usize = 4096;

/// Runs `job(chunk_index, chunk_len)` over fixed-size chunks of `total`
/// items on the worker pool. Results come back in chunk order, so
/// outputs do not depend on the number of workers.
pub fn run_chunked<T, F>(total: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, usize) -> Result<T> + Sync,
{
    let chunks: Vec<(u64, usize)> = (0..total.div_ceil(CHUNK))
        .map(|c| (c as u64, CHUNK.min(total - c * CHUNK)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| chunks.par_iter().map(|&(c, len)| job(c, len)).collect())
}

/// RNG for one chunk of one stream; independent of scheduling.
pub fn chunk_rng(seed: u64, stream: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(chunk);
    rng
}

pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// `N` draws of Haar SU(n) through `forward` of the `w = 1` chart.
pub fn sample_su_batch(n: usize, count: usize, seed: u64) -> Result<Vec<(RSFCoordinates, CMatrix)>> {
    let rs = build_root_system(n - 1, None)?;
    let chart = Chart::new(&rs, reduced_word_for(&rs, &WeylElement::identity(n)))?;
    let spec = DensitySpec::from_chart(&chart);
    let chunks = run_chunked(count, |c, len| {
        let mut rng = chunk_rng(seed, 0, c);
        (0..len)
            .map(|_| {
                let coords = sample_compact(&spec, &mut rng)?;
                let g = chart.forward(&coords.zetas, &coords.torus_angles)?;
                Ok((coords, g))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Truncated importance samples for a signature; `w = 1` chart.
pub fn sample_supq_batch(p: usize, q: usize, count: usize, seed: u64, rmax: f64) -> Result<Vec<(RSFCoordinates, f64)>> {
    let rs = build_root_system(p + q - 1, Some((p, q)))?;
    let spec = DensitySpec::new(&rs, &reduced_word_for(&rs, &WeylElement::identity(p + q)));
    let chunks = run_chunked(count, |c, len| {
        let mut rng = chunk_rng(seed, 0, c);
        (0..len).map(|_| sample_truncated(&spec, &mut rng, rmax)).collect::<Result<Vec<_>>>()
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub expected: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerMoments {
    pub trace_sq: MomentEstimate,
    pub g11_sq: MomentEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub product: SamplerMoments,
    pub qr: SamplerMoments,
    /// `(product - qr) / sqrt(se_product^2 + se_qr^2)`.
    pub two_sample_z_trace_sq: f64,
    pub two_sample_z_g11_sq: f64,
}

impl MomentReport {
    pub fn max_abs_z(&self) -> f64 {
        [
            self.product.trace_sq.z,
            self.product.g11_sq.z,
            self.qr.trace_sq.z,
            self.qr.g11_sq.z,
            self.two_sample_z_trace_sq,
            self.two_sample_z_g11_sq,
        ]
        .iter()
        .fold(0.0f64, |m, z| m.max(z.abs()))
    }
}

/// Per-chunk sums of `x` and `x^2` for `|tr g|^2` and `|g_11|^2`.
#[derive(Clone, Copy, Default)]
struct MomentSums {
    tr: f64,
    tr2: f64,
    g: f64,
    g2: f64,
}

impl MomentSums {
    fn push(&mut self, m: &CMatrix) {
        let t = m.trace().norm_sqr();
        let g = m[(0, 0)].norm_sqr();
        self.tr += t;
        self.tr2 += t * t;
        self.g += g;
        self.g2 += g * g;
    }
}

fn estimate(sums: &[f64], squares: &[f64], count: usize, expected: f64) -> MomentEstimate {
    let n = count as f64;
    let mean = pairwise_sum(sums) / n;
    let var = (pairwise_sum(squares) / n - mean * mean).max(0.0) * n / (n - 1.0);
    let std_err = (var / n).sqrt();
    MomentEstimate {
        mean,
        std_err,
        expected,
        z: (mean - expected) / std_err,
    }
}

fn moments(chunks: &[MomentSums], count: usize, n: usize) -> SamplerMoments {
    let pick = |f: fn(&MomentSums) -> f64| chunks.iter().map(f).collect::<Vec<_>>();
    SamplerMoments {
        trace_sq: estimate(&pick(|s| s.tr), &pick(|s| s.tr2), count, 1.0),
        g11_sq: estimate(&pick(|s| s.g), &pick(|s| s.g2), count, 1.0 / n as f64),
    }
}

fn two_sample_z(a: &MomentEstimate, b: &MomentEstimate) -> f64 {
    (a.mean - b.mean) / (a.std_err.powi(2) + b.std_err.powi(2)).sqrt()
}

/// Compares `E|tr g|^2 = 1` and `E|g_11|^2 = 1/n` between product-coordinate
/// sampling and QR-based Haar sampling.
pub fn haar_moment_compare(n: usize, samples: usize, seed: u64) -> Result<MomentReport> {
    if n < 2 || samples < 2 {
        return Err(Error::Config("need n >= 2 and at least two samples".into()));
    }
    let rs = build_root_system(n - 1, None)?;
    let chart = Chart::new(&rs, reduced_word_for(&rs, &WeylElement::identity(n)))?;
    let spec = DensitySpec::from_chart(&chart);
    let product = run_chunked(samples, |c, len| {
        let mut rng = chunk_rng(seed, 1, c);
        let mut sums = MomentSums::default();
        for _ in 0..len {
            let coords = sample_compact(&spec, &mut rng)?;
            sums.push(&chart.forward(&coords.zetas, &coords.torus_angles)?);
        }
        Ok(sums)
    })?;
    let qr = run_chunked(samples, |c, len| {
        let mut rng = chunk_rng(seed, 2, c);
        let mut sums = MomentSums::default();
        for _ in 0..len {
            sums.push(&haar_su(n, &mut rng));
        }
        Ok(sums)
    })?;
    let product = moments(&product, samples, n);
    let qr = moments(&qr, samples, n);
    Ok(MomentReport {
        n,
        samples,
        seed,
        two_sample_z_trace_sq: two_sample_z(&product.trace_sq, &qr.trace_sq),
        two_sample_z_g11_sq: two_sample_z(&product.g11_sq, &qr.g11_sq),
        product,
        qr,
    })
}

/// Frobenius distance of `g0 * forward(c)` from `forward(c')`; a sanity
/// check that the translated coordinates describe the translated element.
pub fn translate_residual(chart: &Chart, g0: &CMatrix, zetas: &[Complex64], angles: &[f64]) -> Result<f64> {
    let g = g0 * chart.forward(zetas, angles)?;
    let (z, t) = chart.inverse(&g)?;
    Ok(linalg::rel_diff(&chart.forward(&z, &t)?, &g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use crate::realize::{random_element, GroupTag, RealizationConfig};
    use crate::tol::FD_STEP;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn chart(rank: usize, sig: Option<(usize, usize)>, w: WeylElement) -> Chart {
        let rs = build_root_system(rank, sig).unwrap();
        let word = reduced_word_for(&rs, &w);
        Chart::new(&rs, word).unwrap()
    }

    #[test]
    fn density_examples() {
        let su2 = DensitySpec::from_chart(&chart(1, None, WeylElement::identity(2)));
        assert_eq!(su2.density(&[ZERO]).unwrap(), 1.0);
        assert_eq!(su2.density(&[c(1.0, 0.0)]).unwrap(), 0.25);
        let su11 = DensitySpec::from_chart(&chart(1, Some((1, 1)), WeylElement::identity(2)));
        assert!((su11.density(&[c(0.5, 0.0)]).unwrap() - 16.0 / 9.0).abs() < 1e-15);
        assert!(matches!(su11.density(&[c(1.0, 0.0)]), Err(Error::DomainViolation { .. })));
        let a2 = DensitySpec::from_chart(&chart(2, Some((2, 1)), WeylElement::identity(3)));
        assert_eq!(a2.exponents, vec![1, 2, 1]);
        assert_eq!(a2.signs, vec![Sign::Plus, Sign::Minus, Sign::Minus]);
    }

    #[test]
    fn density_blows_up_along_rays() {
        let spec = DensitySpec::from_chart(&chart(2, Some((1, 2)), WeylElement::identity(3)));
        let j = spec.signs.iter().position(|&s| s == Sign::Minus).unwrap();
        let mut last = 0.0;
        for k in 0..60 {
            let r = 1.0 - 0.5f64.powi(k / 3 + 1);
            let mut z = vec![c(0.1, 0.1); 3];
            z[j] = c(r, 0.0);
            let d = spec.density(&z).unwrap();
            assert!(d >= last);
            last = d;
        }
        assert!(last > 1e6);
    }

    #[test]
    fn a4delta_examples() {
        let ch = chart(1, None, WeylElement::identity(2));
        assert_eq!(a4delta(&ch, &[ZERO]).unwrap(), (1.0, 1.0));
        let (l, r) = a4delta(&ch, &[c(1.0, 0.0)]).unwrap();
        assert!((l - 0.25).abs() < 1e-15 && (r - 0.25).abs() < 1e-15);
        let ch = chart(2, None, WeylElement::identity(3));
        let (l, r) = a4delta(&ch, &[c(0.3, -1.1), c(0.7, 0.2), c(-1.5, 0.4)]).unwrap();
        assert!(rel_err(l, r) < 1e-12);
    }

    #[test]
    fn nilpotent_jacobian_rank_one_is_trivial() {
        let ch = chart(1, None, WeylElement::identity(2));
        assert!(nilpotent_jacobian_test(&ch, &[c(0.8, -0.3)], FD_STEP).unwrap() < 1e-9);
    }

    #[test]
    fn nilpotent_jacobian_examples() {
        let ch = chart(2, None, WeylElement::identity(3));
        let z = [c(0.4, -0.9), c(1.2, 0.3), c(-0.5, 0.6)];
        assert!(nilpotent_jacobian_test(&ch, &z, FD_STEP).unwrap() < 1e-5);
        let ch = chart(2, Some((2, 1)), WeylElement::simple(3, 0));
        let z = [c(0.3, 0.2), c(-0.1, 0.4)];
        assert!(nilpotent_jacobian_test(&ch, &z, FD_STEP).unwrap() < 1e-5);
        let edge = [c(0.3, 0.2), c(0.0, 1.0 - 1e-6)];
        assert!(matches!(nilpotent_jacobian_test(&ch, &edge, FD_STEP), Err(Error::NumericalWarning(_))));
    }

    #[test]
    fn invariance_identity_and_rank_one() {
        let ch = chart(1, None, WeylElement::identity(2));
        let id = GroupElement::new(linalg::identity(2), GroupTag::SU, RealizationConfig::compact(2)).unwrap();
        assert!(invariance_jacobian_test(&ch, &id, &[c(0.5, 0.5)], &[0.2], FD_STEP).unwrap() < 1e-9);
        let g0 = random_element(&RealizationConfig::compact(2), GroupTag::SU, 5).unwrap();
        let z = c(0.3, -0.7);
        assert!(invariance_jacobian_test(&ch, &g0, &[z], &[0.1], FD_STEP).unwrap() < 1e-5);
        let (zp, jac) = mobius(&g0.matrix, z);
        let (got, _) = translate(&ch, &g0.matrix, &[z], &[0.1]).unwrap();
        assert!((got[0] - zp).norm() < 1e-12);
        let spec = DensitySpec::from_chart(&ch);
        let lhs = spec.density(&[zp]).unwrap() * jac;
        assert!(rel_err(lhs, spec.density(&[z]).unwrap()) < 1e-12);
    }

    #[test]
    fn invariance_su11() {
        let ch = chart(1, Some((1, 1)), WeylElement::identity(2));
        let config = RealizationConfig::new(2, Some((1, 1))).unwrap();
        let g0 = random_element(&config, GroupTag::SUpq, 9).unwrap();
        assert!(invariance_jacobian_test(&ch, &g0, &[c(0.3, 0.0)], &[0.4], FD_STEP).unwrap() < 1e-5);
    }

    #[test]
    fn compact_sampler_medians() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (h, median) in [(1i64, 1.0), (2, 2f64.sqrt() - 1.0)] {
            let mut s: Vec<f64> = (0..20001).map(|_| compact_coordinate(h, &mut rng).norm_sqr()).collect();
            s.sort_by(f64::total_cmp);
            assert!((s[10000] - median).abs() < 0.05 * median);
        }
        let spec = DensitySpec::from_chart(&chart(2, Some((2, 1)), WeylElement::identity(3)));
        assert!(matches!(sample_compact(&spec, &mut rng), Err(Error::Config(_))));
    }

    #[test]
    fn truncated_sampler_weights() {
        let spec = DensitySpec::from_chart(&chart(2, Some((2, 1)), WeylElement::identity(3)));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (coords, w) = sample_truncated(&spec, &mut rng, 0.8).unwrap();
            assert!(w.is_finite() && w > 0.0);
            assert!(coords.zetas[1].norm() < 0.8 && coords.zetas[2].norm() < 0.8);
        }
        assert!(sample_truncated(&spec, &mut rng, 1.0).is_err());
    }

    #[test]
    fn chunked_runs_are_ordered() {
        let out = run_chunked(3 * CHUNK + 5, |c, len| Ok((c, len))).unwrap();
        assert_eq!(out, vec![(0, CHUNK), (1, CHUNK), (2, CHUNK), (3, 5)]);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0, 4.0, 5.0]), 15.0);
    }

    #[test]
    fn batches_are_deterministic() {
        let a = sample_su_batch(2, 100, 1).unwrap();
        let b = sample_su_batch(2, 100, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|(_, g)| (linalg::det(g) - linalg::ONE).norm() < 1e-12));
    }

    #[test]
    fn small_moment_run() {
        let r = haar_moment_compare(2, 5000, 4).unwrap();
        assert!(r.max_abs_z() < 5.0);
        assert_eq!(r, haar_moment_compare(2, 5000, 4).unwrap());
    }

    #[test]
    fn translation_is_consistent() {
        let ch = chart(2, None, WeylElement::identity(3));
        let g0 = random_element(&RealizationConfig::compact(3), GroupTag::SU, 2).unwrap();
        let z = [c(0.4, -0.9), c(1.2, 0.3), c(-0.5, 0.6)];
        assert!(translate_residual(&ch, &g0.matrix, &z, &[0.3, 0.1]).unwrap() < 1e-12);
    }
}
