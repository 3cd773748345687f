//! Samplers and density checks against quadrature, analytic CDFs and the
//! rank one Mobius action.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsfactor::linalg::{self, CMatrix};
use rsfactor::measure::{
    haar_moment_compare, invariance_jacobian_test, mobius, sample_compact, sample_truncated, translate, DensitySpec,
};
use rsfactor::realize::{GroupElement, GroupTag, RealizationConfig};
use rsfactor::rootsys::{build_root_system, reduced_word_for, WeylElement};
use rsfactor::rsf::Chart;
use rsfactor::tol::FD_STEP;
use rsfactor::verify::GroupSpec;
use rsfactor::Complex64;

fn top_spec(rank: usize, sig: Option<(usize, usize)>) -> DensitySpec {
    let rs = build_root_system(rank, sig).unwrap();
    DensitySpec::new(&rs, &reduced_word_for(&rs, &WeylElement::identity(rank + 1)))
}

fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn compact_radial_law_matches_cdf() {
    let spec = top_spec(2, None);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draws: Vec<_> = (0..100_000).map(|_| sample_compact(&spec, &mut rng).unwrap()).collect();
    for (j, &h) in spec.exponents.iter().enumerate() {
        let s: Vec<f64> = draws.iter().map(|c| c.zetas[j].norm_sqr()).collect();
        let d = ks_statistic(s, |s| 1.0 - (1.0 + s).powi(-(h as i32)));
        assert!(d < 0.01, "coordinate {j}: KS {d}");
        let arg: Vec<f64> = draws.iter().map(|c| c.zetas[j].arg()).collect();
        assert!(ks_statistic(arg, |a| (a + PI) / (2.0 * PI)) < 0.01);
    }
}

/// Bump supported in `|zeta| < 0.5`.
fn bump(z: Complex64) -> f64 {
    let s = z.norm_sqr() / 0.25;
    if s < 1.0 {
        (1.0 - s).powi(2)
    } else {
        0.0
    }
}

/// Simpson's rule for `int bump (1 - r^2)^{-2} 2 pi r dr`.
fn bump_quadrature() -> f64 {
    let n = 10_000;
    let h = 0.5 / n as f64;
    let f = |r: f64| bump(Complex64::new(r, 0.0)) * (1.0 - r * r).powi(-2) * 2.0 * PI * r;
    let mut sum = f(0.0) + f(0.5);
    for k in 1..n {
        sum += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

fn bump_estimate(rmax: f64, seed: u64) -> f64 {
    let spec = top_spec(1, Some((1, 1)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 100_000;
    let total: f64 = (0..n)
        .map(|_| {
            let (c, w) = sample_truncated(&spec, &mut rng, rmax).unwrap();
            assert!(w.is_finite() && w > 0.0);
            bump(c.zetas[0]) * w
        })
        .sum();
    total / n as f64
}

#[test]
fn importance_sampling_matches_quadrature() {
    let exact = bump_quadrature();
    let near = bump_estimate(0.6, 5);
    let far = bump_estimate(0.95, 6);
    assert!((near - exact).abs() / exact < 0.01, "{near} vs {exact}");
    assert!((far - exact).abs() / exact < 0.03, "{far} vs {exact}");
}

#[test]
fn su11_mobius_invariance() {
    let chart = GroupSpec::supq(1, 1).top_chart().unwrap();
    let spec = DensitySpec::from_chart(&chart);
    let config = RealizationConfig::new(2, Some((1, 1))).unwrap();
    // a rotation times a boost of operator norm e^0.6 < 2
    let (c, s) = (0.6f64.cosh(), 0.6f64.sinh());
    let phase = Complex64::from_polar(1.0, 0.7);
    let m = linalg::diagonal(&[phase, phase.conj()]) * real2([c, s, s, c]);
    let g0 = GroupElement::new(m, GroupTag::SUpq, config).unwrap();
    assert!(linalg::op_norm(&g0.matrix) <= 2.0);
    let z = [Complex64::new(0.3, 0.0)];
    let err = invariance_jacobian_test(&chart, &g0, &z, &[0.25], FD_STEP).unwrap();
    assert!(err < 1e-5);
    let (zp, jac) = mobius(&g0.matrix, z[0]);
    let (got, _) = translate(&chart, &g0.matrix, &z, &[0.25]).unwrap();
    assert!((got[0] - zp).norm() < 1e-12);
    let transported = spec.density(&[zp]).unwrap() * jac;
    assert!((transported - spec.density(&z).unwrap()).abs() < 1e-12);
}

fn real2(e: [f64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &e.map(|x| Complex64::new(x, 0.0)))
}

#[test]
fn moments_match_schur_orthogonality() {
    for n in [2, 3] {
        let r = haar_moment_compare(n, 100_000, 11).unwrap();
        assert!(r.max_abs_z() < 3.0, "{r:?}");
        assert!((r.product.g11_sq.expected - 1.0 / n as f64).abs() < 1e-15);
        if n == 2 {
            assert!(r.product.trace_sq.std_err < 0.01);
        }
    }
}

#[test]
fn moment_report_is_independent_of_worker_count() {
    let a = haar_moment_compare(3, 20_000, 4).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| haar_moment_compare(3, 20_000, 4).unwrap());
    assert_eq!(a, b);
}

#[test]
fn density_is_left_invariant_on_every_top_chart() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for group in rsfactor::verify::default_groups() {
        let chart: Chart = group.top_chart().unwrap();
        let config = RealizationConfig::from_root_system(chart.root_system());
        let tag = if group.signature.is_some() { GroupTag::SUpq } else { GroupTag::SU };
        let mut done = 0;
        while done < 3 {
            let g0 = GroupElement::new(group.random_element(&mut rng), tag, config).unwrap();
            let (z, t) = rsfactor::verify::random_coords(&chart, &mut rng, 1.0, 0.7);
            if let Ok(err) = invariance_jacobian_test(&chart, &g0, &z, &t, FD_STEP) {
                assert!(err < 1e-4, "{group}: {err}");
                done += 1;
            }
        }
    }
}
