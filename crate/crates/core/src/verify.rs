//! The `haar-check` verification suites and their JSON report.
//!
//! Every suite draws from its own seeded stream, so a report is a pure
//! function of the configuration and the seed.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{birkhoff_factorize, block_factorize};
use crate::linalg::{self, CMatrix};
use crate::measure::{
    a4delta, chunk_rng, haar_moment_compare, invariance_jacobian_test, mobius, nilpotent_jacobian_test, translate,
    DensitySpec, MomentReport,
};
use crate::realize::{
    a_minus, a_plus, haar_su, q_factor, random_supq, root_vector, simple_embedding, Generator, GroupElement, GroupTag,
    RealizationConfig,
};
use crate::rootsys::{
    all_reduced_words, build_root_system, is_in_wk, reduced_word_for, verify_delta_identity, weyl_group_k,
    RootSystem, WeylElement,
};
use crate::rsf::{normalize_angle, Chart};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupSpec {
    pub n: usize,
    pub signature: Option<(usize, usize)>,
}

impl GroupSpec {
    pub fn su(n: usize) -> Self {
        GroupSpec { n, signature: None }
    }

    pub fn supq(p: usize, q: usize) -> Self {
        GroupSpec {
            n: p + q,
            signature: Some((p, q)),
        }
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        build_root_system(self.rank(), self.signature)
    }

    /// Weyl elements whose components meet the group.
    pub fn weyl_elements(&self) -> Result<Vec<WeylElement>> {
        let rs = self.root_system()?;
        match self.signature {
            None => Ok(WeylElement::all(self.n)),
            Some(_) => weyl_group_k(&rs),
        }
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> CMatrix {
        match self.signature {
            None => haar_su(self.n, rng),
            Some((p, q)) => random_supq(p, q, rng),
        }
    }

    pub fn top_chart(&self) -> Result<Chart> {
        let rs = self.root_system()?;
        let word = reduced_word_for(&rs, &WeylElement::identity(self.n));
        Chart::new(&rs, word)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.signature {
            None => write!(f, "SU({})", self.n),
            Some((p, q)) => write!(f, "SU({p},{q})"),
        }
    }
}

pub fn default_groups() -> Vec<GroupSpec> {
    vec![
        GroupSpec::su(2),
        GroupSpec::su(3),
        GroupSpec::su(4),
        GroupSpec::supq(1, 1),
        GroupSpec::supq(2, 1),
        GroupSpec::supq(1, 2),
        GroupSpec::supq(2, 2),
    ]
}

/// Pass thresholds; all errors are relative unless noted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub round_trip: f64,
    pub a_product: f64,
    pub a4delta: f64,
    pub jacobian: f64,
    pub invariance: f64,
    pub mobius: f64,
    pub golden: f64,
    /// Bound on every |z| score of the moment comparison.
    pub moment_z: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            round_trip: tol::EPS_RT,
            a_product: tol::EPS_A_PRODUCT,
            a4delta: tol::EPS_A4DELTA,
            jacobian: tol::EPS_JACOBIAN,
            invariance: tol::EPS_JACOBIAN,
            mobius: tol::EPS_MOBIUS,
            golden: tol::EPS_TWO_LETTER,
            moment_z: 3.0,
        }
    }
}

impl Tolerances {
    /// Applies `name=value`.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("tolerance override '{assignment}' is not name=value")))?;
        let value: f64 = value
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v > 0.0)
            .ok_or_else(|| Error::Config(format!("bad tolerance value in '{assignment}'")))?;
        let slot = match name.trim() {
            "round_trip" => &mut self.round_trip,
            "a_product" => &mut self.a_product,
            "a4delta" => &mut self.a4delta,
            "jacobian" => &mut self.jacobian,
            "invariance" => &mut self.invariance,
            "mobius" => &mut self.mobius,
            "golden" => &mut self.golden,
            "moment_z" => &mut self.moment_z,
            other => return Err(Error::Config(format!("unknown tolerance '{other}'"))),
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckConfig {
    pub groups: Vec<GroupSpec>,
    pub seed: u64,
    pub round_trip_samples: usize,
    pub stratum_samples: usize,
    pub jacobian_points: usize,
    pub invariance_pairs: usize,
    pub moment_samples: usize,
    pub golden_samples: usize,
    pub tolerances: Tolerances,
}

impl CheckConfig {
    pub fn new(groups: Vec<GroupSpec>, seed: u64) -> Self {
        CheckConfig {
            groups,
            seed,
            round_trip_samples: 100,
            stratum_samples: 1000,
            jacobian_points: 100,
            invariance_pairs: 50,
            moment_samples: 100_000,
            golden_samples: 20,
            tolerances: Tolerances::default(),
        }
    }

    fn ranks(&self) -> Vec<usize> {
        let mut ranks: Vec<usize> = self.groups.iter().map(|g| g.rank()).collect();
        ranks.sort_unstable();
        ranks.dedup();
        ranks
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupResult {
    pub group: String,
    pub checks: usize,
    pub max_error: f64,
    /// Draws discarded at a stratum boundary or too close to the disk edge.
    pub resampled: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub tolerance: f64,
    pub max_error: f64,
    pub checks: usize,
    pub groups: Vec<GroupResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<MomentReport>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn from_groups(name: &str, tolerance: f64, groups: Vec<GroupResult>, failures: Vec<String>) -> Self {
        let max_error = groups.iter().fold(0.0f64, |m, g| m.max(g.max_error));
        let checks = groups.iter().map(|g| g.checks).sum();
        SuiteResult {
            name: name.into(),
            passed: failures.is_empty() && max_error <= tolerance,
            tolerance,
            max_error,
            checks,
            groups,
            moments: None,
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub groups: Vec<String>,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

/// Tracks the worst error of one group.
struct Tally {
    group: String,
    checks: usize,
    max_error: f64,
    resampled: usize,
}

impl Tally {
    fn new(group: &GroupSpec) -> Self {
        Tally {
            group: group.to_string(),
            checks: 0,
            max_error: 0.0,
            resampled: 0,
        }
    }

    fn record(&mut self, err: f64) {
        self.checks += 1;
        // NaN must fail the suite
        self.max_error = if err.is_nan() { f64::INFINITY } else { self.max_error.max(err) };
    }

    fn finish(self) -> GroupResult {
        GroupResult {
            group: self.group,
            checks: self.checks,
            max_error: self.max_error,
            resampled: self.resampled,
        }
    }
}

/// Uniform on the disk of the given radius.
pub fn disk_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Random coordinates: compact `|zeta| <= compact_r`, noncompact `<= noncompact_r`.
pub fn random_coords<R: Rng + ?Sized>(chart: &Chart, rng: &mut R, compact_r: f64, noncompact_r: f64) -> (Vec<Complex64>, Vec<f64>) {
    let zetas = (0..chart.len())
        .map(|j| disk_point(rng, if chart.is_noncompact(j) { noncompact_r } else { compact_r }))
        .collect();
    let angles = (0..chart.torus_dim())
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    (zetas, angles)
}

/// Largest componentwise difference, relative to `max(1, |value|)`, angles wrapped.
pub fn coord_error(z0: &[Complex64], t0: &[f64], z1: &[Complex64], t1: &[f64]) -> f64 {
    let dz = z0
        .iter()
        .zip(z1)
        .map(|(a, b)| (a - b).norm() / a.norm().max(1.0))
        .fold(0.0f64, f64::max);
    let dt = t0
        .iter()
        .zip(t1)
        .map(|(a, b)| normalize_angle(a - b).abs())
        .fold(0.0f64, f64::max);
    dz.max(dt)
}

fn charts(group: &GroupSpec) -> Result<Vec<Chart>> {
    let rs = group.root_system()?;
    group
        .weyl_elements()?
        .iter()
        .map(|w| Chart::new(&rs, reduced_word_for(&rs, w)))
        .collect()
}

const STREAM_ROUND_TRIP: u64 = 10;
const STREAM_STRATUM: u64 = 20;
const STREAM_DOMAIN: u64 = 30;
const STREAM_JACOBIAN: u64 = 40;
const STREAM_INVARIANCE: u64 = 50;
const STREAM_GOLDEN: u64 = 60;
const STREAM_MOMENTS: u64 = 70;

fn group_rng(seed: u64, stream: u64, index: usize) -> ChaCha8Rng {
    chunk_rng(seed, stream, index as u64)
}

/// Exact `delta(h_{tau_m}) - 1 = sum_{k<m} tau_k(h_{tau_m})` over every
/// reduced word of every Weyl element.
pub fn delta_identity_suite(ranks: &[usize]) -> Result<SuiteResult> {
    let mut groups = Vec::new();
    let mut failures = Vec::new();
    for &rank in ranks {
        let rs = build_root_system(rank, None)?;
        let mut tally = Tally::new(&GroupSpec::su(rank + 1));
        tally.group = format!("A{rank}");
        for w in WeylElement::all(rank + 1) {
            for word in all_reduced_words(&rs, &w) {
                for (lhs, rhs) in verify_delta_identity(&rs, &word) {
                    tally.record((lhs - rhs).abs() as f64);
                    if lhs != rhs {
                        failures.push(format!("A{rank} word {:?}: {lhs} != {rhs}", word.gamma_indices()));
                    }
                }
            }
        }
        groups.push(tally.finish());
    }
    Ok(SuiteResult::from_groups("delta_identity", 0.0, groups, failures))
}

/// Round trips, the closed-form `a`, and `a^{4 delta}`, on shared samples.
pub fn round_trip_suites(config: &CheckConfig) -> Result<[SuiteResult; 3]> {
    let (mut rt, mut ap, mut a4) = (Vec::new(), Vec::new(), Vec::new());
    let mut failures = Vec::new();
    for (gi, group) in config.groups.iter().enumerate() {
        let mut rng = group_rng(config.seed, STREAM_ROUND_TRIP, gi);
        let (mut t_rt, mut t_ap, mut t_a4) = (Tally::new(group), Tally::new(group), Tally::new(group));
        for chart in charts(group)? {
            for _ in 0..config.round_trip_samples {
                let (z, t) = random_coords(&chart, &mut rng, 2.0, 0.9);
                let g = chart.forward(&z, &t)?;
                let (z1, t1) = match chart.inverse(&g) {
                    Ok(c) => c,
                    Err(e) => {
                        failures.push(format!("{group} word {:?}: {e}", chart.word().gamma_indices()));
                        continue;
                    }
                };
                t_rt.record(coord_error(&z, &t, &z1, &t1));
                t_rt.record(linalg::rel_diff(&chart.forward(&z1, &t1)?, &g));
                let a = linalg::real_diagonal(&chart.a_product(&z)?);
                t_ap.record(linalg::rel_diff(&a, &birkhoff_factorize(&g)?.a));
                let (lhs, rhs) = a4delta(&chart, &z)?;
                t_a4.record((lhs - rhs).abs() / rhs);
            }
        }
        // forward(inverse(g)) for elements drawn from the group itself
        for _ in 0..config.round_trip_samples {
            let g = group.random_element(&mut rng);
            let f = match birkhoff_factorize(&g) {
                Ok(f) => f,
                Err(e) if e.is_boundary() => {
                    t_rt.resampled += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let rs = group.root_system()?;
            let chart = Chart::new(&rs, reduced_word_for(&rs, &f.w))?;
            let (z, t) = chart.inverse(&g)?;
            t_rt.record(linalg::rel_diff(&chart.forward(&z, &t)?, &g));
        }
        rt.push(t_rt.finish());
        ap.push(t_ap.finish());
        a4.push(t_a4.finish());
    }
    let tols = &config.tolerances;
    Ok([
        SuiteResult::from_groups("round_trip", tols.round_trip, rt, failures),
        SuiteResult::from_groups("a_product", tols.a_product, ap, Vec::new()),
        SuiteResult::from_groups("a4delta", tols.a4delta, a4, Vec::new()),
    ])
}

/// Random SU(p,q) elements land in components of W(K). The error column
/// counts exceptions.
pub fn stratum_suite(config: &CheckConfig) -> Result<SuiteResult> {
    let mut groups = Vec::new();
    let mut failures = Vec::new();
    for (gi, group) in config.groups.iter().enumerate() {
        if group.signature.is_none() {
            continue;
        }
        let rs = group.root_system()?;
        let mut rng = group_rng(config.seed, STREAM_STRATUM, gi);
        let mut tally = Tally::new(group);
        while tally.checks < config.stratum_samples {
            let g = group.random_element(&mut rng);
            match birkhoff_factorize(&g) {
                Ok(f) => {
                    let inside = is_in_wk(&rs, &f.w)?;
                    tally.record(if inside { 0.0 } else { 1.0 });
                    if !inside {
                        failures.push(format!("{group}: detected {} outside W(K)", f.w));
                    }
                }
                Err(e) if e.is_boundary() => tally.resampled += 1,
                Err(e) => return Err(e),
            }
        }
        groups.push(tally.finish());
    }
    Ok(SuiteResult::from_groups("stratum_law", 0.0, groups, failures))
}

/// `||Z|| < 1` for random elements, and monotone approach to 1 along
/// `q(zeta)` on the noncompact simple root as `zeta -> 1`. The error column
/// is the largest `||Z||` seen.
pub fn bounded_domain_suite(config: &CheckConfig) -> Result<SuiteResult> {
    let mut groups = Vec::new();
    let mut failures = Vec::new();
    for (gi, group) in config.groups.iter().enumerate() {
        let Some((p, q)) = group.signature else { continue };
        let mut rng = group_rng(config.seed, STREAM_DOMAIN, gi);
        let mut tally = Tally::new(group);
        for _ in 0..config.stratum_samples {
            let g = group.random_element(&mut rng);
            let norm = block_factorize(&g, (p, q))?.z_norm();
            tally.record(norm);
            if norm >= 1.0 {
                failures.push(format!("{group}: ||Z|| = {norm}"));
            }
        }
        let mut last = -1.0;
        for k in 1..=30 {
            let zeta = Complex64::new(1.0 - 0.5f64.powi(k), 0.0);
            let g = simple_embedding(group.n, p - 1, &q_factor(zeta)?);
            let norm = block_factorize(&g, (p, q))?.z_norm();
            tally.record(norm);
            if norm <= last || norm >= 1.0 {
                failures.push(format!("{group}: ray step {k} gives ||Z|| = {norm} after {last}"));
            }
            last = norm;
        }
        groups.push(tally.finish());
    }
    Ok(SuiteResult::from_groups("bounded_domain", 1.0, groups, failures))
}

/// Finite-difference Jacobian of the nilpotent coordinates, every chart.
pub fn jacobian_suite(config: &CheckConfig) -> Result<SuiteResult> {
    let mut groups = Vec::new();
    for (gi, group) in config.groups.iter().enumerate() {
        let mut rng = group_rng(config.seed, STREAM_JACOBIAN, gi);
        let mut tally = Tally::new(group);
        for chart in charts(group)? {
            for _ in 0..config.jacobian_points {
                let (z, _) = random_coords(&chart, &mut rng, 1.5, 0.9);
                tally.record(nilpotent_jacobian_test(&chart, &z, tol::FD_STEP)?);
            }
        }
        groups.push(tally.finish());
    }
    Ok(SuiteResult::from_groups("nilpotent_jacobian", config.tolerances.jacobian, groups, Vec::new()))
}

/// Density transport under left translation on the top chart, plus the
/// closed-form rank one Mobius check.
pub fn invariance_suites(config: &CheckConfig) -> Result<[SuiteResult; 2]> {
    let (mut inv, mut mob) = (Vec::new(), Vec::new());
    for (gi, group) in config.groups.iter().enumerate() {
        let chart = group.top_chart()?;
        let spec = DensitySpec::from_chart(&chart);
        let config_g = RealizationConfig::from_root_system(chart.root_system());
        let tag = if group.signature.is_some() { GroupTag::SUpq } else { GroupTag::SU };
        let mut rng = group_rng(config.seed, STREAM_INVARIANCE, gi);
        let mut tally = Tally::new(group);
        let mut mobius_tally = Tally::new(group);
        while tally.checks < config.invariance_pairs {
            let g0 = GroupElement::new(group.random_element(&mut rng), tag, config_g)?;
            let (z, t) = random_coords(&chart, &mut rng, 1.5, 0.8);
            match invariance_jacobian_test(&chart, &g0, &z, &t, tol::FD_STEP) {
                Ok(err) => tally.record(err),
                Err(e) if e.is_boundary() || matches!(e, Error::NumericalWarning(_)) => {
                    tally.resampled += 1;
                    continue;
                }
                Err(e) => return Err(e),
            }
            if group.n == 2 {
                let (zp, jac) = mobius(&g0.matrix, z[0]);
                let (got, _) = translate(&chart, &g0.matrix, &z, &t)?;
                mobius_tally.record((got[0] - zp).norm() / zp.norm().max(1.0));
                let lhs = spec.density(&[zp])? * jac;
                let rhs = spec.density(&z)?;
                mobius_tally.record((lhs - rhs).abs() / rhs);
            }
        }
        inv.push(tally.finish());
        if group.n == 2 {
            mob.push(mobius_tally.finish());
        }
    }
    let tols = &config.tolerances;
    Ok([
        SuiteResult::from_groups("invariance", tols.invariance, inv, Vec::new()),
        SuiteResult::from_groups("mobius", tols.mobius, mob, Vec::new()),
    ])
}

/// Moments of Haar SU(n) for each selected rank.
pub fn moment_suite(config: &CheckConfig) -> Result<SuiteResult> {
    let mut reports = Vec::new();
    let mut groups = Vec::new();
    for rank in config.ranks() {
        let group = GroupSpec::su(rank + 1);
        let seed = config.seed.wrapping_add(STREAM_MOMENTS + rank as u64);
        let report = haar_moment_compare(group.n, config.moment_samples, seed)?;
        let mut tally = Tally::new(&group);
        tally.record(report.max_abs_z());
        groups.push(tally.finish());
        reports.push(report);
    }
    let mut suite = SuiteResult::from_groups("moments", config.tolerances.moment_z, groups, Vec::new());
    suite.moments = Some(reports);
    Ok(suite)
}

/// For A2 words of length at least two, with `zeta_j = 0` beyond the second
/// letter, `l = exp(zeta_2 f_{tau_2} + zeta_1 a(zeta_2)^{-tau_1(h_{tau_2})} f_{tau_1})`.
pub fn golden_suite(config: &CheckConfig) -> Result<SuiteResult> {
    let mut groups = Vec::new();
    let specs = [GroupSpec::su(3), GroupSpec::supq(2, 1), GroupSpec::supq(1, 2)];
    for (gi, group) in specs.iter().enumerate() {
        let rs = group.root_system()?;
        let realization = RealizationConfig::from_root_system(&rs);
        let mut rng = group_rng(config.seed, STREAM_GOLDEN, gi);
        let mut tally = Tally::new(group);
        for w in group.weyl_elements()? {
            for word in all_reduced_words(&rs, &w) {
                if word.len() < 2 {
                    continue;
                }
                let chart = Chart::new(&rs, word.clone())?;
                for _ in 0..config.golden_samples {
                    let (mut z, _) = random_coords(&chart, &mut rng, 2.0, 0.9);
                    for extra in z.iter_mut().skip(2) {
                        *extra = Complex64::new(0.0, 0.0);
                    }
                    let l = chart.nilpotent_part(&z)?;
                    let a2 = if chart.is_noncompact(1) { a_minus(z[1])? } else { a_plus(z[1]) };
                    let power = -word.taus[0].pairing(word.taus[1]) as i32;
                    let f1 = root_vector(&realization, &word, 0, Generator::F).matrix;
                    let f2 = root_vector(&realization, &word, 1, Generator::F).matrix;
                    let x = f2 * z[1] + f1 * (z[0] * a2.powi(power));
                    let expected = linalg::nilpotent_exp(&x);
                    let entrywise = (&l - &expected).iter().fold(0.0f64, |m, d| m.max(d.norm()));
                    tally.record(entrywise);
                }
            }
        }
        groups.push(tally.finish());
    }
    Ok(SuiteResult::from_groups("two_letter_golden", config.tolerances.golden, groups, Vec::new()))
}

pub fn run_all(config: &CheckConfig) -> Result<Report> {
    if config.groups.is_empty() {
        return Err(Error::Config("no groups selected".into()));
    }
    let mut suites = vec![delta_identity_suite(&config.ranks())?];
    suites.extend(round_trip_suites(config)?);
    suites.push(stratum_suite(config)?);
    suites.push(bounded_domain_suite(config)?);
    suites.push(jacobian_suite(config)?);
    suites.extend(invariance_suites(config)?);
    suites.push(moment_suite(config)?);
    suites.push(golden_suite(config)?);
    Ok(Report {
        seed: config.seed,
        groups: config.groups.iter().map(|g| g.to_string()).collect(),
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(groups: Vec<GroupSpec>) -> CheckConfig {
        let mut c = CheckConfig::new(groups, 3);
        c.round_trip_samples = 5;
        c.stratum_samples = 50;
        c.jacobian_points = 3;
        c.invariance_pairs = 3;
        c.moment_samples = 2000;
        c.golden_samples = 2;
        c
    }

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.set("jacobian=1e-3").unwrap();
        assert_eq!(t.jacobian, 1e-3);
        assert!(t.set("nope=1").is_err());
        assert!(t.set("jacobian").is_err());
        assert!(t.set("jacobian=-1").is_err());
    }

    #[test]
    fn group_labels() {
        let labels: Vec<String> = default_groups().iter().map(|g| g.to_string()).collect();
        assert_eq!(labels, ["SU(2)", "SU(3)", "SU(4)", "SU(1,1)", "SU(2,1)", "SU(1,2)", "SU(2,2)"]);
    }

    #[test]
    fn coord_error_wraps_angles() {
        let z = [Complex64::new(3.0, 0.0)];
        let e = coord_error(&z, &[std::f64::consts::PI - 1e-3], &z, &[-std::f64::consts::PI + 1e-3]);
        assert!((e - 2e-3).abs() < 1e-12);
    }

    #[test]
    fn small_run_passes_and_is_reproducible() {
        let config = small(vec![GroupSpec::su(2), GroupSpec::supq(2, 1)]);
        let report = run_all(&config).unwrap();
        for s in &report.suites {
            assert!(s.passed, "{} failed: {:?}", s.name, s);
        }
        let again = run_all(&config).unwrap();
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }
}
