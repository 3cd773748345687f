//! Round trips of the root subgroup chart over random admissible words, and
//! an independent Gauss-Newton solve of `forward(c) = g` as an oracle for
//! the peeling inverse.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsfactor::factor::birkhoff_factorize;
use rsfactor::linalg::{self, CMatrix};
use rsfactor::rootsys::all_reduced_words;
use rsfactor::rsf::{normalize_angle, Chart};
use rsfactor::verify::{coord_error, default_groups, random_coords};
use rsfactor::Complex64;

/// A chart for group `gi`, Weyl element index `wi`, reduced word index `ki`.
fn pick_chart(gi: usize, wi: usize, ki: usize) -> Chart {
    let groups = default_groups();
    let group = groups[gi % groups.len()];
    let rs = group.root_system().unwrap();
    let ws = group.weyl_elements().unwrap();
    let w = &ws[wi % ws.len()];
    let words = all_reduced_words(&rs, w);
    Chart::new(&rs, words[ki % words.len()].clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn inverse_undoes_forward(gi in 0usize..7, wi in 0usize..24, ki in 0usize..16, seed in any::<u64>()) {
        let chart = pick_chart(gi, wi, ki);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (z, t) = random_coords(&chart, &mut rng, 2.0, 0.9);
        let g = chart.forward(&z, &t).unwrap();
        let (z1, t1) = chart.inverse(&g).unwrap();
        prop_assert!(coord_error(&z, &t, &z1, &t1) < 1e-9);
        prop_assert!(linalg::rel_diff(&chart.forward(&z1, &t1).unwrap(), &g) < 1e-9);
    }

    #[test]
    fn closed_form_a_matches_birkhoff(gi in 0usize..7, wi in 0usize..24, ki in 0usize..16, seed in any::<u64>()) {
        let chart = pick_chart(gi, wi, ki);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (z, t) = random_coords(&chart, &mut rng, 2.0, 0.9);
        let f = birkhoff_factorize(&chart.forward(&z, &t).unwrap()).unwrap();
        prop_assert_eq!(&f.w, &chart.word().target);
        let a = linalg::real_diagonal(&chart.a_product(&z).unwrap());
        prop_assert!(linalg::rel_diff(&a, &f.a) < 1e-10);
        // the Birkhoff phase factor is the torus coordinate
        let m = f.m_diagonal();
        for (k, theta) in t.iter().enumerate() {
            prop_assert!(normalize_angle(m[k].arg() - theta).abs() < 1e-9);
        }
    }

    #[test]
    fn group_membership_of_forward(gi in 0usize..7, wi in 0usize..24, seed in any::<u64>()) {
        let chart = pick_chart(gi, wi, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (z, t) = random_coords(&chart, &mut rng, 2.0, 0.9);
        let g = chart.forward(&z, &t).unwrap();
        let form = chart.config().j_form();
        let err = linalg::rel_diff(&(g.adjoint() * &form * &g), &form);
        prop_assert!(err < 1e-12);
        prop_assert!((linalg::det(&g) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

fn pack(z: &[Complex64], t: &[f64]) -> DVector<f64> {
    DVector::from_iterator(
        2 * z.len() + t.len(),
        z.iter().flat_map(|z| [z.re, z.im]).chain(t.iter().copied()),
    )
}

fn unpack(v: &DVector<f64>, len: usize) -> (Vec<Complex64>, Vec<f64>) {
    let z = (0..len).map(|j| Complex64::new(v[2 * j], v[2 * j + 1])).collect();
    (z, v.iter().skip(2 * len).copied().collect())
}

fn residual(chart: &Chart, v: &DVector<f64>, g: &CMatrix) -> Option<DVector<f64>> {
    let (z, t) = unpack(v, chart.len());
    let d = chart.forward(&z, &t).ok()? - g;
    Some(DVector::from_iterator(2 * d.len(), d.iter().flat_map(|e| [e.re, e.im])))
}

/// Damped Gauss-Newton with a forward-difference Jacobian.
fn newton_solve(chart: &Chart, g: &CMatrix, start: DVector<f64>) -> DVector<f64> {
    let mut v = start;
    for _ in 0..100 {
        let r = residual(chart, &v, g).unwrap();
        if r.norm() < 1e-13 {
            break;
        }
        let h = 1e-7;
        let mut jac = DMatrix::zeros(r.len(), v.len());
        for k in 0..v.len() {
            let mut probe = v.clone();
            probe[k] += h;
            let col = (residual(chart, &probe, g).unwrap() - &r) / h;
            jac.set_column(k, &col);
        }
        let step = jac.svd(true, true).solve(&(-&r), 1e-12).unwrap();
        let mut damping = 1.0;
        loop {
            let trial = &v + &step * damping;
            if let Some(rt) = residual(chart, &trial, g) {
                if rt.norm() < r.norm() || damping < 1e-4 {
                    v = trial;
                    break;
                }
            }
            damping /= 2.0;
        }
    }
    v
}

#[test]
fn peeling_agrees_with_newton_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for gi in 0..7 {
        for wi in 0..3 {
            let chart = pick_chart(gi, wi, 0);
            let (z, t) = random_coords(&chart, &mut rng, 1.0, 0.6);
            let g = chart.forward(&z, &t).unwrap();
            let start = pack(&z, &t).map(|x| x + 0.02);
            let (zn, tn) = unpack(&newton_solve(&chart, &g, start), chart.len());
            let (zi, ti) = chart.inverse(&g).unwrap();
            assert!(coord_error(&zn, &tn, &zi, &ti) < 1e-8, "group {gi} element {wi}");
        }
    }
}
