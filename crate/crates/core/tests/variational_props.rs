use proptest::prelude::*;
use wergm_core::critical::find_theta0;
use wergm_core::variational::{l_d1, profile, psi_gradient, search_interval, solve_psi};
use wergm_core::{Classification, EdgeDistribution, Error, ModelParams};

fn uniform(b1: f64, b2: f64, p: u32) -> ModelParams {
    ModelParams::uniform(b1, b2, p).unwrap()
}

/// Brute-force `sup_u (beta1 u - I(u)/2)` for the fair coin on a dense grid,
/// with `I` the relative entropy.
fn bernoulli_brute_force(beta1: f64) -> f64 {
    let steps = 2_000_000;
    (1..steps)
        .map(|i| {
            let u = i as f64 / steps as f64;
            let i_u = u * u.ln() + (1.0 - u) * (1.0 - u).ln() + std::f64::consts::LN_2;
            beta1 * u - 0.5 * i_u
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn remark_point() {
    let s = solve_psi(&uniform(-5.0, 5.0, 2)).unwrap();
    assert_eq!(s.classification, Classification::TwoGlobal);
    assert!((s.maximizers[0] - 0.13705900640440022).abs() < 1e-9);
    assert!((s.maximizers[1] - 0.8629409935955998).abs() < 1e-9);
    assert!((s.psi + 1.08538658103745).abs() < 1e-10);
    assert!(matches!(psi_gradient(&uniform(-5.0, 5.0, 2)), Err(Error::GradientUndefined { .. })));
}

#[test]
fn figure_points_are_unique() {
    assert!(solve_psi(&uniform(-5.0, 3.5, 2)).unwrap().is_unique());
    assert!(solve_psi(&uniform(-2.5, 4.0, 2)).unwrap().is_unique());
}

#[test]
fn bernoulli_oracle() {
    for beta1 in [-2.0, -0.5, 0.0, 0.3, 1.5] {
        let params = ModelParams::new(beta1, 0.0, 2, EdgeDistribution::BernoulliHalf).unwrap();
        let psi = solve_psi(&params).unwrap().psi;
        assert!((psi - bernoulli_brute_force(beta1)).abs() < 1e-8, "beta1={beta1}");
    }
}

#[test]
fn negative_beta2_is_rejected() {
    assert!(matches!(ModelParams::uniform(0.0, -0.1, 2), Err(Error::NegativeBeta2 { .. })));
    assert!(matches!(ModelParams::uniform(0.0, 0.1, 1), Err(Error::InvalidEdgeCount { .. })));
}

#[test]
fn single_crossing_below_critical_beta2() {
    for p in [2, 3, 5] {
        let crit = find_theta0(p).unwrap();
        for b2 in [0.0, 0.5 * crit.m_u0, crit.m_u0] {
            for b1 in [-12.0, -6.0, -3.0, -1.0, 0.0, 2.0] {
                let params = uniform(b1, b2, p);
                let (lo, hi) = search_interval(&params.dist);
                let slopes: Vec<f64> = profile(&params, lo, hi, 2048).unwrap().iter().map(|q| q.d1).collect();
                let changes = slopes.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
                assert_eq!(changes, 1, "p={p} b1={b1} b2={b2}");
            }
        }
    }
}

#[test]
fn envelope_at_three_points() {
    let h = 1e-4;
    for (b1, b2, p) in [(-5.0, 3.5, 2), (-2.5, 4.0, 2), (-1.0, 1.0, 3)] {
        let (g1, g2) = psi_gradient(&uniform(b1, b2, p)).unwrap();
        let psi = |a: f64, b: f64| solve_psi(&uniform(a, b, p)).unwrap().psi;
        let fd1 = (psi(b1 + h, b2) - psi(b1 - h, b2)) / (2.0 * h);
        let fd2 = (psi(b1, b2 + h) - psi(b1, b2 - h)) / (2.0 * h);
        assert!((fd1 - g1).abs() < 1e-5, "({b1},{b2}) d/db1 {fd1} vs {g1}");
        assert!((fd2 - g2).abs() < 1e-5, "({b1},{b2}) d/db2 {fd2} vs {g2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_is_monotone(b1 in -8.0f64..4.0, b2 in 0.0f64..6.0, p in 2u32..5, d in 0.01f64..0.5) {
        let base = solve_psi(&uniform(b1, b2, p)).unwrap().psi;
        let up1 = solve_psi(&uniform(b1 + d, b2, p)).unwrap().psi;
        let up2 = solve_psi(&uniform(b1, b2 + d, p)).unwrap().psi;
        prop_assert!(up1 >= base - 1e-12);
        prop_assert!(up2 >= base - 1e-12);
    }

    #[test]
    fn maximizers_are_stationary(b1 in -8.0f64..4.0, b2 in 0.0f64..6.0, p in 2u32..6) {
        let params = uniform(b1, b2, p);
        let s = solve_psi(&params).unwrap();
        for &u in &s.maximizers {
            prop_assert!(l_d1(&params, u).unwrap().abs() <= 1e-10 * (1.0 + b1.abs() + b2));
        }
        for m in &s.local_maxima {
            prop_assert!(m.value <= s.psi + 1e-12);
        }
    }
}
