use proptest::prelude::*;
use wergm_core::critical::{critical_table, f_of_u, find_theta0, g_of_theta, m_of_u, n_of_theta};
use wergm_core::EdgeDistribution;

const U: EdgeDistribution = EdgeDistribution::Uniform01;

// Reference values computed independently at high precision.
const ROWS: [(u32, f64, f64, f64, f64, f64); 3] = [
    (3, 1.3251039247294336, 0.5575024822697118, 0.607323154074794, 1.7937139865795506, 1.3222360441768348),
    (5, 2.98693435766817, 0.8323770633773387, 0.7183299546916238, 1.2013786107254536, 0.10589126752373784),
    (10, 5.625632870268659, 1.0893676839870168, 0.8258595410056165, 0.9179637093144376, -1.1722975792353616),
];

#[test]
fn table_rows_match_reference() {
    for (p, theta0, n0, u0, m0, g0) in ROWS {
        let c = find_theta0(p).unwrap();
        assert!((c.theta0 - theta0).abs() < 1e-7, "theta0 p={p}");
        assert!((c.n_theta0 - n0).abs() < 1e-10, "n p={p}");
        assert!((c.u0 - u0).abs() < 1e-8, "u0 p={p}");
        assert!((c.m_u0 - m0).abs() < 1e-10, "m p={p}");
        assert!((c.g_theta0 - g0).abs() < 1e-10, "g p={p}");
        assert!((c.f_u0 - g0).abs() < 1e-10, "f p={p}");
    }
}

#[test]
fn global_extremum_on_grid() {
    for p in [2, 3, 5, 10] {
        let c = find_theta0(p).unwrap();
        for i in 0..=400 {
            let t = -20.0 + 0.1 * i as f64;
            if (t - c.theta0).abs() < 1e-3 {
                continue;
            }
            let n = n_of_theta(p, t).unwrap();
            assert!(n > 0.0);
            assert!(n < c.n_theta0, "n p={p} t={t}");
            assert!(g_of_theta(p, t).unwrap() > c.g_theta0, "g p={p} t={t}");
        }
        for t in [-30.0, 30.0] {
            assert!(g_of_theta(p, t).unwrap() > c.g_theta0 + 10.0, "growth p={p} t={t}");
        }
    }
}

#[test]
fn u0_trend() {
    let table = critical_table(&[2, 3, 5, 10]).unwrap();
    assert!(table.iter().all(|c| c.u0 >= 0.5 - 1e-12));
    assert!(table.windows(2).all(|w| w[1].u0 > w[0].u0));
    assert!(table[0].theta0.abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dual_identities(p in 2u32..12, theta in -30.0f64..30.0) {
        let u = U.log_mgf_d1(theta).unwrap();
        let prod = m_of_u(p, u, &U).unwrap() * n_of_theta(p, theta).unwrap();
        prop_assert!((prod - 1.0).abs() <= 1e-10, "m n = {}", prod);
        let gap = f_of_u(p, u, &U).unwrap() - g_of_theta(p, theta).unwrap();
        prop_assert!(gap.abs() <= 1e-10 * g_of_theta(p, theta).unwrap().abs().max(1.0), "f - g = {}", gap);
    }
}
