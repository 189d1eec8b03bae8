use super::*;
use crate::channel::survival_min;
use crate::specfun::{oracle_quadrature, OracleConfig};
use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn link(k: f64, omega: f64) -> RicianLink {
    RicianLink::new(k, omega).unwrap()
}

fn fig2(a2: f64) -> SystemConfig {
    SystemConfig::from_snr_db(link(2.0, 9.0), link(5.0, 36.0), link(5.0, 36.0), a2, 20.0).unwrap()
}

fn fig3(snr_db: f64) -> SystemConfig {
    SystemConfig::from_snr_db(link(2.0, 9.0), link(5.0, 144.0), link(5.0, 36.0), 0.4, snr_db).unwrap()
}

fn rayleigh(a2: f64, rho: f64) -> SystemConfig {
    let l = RicianLink::rayleigh(1.0).unwrap();
    SystemConfig::new(l, l, l, a2, rho).unwrap()
}

#[test]
fn a2_validation() {
    let l = link(1.0, 1.0);
    match SystemConfig::new(l, l, l, 0.6, 10.0) {
        Err(Error::InvalidConfig(msg)) => assert!(msg.contains("a1 > a2 violated")),
        other => panic!("{other:?}"),
    }
    assert!(SystemConfig::new(l, l, l, 0.0, 10.0).is_err());
    assert!(SystemConfig::new(l, l, l, 0.5, 10.0).is_ok());
    assert!(SystemConfig::new(l, l, l, 0.2, 0.0).is_err());
    let c = SystemConfig::new(l, l, l, 0.2, 10.0).unwrap();
    assert_eq!(c.a1() + c.a2(), 1.0);
}

#[test]
fn sinr_examples() {
    let c = rayleigh(0.2, 10.0);
    let s = sinr_all(&c, 0.0, 0.0, 0.0);
    assert_eq!((s.sr1, s.sr2, s.sd, s.rd), (0.0, 0.0, 0.0, 0.0));
    let s = sinr_all(&c, 1.0, 2.0, 0.5);
    assert_relative_eq!(s.sd, 8.0 / 3.0, max_relative = 1e-15);
    assert_relative_eq!(s.sr2, 4.0, max_relative = 1e-15);
    assert_relative_eq!(s.rd, 5.0, max_relative = 1e-15);
}

#[test]
fn instant_rate_examples() {
    let c = rayleigh(0.2, 10.0);
    let (c1, _) = instant_rates(&c, 1.0, 3.0, 9.0);
    assert_relative_eq!(c1, 0.5 * (11.0f64 / 3.0).log2(), max_relative = 1e-14);
    assert_relative_eq!(c1, 0.937_24, max_relative = 1e-5);
    // a2 λ_SR = λ_RD = 1
    let (_, c2) = instant_rates(&c, 1.0, 5.0, 1.0);
    assert_relative_eq!(c2, 0.5 * 11f64.log2(), max_relative = 1e-14);
    assert_relative_eq!(c2, 1.729_72, max_relative = 1e-5);
}

#[test]
fn min_of_logs_equals_difference_of_logs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let a2 = rng.random_range(0.01..0.5);
        let rho = 10f64.powf(rng.random_range(-1.0..4.0));
        let c = rayleigh(a2, rho);
        let (sd, sr, rd) = (
            rng.random_range(0.0..20.0),
            rng.random_range(0.0..20.0),
            rng.random_range(0.0..20.0),
        );
        let s = sinr_all(&c, sd, sr, rd);
        let oracle1 = 0.5 * (1.0 + s.sd).log2().min((1.0 + s.sr1).log2());
        let oracle2 = 0.5 * (1.0 + s.sr2).log2().min((1.0 + s.rd).log2());
        let (c1, c2) = instant_rates(&c, sd, sr, rd);
        assert!((c1 - oracle1).abs() <= 1e-12 * oracle1.max(1.0));
        assert!((c2 - oracle2).abs() <= 1e-12 * oracle2.max(1.0));
    }
}

fn d_oracle(rho: f64, pair: &MinPairSpec) -> f64 {
    let ctrl = SeriesControl::default();
    oracle_quadrature(
        |z| rho * survival_min(z, pair, &ctrl).unwrap().value / (1.0 + z * rho),
        0.0,
        f64::INFINITY,
        &OracleConfig::rel(1e-10).unwrap(),
    )
    .unwrap()
}

#[test]
fn d_term_rayleigh_unit_snr() {
    let l = RicianLink::rayleigh(1.0).unwrap();
    let pair = MinPairSpec::unscaled(l, l);
    let d = d_term(1.0, &pair, &SeriesControl::default(), &GammaKernel::Exact).unwrap();
    let direct = oracle_quadrature(
        |z| (-2.0 * z).exp() / (1.0 + z),
        0.0,
        f64::INFINITY,
        &OracleConfig::default(),
    )
    .unwrap();
    assert_relative_eq!(d.value, direct, max_relative = 1e-12);
    assert_relative_eq!(d.value, 0.361_33, max_relative = 1e-4);
    assert_eq!(d.tail_bound, 0.0);
}

#[test]
fn d_term_vanishes_at_low_snr() {
    let pair = fig2(0.3).z1_pair();
    let mut prev = f64::INFINITY;
    for &rho in &[1e-2, 1e-4, 1e-6, 1e-8] {
        let d = d_term(rho, &pair, &SeriesControl::default(), &GammaKernel::Exact).unwrap();
        assert!(d.value > 0.0 && d.value < prev);
        prev = d.value;
    }
    assert!(prev < 1e-6);
}

#[test]
fn d_term_fig2_matches_quadrature_over_cdf() {
    let pair = fig2(0.3).z1_pair();
    let d = d_term(100.0, &pair, &SeriesControl::default(), &GammaKernel::Exact).unwrap();
    assert_relative_eq!(d.value, d_oracle(100.0, &pair), max_relative = 1e-6);
}

#[test]
fn d_term_z2_matches_quadrature_over_cdf() {
    // scaled member enters through β = (a_rd + a_sr/a2)/ρ
    let pair = fig2(0.3).z2_pair();
    let d = d_term(100.0, &pair, &SeriesControl::default(), &GammaKernel::Exact).unwrap();
    assert_relative_eq!(d.value, d_oracle(100.0, &pair), max_relative = 1e-6);
}

#[test]
fn d_term_tail_bound_is_honest() {
    let pair = fig2(0.2).z2_pair();
    let reference = d_term(100.0, &pair, &SeriesControl::new(90, 1e-15).unwrap(), &GammaKernel::Exact)
        .unwrap()
        .value;
    for &tol in &[1e-3, 1e-6, 1e-9] {
        let d = d_term(100.0, &pair, &SeriesControl::new(60, tol).unwrap(), &GammaKernel::Exact).unwrap();
        assert!(reference - d.value >= -1e-12);
        assert!(reference - d.value <= d.tail_bound + 1e-12, "tol {tol}");
    }
}

#[test]
fn c1_continuous_near_equal_split() {
    let ctrl = SeriesControl::default();
    let a = c1_exact(&fig2(0.499), &ctrl).unwrap().value;
    let b = c1_exact(&fig2(0.5), &ctrl).unwrap().value;
    assert!((a - b).abs() < 2e-3);
    assert!(a > b);
}

#[test]
fn c2_rayleigh_matches_closed_form_cdf() {
    let cfg = rayleigh(0.4, 10.0);
    let c2 = c2_exact(&cfg, &SeriesControl::default()).unwrap().value;
    let rate = 1.0 / 0.4 + 1.0;
    let rho = 10.0;
    // ½ ∫ log2(1+ρz) dG(z), G(z) = 1 - e^{-rate z}
    let oracle = oracle_quadrature(
        |z| 0.5 * (rho * z).ln_1p() / LN_2 * rate * (-rate * z).exp(),
        0.0,
        f64::INFINITY,
        &OracleConfig::default(),
    )
    .unwrap();
    assert_relative_eq!(c2, oracle, max_relative = 1e-10);
}

#[test]
fn approx_tracks_exact() {
    let ctrl = SeriesControl::default();
    let q = QuadratureConfig::default();
    let cfg = fig2(0.2);
    let e = c1_exact(&cfg, &ctrl).unwrap().value;
    let a = c1_approx(&cfg, &ctrl, q).unwrap().value;
    assert!((e - a).abs() <= 1e-3, "{e} vs {a}");
    let cfg = fig3(20.0);
    let e = c2_exact(&cfg, &ctrl).unwrap().value;
    let a = c2_approx(&cfg, &ctrl, q).unwrap().value;
    assert!((e - a).abs() <= 1e-3, "{e} vs {a}");
}

#[test]
fn single_node_quadrature_is_finite() {
    let q = QuadratureConfig::new(1).unwrap();
    let r = approx_rates(&fig2(0.3), &SeriesControl::default(), q).unwrap();
    assert!(r.c_s1.is_finite() && r.c_s2.is_finite());
    assert!(r.c_s1 >= 0.0 && r.c_s2 >= 0.0);
}

#[test]
fn rates_order_in_a2() {
    let ctrl = SeriesControl::default();
    let grid: Vec<f64> = (1..=9).map(|i| 0.05 * i as f64).collect();
    let reports: Vec<RateReport> = grid.iter().map(|&a2| exact_rates(&fig2(a2), &ctrl).unwrap()).collect();
    for w in reports.windows(2) {
        assert!(w[1].c_s1 < w[0].c_s1);
        assert!(w[1].c_s2 > w[0].c_s2);
    }
    let (best, _) = reports
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.sum.total_cmp(&b.1.sum))
        .unwrap();
    assert!(best > 0 && best < grid.len() - 1);
}

#[test]
fn rates_increase_with_snr() {
    let ctrl = SeriesControl::default();
    let mut prev: Option<RateReport> = None;
    for db in (0..=30).step_by(3) {
        let e = exact_rates(&fig3(db as f64), &ctrl).unwrap();
        if let Some(p) = prev {
            assert!(e.c_s1 > p.c_s1 && e.c_s2 > p.c_s2 && e.sum > p.sum, "{db} dB");
        }
        prev = Some(e);
    }
}

#[test]
fn approx_increases_with_snr_where_resolved() {
    // Above ~20 dB the order-100 rule no longer resolves e^{-2β/(t+1)} near
    // t = -1 for this scenario, and the approximation drifts.
    let ctrl = SeriesControl::default();
    let q = QuadratureConfig::default();
    let mut prev: Option<RateReport> = None;
    for db in (0..=20).step_by(2) {
        let a = approx_rates(&fig3(db as f64), &ctrl, q).unwrap();
        if let Some(p) = prev {
            assert!(a.c_s1 > p.c_s1 && a.c_s2 > p.c_s2 && a.sum > p.sum, "{db} dB");
        }
        prev = Some(a);
    }
}

#[test]
fn approx_converges_with_order_at_high_snr() {
    let ctrl = SeriesControl::default();
    let cfg = fig3(30.0);
    let exact = exact_rates(&cfg, &ctrl).unwrap();
    let err = |order| {
        let a = approx_rates(&cfg, &ctrl, QuadratureConfig::new(order).unwrap()).unwrap();
        (a.c_s1 - exact.c_s1).abs() + (a.c_s2 - exact.c_s2).abs()
    };
    let (e100, e1600) = (err(100), err(1600));
    assert!(e100 > 1e-2);
    assert!(e1600 < 1e-3, "{e1600}");
}

#[test]
fn report_sum_is_consistent() {
    let r = exact_rates(&fig2(0.3), &SeriesControl::default()).unwrap();
    assert_eq!(r.sum, r.c_s1 + r.c_s2);
    assert_eq!(r.method, Method::ExactSeries);
    match r.meta {
        RateMeta::Series { tail_bound } => assert!(tail_bound < 1e-9),
        other => panic!("{other:?}"),
    }
}
