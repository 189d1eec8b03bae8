use noma_crs::channel::{cdf_min, survival_min};
use noma_crs::sim::{ks_distance, sample_min_pairs};
use noma_crs::{McConfig, MinPairSpec, RicianLink, SeriesControl, SystemConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fig2() -> SystemConfig {
    SystemConfig::from_snr_db(
        RicianLink::new(2.0, 9.0).unwrap(),
        RicianLink::new(5.0, 36.0).unwrap(),
        RicianLink::new(5.0, 36.0).unwrap(),
        0.3,
        20.0,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cdf_is_monotone_and_bounded(
        ka in 0.0f64..10.0, oa in 0.1f64..100.0, sa in 0.05f64..1.0,
        kb in 0.0f64..10.0, ob in 0.1f64..100.0, sb in 0.05f64..1.0,
    ) {
        let spec = MinPairSpec::new(
            RicianLink::new(ka, oa).unwrap(), sa,
            RicianLink::new(kb, ob).unwrap(), sb,
        ).unwrap();
        let scale = (oa * sa).min(ob * sb);
        let ctrl = SeriesControl::default();
        let mut prev = 0.0;
        for i in 0..30 {
            let z = scale * 0.1 * i as f64;
            let f = cdf_min(z, &spec, &ctrl).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f >= prev - 1e-12, "z={} f={} prev={}", z, f, prev);
            prev = f;
        }
    }
}

#[test]
fn fig2_z1_cdf_against_monte_carlo_point() {
    let cfg = fig2();
    let spec = cfg.z1_pair();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 1_000_000;
    let below = (0..n)
        .filter(|_| {
            let sd = cfg.sd().sample_lambda(&mut rng);
            let sr = cfg.sr().sample_lambda(&mut rng);
            sd.min(sr) <= 10.0
        })
        .count();
    let f = cdf_min(10.0, &spec, &SeriesControl::default()).unwrap();
    assert!((f - below as f64 / n as f64).abs() < 0.005);
}

#[test]
fn ks_against_empirical_min_draws() {
    let cfg = fig2();
    let mc = McConfig::new(100_000, 17, 4).unwrap();
    let (z1, z2) = sample_min_pairs(&cfg, &mc).unwrap();
    let ctrl = SeriesControl::default();
    let d1 = ks_distance(&z1, |z| cdf_min(z, &cfg.z1_pair(), &ctrl)).unwrap();
    let d2 = ks_distance(&z2, |z| cdf_min(z, &cfg.z2_pair(), &ctrl)).unwrap();
    assert!(d1 <= 0.01, "z1 KS {d1}");
    assert!(d2 <= 0.01, "z2 KS {d2}");
}

#[test]
fn survival_tail_bound_shrinks_with_tolerance() {
    let spec = fig2().z2_pair();
    let loose = survival_min(3.0, &spec, &SeriesControl::new(60, 1e-3).unwrap()).unwrap();
    let tight = survival_min(3.0, &spec, &SeriesControl::new(60, 1e-12).unwrap()).unwrap();
    assert!(tight.tail_bound < loose.tail_bound);
    assert!(tight.shells > loose.shells);
    assert!(tight.tail_bound <= 1e-12);
}
