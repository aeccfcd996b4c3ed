use genericity::density::{
    classify_convergence, conditional_ensemble, frequency, frequency_series, generic_time_report, spherical_vs_volume,
    uniform_ensemble, BinaryWords, Classification, Everything, FnPredicate, FrequencyPoint, FrequencySeries, Geometry,
    Mode, SizedDomain, Tolerances,
};
use genericity::{PartialVerdict, RngState};
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

fn residue(m: u64, r: u64) -> impl Fn(&Vec<u8>) -> bool + Sync {
    move |w: &Vec<u8>| w.iter().fold(0u64, |acc, &b| (acc * 2 + b as u64) % m) == r
}

fn brute_count(n: u64, m: u64, r: u64) -> u64 {
    (0..1u64 << n).filter(|v| v % m == r).count() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_frequency_matches_direct_count(n in 0u64..12, m in 1u64..9, r in 0u64..9) {
        let r = r % m;
        let d = BinaryWords::new();
        let pred = FnPredicate::new("residue", residue(m, r));
        let p = frequency(&d, &pred, n, Geometry::Sphere, Mode::Exact, RngState::new(0)).unwrap();
        prop_assert_eq!(p.hits.clone(), BigUint::from(brute_count(n, m, r)));
        prop_assert_eq!(p.trials.clone(), BigUint::from(1u64 << n));

        let ball_hits: u64 = (0..=n).map(|k| brute_count(k, m, r)).sum();
        let b = frequency(&d, &pred, n, Geometry::Ball, Mode::Exact, RngState::new(0)).unwrap();
        prop_assert_eq!(b.hits, BigUint::from(ball_hits));
        prop_assert_eq!(b.trials, BigUint::from((1u64 << (n + 1)) - 1));
    }

    #[test]
    fn sampled_estimates_are_probabilities(n in 0u64..40, m in 1u64..9, seed in any::<u64>(), trials in 1u64..3000) {
        let d = BinaryWords::new();
        let pred = FnPredicate::new("residue", residue(m, 0));
        for geometry in [Geometry::Sphere, Geometry::Ball] {
            let p = frequency(&d, &pred, n, geometry, Mode::monte_carlo(trials), RngState::new(seed)).unwrap();
            prop_assert!(p.hits <= p.trials);
            prop_assert_eq!(p.trials.clone(), BigUint::from(trials));
            prop_assert!((0.0..=1.0).contains(&p.value()));
            prop_assert!(p.ci_half_width >= 0.0);
        }
    }

    #[test]
    fn same_seed_same_estimate(n in 1u64..30, seed in any::<u64>()) {
        let d = BinaryWords::new();
        let pred = FnPredicate::new("starts-with-one", |w: &Vec<u8>| w.first() == Some(&1));
        let a = frequency(&d, &pred, n, Geometry::Sphere, Mode::monte_carlo(5000), RngState::new(seed)).unwrap();
        let b = frequency(&d, &pred, n, Geometry::Sphere, Mode::monte_carlo(5000), RngState::new(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn estimate_does_not_depend_on_thread_count() {
    let d = BinaryWords::new();
    let pred = FnPredicate::new("more-ones", |w: &Vec<u8>| 2 * w.iter().filter(|&&b| b == 1).count() > w.len());
    let run = || {
        frequency_series(&d, &pred, &[5, 17, 33], Geometry::Ball, Mode::monte_carlo(20_000), RngState::new(77)).unwrap()
    };
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
    assert_eq!(single, many);
}

#[test]
fn monte_carlo_tracks_exact_value() {
    let d = BinaryWords::new();
    let pred = FnPredicate::new("residue", residue(3, 1));
    for n in [6, 11, 16] {
        let exact = frequency(&d, &pred, n, Geometry::Sphere, Mode::Exact, RngState::new(0)).unwrap();
        let mc = frequency(&d, &pred, n, Geometry::Sphere, Mode::monte_carlo(40_000), RngState::new(n)).unwrap();
        assert!((mc.value() - exact.value()).abs() <= 4.0 * mc.std_error(), "n = {n}");
    }
}

#[test]
fn even_length_sphere_and_ball() {
    let d = BinaryWords::new();
    let even = FnPredicate::new("even-length", |w: &Vec<u8>| w.len() % 2 == 0);
    let (s, b) = spherical_vs_volume(&d, &even, 4, Mode::Exact, RngState::new(0)).unwrap();
    assert_eq!(s.value(), 1.0);
    // 1 + 4 + 16 words of even length among 31
    let want = BigRational::new(21.into(), 31.into());
    assert_eq!(b.estimate.as_exact(), Some(&want));
    let (s, _) = spherical_vs_volume(&d, &even, 5, Mode::Exact, RngState::new(0)).unwrap();
    assert_eq!(s.value(), 0.0);
}

#[test]
fn everything_has_density_one() {
    let d = BinaryWords::new();
    let s = frequency_series(&d, &Everything, &[0, 3, 70], Geometry::Ball, Mode::monte_carlo(100), RngState::new(1)).unwrap();
    assert!(s.values().iter().all(|&v| v == 1.0));
}

#[test]
fn series_rejects_unordered_radii() {
    let d = BinaryWords::new();
    assert!(frequency_series(&d, &Everything, &[3, 3], Geometry::Sphere, Mode::Exact, RngState::new(0)).is_err());
    assert!(frequency_series(&d, &Everything, &[4, 2], Geometry::Sphere, Mode::Exact, RngState::new(0)).is_err());
    assert!(frequency(&d, &Everything, 3, Geometry::Sphere, Mode::monte_carlo(0), RngState::new(0)).is_err());
}

#[test]
fn enumeration_cap_is_reported() {
    let d = BinaryWords::with_cap(16);
    assert!(frequency(&d, &Everything, 4, Geometry::Sphere, Mode::Exact, RngState::new(0)).is_ok());
    let pred = FnPredicate::new("any", |_: &Vec<u8>| true);
    assert!(frequency(&d, &pred, 5, Geometry::Sphere, Mode::Exact, RngState::new(0)).is_err());
}

#[test]
fn constant_time_solver_is_generic_everywhere() {
    let d = BinaryWords::new();
    let s = generic_time_report(
        &d,
        |w| PartialVerdict::yes(1, w.len() as u64 + 1),
        |_| 1,
        &[0, 1, 5, 9],
        Geometry::Sphere,
        Mode::Exact,
        RngState::new(0),
    )
    .unwrap();
    assert!(s.values().iter().all(|&v| v == 1.0));
    let none = generic_time_report(
        &d,
        |_| PartialVerdict::dont_know(1, 1),
        |_| 1,
        &[1, 2],
        Geometry::Sphere,
        Mode::Exact,
        RngState::new(0),
    )
    .unwrap();
    assert!(none.values().iter().all(|&v| v == 0.0));
}

#[test]
fn ensembles_normalize() {
    let d = BinaryWords::new();
    let uniform = uniform_ensemble(&d, Geometry::Sphere);
    for n in 0..6 {
        let dist = uniform.distribution(n).unwrap();
        let total: f64 = dist.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(dist.iter().all(|(_, p)| (p - 1.0 / (1u64 << n) as f64).abs() < 1e-15));
    }
    // length-dependent weight is uniform once conditioned on a sphere
    let levin = conditional_ensemble(|w: &Vec<u8>| 1.0 / ((w.len() + 1) * (w.len() + 2)) as f64 / 2f64.powi(w.len() as i32), &d, Geometry::Sphere);
    let a = levin.distribution(4).unwrap();
    assert!(a.iter().all(|(_, p)| (p - 1.0 / 16.0).abs() < 1e-15));
    // on a ball the same weight favours short words
    let ball = conditional_ensemble(|w: &Vec<u8>| 1.0 / ((w.len() + 1) * (w.len() + 2)) as f64 / 2f64.powi(w.len() as i32), &d, Geometry::Ball);
    let empty_word = ball.measure(3, &FnPredicate::new("empty", |w: &Vec<u8>| w.is_empty())).unwrap();
    // masses 1/2, 1/6, 1/12, 1/20 by length
    let want = 0.5 / (0.5 + 1.0 / 6.0 + 1.0 / 12.0 + 1.0 / 20.0);
    assert!((empty_word - want).abs() < 1e-12);
    let mean_len = ball.expectation(3, |w| w.len() as f64).unwrap();
    let want = (1.0 / 6.0 + 2.0 / 12.0 + 3.0 / 20.0) / (0.5 + 1.0 / 6.0 + 1.0 / 12.0 + 1.0 / 20.0);
    assert!((mean_len - want).abs() < 1e-12);

    let bad = conditional_ensemble(|_: &Vec<u8>| -1.0, &d, Geometry::Sphere);
    assert!(bad.distribution(2).is_err());
    let zero = conditional_ensemble(|_: &Vec<u8>| 0.0, &d, Geometry::Sphere);
    assert!(zero.distribution(2).is_err());
}

fn exact_series(values: &[(u64, u64, u64)]) -> FrequencySeries {
    let points = values
        .iter()
        .map(|&(n, h, t)| FrequencyPoint::exact(n, BigUint::from(h), BigUint::from(t)))
        .collect();
    FrequencySeries::new(Geometry::Sphere, "synthetic", points).unwrap()
}

#[test]
fn classifier_separates_rates() {
    // 1 - 2^-n
    let geometric: Vec<_> = (1..=12).map(|n| (n, (1u64 << n) - 1, 1u64 << n)).collect();
    let r = classify_convergence(&exact_series(&geometric), 1.0, &Tolerances::default()).unwrap();
    assert_eq!(r.classification, Classification::ConsistentWithExponential);
    assert!(r.exponential_fit.unwrap().slope < 0.0);

    // 1 - 1/n is polynomial, not superpolynomial
    let harmonic: Vec<_> = (2..=40).step_by(3).map(|n| (n, n - 1, n)).collect();
    let r = classify_convergence(&exact_series(&harmonic), 1.0, &Tolerances::default()).unwrap();
    assert!(!r.classification.is_superpolynomial(), "{:?}", r.classification);

    // moving away from the target
    let away: Vec<_> = (1..=8).map(|n| (n, 1, n + 1)).collect();
    let r = classify_convergence(&exact_series(&away), 1.0, &Tolerances::default()).unwrap();
    assert_eq!(r.classification, Classification::Incompatible);

    assert!(classify_convergence(&exact_series(&geometric[..2]), 1.0, &Tolerances::default()).is_err());
}

#[test]
fn series_serializes() {
    let s = exact_series(&[(1, 1, 2), (2, 3, 4)]);
    let json = serde_json::to_string(&s).unwrap();
    let back: FrequencySeries = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
    let csv = s.to_csv();
    assert!(csv.lines().count() == 3, "{csv}");
    assert_eq!(s.radii(), vec![1, 2]);
    assert_eq!(s.horizon(), Some(2));
    let d = BinaryWords::new();
    assert_eq!(d.size_of(&vec![0, 1, 1]), 3);
}
