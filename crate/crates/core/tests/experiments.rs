//! Statistical and paired checks of the constructions, decoders and harness.

use itertools::Itertools;

use rlgt_core::bits;
use rlgt_core::bounds::{self, Regime};
use rlgt_core::construct::{qnagt_construct, rand_matrix_column, SchemeParams};
use rlgt_core::decode::{brute_force_qnagt_decode, WeightMode, DEFAULT_ENUMERATION_CAP};
use rlgt_core::matrix::count_outcome;
use rlgt_core::rng::stream;
use rlgt_core::sim::{self, Experiment, SweepGrid, SweepTests};
use rlgt_core::verify::qnagt_zero_error_check;
use rlgt_core::SparseSupport;

#[test]
fn row_marginals_are_uniform() {
    let (t, d, alpha) = (40, 3, 5);
    let seeds = 4000u64;
    let mut hits = vec![0u32; t];
    for s in 0..seeds {
        for i in bits::ones(&rand_matrix_column(t, d, alpha, stream(s, 9)).unwrap()) {
            hits[i] += 1;
        }
    }
    let p = alpha as f64 / t as f64;
    let mean = seeds as f64 * p;
    let sd = (seeds as f64 * p * (1.0 - p)).sqrt();
    for (i, &h) in hits.iter().enumerate() {
        assert!(
            (h as f64 - mean).abs() <= 4.0 * sd,
            "row {i}: {h} vs {mean:.0} ± {sd:.0}"
        );
    }
}

#[test]
fn zero_error_pass_rate_at_min_tests() {
    let n = 16;
    let mt = bounds::min_tests(Regime::ZeroError, n, 2, 1, 1.0 / n as f64).unwrap();
    let p = SchemeParams::randmatrix(n, 2, 1, mt.t, mt.alpha.unwrap(), 77);
    let r = sim::run_zero_error_experiment(&p, 400).unwrap();
    let q = 1.0 / n as f64;
    let sigma = (q * (1.0 - q) / 400.0).sqrt();
    assert!(1.0 - r.empirical_rate >= 1.0 - q - 3.0 * sigma, "{r:?}");
}

#[test]
fn unconstrained_randmatrix_matches_bernoulli_reference() {
    let (n, k) = (300, 4);
    let t0 = bounds::min_tests(Regime::AvgCase, n, k, 0, 1.0 / n as f64)
        .unwrap()
        .t;
    // from half the bound-derived t upwards; far below it the nominal
    // alpha is too heavy and the i.i.d. matrix wins
    for t in [t0 / 2, 7 * t0 / 10, t0] {
        let alpha = bounds::default_alpha(n, k, t, 0).unwrap();
        let p = SchemeParams::randmatrix(n, k, 0, t, alpha, 5);
        let rm = sim::run_avg_case_experiment(&p, 1500).unwrap();
        let be = sim::run_avg_case_bernoulli_experiment(&p, 1500).unwrap();
        assert!(
            rm.wilson_interval.0 <= be.wilson_interval.1,
            "t = {t}: randmatrix {} vs bernoulli {}",
            rm.empirical_rate,
            be.empirical_rate
        );
    }
}

#[test]
fn unconstrained_qnagt_is_no_harder() {
    let (n, k, w) = (12, 2, 8);
    let base = SchemeParams::qnagt(n, k, w, 0.4, 0.5, 21).unwrap();
    let free = SchemeParams {
        w: Some(base.t),
        ..base.clone()
    };
    let constrained = sim::run_qnagt_experiment(&base, 300).unwrap();
    let unconstrained = sim::run_qnagt_experiment(&free, 300).unwrap();
    assert!(
        unconstrained.empirical_rate <= constrained.empirical_rate,
        "w = t: {} vs w = {w}: {}",
        unconstrained.empirical_rate,
        constrained.empirical_rate
    );
}

#[test]
fn brute_qnagt_decoder_is_unambiguous_on_verified_constructions() {
    let mut verified = 0;
    for seed in 0..40 {
        let q = qnagt_construct(10, 2, 8, 0.4, 0.5, seed).unwrap();
        let m = &q.matrix;
        if !qnagt_zero_error_check(m, 2, WeightMode::ExactlyK, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .pass
        {
            continue;
        }
        verified += 1;
        for x in (0..10).combinations(2) {
            let x = SparseSupport::new(x, 10).unwrap();
            let y = count_outcome(m, &x).unwrap();
            let r =
                brute_force_qnagt_decode(m, &y, 2, WeightMode::ExactlyK, DEFAULT_ENUMERATION_CAP)
                    .unwrap();
            assert_eq!(r.estimate, x);
            assert!(!r.ambiguous);
        }
    }
    assert!(verified > 10, "only {verified} constructions verified");
}

#[test]
fn growth_beyond_k_is_at_most_linear() {
    let (n, k) = (1000, 4);
    let grid = SweepGrid {
        n: vec![n],
        k: vec![k],
        d: (0..=8 * k).collect(),
        w: vec![],
        tests: SweepTests::Target(1.0 / n as f64),
        delta: 0.4,
        gamma: 0.5,
    };
    let ts: Vec<f64> = grid
        .cells(Experiment::AvgCase)
        .into_iter()
        .map(|c| {
            sim::cell_params(&grid, Experiment::AvgCase, c, 0)
                .unwrap()
                .t as f64
        })
        .collect();
    for d in k + 1..ts.len() {
        assert!(ts[d] <= ts[k] * d as f64 / k as f64, "d = {d}");
    }
}

#[test]
fn doubling_d_adds_about_two_alpha_d() {
    let (n, k) = (1000, 2);
    let alpha = bounds::nominal_alpha(n, k) as f64;
    // below the point where alpha starts to be clamped
    for d in [1usize, 2, 4, 8] {
        let a = bounds::min_tests(Regime::AvgCase, n, k, d, 1e-3).unwrap().t as f64;
        let b = bounds::min_tests(Regime::AvgCase, n, k, 2 * d, 1e-3)
            .unwrap()
            .t as f64;
        let added = b - a;
        let expected = 2.0 * alpha * d as f64;
        assert!(
            (0.5 * expected..=1.5 * expected).contains(&added),
            "d = {d}: added {added}, expected about {expected}"
        );
    }
}

#[test]
fn alpha_clamp_can_lower_the_required_tests() {
    // a smaller clamped alpha pays less runlength overhead
    let at = |d| bounds::min_tests(Regime::AvgCase, 1000, 2, d, 1e-3).unwrap();
    let (a, b) = (at(16), at(20));
    assert_eq!((a.t, a.alpha), (639, Some(18)));
    assert_eq!((b.t, b.alpha), (449, Some(10)));
}
