mod common;

use common::quadrature_affinity;
use ghz_core::dichotomy::{
    classify, classify_mean_shift, classify_variance_shift, hellinger_affinity_1d, kakutani_classify,
    GaussianPerturbation, PowerLawSeq, RateKind, Verdict,
};
use proptest::prelude::*;

fn pl(c: f64, p: f64) -> PowerLawSeq {
    PowerLawSeq::new(c, p).unwrap()
}

#[test]
fn affinity_reference_values_match_quadrature() {
    let cases = [
        (0.0, 1.0, 1.0, 1.0, (-1.0f64 / 8.0).exp()),
        (0.0, 1.0, 0.0, 4.0, (4.0f64 / 5.0).sqrt()),
    ];
    for (m1, v1, m2, v2, expected) in cases {
        let closed = hellinger_affinity_1d(m1, v1, m2, v2).unwrap();
        assert!((closed - expected).abs() < 1e-15);
        assert!((quadrature_affinity(m1, v1, m2, v2) - expected).abs() < 1e-8);
    }
    assert_eq!(hellinger_affinity_1d(0.3, 2.0, 0.3, 2.0).unwrap(), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn affinity_matches_quadrature(m1 in -5.0f64..5.0, v1 in 0.05f64..20.0, m2 in -5.0f64..5.0, v2 in 0.05f64..20.0) {
        let closed = hellinger_affinity_1d(m1, v1, m2, v2).unwrap();
        let numeric = quadrature_affinity(m1, v1, m2, v2);
        prop_assert!((closed - numeric).abs() < 1e-8, "closed {closed} quadrature {numeric}");
        prop_assert!(closed > 0.0 && closed <= 1.0);
        prop_assert_eq!(closed, hellinger_affinity_1d(m2, v2, m1, v1).unwrap());
    }
}

proptest! {
    #[test]
    fn kakutani_agrees_on_mean_shifts(cb in 0.01f64..10.0, pb in 1.01f64..4.0, ca in 0.0f64..10.0, pa in -2.0f64..4.0) {
        let g = GaussianPerturbation::mean_shift(pl(cb, pb), pl(ca, pa));
        let fh = classify_mean_shift(&g).unwrap();
        let kk = kakutani_classify(&g).unwrap();
        prop_assert_eq!(fh.verdict, kk.verdict);
        prop_assert_eq!(fh.decisive_exponent, kk.decisive_exponent);
        prop_assert_eq!(classify(&g).unwrap(), fh);
    }

    #[test]
    fn kakutani_agrees_on_variance_shifts(cb in 0.01f64..10.0, pb in 1.01f64..4.0, cd in 0.0f64..10.0, pd in -2.0f64..6.0) {
        let g = GaussianPerturbation::variance_shift(pl(cb, pb), pl(cd, pd));
        let fh = classify_variance_shift(&g).unwrap();
        let kk = kakutani_classify(&g).unwrap();
        prop_assert_eq!(fh.verdict, kk.verdict);
        prop_assert_eq!(classify(&g).unwrap(), fh);
    }

    /// Shrinking the base variances pointwise never turns a singular pair
    /// into an equivalent one.
    #[test]
    fn sharper_base_never_unsingularizes(cb in 0.01f64..10.0, pb in 1.01f64..4.0, ca in 1e-3f64..10.0, pa in -1.0f64..3.0, gamma in 1e-6f64..1.0) {
        let wide = classify_mean_shift(&GaussianPerturbation::mean_shift(pl(cb, pb), pl(ca, pa))).unwrap();
        let sharp = classify_mean_shift(&GaussianPerturbation::mean_shift(pl(cb * gamma, pb), pl(ca, pa))).unwrap();
        prop_assert!(sharp.decisive_coefficient >= wide.decisive_coefficient);
        if wide.verdict == Verdict::Singular {
            prop_assert_eq!(sharp.verdict, Verdict::Singular);
        }
    }

    #[test]
    fn every_valid_input_gets_one_verdict(cb in 0.01f64..10.0, pb in 1.01f64..4.0, c in 0.0f64..10.0, p in -3.0f64..6.0, mean in any::<bool>()) {
        let g = if mean {
            GaussianPerturbation::mean_shift(pl(cb, pb), pl(c, p))
        } else {
            GaussianPerturbation::variance_shift(pl(cb, pb), pl(c, p))
        };
        let v = classify(&g).unwrap().verdict;
        prop_assert!(v == Verdict::Singular || v == Verdict::Equivalent);
    }
}

#[test]
fn grid_agreement_twenty_by_twenty() {
    for i in 0..20 {
        for k in 0..20 {
            let c = 0.05 + 0.5 * i as f64;
            let p = -1.0 + 0.25 * k as f64;
            let base = pl(1.0, 2.0);
            let mean = GaussianPerturbation::mean_shift(base.clone(), pl(c, p));
            assert_eq!(
                classify_mean_shift(&mean).unwrap().verdict,
                kakutani_classify(&mean).unwrap().verdict
            );
            let var = GaussianPerturbation::variance_shift(base, pl(c, p));
            assert_eq!(
                classify_variance_shift(&var).unwrap().verdict,
                kakutani_classify(&var).unwrap().verdict
            );
        }
    }
}

/// `Σ_{j ≤ n} −log H_j` evaluated term by term.
fn partial_log_affinity(n: u64, component: impl Fn(u64) -> (f64, f64, f64, f64)) -> f64 {
    (1..=n)
        .map(|j| {
            let (m1, v1, m2, v2) = component(j);
            -hellinger_affinity_1d(m1, v1, m2, v2).unwrap().ln()
        })
        .sum()
}

#[test]
fn hellinger_partial_sums_track_the_verdicts() {
    let b = |j: u64| (j as f64).powi(-2);
    // δa_j = √(b_j / j): terms 1/(8j), partial sums ≈ (ln n + γ)/8
    let singular_mean = |j: u64| (0.0, b(j), (b(j) / j as f64).sqrt(), b(j));
    let s = partial_log_affinity(1_000_000, singular_mean);
    let euler_gamma = 0.577_215_664_901_532_9;
    assert!((s - ((1e6f64).ln() + euler_gamma) / 8.0).abs() < 1e-6);

    // δa_j = j^-2: terms j^-2/8, partial sums converge to π²/48
    let equivalent_mean = |j: u64| (0.0, b(j), (j as f64).powi(-2), b(j));
    let s = partial_log_affinity(1_000_000, equivalent_mean);
    assert!((s - std::f64::consts::PI.powi(2) / 48.0).abs() < 1e-6);

    // δb_j = b_j j^-1/2: terms ~ 1/(16j), so the sums keep growing
    let singular_var = |j: u64| (0.0, b(j), 0.0, b(j) * (1.0 + (j as f64).powf(-0.5)));
    let (s3, s6) = (
        partial_log_affinity(1_000, singular_var),
        partial_log_affinity(1_000_000, singular_var),
    );
    assert!(((s6 - s3) / (1e3f64).ln() - 0.0625).abs() < 1e-3);

    // δb_j = b_j j^-1: terms ~ j^-2/16, the tail beyond 10^3 is tiny
    let equivalent_var = |j: u64| (0.0, b(j), 0.0, b(j) * (1.0 + 1.0 / j as f64));
    let (e3, e6) = (
        partial_log_affinity(1_000, equivalent_var),
        partial_log_affinity(1_000_000, equivalent_var),
    );
    assert!(e6 - e3 < 2e-4 && e6 < 1.0);

    for (g, verdict) in [
        (
            GaussianPerturbation::mean_shift(pl(1.0, 2.0), pl(1.0, 1.5)),
            Verdict::Singular,
        ),
        (
            GaussianPerturbation::mean_shift(pl(1.0, 2.0), pl(1.0, 2.0)),
            Verdict::Equivalent,
        ),
        (
            GaussianPerturbation::variance_shift(pl(1.0, 2.0), pl(1.0, 2.5)),
            Verdict::Singular,
        ),
        (
            GaussianPerturbation::variance_shift(pl(1.0, 2.0), pl(1.0, 3.0)),
            Verdict::Equivalent,
        ),
    ] {
        assert_eq!(classify(&g).unwrap().verdict, verdict);
        assert_eq!(kakutani_classify(&g).unwrap().verdict, verdict);
    }
}

#[test]
fn variance_regimes_report_rate_kind() {
    let base = pl(1.0, 2.0);
    let shrinking = kakutani_classify(&GaussianPerturbation::variance_shift(base.clone(), pl(1.0, 3.0))).unwrap();
    assert_eq!(shrinking.rate_kind, RateKind::Asymptotic);
    let constant = kakutani_classify(&GaussianPerturbation::variance_shift(base.clone(), pl(0.5, 2.0))).unwrap();
    assert_eq!(
        (constant.rate_kind, constant.verdict),
        (RateKind::Exact, Verdict::Singular)
    );
    let growing = kakutani_classify(&GaussianPerturbation::variance_shift(base, pl(1.0, 1.0))).unwrap();
    assert_eq!(
        (growing.rate_kind, growing.verdict),
        (RateKind::Minorant, Verdict::Singular)
    );
}

proptest! {
    /// The reported power law is the actual `−log H_j` (or its asymptote).
    /// `j` is chosen so the term is small enough for the asymptote to hold
    /// and large enough to be resolved in double precision.
    #[test]
    fn kakutani_rate_matches_terms(cb in 0.1f64..10.0, pb in 1.01f64..3.0, c in 0.01f64..5.0, dp in 0.3f64..2.0, mean in any::<bool>()) {
        // (perturbation, j, −log H_j, ratio r_j = δb_j/b_j)
        let (g, j, term, r) = if mean {
            let pa = (pb + dp) / 2.0;
            let g = GaussianPerturbation::mean_shift(pl(cb, pb), pl(c, pa));
            let j = (c * c / (8.0 * cb) / 1e-9).powf(1.0 / dp).clamp(1.0, 1e12).ceil();
            let bj = cb * j.powf(-pb);
            (g, j, -hellinger_affinity_1d(0.0, bj, c * j.powf(-pa), bj).unwrap().ln(), 0.0)
        } else {
            let pd = pb + dp;
            let g = GaussianPerturbation::variance_shift(pl(cb, pb), pl(c, pd));
            let j = (c / cb / 1e-4).powf(1.0 / dp).clamp(1.0, 1e12).ceil();
            let (bj, dbj) = (cb * j.powf(-pb), c * j.powf(-pd));
            (g, j, -hellinger_affinity_1d(0.0, bj, 0.0, bj + dbj).unwrap().ln(), dbj / bj)
        };
        let k = kakutani_classify(&g).unwrap();
        let predicted = k.decisive_coefficient * j.powf(-k.decisive_exponent);
        // the variance asymptote carries a relative error of order r_j
        prop_assume!(r <= 2e-4 && predicted > 1e-12);
        prop_assert!((term / predicted - 1.0).abs() < 1e-3, "j {j} term {term} predicted {predicted}");
    }
}
