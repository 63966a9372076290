use malachite_nz::natural::Natural;
use omega_core::criteria::{
    analyze, classify, condition_b_statistic, default_eps_grid, kim_series, sum_largest, OmegaVerdict,
    WindowConfig,
};
use omega_core::sequences::{PhiSpec, StepFunction};
use omega_core::{build_convergents, GrowthRule, ThetaSpec};
use proptest::prelude::*;

fn sort_prefix_oracle(values: &[u64], alpha: f64) -> u64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v.iter().take(alpha.floor() as usize).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sum_largest_matches_oracle(values in prop::collection::vec(0u64..1_000_000, 0..40), alpha in 0.0f64..50.0) {
        prop_assert_eq!(sum_largest(&values, alpha).unwrap(), sort_prefix_oracle(&values, alpha));
    }

    #[test]
    fn sum_largest_float_close(values in prop::collection::vec(0.0f64..1e6, 1..40), alpha in 0.0f64..50.0) {
        let mut v = values.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        let oracle: f64 = v.iter().take(alpha.floor() as usize).sum();
        let got = sum_largest(&values, alpha).unwrap();
        prop_assert!((got - oracle).abs() <= 1e-12 * oracle.max(1.0));
    }

    #[test]
    fn sum_largest_monotone(values in prop::collection::vec(0u64..1000, 0..30), a in 0.0f64..40.0, b in 0.0f64..40.0, i in any::<prop::sample::Index>(), bump in 0u64..100) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(sum_largest(&values, lo).unwrap() <= sum_largest(&values, hi).unwrap());
        if !values.is_empty() {
            let mut bigger = values.clone();
            bigger[i.index(values.len())] += bump;
            prop_assert!(sum_largest(&values, lo).unwrap() <= sum_largest(&bigger, lo).unwrap());
        }
        let full: u64 = values.iter().sum();
        prop_assert_eq!(sum_largest(&values, values.len() as f64 + hi).unwrap(), full);
    }

    #[test]
    fn condition_b_bounds(a in prop::collection::vec(1u64..=50, 20..80), e1 in 0.01f64..4.0, e2 in 0.01f64..4.0) {
        let mut a = a;
        a.insert(0, 0);
        let t = build_convergents(&a.iter().map(|&x| Natural::from(x)).collect::<Vec<_>>()).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let from = t.admissible_from().unwrap().max(2);
        for k in from..=t.depth() {
            let s_lo = condition_b_statistic(&t, lo, k).unwrap();
            let s_hi = condition_b_statistic(&t, hi, k).unwrap();
            prop_assert!((0.0..=1.0).contains(&s_lo) && (0.0..=1.0).contains(&s_hi));
            prop_assert!(s_lo <= s_hi + 1e-15);
            let lq = t.log_q(k);
            if (hi * lq / lq.ln()).floor() >= k as f64 {
                prop_assert_eq!(s_hi, 1.0);
            }
        }
    }
}

#[test]
fn kim_reads_phi_only_at_denominators() {
    let t = ThetaSpec::golden().table(120).unwrap();
    let k_max = 100;
    let from = t.admissible_from().unwrap();
    // step φ equal to ln q_k on [q_k, q_{k+1}), agreeing with ln exactly at each q_k
    let breakpoints: Vec<Natural> = std::iter::once(Natural::from(1u32))
        .chain((from..=k_max + 1).map(|k| t.q(k).clone()))
        .collect();
    let mut values = vec![t.log_q(from)];
    values.extend((from..=k_max).map(|k| t.log_q(k)));
    let step = PhiSpec::Step(StepFunction::new(breakpoints, values).unwrap());
    let a = kim_series(&t, &PhiSpec::log(), k_max, WindowConfig::default()).unwrap();
    let b = kim_series(&t, &step, k_max, WindowConfig::default()).unwrap();
    assert_eq!(a.terms, b.terms);
}

#[test]
fn verdicts_never_conflict_on_corpus() {
    let corpus = [
        ThetaSpec::golden().table(400).unwrap(),
        ThetaSpec::EPattern.table(900).unwrap(),
        ThetaSpec::periodic(&[0], &[1, 2, 3, 4]).table(400).unwrap(),
        ThetaSpec::periodic(&[3, 7, 15], &[1, 292]).table(300).unwrap(),
        ThetaSpec::growth(&[0, 1], GrowthRule::Index).table(400).unwrap(),
        ThetaSpec::growth(&[0, 1, 1, 1, 1, 1, 1], GrowthRule::Liouville)
            .with_max_bits(1 << 23)
            .table(12)
            .unwrap(),
        ThetaSpec::growth(&[0, 1, 1, 1, 1], GrowthRule::QPower(2)).table(16).unwrap(),
    ];
    for (i, t) in corpus.iter().enumerate() {
        let r = analyze(t, &default_eps_grid(), WindowConfig::default()).unwrap();
        assert!(!r.conflict, "corpus entry {i}: {:#?}", r.entries.iter().map(|e| (&e.name, e.verdict)).collect::<Vec<_>>());
    }
}

#[test]
fn known_verdicts() {
    let golden = classify(&ThetaSpec::golden().table(300).unwrap(), WindowConfig::default()).unwrap();
    assert_eq!(golden.omega, OmegaVerdict::InOmega);
    let e = analyze(&ThetaSpec::EPattern.table(900).unwrap(), &default_eps_grid(), WindowConfig::default()).unwrap();
    assert_eq!(e.omega, OmegaVerdict::InOmega);
    // a_{k+1} = q_k^2: ln(q_{k+1}/q_k) ≈ 2 ln q_k, bounded ratio, but (ii) holds
    let sq = ThetaSpec::growth(&[0, 1, 1, 1, 1], GrowthRule::QPower(2)).table(16).unwrap();
    let r = analyze(&sq, &default_eps_grid(), WindowConfig::default()).unwrap();
    assert_eq!(r.omega, OmegaVerdict::NotInOmega);
}

#[test]
fn report_serializes() {
    let r = analyze(&ThetaSpec::golden().table(60).unwrap(), &[1.0, 0.5], WindowConfig::default()).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["omega"], "in Ω");
    assert_eq!(json["entries"][0]["name"], "i");
    assert_eq!(json["condition_b"], "holds");
}
