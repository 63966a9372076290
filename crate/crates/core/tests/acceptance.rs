//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use malachite_base::num::arithmetic::traits::Gcd;
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use omega_core::bignum::Dyadic;
use omega_core::criteria::{
    classify, condition_b_report, default_eps_grid, kim_series, sum_largest, OmegaVerdict, Verdict, WindowConfig,
};
use omega_core::orbit::{rasterized_measure, ArcUnion, Orbit, DEFAULT_DELTA};
use omega_core::sequences::{
    dyadic_diagnostics, greatest_khinchin_minorant, khinchin_validate, remark_block_sums, remark_counterexample,
    DivergenceScale, PhiSpec, PsiSpec,
};
use omega_core::{build_convergents, GrowthRule, ThetaSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
/// Name, check, runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quotient_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..1000 {
        let len = rng.random_range(1..=60);
        let a: Vec<u64> = (0..len)
            .map(|k| if k == 0 { rng.random_range(0..=10) } else { rng.random_range(1..=10) })
            .collect();
        let t = build_convergents(&a.iter().map(|&x| Natural::from(x)).collect::<Vec<_>>())
            .map_err(|e| e.to_string())?;
        let (mut pm1, mut qm1, mut pm2, mut qm2) = (Natural::from(1u32), Natural::from(0u32), Natural::from(0u32), Natural::from(1u32));
        for (k, &ak) in a.iter().enumerate() {
            let ak = Natural::from(ak);
            let pk = &ak * &pm1 + &pm2;
            let qk = &ak * &qm1 + &qm2;
            ensure(*t.p(k) == pk && *t.q(k) == qk, || format!("case {case}: recurrence at k = {k}"))?;
            ensure((&pk).gcd(&qk) == 1u32, || format!("case {case}: gcd at k = {k}"))?;
            if k >= 2 {
                ensure(qk > qm1, || format!("case {case}: q not increasing at k = {k}"))?;
            }
            if k >= 1 {
                let det = Integer::from(&pk) * Integer::from(&qm1) - Integer::from(&pm1) * Integer::from(&qk);
                let want = Integer::from(if k % 2 == 1 { 1 } else { -1 });
                ensure(det == want, || format!("case {case}: determinant at k = {k}"))?;
            }
            (pm2, qm2, pm1, qm1) = (pm1, qm1, pk, qk);
        }
    }
    Ok("1000 lists, all identities exact".into())
}

fn sum_operator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..1000 {
        let n = rng.random_range(0..50);
        let values: Vec<u64> = (0..n).map(|_| rng.random_range(0..1_000_000)).collect();
        let alpha: f64 = rng.random_range(0.0..60.0);
        let mut sorted = values.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let oracle: u64 = sorted.iter().take(alpha.floor() as usize).sum();
        let got = sum_largest(&values, alpha).map_err(|e| e.to_string())?;
        ensure(got == oracle, || format!("case {case}: {got} != {oracle}"))?;
        let more = sum_largest(&values, alpha + rng.random_range(0.0..5.0)).unwrap();
        ensure(more >= got, || format!("case {case}: not monotone in alpha"))?;
        let full: u64 = values.iter().sum();
        ensure(sum_largest(&values, n as f64 + alpha).unwrap() == full, || format!("case {case}: m >= n"))?;
    }
    Ok("1000 instances equal the sort-prefix oracle".into())
}

fn golden_ratio() -> Outcome {
    let ln_phi = 0.481_211_825_059_603_45;
    let t = ThetaSpec::golden().table(500).map_err(|e| e.to_string())?;
    let r = classify(&t, WindowConfig::default()).map_err(|e| e.to_string())?;
    let i = r.entry("i").unwrap();
    ensure((i.estimate - ln_phi).abs() < 1e-3, || format!("(i) estimate {}", i.estimate))?;
    ensure(i.verdict == Verdict::Holds && r.omega == OmegaVerdict::InOmega, || "verdict".into())?;
    let t = ThetaSpec::golden().table(200).map_err(|e| e.to_string())?;
    let b = condition_b_report(&t, &default_eps_grid(), WindowConfig::default()).map_err(|e| e.to_string())?;
    let worst = b.entries.iter().map(|e| e.estimate).fold(0.0, f64::max);
    ensure(b.verdict == Verdict::Holds && worst < 0.5, || format!("condition B {:?}, max estimate {worst}", b.verdict))?;
    Ok(format!("(i) = {:.6}, condition B holds, max estimate {worst:.4}", i.estimate))
}

fn liouville() -> Outcome {
    let spec = ThetaSpec::growth(&[0, 1], GrowthRule::Liouville).with_max_bits(1 << 28);
    let t = spec.table(12).map_err(|e| e.to_string())?;
    let r = classify(&t, WindowConfig::default()).map_err(|e| e.to_string())?;
    let v = r.entry("v").unwrap();
    let late_min = (10..12).filter_map(|k| v.at(k)).fold(f64::INFINITY, f64::min);
    ensure(v.window_min > 5.0 && late_min > 5.0, || format!("(v) window min {}", v.window_min))?;
    ensure(r.omega == OmegaVerdict::NotInOmega, || format!("classify says {}", r.omega))?;
    let b = condition_b_report(&t, &default_eps_grid(), WindowConfig::default()).map_err(|e| e.to_string())?;
    let least = b.entries.iter().map(|e| e.estimate).fold(f64::INFINITY, f64::min);
    ensure(b.verdict == Verdict::Fails && least > 0.99, || format!("condition B {:?}, min estimate {least}", b.verdict))?;
    Ok(format!("(v) window min {:.3}, condition B fails, min estimate {least}", v.window_min))
}

fn e_pattern() -> Outcome {
    let t = ThetaSpec::EPattern.table(3000).map_err(|e| e.to_string())?;
    let r = classify(&t, WindowConfig::default()).map_err(|e| e.to_string())?;
    let iv = r.entry("iv").unwrap();
    ensure(iv.estimate < 3.0 && iv.verdict == Verdict::Holds, || format!("(iv) max {}", iv.estimate))?;
    ensure(r.omega == OmegaVerdict::InOmega, || format!("classify says {}", r.omega))?;
    Ok(format!("(iv) window max {:.5}", iv.estimate))
}

fn series_criterion() -> Outcome {
    let t = ThetaSpec::golden().table(2001).map_err(|e| e.to_string())?;
    let w = WindowConfig::default();
    let a = kim_series(&t, &PhiSpec::log(), 2000, w).map_err(|e| e.to_string())?;
    let slope = a.slope.unwrap_or(0.0);
    ensure(slope >= 0.5, || format!("φ = ln slope {slope}"))?;
    let b = kim_series(&t, &PhiSpec::log_power(2.0), 2000, w).map_err(|e| e.to_string())?;
    ensure(b.total() < 2.0 && b.cauchy_tail < 1e-3, || format!("φ = ln² sum {}, tail {}", b.total(), b.cauchy_tail))?;
    Ok(format!("slope {slope:.4}; ln² sum {:.6}, tail {:.2e}", b.total(), b.cauchy_tail))
}

fn counterexample() -> Outcome {
    let n: Vec<u64> = (0..=6).map(|k| k * (k + 1) / 2).collect();
    for b in remark_block_sums(&n).map_err(|e| e.to_string())? {
        ensure(b.matches_closed_form(), || format!("block {} sum {}", b.k, b.sum_f64))?;
        ensure(b.closed_form == Dyadic::one_minus_inverse_power_of_two(n[b.k] - n[b.k - 1]), || "closed form".into())?;
    }
    let psi = remark_counterexample(&n).map_err(|e| e.to_string())?;
    let range = (1u64 << n[6]) - 1;
    let report = khinchin_validate(&psi, range, DivergenceScale::LogLogQ).map_err(|e| e.to_string())?;
    ensure(!report.monotone_ok, || "monotone_ok".into())?;
    let m = greatest_khinchin_minorant(&psi, range).map_err(|e| e.to_string())?;
    // brute force on the first 2^10 integers
    let q_psi: Vec<f64> = (1..=1024u64).map(|q| psi.q_psi(q).unwrap()).collect();
    for q in 1..=1024usize {
        let brute = q_psi[..q].iter().copied().fold(f64::INFINITY, f64::min);
        ensure(m.at(q as u64) == brute, || format!("g({q})"))?;
    }
    // everywhere: inside block k the running minimum is 2^{n_{k-1} - n_k}
    for q in 1..=range {
        let k = n.iter().position(|&e| q < 1u64 << e).unwrap();
        let want = 2f64.powi(n[k - 1] as i32 - n[k] as i32);
        ensure(m.at(q) == want, || format!("g({q}) = {} vs {want}", m.at(q)))?;
    }
    let checkpoints: Vec<u64> = n[1..].iter().map(|&e| (1u64 << e) - 1).collect();
    let sums = m.partial_sums(&checkpoints);
    ensure(sums.iter().all(|&s| s <= 2.0), || format!("partial sums {sums:?}"))?;
    Ok(format!("first violation q = {:?}, Σ g/q = {:.6}", report.first_violation, m.sum_g_over_q))
}

fn dyadic() -> Outcome {
    let t = ThetaSpec::golden().table(300).map_err(|e| e.to_string())?;
    let d = dyadic_diagnostics(&t, &PhiSpec::log(), 7).map_err(|e| e.to_string())?;
    ensure(d.records[0].q_m.as_deref() == Some("2"), || format!("Q_0 = {:?}", d.records[0].q_m))?;
    let qs: Vec<Natural> = d.records.iter().map(|r| r.q_m.as_ref().unwrap().parse().unwrap()).collect();
    ensure(qs.windows(2).all(|w| w[0] <= w[1]), || "Q_m not monotone".into())?;
    for r in &d.records {
        // q_k <= Q_m exactly when ln q_k <= 2^m; k in S when ln ln q_k <= ln(q_{k+1}/q_k)
        let bound = 2f64.powi(r.m as i32);
        let ln_q_m = if r.m <= 5 { bound.exp().floor().ln() } else { bound };
        let mut num = 0.0;
        for k in (0..t.depth()).take_while(|&k| t.log_q(k) <= bound) {
            let (lq, ratio) = (t.log_q(k), t.log_q(k + 1) - t.log_q(k));
            num += if lq == 0.0 || lq.ln() <= ratio { r.m as f64 } else { ratio };
        }
        let oracle = num / ln_q_m;
        let got = r.lambda.ok_or("λ undefined")?;
        ensure((got - oracle).abs() <= 1e-10 * oracle, || format!("λ_{} = {got} vs {oracle}", r.m))?;
    }
    Ok(format!("Q_m = {:?}", d.records.iter().map(|r| r.q_m.clone().unwrap()).collect::<Vec<_>>()))
}

fn arc_unions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let grid = 1_000_000usize;
    let mut worst_aligned: f64 = 0.0;
    let mut worst_real: f64 = 0.0;
    for set in 0..100 {
        let count = rng.random_range(1..=60);
        // centres and radii on the raster lattice: the oracle is then exact
        let aligned: Vec<(f64, f64)> = (0..count)
            .map(|_| {
                let c = rng.random_range(0..grid) as f64 / grid as f64;
                let r = rng.random_range(1..grid / 20) as f64 / grid as f64;
                (c, r)
            })
            .collect();
        let real: Vec<(f64, f64)> = (0..count).map(|_| (rng.random(), rng.random_range(0.0..0.05))).collect();
        for (balls, aligned_case) in [(&aligned, true), (&real, false)] {
            let mut u = ArcUnion::new();
            for &(c, r) in balls.iter() {
                u.insert_arc(c, r);
            }
            let diff = (u.measure() - rasterized_measure(balls, grid)).abs();
            if aligned_case {
                worst_aligned = worst_aligned.max(diff);
                ensure(diff <= 2e-6, || format!("set {set}: aligned diff {diff}"))?;
            } else {
                worst_real = worst_real.max(diff);
                let allowed = u.len() as f64 / grid as f64;
                ensure(diff <= allowed, || format!("set {set}: diff {diff} > {allowed}"))?;
            }
            let mut shuffled = balls.clone();
            shuffled.shuffle(&mut rng);
            let mut v = ArcUnion::new();
            for &(c, r) in &shuffled {
                v.insert_arc(c, r);
            }
            let bits = |u: &ArcUnion| u.arcs().iter().map(|&(l, r)| (l.to_bits(), r.to_bits())).collect::<Vec<_>>();
            ensure(bits(&u) == bits(&v), || format!("set {set}: order dependence"))?;
        }
    }
    Ok(format!("max |μ − raster| {worst_aligned:.1e} (lattice), {worst_real:.1e} (real endpoints)"))
}

fn simulation() -> Outcome {
    let orbit = Orbit::new(&ThetaSpec::golden(), 100_000, DEFAULT_DELTA).map_err(|e| e.to_string())?;
    let checkpoints = [1_000, 3_000, 10_000, 30_000, 100_000];
    let p = orbit
        .tail_measure_profile(&PsiSpec::harmonic_log(1.0), 100, &checkpoints)
        .map_err(|e| e.to_string())?;
    ensure(p.is_monotone() && p.final_measure() >= 0.9, || format!("profile {:?}", p.measure))?;
    let sq = orbit
        .tail_measure_profile(&PsiSpec::power(1.0, 2.0), 100, &[100_000])
        .map_err(|e| e.to_string())?;
    let bound: f64 = (100..=100_000u64).map(|q| 2.0 / (q as f64 * q as f64)).sum();
    ensure(sq.final_measure() <= bound, || format!("μ = {} > {bound}", sq.final_measure()))?;
    Ok(format!("Khinchin μ = {:.4}; 1/q² μ = {:.6} <= {bound:.6}", p.final_measure(), sq.final_measure()))
}

fn coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let configs = [
        (ThetaSpec::golden(), PsiSpec::harmonic_log(1.0)),
        (ThetaSpec::EPattern, PsiSpec::power(1.0, 1.0)),
        (ThetaSpec::periodic(&[1], &[2]), PsiSpec::power(1.0, 2.0)),
        (ThetaSpec::periodic(&[0], &[1, 2, 3]), PsiSpec::power(0.5, 1.0)),
    ];
    let (q0, q) = (20, 3000);
    let mut checked = 0;
    for (theta, psi) in &configs {
        let orbit = Orbit::new(theta, q, DEFAULT_DELTA).map_err(|e| e.to_string())?;
        let union = orbit.target_union(psi, q0, q).map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let s: f64 = rng.random();
            let h = orbit.hit_count(psi, s, q0, q).map_err(|e| e.to_string())?;
            ensure(h.uncertain == 0, || format!("s = {s}: {} uncertain margins", h.uncertain))?;
            ensure((h.count > 0) == union.nominal.contains(s), || format!("s = {s}: hits {} vs union", h.count))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} points agree, no uncertain margins"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact convergent invariants", quotient_invariants, Some(10)),
        ("largest-sum operator oracle", sum_operator, None),
        ("golden ratio in Ω", golden_ratio, Some(5)),
        ("Liouville growth rule not in Ω", liouville, Some(5)),
        ("e-pattern bounded ratio statistic", e_pattern, None),
        ("series criterion divergence and convergence", series_criterion, None),
        ("counterexample step function", counterexample, None),
        ("dyadic diagnostics", dyadic, None),
        ("arc union exactness", arc_unions, None),
        ("target-union measure profiles", simulation, Some(60)),
        ("hit counts against target unions", coherence, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if took > Duration::from_secs(*secs) {
                outcome = Err(format!("took {took:.2?}, limit {secs} s"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({took:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
