//! Five growth conditions on the denominators q_k:
//!
//! | name | statistic | condition | consequence |
//! |------|-----------|-----------|-------------|
//! | `i`   | ln q_k / k                  | limsup < ∞ | θ ∈ Ω |
//! | `ii`  | ln q_k / (k ln k)           | limsup = ∞ | θ ∉ Ω |
//! | `iii` | Σ_{j<=k} 1 / ln q_j          | sum < ∞    | θ ∉ Ω |
//! | `iv`  | (q_{k+1}/q_k) / ln q_k      | limsup < ∞ | θ ∈ Ω |
//! | `v`   | ln(q_{k+1}/q_k) / ln q_k    | limsup = ∞ | θ ∉ Ω |

use super::fit::least_squares_slope;
use super::report::{
    bounded_verdict, growth_exponent, unbounded_verdict, CriterionEntry, CriterionReport, Membership,
    OmegaVerdict, Verdict, WindowConfig,
};
use super::admissible_floor;
use crate::bignum::{log_ratio, ratio_to_f64};
use crate::convergents::ConvergentTable;
use crate::error::Result;

/// Statistic values and their logarithms, indexed by k.
struct Series {
    values: Vec<Option<f64>>,
    logs: Vec<Option<f64>>,
}

impl Series {
    fn new(n: usize) -> Self {
        Series {
            values: vec![None; n],
            logs: vec![None; n],
        }
    }
}

/// Evaluate the five conditions over the window; `omega` combines them.
pub fn classify(table: &ConvergentTable, config: WindowConfig) -> Result<CriterionReport> {
    let floor = admissible_floor(table)?;
    let depth = table.depth();
    let n = depth + 1;
    let lq = table.log_qs();
    let (mut s1, mut s2, mut s4, mut s5) = (Series::new(n), Series::new(n), Series::new(n), Series::new(n));
    let mut s3 = vec![None; n];
    let mut acc = 0.0;
    for k in floor..=depth {
        let (l, ll, kf) = (lq[k], lq[k].ln(), k as f64);
        s1.values[k] = Some(l / kf);
        s1.logs[k] = Some(ll - kf.ln());
        if k >= 2 {
            s2.values[k] = Some(l / (kf * kf.ln()));
            s2.logs[k] = Some(ll - kf.ln() - kf.ln().ln());
            acc += 1.0 / l;
            s3[k] = Some(acc);
        }
        if k < depth {
            let (num, den) = (table.q(k + 1), table.q(k));
            let lr = log_ratio(num, den)?;
            s4.values[k] = Some(ratio_to_f64(num, den)? / l);
            s4.logs[k] = Some(lr - ll);
            s5.values[k] = Some(lr / l);
            s5.logs[k] = Some(lr.ln() - ll);
        }
    }
    let window = config.bounds(depth, floor.max(2));
    // (iv) and (v) need q_{k+1}
    let short = (window.0.min(depth - 1), depth - 1);
    let gap = config.gap;

    let mut entries = Vec::with_capacity(5);
    let mut push = |name: &str, implies, s: Series, w, bounded: bool| {
        let g = growth_exponent(&s.logs, w);
        let mut e = CriterionEntry::summarize(name, None, implies, s.values, w);
        e.growth_exponent = g;
        e.verdict = if bounded { bounded_verdict(g, gap) } else { unbounded_verdict(g, gap) };
        entries.push(e);
    };
    push("i", Membership::InOmega, s1, window, true);
    push("ii", Membership::NotInOmega, s2, window, false);

    let (xs, ys): (Vec<f64>, Vec<f64>) = (window.0..=window.1)
        .filter_map(|k| s3[k].map(|v| ((k as f64).ln(), v)))
        .unzip();
    let slope = least_squares_slope(&xs, &ys);
    let mut e3 = CriterionEntry::summarize("iii", None, Membership::NotInOmega, s3, window);
    e3.growth_exponent = slope;
    e3.verdict = bounded_verdict(slope, gap);

    push("iv", Membership::InOmega, s4, short, true);
    push("v", Membership::NotInOmega, s5, short, false);
    entries.insert(2, e3);

    let mut report = CriterionReport {
        depth,
        admissible_from: floor,
        config,
        eps_grid: Vec::new(),
        entries,
        condition_b: None,
        omega: OmegaVerdict::Inconclusive,
        conflict: false,
        log_q: lq.to_vec(),
    };
    report.settle();
    Ok(report)
}

/// The five conditions together with condition B over `eps_grid`.
pub fn analyze(table: &ConvergentTable, eps_grid: &[f64], config: WindowConfig) -> Result<CriterionReport> {
    let mut report = classify(table, config)?;
    let b = super::condition_b::condition_b_report(table, eps_grid, config)?;
    report.eps_grid = eps_grid.to_vec();
    report.condition_b = Some(b.verdict);
    // A failing grid is a statement about θ ∉ Ω as well; encode it as one
    // more entry so that `settle` sees both directions.
    let least = |f: fn(&CriterionEntry) -> f64| b.entries.iter().map(f).fold(f64::INFINITY, f64::min);
    let summary = CriterionEntry {
        name: "condition-b-fails".into(),
        parameter: None,
        implies: Membership::NotInOmega,
        series: Vec::new(),
        window: b.entries[0].window,
        estimate: least(|e| e.estimate),
        window_min: least(|e| e.window_min),
        late_max: least(|e| e.late_max),
        growth_exponent: None,
        verdict: match b.verdict {
            Verdict::Fails => Verdict::Holds,
            Verdict::Holds => Verdict::Fails,
            Verdict::Inconclusive => Verdict::Inconclusive,
        },
    };
    report.entries.extend(b.entries);
    report.entries.push(summary);
    report.settle();
    Ok(report)
}
