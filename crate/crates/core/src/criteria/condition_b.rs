//! (1/ln q_k) Σ((ln(q_{i+1}/q_i))_{i<k} : ε ln q_k / ln ln q_k).
//!
//! The statistic is the share of ln q_k carried by its few largest
//! convergent jumps; θ ∈ Ω exactly when, for some ε, its limsup stays below 1.

use super::report::{CriterionEntry, Membership, Verdict, WindowConfig};
use super::sum_largest::sum_largest;
use super::admissible_floor;
use crate::convergents::ConvergentTable;
use crate::error::{Error, Result};

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("ε = {eps} must be positive and finite")));
    }
    Ok(())
}

/// `ε ln q / ln ln q`, the number of terms admitted (before flooring).
fn cutoff(eps: f64, log_q: f64) -> f64 {
    eps * log_q / log_q.ln()
}

/// The statistic at a single index `k`, read straight off the definition.
pub fn condition_b_statistic(table: &ConvergentTable, eps: f64, k: usize) -> Result<f64> {
    check_eps(eps)?;
    if k > table.depth() {
        return Err(Error::domain(format!("k = {k} beyond table depth {}", table.depth())));
    }
    if *table.q(k) < 3u32 {
        return Err(Error::BelowAdmissibleIndex { k });
    }
    let log_q = table.log_q(k);
    let alpha = cutoff(eps, log_q);
    if alpha >= k as f64 {
        return Ok(1.0);
    }
    let ratios = table.log_ratios();
    Ok((sum_largest(&ratios[..k], alpha)? / log_q).clamp(0.0, 1.0))
}

/// The statistic for every ε in `eps_grid` at every `k` in `from..=to`,
/// sharing one sorted prefix of log-ratios; `out[j][k - from]` is for
/// `eps_grid[j]`.
pub fn condition_b_series(
    table: &ConvergentTable,
    eps_grid: &[f64],
    from: usize,
    to: usize,
) -> Result<Vec<Vec<f64>>> {
    for &e in eps_grid {
        check_eps(e)?;
    }
    if to > table.depth() {
        return Err(Error::domain(format!("k = {to} beyond table depth {}", table.depth())));
    }
    if from <= to && *table.q(from) < 3u32 {
        return Err(Error::BelowAdmissibleIndex { k: from });
    }
    let ratios = table.log_ratios();
    // Descending order; prefix[j] = sum of the j largest.
    let mut sorted: Vec<f64> = Vec::with_capacity(to);
    let mut prefix: Vec<f64> = Vec::with_capacity(to + 1);
    let mut out = vec![Vec::with_capacity(to.saturating_sub(from) + 1); eps_grid.len()];
    for k in 0..=to {
        if k > 0 {
            let r = ratios[k - 1];
            let pos = sorted.partition_point(|&x| x >= r);
            sorted.insert(pos, r);
        }
        if k < from {
            continue;
        }
        prefix.clear();
        prefix.push(0.0);
        let mut acc = 0.0;
        for &x in &sorted {
            acc += x;
            prefix.push(acc);
        }
        let log_q = table.log_q(k);
        for (j, &eps) in eps_grid.iter().enumerate() {
            let alpha = cutoff(eps, log_q);
            let v = if alpha >= k as f64 {
                1.0
            } else {
                (prefix[alpha.floor() as usize] / log_q).clamp(0.0, 1.0)
            };
            out[j].push(v);
        }
    }
    Ok(out)
}

/// Window estimates for each ε and the combined verdict.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConditionBReport {
    pub entries: Vec<CriterionEntry>,
    pub verdict: Verdict,
}

/// Holds if some ε has its window maximum below `1 - gap`. Fails if every ε
/// has both its window maximum and its later-half maximum above `1 - gap`.
pub fn condition_b_report(
    table: &ConvergentTable,
    eps_grid: &[f64],
    config: WindowConfig,
) -> Result<ConditionBReport> {
    if eps_grid.is_empty() {
        return Err(Error::domain("ε grid is empty"));
    }
    if eps_grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::domain("ε grid must be strictly decreasing"));
    }
    let floor = admissible_floor(table)?;
    let depth = table.depth();
    let window = config.bounds(depth, floor);
    let series = condition_b_series(table, eps_grid, floor, depth)?;
    let threshold = 1.0 - config.gap;
    let entries: Vec<CriterionEntry> = eps_grid
        .iter()
        .zip(series)
        .map(|(&eps, s)| {
            let mut full = vec![None; floor];
            full.extend(s.into_iter().map(Some));
            let mut e = CriterionEntry::summarize("condition-b", Some(eps), Membership::InOmega, full, window);
            e.verdict = if e.estimate < threshold {
                Verdict::Holds
            } else if e.estimate > threshold && e.late_max > threshold {
                Verdict::Fails
            } else {
                Verdict::Inconclusive
            };
            e
        })
        .collect();
    let verdict = if entries.iter().any(|e| e.verdict == Verdict::Holds) {
        Verdict::Holds
    } else if entries.iter().all(|e| e.verdict == Verdict::Fails) {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(ConditionBReport { entries, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::ThetaSpec;

    #[test]
    fn golden_at_100() {
        let t = ThetaSpec::golden().table(200).unwrap();
        // exact Fibonacci q_k, sorted log-ratios, 40-digit arithmetic
        let v = condition_b_statistic(&t, 1.0, 100).unwrap();
        assert!((v - 0.125_970_985_523_004_48).abs() < 1e-12, "{v}");
    }

    #[test]
    fn tiny_eps_gives_zero() {
        let t = ThetaSpec::golden().table(50).unwrap();
        assert_eq!(condition_b_statistic(&t, 1e-6, 40).unwrap(), 0.0);
    }

    #[test]
    fn below_admissible() {
        let t = ThetaSpec::golden().table(50).unwrap();
        assert!(matches!(
            condition_b_statistic(&t, 1.0, 2),
            Err(Error::BelowAdmissibleIndex { k: 2 })
        ));
    }

    #[test]
    fn series_matches_direct() {
        let t = ThetaSpec::explicit(&[0, 3, 1, 40, 2, 1, 1, 900, 5, 1, 2, 7, 1, 1, 3000, 2, 2, 1, 9, 1]).table(19).unwrap();
        let grid = [2.0, 1.0, 0.25, 0.01];
        let s = condition_b_series(&t, &grid, 1, 19).unwrap();
        for (j, &eps) in grid.iter().enumerate() {
            for k in 1..=19 {
                let d = condition_b_statistic(&t, eps, k).unwrap();
                assert!((s[j][k - 1] - d).abs() < 1e-12, "eps {eps} k {k}");
            }
        }
    }

    #[test]
    fn golden_report_holds() {
        let t = ThetaSpec::golden().table(200).unwrap();
        let r = condition_b_report(&t, &[1.0, 0.5, 0.25], WindowConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let est: Vec<f64> = r.entries.iter().map(|e| e.estimate).collect();
        // direct sweep over [100, 200]
        for (e, want) in est.iter().zip([0.12708, 0.06556, 0.03535]) {
            assert!((e - want).abs() < 5e-5, "{e} vs {want}");
        }
    }

    #[test]
    fn shallow_table() {
        let t = ThetaSpec::golden().table(5).unwrap();
        assert!(matches!(
            condition_b_report(&t, &[1.0], WindowConfig::default()),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn grid_must_decrease() {
        let t = ThetaSpec::golden().table(50).unwrap();
        assert!(condition_b_report(&t, &[0.5, 1.0], WindowConfig::default()).is_err());
        assert!(condition_b_report(&t, &[], WindowConfig::default()).is_err());
    }
}
