//! Constructions used in the two directions of the convergent-ratio
//! characterization: the step φ built from a subsequence of convergents,
//! and the dyadic level sets `Q_m` with the S/T split of indices.

use std::cmp::Ordering;

use malachite_nz::natural::Natural;
use serde::Serialize;

use super::psi::{PhiSpec, StepFunction};
use crate::bignum::{cmp_ratio_f64, log_big, log_ratio, ldexp};
use crate::convergents::ConvergentTable;
use crate::error::{Error, Result};

/// Relative uncertainty assumed for a float value of φ when it is compared
/// with an exact ratio.
pub const TIE_RTOL: f64 = 1e-12;

/// φ(q) = ln q_{k_n} for `q_{k_{n-1}} <= q < q_{k_n}`.
///
/// Defined on `[1, q_{k_N})` for the last index `k_N` of `k_seq`.
pub fn phi_from_proof(table: &ConvergentTable, k_seq: &[usize]) -> Result<PhiSpec> {
    let bad = |m: String| Err(Error::InvalidIndexSequence(m));
    if k_seq.len() < 2 {
        return bad("need k_0 = 0 and at least one more index".into());
    }
    if k_seq[0] != 0 {
        return bad(format!("k_0 must be 0, got {}", k_seq[0]));
    }
    if let Some(w) = k_seq.windows(2).find(|w| w[0] >= w[1]) {
        return bad(format!("not increasing at {} -> {}", w[0], w[1]));
    }
    let last = *k_seq.last().expect("nonempty");
    if last > table.depth() {
        return bad(format!("index {last} beyond table depth {}", table.depth()));
    }
    if *table.q(k_seq[1]) < 3u32 {
        return bad(format!("q_{} = {} is below 3, so φ would drop below 1", k_seq[1], table.q(k_seq[1])));
    }
    let breakpoints = k_seq.iter().map(|&k| table.q(k).clone()).collect();
    let values = k_seq[1..].iter().map(|&k| table.log_q(k)).collect();
    Ok(PhiSpec::Step(StepFunction::new(breakpoints, values)?))
}

/// Which side of `φ(q_k) <= q_{k+1}/q_k` an index falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    S,
    T,
    /// Within the float uncertainty of φ; counted in S.
    Tie,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicRecord {
    pub m: u32,
    /// Largest `Q <= cap` with φ(Q) <= 2^m, as a decimal string; `None`
    /// when already φ(1) > 2^m.
    pub q_m: Option<String>,
    /// `Q_m` hit the search cap (the table's last denominator or the end of
    /// φ's domain), so the true `Q_m` may be larger.
    pub capped: bool,
    pub ln_q_m: Option<f64>,
    /// `#{k in S : q_k <= Q_m}`, ties included.
    pub s_count: u64,
    pub t_count: u64,
    /// `Σ_{k in T, q_k <= Q_m} ln(q_{k+1}/q_k)`.
    pub t_log_sum: f64,
    /// `m #{k in S : q_k <= Q_m} + Σ_T ln(q_{k+1}/q_k)`.
    pub numerator: f64,
    pub kappa: f64,
    /// `None` when `Q_m <= 1`.
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicDiagnostics {
    /// Side of each `k` in `0..K`.
    pub sides: Vec<Side>,
    pub ties: Vec<usize>,
    pub records: Vec<DyadicRecord>,
}

impl DyadicDiagnostics {
    pub fn s_indices(&self) -> Vec<usize> {
        self.sides
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != Side::T)
            .map(|(k, _)| k)
            .collect()
    }
}

fn side(table: &ConvergentTable, phi: &PhiSpec, k: usize) -> Result<Side> {
    let v = phi.eval(table.q(k))?;
    let (num, den) = (table.q(k + 1), table.q(k));
    let above = cmp_ratio_f64(num, den, v * (1.0 + TIE_RTOL)) != Ordering::Less;
    let below = cmp_ratio_f64(num, den, v * (1.0 - TIE_RTOL)) == Ordering::Less;
    Ok(if above {
        Side::S
    } else if below {
        Side::T
    } else {
        Side::Tie
    })
}

/// Largest `Q` in `[1, cap]` with φ(Q) <= bound, by bisection; φ must be
/// nondecreasing.
fn level_set_end(phi: &PhiSpec, bound: f64, cap: &Natural) -> Result<Option<(Natural, bool)>> {
    let one = Natural::from(1u32);
    if phi.eval(&one)? > bound {
        return Ok(None);
    }
    if phi.eval(cap)? <= bound {
        return Ok(Some((cap.clone(), true)));
    }
    let (mut lo, mut hi) = (one, cap.clone());
    while &hi - &lo > 1u32 {
        let mid: Natural = (&lo + &hi) >> 1u64;
        if phi.eval(&mid)? <= bound {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((lo, false)))
}

/// `Q_m`, κ_m and λ_m for `m = 0..=m_max` over the indices `k < K` of the
/// table.
pub fn dyadic_diagnostics(table: &ConvergentTable, phi: &PhiSpec, m_max: u32) -> Result<DyadicDiagnostics> {
    let depth = table.depth();
    if depth < 1 {
        return Err(Error::InsufficientDepth { admissible: 0, required: 1 });
    }
    let mut cap = table.q(depth).clone();
    if let Some(end) = phi.domain_end() {
        let last = end - Natural::from(1u32);
        if last < cap {
            cap = last;
        }
    }
    if cap < 1u32 {
        return Err(Error::PhiEvaluation("empty φ domain".into()));
    }
    if phi.eval(&Natural::from(1u32))? > ldexp(1.0, m_max as i64) {
        return Err(Error::PhiEvaluation(format!("φ(1) exceeds 2^{m_max}")));
    }
    let sides = (0..depth).map(|k| side(table, phi, k)).collect::<Result<Vec<_>>>()?;
    let ratios = table.log_ratios();
    let ties = sides
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == Side::Tie)
        .map(|(k, _)| k)
        .collect();

    let mut records = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max {
        let level = level_set_end(phi, ldexp(1.0, m as i64), &cap)?;
        let Some((q_m, capped)) = level else {
            records.push(DyadicRecord {
                m,
                q_m: None,
                capped: false,
                ln_q_m: None,
                s_count: 0,
                t_count: 0,
                t_log_sum: 0.0,
                numerator: 0.0,
                kappa: 0.0,
                lambda: None,
            });
            continue;
        };
        let (mut s_count, mut t_count, mut t_log_sum) = (0u64, 0u64, 0.0);
        for k in (0..depth).take_while(|&k| *table.q(k) <= q_m) {
            match sides[k] {
                Side::T => {
                    t_count += 1;
                    t_log_sum += ratios[k];
                }
                _ => s_count += 1,
            }
        }
        let numerator = m as f64 * s_count as f64 + t_log_sum;
        let ln_q_m = log_big(&q_m)?;
        records.push(DyadicRecord {
            m,
            q_m: Some(q_m.to_string()),
            capped,
            ln_q_m: Some(ln_q_m),
            s_count,
            t_count,
            t_log_sum,
            numerator,
            kappa: m as f64 * ldexp(1.0, -(m as i64)) * s_count as f64,
            lambda: (ln_q_m > 0.0).then(|| numerator / ln_q_m),
        });
    }
    Ok(DyadicDiagnostics { sides, ties, records })
}

/// `ln(q_{k+1}/q_k)` straight from the integers, for cross-checks.
pub fn exact_log_ratio(table: &ConvergentTable, k: usize) -> Result<f64> {
    log_ratio(table.q(k + 1), table.q(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::khinchin::q_psi_nonincreasing;
    use crate::theta::ThetaSpec;

    #[test]
    fn golden_step_phi() {
        let t = ThetaSpec::golden().table(12).unwrap();
        let phi = phi_from_proof(&t, &[0, 5, 10]).unwrap();
        let n = |q: u64| Natural::from(q);
        assert_eq!(phi.eval(&n(1)).unwrap(), 8f64.ln());
        assert_eq!(phi.eval(&n(7)).unwrap(), 8f64.ln());
        assert!((phi.eval(&n(8)).unwrap() - 89f64.ln()).abs() < 1e-14);
        assert!(phi.eval(&n(89)).is_err());
        assert!(q_psi_nonincreasing(&phi.dual(), 88).unwrap());
    }

    #[test]
    fn bad_index_sequences() {
        let t = ThetaSpec::golden().table(12).unwrap();
        for k in [&[0usize, 5, 5][..], &[1, 5], &[0, 2], &[0, 13], &[0]] {
            assert!(matches!(phi_from_proof(&t, k), Err(Error::InvalidIndexSequence(_))));
        }
    }

    #[test]
    fn golden_log_phi() {
        let t = ThetaSpec::golden().table(60).unwrap();
        let d = dyadic_diagnostics(&t, &PhiSpec::log(), 4).unwrap();
        assert_eq!(d.records[0].q_m.as_deref(), Some("2"));
        // e^2 = 7.39, e^4 = 54.6, e^8 = 2980.96, e^16 = 8886110.5
        let q: Vec<_> = d.records.iter().map(|r| r.q_m.clone().unwrap()).collect();
        assert_eq!(q, ["2", "7", "54", "2980", "8886110"]);
        // ln 5 > 8/5 already, and ln q_k only grows while the ratio tends to 1.618
        assert_eq!(d.s_indices(), vec![0, 1, 2, 3]);
        assert!(d.ties.is_empty());
        assert_eq!(d.records[4].s_count, 4);
    }

    #[test]
    fn constant_phi_caps_at_range() {
        let t = ThetaSpec::golden().table(20).unwrap();
        let d = dyadic_diagnostics(&t, &PhiSpec::constant(1.0), 3).unwrap();
        for r in &d.records {
            assert!(r.capped);
            assert_eq!(r.q_m.as_deref(), Some("10946"));
        }
        // ratio q_1/q_0 = 1 = φ is a tie, assigned to S
        assert_eq!(d.ties, vec![0]);
        assert_eq!(d.s_indices().len(), 20);
    }
}
