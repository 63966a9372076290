//! The step function ψ(q) = 2^{-n_k} on `[2^{n_{k-1}}, 2^{n_k})`.
//!
//! With gaps `n_k - n_{k-1} >= k` each block sums to nearly 1, so Σψ
//! diverges, while qψ(q) climbs back up inside every block. No ψ' <= ψ
//! can then keep qψ'(q) nonincreasing and still have a divergent sum.

use malachite_nz::natural::Natural;
use serde::Serialize;

use super::psi::{PsiSpec, StepFunction};
use crate::bignum::Dyadic;
use crate::error::{Error, Result};

/// Largest exponent accepted, so that every value 2^{-n_k} is a normal
/// double.
pub const MAX_EXPONENT: u64 = 1000;

fn check_gaps(n: &[u64]) -> Result<()> {
    if n.len() < 2 {
        return Err(Error::InvalidGapSequence("need at least n_0 and n_1".into()));
    }
    if n[0] != 0 {
        return Err(Error::InvalidGapSequence(format!("n_0 must be 0, got {}", n[0])));
    }
    for k in 1..n.len() {
        if n[k] <= n[k - 1] || n[k] - n[k - 1] < k as u64 {
            return Err(Error::InvalidGapSequence(format!(
                "gap at k = {k} is {} < {k}",
                n[k] as i128 - n[k - 1] as i128
            )));
        }
    }
    if let Some(&last) = n.last().filter(|&&l| l > MAX_EXPONENT) {
        return Err(Error::InvalidGapSequence(format!(
            "n = {last} exceeds the supported maximum {MAX_EXPONENT}"
        )));
    }
    Ok(())
}

/// ψ as a step function with breakpoints `2^{n_k}`.
pub fn remark_counterexample(n: &[u64]) -> Result<PsiSpec> {
    check_gaps(n)?;
    let one = Natural::from(1u32);
    let breakpoints = n.iter().map(|&e| &one << e).collect();
    let values = n[1..].iter().map(|&e| 2f64.powi(-(e as i32))).collect();
    Ok(PsiSpec::Step(StepFunction::new(breakpoints, values)?))
}

/// One block of the counterexample with its exact ψ-sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemarkBlock {
    pub k: usize,
    /// Block `[start, end)` as decimal strings.
    pub start: String,
    pub end: String,
    #[serde(skip)]
    pub sum: Dyadic,
    /// `1 - 2^{n_{k-1} - n_k}`.
    #[serde(skip)]
    pub closed_form: Dyadic,
    pub sum_f64: f64,
}

impl RemarkBlock {
    pub fn matches_closed_form(&self) -> bool {
        self.sum == self.closed_form
    }
}

/// Exact block sums `Σ_{q in block k} ψ(q)` read off the step function,
/// next to the closed form.
pub fn remark_block_sums(n: &[u64]) -> Result<Vec<RemarkBlock>> {
    let psi = remark_counterexample(n)?;
    let PsiSpec::Step(step) = &psi else {
        unreachable!("counterexample is a step function")
    };
    Ok(step
        .blocks()
        .enumerate()
        .map(|(j, (start, end, v))| {
            let len: Natural = end - start;
            let value = Dyadic::from_f64(v).expect("positive finite");
            let sum = value.scale(&len);
            RemarkBlock {
                k: j + 1,
                start: start.to_string(),
                end: end.to_string(),
                sum_f64: sum.to_f64(),
                sum,
                closed_form: Dyadic::one_minus_inverse_power_of_two(n[j + 1] - n[j]),
            }
        })
        .collect())
}
