//! Σ_k (ln φ(q_k) ∧ ln(q_{k+1}/q_k)) / φ(q_k), which diverges exactly when
//! W(θ, ψ) has full measure for the Khinchin ψ with φ(q) = 1/(qψ(q)).

use serde::Serialize;

use super::fit::least_squares_slope;
use super::report::WindowConfig;
use crate::convergents::ConvergentTable;
use crate::error::{Error, Result};
use crate::sequences::psi::PhiSpec;

/// Slope (against ln k) above which partial sums count as divergence
/// evidence.
pub const KIM_SLOPE_THRESHOLD: f64 = 0.05;
/// Fraction of the series excluded from the Cauchy tail.
pub const CAUCHY_TAIL_FROM: f64 = 0.9;
/// Largest argument used when checking φ for monotonicity between convergents.
const MONOTONE_CHECK_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KimSeriesTrace {
    /// First index of the series: the first k with q_k >= 3.
    pub start: usize,
    /// Last index `K`.
    pub end: usize,
    /// `terms[i]` is t_{start + i}.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub window: (usize, usize),
    /// Least-squares slope of partial sums against ln k over the window.
    /// Heuristic only.
    pub slope: Option<f64>,
    pub divergence_evidence: bool,
    /// `S_K - S_{⌈0.9 K⌉}`.
    pub cauchy_tail: f64,
}

impl KimSeriesTrace {
    pub fn term(&self, k: usize) -> Option<f64> {
        k.checked_sub(self.start).and_then(|i| self.terms.get(i).copied())
    }

    pub fn partial_sum(&self, k: usize) -> Option<f64> {
        k.checked_sub(self.start).and_then(|i| self.partial_sums.get(i).copied())
    }

    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Terms t_k for `k` from the first index with q_k >= 3 through `k_max`.
///
/// φ is read only at the denominators q_k. It must be nondecreasing and at
/// least 1 there.
pub fn kim_series(
    table: &ConvergentTable,
    phi: &PhiSpec,
    k_max: usize,
    config: WindowConfig,
) -> Result<KimSeriesTrace> {
    if k_max + 1 > table.depth() {
        return Err(Error::InsufficientDepth {
            admissible: table.depth(),
            required: k_max + 1,
        });
    }
    let start = table
        .admissible_from()
        .filter(|&s| s <= k_max)
        .ok_or(Error::InsufficientDepth { admissible: 0, required: 1 })?;
    let limit = u64::try_from(table.q(k_max)).unwrap_or(u64::MAX).min(MONOTONE_CHECK_LIMIT);
    if !phi.is_nondecreasing(limit)? {
        return Err(Error::domain("φ is not nondecreasing"));
    }
    let ratios = table.log_ratios();
    let mut terms = Vec::with_capacity(k_max + 1 - start);
    let mut partial_sums = Vec::with_capacity(terms.capacity());
    let mut acc = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for k in start..=k_max {
        let v = phi.eval(table.q(k))?;
        if !(v >= 1.0) {
            return Err(Error::PhiBelowOne { k, value: v });
        }
        if v < prev {
            return Err(Error::domain(format!("φ decreases at q_{k}")));
        }
        prev = v;
        let t = v.ln().min(ratios[k]) / v;
        acc += t;
        terms.push(t);
        partial_sums.push(acc);
    }
    let window = config.bounds(k_max, start);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (window.0..=window.1)
        .map(|k| ((k.max(1) as f64).ln(), partial_sums[k - start]))
        .unzip();
    let slope = least_squares_slope(&xs, &ys);
    let tail_from = ((CAUCHY_TAIL_FROM * k_max as f64).ceil() as usize).max(start);
    let cauchy_tail = acc - partial_sums[tail_from - start];
    Ok(KimSeriesTrace {
        start,
        end: k_max,
        terms,
        partial_sums,
        window,
        divergence_evidence: slope.is_some_and(|s| s >= KIM_SLOPE_THRESHOLD),
        slope,
        cauchy_tail,
    })
}
