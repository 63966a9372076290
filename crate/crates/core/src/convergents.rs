//! Convergent tables and certified multiples of θ modulo one.

use malachite_base::num::arithmetic::traits::Gcd;
use malachite_nz::natural::Natural;
use serde::Serialize;
use std::sync::OnceLock;

use crate::bignum::{log_big, ratio_to_f64};
use crate::error::{Error, Result};

/// Rounding slack added to every certified center error.
pub const ROUNDING_EPS: f64 = 4.0 * f64::EPSILON;

/// Incremental `q_k` recurrence with `q_{-1} = 0`.
#[derive(Debug, Clone)]
pub(crate) struct Recurrence {
    a: Vec<Natural>,
    q: Vec<Natural>,
    q_prev: (Natural, Natural),
}

impl Recurrence {
    pub(crate) fn new() -> Self {
        // (k-2, k-1) values before index 0
        Recurrence {
            a: Vec::new(),
            q: Vec::new(),
            q_prev: (Natural::from(1u32), Natural::from(0u32)),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.a.len()
    }

    /// `q` of the most recent index, or `q_{-1} = 0` before any push.
    pub(crate) fn q_last(&self) -> &Natural {
        &self.q_prev.1
    }

    pub(crate) fn q_at(&self, k: usize) -> &Natural {
        &self.q[k]
    }

    pub(crate) fn push(&mut self, a: Natural) {
        let q_next = &a * &self.q_prev.1 + &self.q_prev.0;
        let old = std::mem::replace(&mut self.q_prev.1, q_next.clone());
        self.q_prev.0 = old;
        self.q.push(q_next);
        self.a.push(a);
    }

    pub(crate) fn into_quotients(self) -> Vec<Natural> {
        self.a
    }

    pub(crate) fn into_table(self) -> Result<ConvergentTable> {
        if self.a.is_empty() {
            return Err(Error::NoQuotients);
        }
        let logq = self.q.iter().map(log_big).collect::<Result<Vec<_>>>()?;
        Ok(ConvergentTable {
            a: self.a,
            p: OnceLock::new(),
            q: self.q,
            logq,
        })
    }
}

/// Exact convergents `p_k / q_k` for `k = 0..=K` with cached `ln q_k`.
///
/// Immutable once built. Numerators are computed on first use; the
/// criteria only ever need denominators.
#[derive(Debug, Clone)]
pub struct ConvergentTable {
    a: Vec<Natural>,
    p: OnceLock<Vec<Natural>>,
    q: Vec<Natural>,
    logq: Vec<f64>,
}

impl PartialEq for ConvergentTable {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl ConvergentTable {
    /// Largest index `K`.
    pub fn depth(&self) -> usize {
        self.q.len() - 1
    }

    pub fn quotients(&self) -> &[Natural] {
        &self.a
    }

    pub fn numerators(&self) -> &[Natural] {
        self.p.get_or_init(|| {
            let (mut p0, mut p1) = (Natural::from(0u32), Natural::from(1u32));
            self.a
                .iter()
                .map(|a| {
                    let next = a * &p1 + &p0;
                    p0 = std::mem::replace(&mut p1, next.clone());
                    next
                })
                .collect()
        })
    }

    pub fn denominators(&self) -> &[Natural] {
        &self.q
    }

    pub fn q(&self, k: usize) -> &Natural {
        &self.q[k]
    }

    pub fn p(&self, k: usize) -> &Natural {
        &self.numerators()[k]
    }

    /// `ln q_k`.
    pub fn log_q(&self, k: usize) -> f64 {
        self.logq[k]
    }

    pub fn log_qs(&self) -> &[f64] {
        &self.logq
    }

    /// `ln(q_{k+1} / q_k)` for `k = 0..K-1`.
    pub fn log_ratios(&self) -> Vec<f64> {
        self.logq.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// First index with `q_k >= 3`, where `ln ln q_k > 0`.
    pub fn admissible_from(&self) -> Option<usize> {
        self.q.iter().position(|q| *q >= 3u32)
    }

    /// Largest deviation of `Σ_{i<k} ln(q_{i+1}/q_i)` from `ln q_k`.
    ///
    /// The sum telescopes because `q_0 = 1`; anything beyond rounding noise
    /// means the log-ratio array is inconsistent.
    pub fn telescoping_defect(&self) -> f64 {
        let mut acc = 0.0;
        let mut worst: f64 = 0.0;
        for (k, r) in self.log_ratios().iter().enumerate() {
            acc += r;
            let target = self.logq[k + 1];
            worst = worst.max((acc - target).abs() / target.max(1.0));
        }
        worst
    }

    /// Check every structural invariant exactly. Intended for tests and
    /// diagnostics; cost is quadratic in the bit size of the deepest entry.
    pub fn verify(&self) -> std::result::Result<(), String> {
        if self.q[0] != 1u32 {
            return Err("q_0 != 1".into());
        }
        if self.numerators()[0] != self.a[0] {
            return Err("p_0 != a_0".into());
        }
        for k in 0..self.q.len() {
            let (qm1, qm2) = match k {
                0 => (Natural::from(0u32), Natural::from(1u32)),
                1 => (self.q[0].clone(), Natural::from(0u32)),
                _ => (self.q[k - 1].clone(), self.q[k - 2].clone()),
            };
            if self.q[k] != &self.a[k] * qm1 + qm2 {
                return Err(format!("recurrence fails at k = {k}"));
            }
            if (&self.numerators()[k]).gcd(&self.q[k]) != 1u32 {
                return Err(format!("gcd(p_{k}, q_{k}) != 1"));
            }
            if k >= 2 && self.q[k] <= self.q[k - 1] {
                return Err(format!("q not strictly increasing at k = {k}"));
            }
            if k >= 1 {
                // p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}
                let lhs = &self.numerators()[k] * &self.q[k - 1];
                let rhs = &self.numerators()[k - 1] * &self.q[k];
                let ok = if k % 2 == 1 {
                    lhs == rhs + Natural::from(1u32)
                } else {
                    rhs == lhs + Natural::from(1u32)
                };
                if !ok {
                    return Err(format!("determinant identity fails at k = {k}"));
                }
            }
            let exact = log_big(&self.q[k]).map_err(|e| e.to_string())?;
            if (self.logq[k] - exact).abs() > 1e-12 * exact.max(1.0) {
                return Err(format!("cached log q_{k} off"));
            }
        }
        Ok(())
    }

    /// `q θ mod 1` for integer `q >= 0`, certified to within `delta` plus
    /// float rounding.
    ///
    /// Uses the convergent `p_{K-1}/q_{K-1}` whose error is at most
    /// `1 / (q_{K-1} q_K)`.
    pub fn frac_multiple(&self, q: &Natural, delta: f64) -> Result<CirclePoint> {
        if *q == 0u32 {
            return Ok(CirclePoint {
                value: 0.0,
                error_bound: 0.0,
            });
        }
        if self.depth() < 1 {
            return Err(Error::InsufficientPrecision {
                q: q.to_string(),
                detail: "table needs at least two convergents".into(),
            });
        }
        let j = self.depth() - 1;
        let bound = self.multiple_error(q, j)?;
        if !(bound <= delta) {
            return Err(Error::InsufficientPrecision {
                q: q.to_string(),
                detail: format!("convergent error {bound:e} exceeds tolerance {delta:e}"),
            });
        }
        let qj = &self.q[j];
        let r = (q * &self.numerators()[j]) % qj;
        let mut value = ratio_to_f64(&r, qj)?;
        if value >= 1.0 {
            value = 0.0;
        }
        Ok(CirclePoint {
            value,
            error_bound: bound + ROUNDING_EPS,
        })
    }

    /// `q / (q_j q_{j+1})`, the certified bound on `|qθ - q p_j / q_j|`.
    fn multiple_error(&self, q: &Natural, j: usize) -> Result<f64> {
        ratio_to_f64(q, &(&self.q[j] * &self.q[j + 1]))
    }

    /// Whether `frac_multiple(q, delta)` will succeed for every `q <= q_max`.
    pub fn supports(&self, q_max: &Natural, delta: f64) -> bool {
        self.depth() >= 1
            && self
                .multiple_error(q_max, self.depth() - 1)
                .map(|b| b <= delta)
                .unwrap_or(false)
    }
}

/// Convergent table for an explicit list of partial quotients.
pub fn build_convergents(a: &[Natural]) -> Result<ConvergentTable> {
    if a.is_empty() {
        return Err(Error::NoQuotients);
    }
    for (k, x) in a.iter().enumerate().skip(1) {
        if *x == 0u32 {
            return Err(Error::InvalidQuotient {
                index: k,
                detail: "a_k must be at least 1 for k >= 1".into(),
            });
        }
    }
    let mut rec = Recurrence::new();
    for x in a {
        rec.push(x.clone());
    }
    rec.into_table()
}

/// A point of the circle `[0, 1)` with a certified absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CirclePoint {
    pub value: f64,
    pub error_bound: f64,
}

impl CirclePoint {
    pub fn exact(value: f64) -> Self {
        let value = value.rem_euclid(1.0);
        CirclePoint {
            value: if value >= 1.0 { 0.0 } else { value },
            error_bound: 0.0,
        }
    }

    /// Distance to another circle point, `‖self - s‖`.
    pub fn distance_to(&self, s: f64) -> f64 {
        circle_distance(self.value, s)
    }
}

/// `‖x - y‖` on `ℝ/ℤ`.
pub fn circle_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}
