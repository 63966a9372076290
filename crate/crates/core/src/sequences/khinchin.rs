//! Khinchin-sequence checks and the greatest Khinchin minorant on a range.

use serde::Serialize;

use super::psi::PsiSpec;
use crate::criteria::fit::least_squares_slope;
use crate::error::{Error, Result};

/// Relative slack when comparing consecutive values of qψ(q) computed in
/// floating point.
const MONOTONE_RTOL: f64 = 4.0 * f64::EPSILON;

/// Slope threshold separating divergent-looking from convergent-looking
/// partial sums.
pub const DIVERGENCE_SLOPE_THRESHOLD: f64 = 0.05;

/// Horizontal axis used when fitting the growth of Σψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceScale {
    /// Fit against ln q.
    LogQ,
    /// Fit against ln ln q, sensitive to the slowest standard divergence.
    #[default]
    LogLogQ,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KhinchinReport {
    pub range: u64,
    /// qψ(q) nonincreasing across every consecutive pair in `[1, range]`.
    pub monotone_ok: bool,
    pub first_violation: Option<u64>,
    pub violation_count: u64,
    pub divergence_partial_sum: f64,
    pub divergence_slope: f64,
    pub divergence_scale: DivergenceScale,
    /// Heuristic only: a finite partial sum cannot decide divergence.
    pub divergence_evidence: bool,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_range(psi: &PsiSpec, limit: u64) -> Result<()> {
    if let Some(end) = psi.domain_end() {
        if end <= limit {
            return Err(Error::domain(format!(
                "range {limit} reaches past the step function domain (ends before {end})"
            )));
        }
    }
    Ok(())
}

/// Whether qψ(q) is nonincreasing at every consecutive pair in `[1, limit]`.
pub fn q_psi_nonincreasing(psi: &PsiSpec, limit: u64) -> Result<bool> {
    check_range(psi, limit)?;
    let mut prev = psi.q_psi(1)?;
    for q in 2..=limit {
        let cur = psi.q_psi(q)?;
        if cur > prev * (1.0 + MONOTONE_RTOL) {
            return Ok(false);
        }
        prev = cur;
    }
    Ok(true)
}

/// Check the Khinchin conditions for ψ on `[1, range]`.
///
/// Monotonicity is decided on every integer of the range. Divergence of
/// Σψ is reported as the least-squares slope of the partial sums against
/// the configured scale over `[√range, range]`, compared with
/// [`DIVERGENCE_SLOPE_THRESHOLD`].
pub fn khinchin_validate(psi: &PsiSpec, range: u64, scale: DivergenceScale) -> Result<KhinchinReport> {
    if range < 10 {
        return Err(Error::domain("Khinchin validation needs a range of at least 10"));
    }
    check_range(psi, range)?;
    let fit_from = (range as f64).sqrt().ceil() as u64;
    let checkpoints = log_spaced(fit_from.max(3), range, 48);
    let mut next_cp = 0;

    let mut sum = CompensatedSum::default();
    let mut prev_q_psi = f64::INFINITY;
    let mut first_violation = None;
    let mut violation_count = 0u64;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for q in 1..=range {
        let v = psi.eval_u64(q)?;
        if !(v > 0.0) {
            return Err(Error::domain(format!("ψ({q}) = {v} is not positive")));
        }
        sum.add(v);
        let qp = psi.q_psi(q)?;
        if qp > prev_q_psi * (1.0 + MONOTONE_RTOL) {
            violation_count += 1;
            first_violation.get_or_insert(q);
        }
        prev_q_psi = qp;
        if next_cp < checkpoints.len() && checkpoints[next_cp] == q {
            let x = (q as f64).ln();
            xs.push(match scale {
                DivergenceScale::LogQ => x,
                DivergenceScale::LogLogQ => x.ln(),
            });
            ys.push(sum.value());
            next_cp += 1;
        }
    }
    let slope = least_squares_slope(&xs, &ys).unwrap_or(0.0);
    Ok(KhinchinReport {
        range,
        monotone_ok: violation_count == 0,
        first_violation,
        violation_count,
        divergence_partial_sum: sum.value(),
        divergence_slope: slope,
        divergence_scale: scale,
        divergence_evidence: slope >= DIVERGENCE_SLOPE_THRESHOLD,
    })
}

/// Roughly `count` distinct integers spread geometrically over `[lo, hi]`,
/// always including `hi`.
fn log_spaced(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let lo = lo.min(hi).max(1);
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<u64> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            ((a + t * (b - a)).exp().round() as u64).clamp(lo, hi)
        })
        .collect();
    out.push(hi);
    out.sort_unstable();
    out.dedup();
    out
}

/// `g(q) = min_{1 <= q' <= q} q'ψ(q')`: the largest nonincreasing function
/// below qψ(q) on the range, so `g(q)/q` is the largest ψ' <= ψ with
/// qψ'(q) nonincreasing there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KhinchinMinorant {
    pub range: u64,
    /// `g[q - 1] = g(q)`.
    pub g: Vec<f64>,
    /// Σ_{q <= range} g(q)/q.
    pub sum_g_over_q: f64,
}

impl KhinchinMinorant {
    pub fn at(&self, q: u64) -> f64 {
        self.g[(q - 1) as usize]
    }

    /// Partial sums Σ_{q <= Q} g(q)/q for each requested `Q`.
    pub fn partial_sums(&self, checkpoints: &[u64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut sum = CompensatedSum::default();
        let mut q = 0u64;
        for &cp in checkpoints {
            while q < cp.min(self.range) {
                q += 1;
                sum.add(self.at(q) / q as f64);
            }
            out.push(sum.value());
        }
        out
    }

    /// Maximal runs of constant `g` as `(start, end_exclusive, value)`.
    pub fn runs(&self) -> Vec<(u64, u64, f64)> {
        let mut out: Vec<(u64, u64, f64)> = Vec::new();
        for (i, &v) in self.g.iter().enumerate() {
            let q = i as u64 + 1;
            match out.last_mut() {
                Some(last) if last.2 == v => last.1 = q + 1,
                _ => out.push((q, q + 1, v)),
            }
        }
        out
    }
}

/// Running minimum of qψ(q) over `[1, range]`.
///
/// Any h <= qψ that is nonincreasing satisfies h(q) <= h(q') <= q'ψ(q') for
/// every q' <= q, so the running minimum is the pointwise largest one.
pub fn greatest_khinchin_minorant(psi: &PsiSpec, range: u64) -> Result<KhinchinMinorant> {
    if range < 1 {
        return Err(Error::domain("minorant range must be at least 1"));
    }
    check_range(psi, range)?;
    let mut g = Vec::with_capacity(range as usize);
    let mut running = f64::INFINITY;
    for q in 1..=range {
        running = running.min(psi.q_psi(q)?);
        g.push(running);
    }
    let mut sum = CompensatedSum::default();
    for (i, v) in g.iter().enumerate() {
        sum.add(v / (i as f64 + 1.0));
    }
    Ok(KhinchinMinorant {
        range,
        g,
        sum_g_over_q: sum.value(),
    })
}
