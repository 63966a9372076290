//! Approximation functions ψ and their duals φ(q) = 1/(qψ(q)).

use std::f64::consts::E;

use malachite_base::num::logic::traits::SignificantBits;
use malachite_nz::natural::Natural;
use serde::Serialize;

use crate::bignum::log_big;
use crate::error::{Error, Result};

/// Closed-form families for ψ.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PsiFamily {
    /// ψ(q) = c.
    Constant { c: f64 },
    /// ψ(q) = c / q^s.
    Power { c: f64, exponent: f64 },
    /// ψ(q) = c / (q ln(q + e)).
    HarmonicLog { c: f64 },
}

/// Closed-form families for φ.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PhiFamily {
    /// φ(q) = c.
    Constant { c: f64 },
    /// φ(q) = (ln q)^p.
    LogPower { exponent: f64 },
}

/// A piecewise-constant function on `[b_0, b_J)`: `values[j]` on
/// `[b_j, b_{j+1})`, closed on the left and open on the right.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<Natural>,
    values: Vec<f64>,
}

impl StepFunction {
    /// `breakpoints` must start at 1 and increase strictly; there is one
    /// value per block, so `values.len() + 1 == breakpoints.len()`.
    pub fn new(breakpoints: Vec<Natural>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.first().map_or(true, |b| *b != 1u32) {
            return Err(Error::InvalidStep("first breakpoint must be 1".into()));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidStep(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                values.len()
            )));
        }
        if let Some(j) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStep(format!(
                "breakpoints not strictly increasing at position {}",
                j + 1
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidStep(format!("non-finite value {v}")));
        }
        Ok(StepFunction { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[Natural] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// First integer outside the domain.
    pub fn end(&self) -> &Natural {
        self.breakpoints.last().expect("nonempty")
    }

    /// Block index containing `q`, if any.
    pub fn block_of(&self, q: &Natural) -> Option<usize> {
        if *q < self.breakpoints[0] || q >= self.end() {
            return None;
        }
        // last breakpoint <= q
        Some(self.breakpoints.partition_point(|b| b <= q) - 1)
    }

    pub fn eval(&self, q: &Natural) -> Option<f64> {
        self.block_of(q).map(|j| self.values[j])
    }

    /// Blocks as `(start, end, value)` with `end` exclusive.
    pub fn blocks(&self) -> impl Iterator<Item = (&Natural, &Natural, f64)> {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (&w[0], &w[1], v))
    }

    fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

/// ψ, given as a closed form, a step function, or the dual of a φ.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiSpec {
    Closed(PsiFamily),
    Step(StepFunction),
    Dual(Box<PhiSpec>),
}

/// φ, given as a closed form, a step function, or the dual of a ψ.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSpec {
    Closed(PhiFamily),
    Step(StepFunction),
    Dual(Box<PsiSpec>),
}

/// `q` as a float, exact up to 2^53.
fn q_as_f64(q: &Natural) -> Option<f64> {
    (q.significant_bits() <= 1000).then(|| {
        let shift = q.significant_bits().saturating_sub(64);
        let top = u64::try_from(&(q >> shift)).expect("64 bits");
        top as f64 * 2f64.powi(shift as i32)
    })
}

impl PsiSpec {
    pub fn constant(c: f64) -> Self {
        PsiSpec::Closed(PsiFamily::Constant { c })
    }

    pub fn power(c: f64, exponent: f64) -> Self {
        PsiSpec::Closed(PsiFamily::Power { c, exponent })
    }

    pub fn harmonic_log(c: f64) -> Self {
        PsiSpec::Closed(PsiFamily::HarmonicLog { c })
    }

    /// ψ(q) for `q >= 1`.
    pub fn eval(&self, q: &Natural) -> Result<f64> {
        if *q == 0u32 {
            return Err(Error::domain("ψ is defined for q >= 1"));
        }
        match self {
            PsiSpec::Closed(f) => Ok(match *f {
                PsiFamily::Constant { c } => c,
                PsiFamily::Power { c, exponent } => match q_as_f64(q) {
                    Some(x) if exponent == 1.0 => c / x,
                    Some(x) if exponent == 2.0 => c / (x * x),
                    Some(x) => c / x.powf(exponent),
                    None => c * (-exponent * log_big(q)?).exp(),
                },
                PsiFamily::HarmonicLog { c } => match q_as_f64(q) {
                    Some(x) => c / (x * (x + E).ln()),
                    None => {
                        let l = log_big(q)?;
                        c * (-l - l.ln()).exp()
                    }
                },
            }),
            PsiSpec::Step(s) => s
                .eval(q)
                .ok_or_else(|| Error::domain(format!("q = {q} outside the step function domain"))),
            PsiSpec::Dual(phi) => {
                let p = phi.eval(q)?;
                reciprocal_q(q, p)
            }
        }
    }

    pub fn eval_u64(&self, q: u64) -> Result<f64> {
        self.eval(&Natural::from(q))
    }

    /// `q ψ(q)`, evaluated in closed form where one exists so that exactly
    /// monotone families stay monotone in floating point.
    pub fn q_psi(&self, q: u64) -> Result<f64> {
        if q == 0 {
            return Err(Error::domain("ψ is defined for q >= 1"));
        }
        let x = q as f64;
        match self {
            PsiSpec::Closed(f) => Ok(match *f {
                PsiFamily::Constant { c } => c * x,
                PsiFamily::Power { c, exponent } => {
                    if exponent == 1.0 {
                        c
                    } else {
                        c * x.powf(1.0 - exponent)
                    }
                }
                PsiFamily::HarmonicLog { c } => c / (x + E).ln(),
            }),
            PsiSpec::Step(_) => Ok(x * self.eval_u64(q)?),
            PsiSpec::Dual(phi) => {
                let p = phi.eval(&Natural::from(q))?;
                if !(p > 0.0) {
                    return Err(Error::domain(format!("φ({q}) = {p} is not positive")));
                }
                Ok(1.0 / p)
            }
        }
    }

    /// The dual φ(q) = 1/(qψ(q)); exact involution with [`PhiSpec::dual`].
    pub fn dual(&self) -> PhiSpec {
        match self {
            PsiSpec::Dual(phi) => (**phi).clone(),
            other => PhiSpec::Dual(Box::new(other.clone())),
        }
    }

    /// First `q` outside the domain, for step-backed specs.
    pub fn domain_end(&self) -> Option<Natural> {
        match self {
            PsiSpec::Closed(_) => None,
            PsiSpec::Step(s) => Some(s.end().clone()),
            PsiSpec::Dual(phi) => phi.domain_end(),
        }
    }
}

impl PhiSpec {
    pub fn constant(c: f64) -> Self {
        PhiSpec::Closed(PhiFamily::Constant { c })
    }

    /// φ(q) = ln q.
    pub fn log() -> Self {
        PhiSpec::Closed(PhiFamily::LogPower { exponent: 1.0 })
    }

    /// φ(q) = (ln q)^p.
    pub fn log_power(exponent: f64) -> Self {
        PhiSpec::Closed(PhiFamily::LogPower { exponent })
    }

    /// φ(q) for `q >= 1`.
    pub fn eval(&self, q: &Natural) -> Result<f64> {
        if *q == 0u32 {
            return Err(Error::PhiEvaluation("φ is defined for q >= 1".into()));
        }
        match self {
            PhiSpec::Closed(f) => Ok(match *f {
                PhiFamily::Constant { c } => c,
                PhiFamily::LogPower { exponent } => {
                    let l = log_big(q)?;
                    if exponent == 1.0 {
                        l
                    } else if exponent == 2.0 {
                        l * l
                    } else {
                        l.powf(exponent)
                    }
                }
            }),
            PhiSpec::Step(s) => s.eval(q).ok_or_else(|| {
                Error::PhiEvaluation(format!("q = {q} outside the step function domain"))
            }),
            PhiSpec::Dual(psi) => {
                let p = psi.eval(q).map_err(|e| Error::PhiEvaluation(e.to_string()))?;
                reciprocal_q(q, p).map_err(|e| Error::PhiEvaluation(e.to_string()))
            }
        }
    }

    pub fn eval_u64(&self, q: u64) -> Result<f64> {
        self.eval(&Natural::from(q))
    }

    /// The dual ψ(q) = 1/(qφ(q)).
    pub fn dual(&self) -> PsiSpec {
        match self {
            PhiSpec::Dual(psi) => (**psi).clone(),
            other => PsiSpec::Dual(Box::new(other.clone())),
        }
    }

    pub fn domain_end(&self) -> Option<Natural> {
        match self {
            PhiSpec::Closed(_) => None,
            PhiSpec::Step(s) => Some(s.end().clone()),
            PhiSpec::Dual(psi) => psi.domain_end(),
        }
    }

    /// Whether φ is known to be nondecreasing on `[1, limit]`.
    ///
    /// Closed forms and steps are decided structurally; a dual of a ψ is
    /// decided by checking that qψ(q) is nonincreasing at every integer.
    pub fn is_nondecreasing(&self, limit: u64) -> Result<bool> {
        Ok(match self {
            PhiSpec::Closed(PhiFamily::Constant { .. }) => true,
            PhiSpec::Closed(PhiFamily::LogPower { exponent }) => *exponent >= 0.0,
            PhiSpec::Step(s) => s.is_nondecreasing(),
            PhiSpec::Dual(psi) => match psi.as_ref() {
                PsiSpec::Closed(PsiFamily::Power { exponent, .. }) => *exponent >= 1.0,
                PsiSpec::Closed(PsiFamily::HarmonicLog { .. }) => true,
                PsiSpec::Closed(PsiFamily::Constant { .. }) => false,
                _ => super::khinchin::q_psi_nonincreasing(psi, limit)?,
            },
        })
    }
}

/// `1 / (q x)` with a domain check on `x`.
fn reciprocal_q(q: &Natural, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("value {x} at q = {q} is not positive")));
    }
    Ok(match q_as_f64(q) {
        Some(qf) => 1.0 / (qf * x),
        None => (-log_big(q)? - x.ln()).exp(),
    })
}

/// φ(q) = 1/(qψ(q)).
pub fn phi_of(psi: &PsiSpec, q: u64) -> Result<f64> {
    reciprocal_q(&Natural::from(q), psi.eval_u64(q)?)
}

/// ψ(q) = 1/(qφ(q)).
pub fn psi_of(phi: &PhiSpec, q: u64) -> Result<f64> {
    let v = phi.eval_u64(q)?;
    reciprocal_q(&Natural::from(q), v)
}
