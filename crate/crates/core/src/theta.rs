//! Rules that generate the partial quotients of θ.

use std::fmt;

use malachite_base::num::arithmetic::traits::Pow;
use malachite_base::num::logic::traits::SignificantBits;
use malachite_nz::natural::Natural;

use crate::bignum::{log_big, ratio_to_f64};
use crate::convergents::{ConvergentTable, Recurrence};
use crate::error::{Error, Result};

/// Default cap on the bit size of a single rule-generated quotient.
pub const DEFAULT_MAX_QUOTIENT_BITS: u64 = 1_000_000;

/// Depth limit when searching for a table that certifies a precision.
const MAX_PRECISION_DEPTH: usize = 100_000;

/// A named rule computing `a_{k+1}` from `(k, q_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthRule {
    /// `a_{k+1} = q_k^k`; produces a Liouville number.
    Liouville,
    /// `a_{k+1} = q_k^n` for a fixed exponent `n >= 1`.
    QPower(u32),
    /// `a_{k+1} = max(1, floor(ln q_k))`.
    LogQ,
    /// `a_{k+1} = k + 1`.
    Index,
}

impl GrowthRule {
    pub fn name(&self) -> &'static str {
        match self {
            GrowthRule::Liouville => "liouville",
            GrowthRule::QPower(_) => "q-power",
            GrowthRule::LogQ => "log-q",
            GrowthRule::Index => "index",
        }
    }

    /// Upper bound on the bit size of the next quotient.
    fn predicted_bits(&self, k: usize, q_k: &Natural) -> u64 {
        let qb = q_k.significant_bits().max(1);
        match self {
            GrowthRule::Liouville => qb.saturating_mul(k as u64),
            GrowthRule::QPower(n) => qb.saturating_mul(*n as u64),
            GrowthRule::LogQ => 64,
            GrowthRule::Index => 64,
        }
    }

    fn next(&self, k: usize, q_k: &Natural) -> Result<Natural> {
        let a = match self {
            GrowthRule::Liouville => q_k.pow(k as u64),
            GrowthRule::QPower(n) => q_k.pow(*n as u64),
            GrowthRule::LogQ => {
                let l = log_big(q_k)?.floor();
                Natural::from((l as u64).max(1))
            }
            GrowthRule::Index => Natural::from(k as u64 + 1),
        };
        Ok(a)
    }
}

impl fmt::Display for GrowthRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthRule::QPower(n) => write!(f, "q-power({n})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Specification of an irrational θ through its partial quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaSpec {
    /// A finite prefix `a_0, a_1, …`; cannot be extended.
    Explicit(Vec<Natural>),
    /// `preperiod` followed by `period` repeated forever.
    Periodic {
        preperiod: Vec<Natural>,
        period: Vec<Natural>,
    },
    /// `e = [2; 1,2,1, 1,4,1, 1,6,1, …]`.
    EPattern,
    /// `prefix` gives `a_0..a_j`; later quotients come from `rule`.
    GrowthRule {
        prefix: Vec<Natural>,
        rule: GrowthRule,
        max_bits: u64,
    },
}

fn naturals(v: &[u64]) -> Vec<Natural> {
    v.iter().map(|&x| Natural::from(x)).collect()
}

impl ThetaSpec {
    /// `(1 + √5) / 2 = [1; 1, 1, …]`.
    pub fn golden() -> Self {
        ThetaSpec::Periodic {
            preperiod: naturals(&[1]),
            period: naturals(&[1]),
        }
    }

    pub fn explicit(a: &[u64]) -> Self {
        ThetaSpec::Explicit(naturals(a))
    }

    pub fn periodic(preperiod: &[u64], period: &[u64]) -> Self {
        ThetaSpec::Periodic {
            preperiod: naturals(preperiod),
            period: naturals(period),
        }
    }

    pub fn growth(prefix: &[u64], rule: GrowthRule) -> Self {
        ThetaSpec::GrowthRule {
            prefix: naturals(prefix),
            rule,
            max_bits: DEFAULT_MAX_QUOTIENT_BITS,
        }
    }

    /// Same spec with a different quotient bit cap (growth rules only).
    pub fn with_max_bits(self, cap: u64) -> Self {
        match self {
            ThetaSpec::GrowthRule { prefix, rule, .. } => ThetaSpec::GrowthRule {
                prefix,
                rule,
                max_bits: cap,
            },
            other => other,
        }
    }

    /// Whether quotients exist at every depth.
    pub fn is_extendable(&self) -> bool {
        !matches!(self, ThetaSpec::Explicit(_))
    }

    /// Check the static parts of the spec (explicit lists, prefixes, periods).
    pub fn validate(&self) -> Result<()> {
        let check = |list: &[Natural], offset: usize| -> Result<()> {
            for (i, a) in list.iter().enumerate() {
                let index = i + offset;
                if index >= 1 && *a == 0u32 {
                    return Err(Error::InvalidQuotient {
                        index,
                        detail: "a_k must be at least 1 for k >= 1".into(),
                    });
                }
            }
            Ok(())
        };
        match self {
            ThetaSpec::Explicit(a) => {
                if a.is_empty() {
                    return Err(Error::NoQuotients);
                }
                check(a, 0)
            }
            ThetaSpec::Periodic { preperiod, period } => {
                if period.is_empty() {
                    return Err(Error::InvalidQuotient {
                        index: preperiod.len(),
                        detail: "empty period".into(),
                    });
                }
                check(preperiod, 0)?;
                if let Some(i) = period.iter().position(|a| *a == 0u32) {
                    // a zero in the period recurs at every later repetition
                    let first = preperiod.len() + i;
                    return Err(Error::InvalidQuotient {
                        index: if first == 0 { period.len() } else { first },
                        detail: "a_k must be at least 1 for k >= 1".into(),
                    });
                }
                Ok(())
            }
            ThetaSpec::EPattern => Ok(()),
            ThetaSpec::GrowthRule { prefix, rule, .. } => {
                if prefix.is_empty() {
                    return Err(Error::field("prefix", "growth rule needs a_0"));
                }
                if let GrowthRule::QPower(0) = rule {
                    return Err(Error::field("exponent", "exponent must be at least 1"));
                }
                check(prefix, 0)
            }
        }
    }

    /// Quotient at index `k` for the rules that do not depend on `q_k`.
    fn closed_quotient(&self, k: usize) -> Option<Natural> {
        match self {
            ThetaSpec::Explicit(a) => a.get(k).cloned(),
            ThetaSpec::Periodic { preperiod, period } => Some(if k < preperiod.len() {
                preperiod[k].clone()
            } else {
                period[(k - preperiod.len()) % period.len()].clone()
            }),
            ThetaSpec::EPattern => Some(Natural::from(e_quotient(k))),
            ThetaSpec::GrowthRule { .. } => None,
        }
    }

    /// Run the denominator recurrence alongside quotient generation.
    pub(crate) fn generate(&self, depth: usize) -> Result<Recurrence> {
        self.validate()?;
        if let ThetaSpec::Explicit(a) = self {
            if a.len() < depth + 1 {
                return Err(Error::InsufficientQuotients {
                    needed: depth + 1,
                    available: a.len(),
                });
            }
        }
        let mut rec = Recurrence::new();
        while rec.len() <= depth {
            self.step(&mut rec)?;
        }
        Ok(rec)
    }

    /// Append the next quotient. `Ok(false)` when an explicit list is exhausted.
    fn step(&self, rec: &mut Recurrence) -> Result<bool> {
        let k = rec.len();
        let a = match self.closed_quotient(k) {
            Some(a) => a,
            None if matches!(self, ThetaSpec::Explicit(_)) => return Ok(false),
            None => self.rule_quotient(k, rec)?,
        };
        if k >= 1 && a == 0u32 {
            return Err(Error::InvalidQuotient {
                index: k,
                detail: "rule produced a_k < 1".into(),
            });
        }
        rec.push(a);
        Ok(true)
    }

    fn rule_quotient(&self, k: usize, rec: &Recurrence) -> Result<Natural> {
        let ThetaSpec::GrowthRule {
            prefix,
            rule,
            max_bits,
        } = self
        else {
            unreachable!("closed rules never reach here")
        };
        if k < prefix.len() {
            return Ok(prefix[k].clone());
        }
        // a_k = rule(k - 1, q_{k-1})
        let q_prev = rec.q_last();
        let bits = rule.predicted_bits(k - 1, q_prev);
        if bits > *max_bits {
            return Err(Error::QuotientTooLarge {
                index: k,
                bits,
                cap: *max_bits,
            });
        }
        rule.next(k - 1, q_prev)
    }

    /// Convergent table of depth `depth`, built in one pass with the quotients.
    pub fn table(&self, depth: usize) -> Result<ConvergentTable> {
        self.generate(depth)?.into_table()
    }

    /// Shallowest table on which `frac_multiple(q, delta)` is certified for
    /// every `q <= q_max`, i.e. `q_max / (q_{K-1} q_K) <= delta`.
    pub fn table_for_precision(&self, q_max: &Natural, delta: f64) -> Result<ConvergentTable> {
        if !(delta > 0.0) {
            return Err(Error::domain("precision tolerance must be positive"));
        }
        self.validate()?;
        let mut rec = Recurrence::new();
        loop {
            let k = rec.len();
            if k >= 2 {
                let err = ratio_to_f64(q_max, &(rec.q_at(k - 2) * rec.q_at(k - 1)))?;
                if err <= delta {
                    return rec.into_table();
                }
            }
            if k > MAX_PRECISION_DEPTH {
                return Err(Error::InsufficientPrecision {
                    q: q_max.to_string(),
                    detail: format!("no certified table within depth {MAX_PRECISION_DEPTH}"),
                });
            }
            if !self.step(&mut rec)? {
                return Err(Error::InsufficientPrecision {
                    q: q_max.to_string(),
                    detail: format!("explicit expansion ends at depth {}", k.saturating_sub(1)),
                });
            }
        }
    }
}

/// `a_k` of e: `a_0 = 2`, `a_k = 2(k+1)/3` when `k ≡ 2 (mod 3)`, else 1.
fn e_quotient(k: usize) -> u64 {
    match k {
        0 => 2,
        k if k % 3 == 2 => 2 * (k as u64 + 1) / 3,
        _ => 1,
    }
}

/// Partial quotients `a_0..a_K` of θ.
pub fn expand_theta(spec: &ThetaSpec, depth: usize) -> Result<Vec<Natural>> {
    if depth < 1 {
        return Err(Error::domain("expansion depth must be at least 1"));
    }
    Ok(spec.generate(depth)?.into_quotients())
}
