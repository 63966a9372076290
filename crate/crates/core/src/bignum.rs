//! Floating views of arbitrary-precision integers.
//!
//! Denominators of convergents for rule-generated expansions leave the
//! range of `f64` after a handful of steps, so every logarithm goes through
//! a bit-length plus top-64-bit-mantissa split instead of a float cast.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use malachite_base::num::logic::traits::SignificantBits;
use malachite_nz::natural::Natural;

use crate::error::{Error, Result};

/// Bits kept from each operand when a huge ratio is rounded to `f64`.
const RATIO_BITS: u64 = 192;

/// Natural logarithm of a positive arbitrary-precision integer.
///
/// Relative error is below `1e-15` for every input; the value is assembled
/// as `ln(top 64 bits) + shift * ln 2`.
pub fn log_big(n: &Natural) -> Result<f64> {
    if *n == 0u32 {
        return Err(Error::domain("log of zero"));
    }
    let (top, shift) = top_bits(n, 64);
    Ok(top.ln() + shift as f64 * LN_2)
}

/// `ln(n / d)` for positive `n`, `d`, without overflow.
pub fn log_ratio(n: &Natural, d: &Natural) -> Result<f64> {
    if *n == 0u32 || *d == 0u32 {
        return Err(Error::domain("log ratio of zero"));
    }
    let (nt, ns) = top_bits(n, 64);
    let (dt, ds) = top_bits(d, 64);
    Ok((nt / dt).ln() + (ns as f64 - ds as f64) * LN_2)
}

/// The rational `n / d` rounded to `f64`; `+inf` when it overflows.
///
/// Operands wider than 192 bits are truncated first, which perturbs the
/// quotient by less than `2^-180` relative before the final rounding.
pub fn ratio_to_f64(n: &Natural, d: &Natural) -> Result<f64> {
    if *d == 0u32 {
        return Err(Error::domain("division by zero"));
    }
    if *n == 0u32 {
        return Ok(0.0);
    }
    let nb = n.significant_bits();
    let db = d.significant_bits();
    let ncut = nb.saturating_sub(RATIO_BITS);
    let dcut = db.saturating_sub(RATIO_BITS);
    let n_t = n >> ncut;
    let d_t = d >> dcut;
    // Scale the numerator so the integer quotient carries 64+ significant bits.
    let nbt = n_t.significant_bits() as i64;
    let dbt = d_t.significant_bits() as i64;
    let scale = (dbt + 66 - nbt).max(0) as u64;
    let quot = (n_t << scale) / &d_t;
    let (mant, qshift) = top_bits(&quot, 64);
    let exp = qshift as i64 + ncut as i64 - dcut as i64 - scale as i64;
    Ok(ldexp(mant, exp))
}

/// Exact comparison of the rational `n / d` against a float.
pub fn cmp_ratio_f64(n: &Natural, d: &Natural, x: f64) -> Ordering {
    if x.is_nan() {
        return Ordering::Less;
    }
    if x == f64::INFINITY {
        return Ordering::Less;
    }
    if x <= 0.0 {
        return if *n == 0u32 && x == 0.0 {
            Ordering::Equal
        } else {
            Ordering::Greater
        };
    }
    let dy = Dyadic::from_f64(x).expect("finite positive");
    // n / d  vs  m * 2^e   <=>   n * 2^-e  vs  m * d
    let (lhs, rhs) = if dy.exp >= 0 {
        (n.clone(), (&dy.mantissa * d) << dy.exp as u64)
    } else {
        (n << (-dy.exp) as u64, &dy.mantissa * d)
    };
    lhs.cmp(&rhs)
}

/// Leading bits of `n` as a float together with the dropped shift:
/// `n ≈ top * 2^shift`.
fn top_bits(n: &Natural, keep: u64) -> (f64, u64) {
    let bits = n.significant_bits();
    let shift = bits.saturating_sub(keep);
    let top = u64::try_from(&(n >> shift)).expect("at most 64 bits");
    (top as f64, shift)
}

/// `x * 2^e` without intermediate overflow of the scale factor.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// A nonnegative dyadic rational `mantissa * 2^exp`, kept with an odd
/// mantissa (or zero) so that structural equality is numeric equality.
///
/// Every finite `f64` is one of these, which is what makes exact block sums
/// of step functions possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub mantissa: Natural,
    pub exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: Natural::from(0u32),
            exp: 0,
        }
    }

    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::normalized(Natural::from(m), e))
    }

    fn normalized(mantissa: Natural, exp: i64) -> Self {
        match mantissa.trailing_zeros() {
            Some(tz) if tz > 0 => Dyadic {
                mantissa: mantissa >> tz,
                exp: exp + tz as i64,
            },
            Some(_) => Dyadic { mantissa, exp },
            None => Self::zero(),
        }
    }

    /// `2^-n`.
    pub fn inverse_power_of_two(n: u64) -> Self {
        Dyadic {
            mantissa: Natural::from(1u32),
            exp: -(n as i64),
        }
    }

    pub fn scale(&self, k: &Natural) -> Self {
        Dyadic::normalized(&self.mantissa * k, self.exp)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.min(other.exp);
        let a = &self.mantissa << (self.exp - e) as u64;
        let b = &other.mantissa << (other.exp - e) as u64;
        Dyadic::normalized(a + b, e)
    }

    /// `1 - 2^-n`, exactly.
    pub fn one_minus_inverse_power_of_two(n: u64) -> Self {
        let one = Natural::from(1u32);
        Dyadic {
            mantissa: (&one << n) - one,
            exp: -(n as i64),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (top, shift) = top_bits(&self.mantissa, 64);
        ldexp(top, shift as i64 + self.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mantissa << (self.exp - e) as u64;
        let b = &other.mantissa << (other.exp - e) as u64;
        a.cmp(&b)
    }
}
