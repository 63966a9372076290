//! Plain-text specification files for θ, ψ and φ.
//!
//! One `key = value` per line; `#` starts a comment; lists are
//! comma-separated. Integers are read as arbitrary-precision decimals and
//! never pass through floats. Real parameters accept a decimal or a ratio
//! `a/b`.
//!
//! θ files:
//!
//! ```text
//! kind = periodic          # explicit | periodic | e-pattern | growth-rule
//! preperiod = 1
//! period = 1
//! ```
//!
//! `explicit` lists `a_0, a_1, …`; growth rules take `rule` (`liouville`,
//! `q-power`, `log-q`, `index`), `prefix`, `exponent` for `q-power`, and
//! an optional `max-bits`.
//!
//! ψ / φ files start with `sequence = psi` or `sequence = phi`. ψ kinds are
//! `constant` (`c`), `power` (`c`, `exponent`), `harmonic-log` (`c`) and
//! `step` (`breakpoints`, `values`); φ kinds are `constant` (`c`),
//! `log-power` (`exponent`) and `step`. With `dual-of = phi` a ψ file
//! describes a φ and takes its dual (and symmetrically for φ files).
//!
//! ```
//! use omega_core::specfile::{parse_sequence, parse_theta, SequenceSpec};
//! let theta = parse_theta("kind = e-pattern").unwrap();
//! assert_eq!(theta, omega_core::ThetaSpec::EPattern);
//! let psi = parse_sequence("sequence = psi\nkind = power\nc = 1\nexponent = 2").unwrap();
//! assert!(matches!(psi, SequenceSpec::Psi(_)));
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use malachite_nz::natural::Natural;

use crate::error::{Error, Result};
use crate::sequences::psi::{PhiFamily, PhiSpec, PsiFamily, PsiSpec, StepFunction};
use crate::theta::{GrowthRule, ThetaSpec, DEFAULT_MAX_QUOTIENT_BITS};

/// Parsed `key = value` pairs, remembering which keys were consumed.
struct Fields {
    map: BTreeMap<String, String>,
}

impl Fields {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::field(line, format!("line {}: expected `key = value`", n + 1)));
            };
            let key = k.trim().to_string();
            if map.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::field(&key, format!("line {}: duplicate key", n + 1)));
            }
        }
        Ok(Fields { map })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<String> {
        self.take(key).ok_or_else(|| Error::field(key, "missing"))
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            Some(k) => Err(Error::field(k, "unknown key for this kind")),
            None => Ok(()),
        }
    }

    fn real(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key).map(|v| parse_real(key, &v)).transpose()
    }
}

fn parse_real(field: &str, s: &str) -> Result<f64> {
    let bad = || Error::field(field, format!("`{s}` is not a finite number"));
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a = f64::from_str(a.trim()).map_err(|_| bad())?;
            let b = f64::from_str(b.trim()).map_err(|_| bad())?;
            a / b
        }
        None => f64::from_str(s).map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn list(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    s.split(',').map(str::trim).collect()
}

/// Quotients `a_{offset}, a_{offset+1}, …`.
fn quotients(field: &str, s: &str, offset: usize) -> Result<Vec<Natural>> {
    list(s)
        .into_iter()
        .enumerate()
        .map(|(i, tok)| {
            Natural::from_str(tok).map_err(|_| Error::InvalidQuotient {
                index: i + offset,
                detail: format!("`{tok}` in field `{field}` is not a nonnegative integer"),
            })
        })
        .collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Parse a θ specification.
pub fn parse_theta(text: &str) -> Result<ThetaSpec> {
    let mut f = Fields::parse(text)?;
    let kind = f.require("kind")?;
    let spec = match kind.as_str() {
        "explicit" => ThetaSpec::Explicit(quotients("explicit", &f.require("explicit")?, 0)?),
        "periodic" => {
            let preperiod = quotients("preperiod", &f.take("preperiod").unwrap_or_default(), 0)?;
            let period = quotients("period", &f.require("period")?, preperiod.len())?;
            ThetaSpec::Periodic { preperiod, period }
        }
        "e-pattern" => ThetaSpec::EPattern,
        "growth-rule" => {
            let prefix = quotients("prefix", &f.require("prefix")?, 0)?;
            let exponent = f.take("exponent");
            let rule = match f.require("rule")?.as_str() {
                "liouville" => GrowthRule::Liouville,
                "q-power" => {
                    let e = exponent.clone().ok_or_else(|| Error::field("exponent", "missing for q-power"))?;
                    GrowthRule::QPower(
                        e.parse()
                            .map_err(|_| Error::field("exponent", format!("`{e}` is not a positive integer")))?,
                    )
                }
                "log-q" => GrowthRule::LogQ,
                "index" => GrowthRule::Index,
                other => return Err(Error::field("rule", format!("unknown rule `{other}`"))),
            };
            if !matches!(rule, GrowthRule::QPower(_)) && exponent.is_some() {
                return Err(Error::field("exponent", "only used by q-power"));
            }
            let max_bits = match f.take("max-bits") {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::field("max-bits", format!("`{v}` is not a positive integer")))?,
                None => DEFAULT_MAX_QUOTIENT_BITS,
            };
            ThetaSpec::GrowthRule { prefix, rule, max_bits }
        }
        other => return Err(Error::field("kind", format!("unknown kind `{other}`"))),
    };
    f.finish()?;
    spec.validate()?;
    Ok(spec)
}

/// Render a θ specification; `parse_theta` reads it back unchanged.
pub fn theta_to_string(spec: &ThetaSpec) -> String {
    let mut s = String::new();
    match spec {
        ThetaSpec::Explicit(a) => {
            let _ = write!(s, "kind = explicit\nexplicit = {}\n", join(a));
        }
        ThetaSpec::Periodic { preperiod, period } => {
            let _ = write!(s, "kind = periodic\npreperiod = {}\nperiod = {}\n", join(preperiod), join(period));
        }
        ThetaSpec::EPattern => s.push_str("kind = e-pattern\n"),
        ThetaSpec::GrowthRule { prefix, rule, max_bits } => {
            let _ = write!(s, "kind = growth-rule\nrule = {}\n", rule.name());
            if let GrowthRule::QPower(n) = rule {
                let _ = writeln!(s, "exponent = {n}");
            }
            let _ = write!(s, "prefix = {}\nmax-bits = {max_bits}\n", join(prefix));
        }
    }
    s
}

/// A parsed ψ or φ file.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    Psi(PsiSpec),
    Phi(PhiSpec),
}

impl SequenceSpec {
    pub fn into_psi(self) -> PsiSpec {
        match self {
            SequenceSpec::Psi(p) => p,
            SequenceSpec::Phi(p) => p.dual(),
        }
    }

    pub fn into_phi(self) -> PhiSpec {
        match self {
            SequenceSpec::Psi(p) => p.dual(),
            SequenceSpec::Phi(p) => p,
        }
    }
}

fn step(f: &mut Fields) -> Result<StepFunction> {
    let bp = f.require("breakpoints")?;
    let breakpoints = list(&bp)
        .into_iter()
        .map(|t| {
            Natural::from_str(t)
                .map_err(|_| Error::field("breakpoints", format!("`{t}` is not a positive integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    let values = list(&f.require("values")?)
        .into_iter()
        .map(|t| parse_real("values", t))
        .collect::<Result<Vec<_>>>()?;
    StepFunction::new(breakpoints, values).map_err(|e| Error::field("breakpoints", e.to_string()))
}

fn positive_values(step: &StepFunction, field: &str) -> Result<()> {
    if let Some(v) = step.values().iter().find(|v| !(**v > 0.0)) {
        return Err(Error::field(field, format!("value {v} is not positive")));
    }
    Ok(())
}

fn psi_body(f: &mut Fields) -> Result<PsiSpec> {
    let kind = f.require("kind")?;
    let c = |f: &mut Fields| -> Result<f64> {
        let c = f.real("c")?.unwrap_or(1.0);
        if !(c > 0.0) {
            return Err(Error::field("c", format!("{c} is not positive")));
        }
        Ok(c)
    };
    Ok(match kind.as_str() {
        "constant" => {
            let c = f.real("c")?.ok_or_else(|| Error::field("c", "missing"))?;
            if !(c >= 0.0) {
                return Err(Error::field("c", format!("{c} is negative")));
            }
            PsiSpec::constant(c)
        }
        "power" => {
            let c = c(f)?;
            PsiSpec::power(c, f.real("exponent")?.unwrap_or(1.0))
        }
        "harmonic-log" => PsiSpec::harmonic_log(c(f)?),
        "step" => {
            let s = step(f)?;
            positive_values(&s, "values")?;
            PsiSpec::Step(s)
        }
        other => return Err(Error::field("kind", format!("unknown ψ kind `{other}`"))),
    })
}

fn phi_body(f: &mut Fields) -> Result<PhiSpec> {
    let kind = f.require("kind")?;
    Ok(match kind.as_str() {
        "constant" => {
            let c = f.real("c")?.ok_or_else(|| Error::field("c", "missing"))?;
            if !(c > 0.0) {
                return Err(Error::field("c", format!("{c} is not positive")));
            }
            PhiSpec::constant(c)
        }
        "log-power" => PhiSpec::log_power(f.real("exponent")?.unwrap_or(1.0)),
        "step" => {
            let s = step(f)?;
            positive_values(&s, "values")?;
            PhiSpec::Step(s)
        }
        other => return Err(Error::field("kind", format!("unknown φ kind `{other}`"))),
    })
}

/// Parse a ψ or φ specification.
pub fn parse_sequence(text: &str) -> Result<SequenceSpec> {
    let mut f = Fields::parse(text)?;
    let sequence = f.require("sequence")?;
    let dual_of = f.take("dual-of");
    let described = dual_of.as_deref().unwrap_or(sequence.as_str());
    let body = match described {
        "psi" => SequenceSpec::Psi(psi_body(&mut f)?),
        "phi" => SequenceSpec::Phi(phi_body(&mut f)?),
        other => {
            let field = if dual_of.is_some() { "dual-of" } else { "sequence" };
            return Err(Error::field(field, format!("expected `psi` or `phi`, got `{other}`")));
        }
    };
    f.finish()?;
    match (sequence.as_str(), body) {
        ("psi", SequenceSpec::Phi(phi)) => Ok(SequenceSpec::Psi(phi.dual())),
        ("phi", SequenceSpec::Psi(psi)) => Ok(SequenceSpec::Phi(psi.dual())),
        ("psi" | "phi", same) => Ok(same),
        (other, _) => Err(Error::field("sequence", format!("expected `psi` or `phi`, got `{other}`"))),
    }
}

fn float(x: f64) -> String {
    format!("{x:?}")
}

fn step_lines(s: &mut String, step: &StepFunction) {
    let _ = write!(
        s,
        "kind = step\nbreakpoints = {}\nvalues = {}\n",
        join(step.breakpoints()),
        step.values().iter().map(|&v| float(v)).collect::<Vec<_>>().join(", ")
    );
}

fn psi_lines(s: &mut String, psi: &PsiSpec) {
    match psi {
        PsiSpec::Closed(PsiFamily::Constant { c }) => {
            let _ = write!(s, "kind = constant\nc = {}\n", float(*c));
        }
        PsiSpec::Closed(PsiFamily::Power { c, exponent }) => {
            let _ = write!(s, "kind = power\nc = {}\nexponent = {}\n", float(*c), float(*exponent));
        }
        PsiSpec::Closed(PsiFamily::HarmonicLog { c }) => {
            let _ = write!(s, "kind = harmonic-log\nc = {}\n", float(*c));
        }
        PsiSpec::Step(st) => step_lines(s, st),
        PsiSpec::Dual(phi) => {
            s.push_str("dual-of = phi\n");
            phi_lines(s, phi);
        }
    }
}

fn phi_lines(s: &mut String, phi: &PhiSpec) {
    match phi {
        PhiSpec::Closed(PhiFamily::Constant { c }) => {
            let _ = write!(s, "kind = constant\nc = {}\n", float(*c));
        }
        PhiSpec::Closed(PhiFamily::LogPower { exponent }) => {
            let _ = write!(s, "kind = log-power\nexponent = {}\n", float(*exponent));
        }
        PhiSpec::Step(st) => step_lines(s, st),
        PhiSpec::Dual(psi) => {
            s.push_str("dual-of = psi\n");
            psi_lines(s, psi);
        }
    }
}

/// Render a ψ specification. Floats use the shortest round-trip form.
pub fn psi_to_string(psi: &PsiSpec) -> String {
    let mut s = String::from("sequence = psi\n");
    psi_lines(&mut s, psi);
    s
}

pub fn phi_to_string(phi: &PhiSpec) -> String {
    let mut s = String::from("sequence = phi\n");
    phi_lines(&mut s, phi);
    s
}

/// `breakpoint,value` rows for a step function, last breakpoint with an
/// empty value.
pub fn step_csv(step: &StepFunction) -> String {
    let mut s = String::from("breakpoint,value\n");
    for (b, v) in step.breakpoints().iter().zip(step.values()) {
        let _ = writeln!(s, "{b},{}", float(*v));
    }
    let _ = writeln!(s, "{},", step.end());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::remark::remark_counterexample;

    #[test]
    fn theta_round_trips() {
        let specs = [
            ThetaSpec::golden(),
            ThetaSpec::EPattern,
            ThetaSpec::explicit(&[0, 2, 2, 2]),
            ThetaSpec::growth(&[0, 1], GrowthRule::Liouville).with_max_bits(1 << 28),
            ThetaSpec::growth(&[3], GrowthRule::QPower(2)),
            ThetaSpec::growth(&[0, 1], GrowthRule::Index),
        ];
        for spec in specs {
            let text = theta_to_string(&spec);
            assert_eq!(parse_theta(&text).unwrap(), spec, "{text}");
        }
    }

    #[test]
    fn huge_quotients_stay_exact() {
        let text = "kind = explicit\nexplicit = 0, 123456789012345678901234567890, 1";
        let ThetaSpec::Explicit(a) = parse_theta(text).unwrap() else { panic!() };
        assert_eq!(a[1].to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# golden ratio\n\nkind = periodic   # pure period\npreperiod = 1\nperiod = 1\n";
        assert_eq!(parse_theta(text).unwrap(), ThetaSpec::golden());
    }

    #[test]
    fn malformed_quotients() {
        for text in [
            "kind = explicit\nexplicit = 1, 2, x",
            "kind = explicit\nexplicit = 1, -2",
            "kind = explicit\nexplicit = 1, 2, 0, 4",
            "kind = periodic\npreperiod = 1\nperiod = 2, 0",
        ] {
            let e = parse_theta(text).unwrap_err().to_string();
            assert!(e.contains("invalid quotient"), "{e}");
        }
        let e = parse_theta("kind = explicit\nexplicit = 1, 2, x").unwrap_err().to_string();
        assert!(e.contains("`explicit`") && e.contains("index 2"), "{e}");
    }

    #[test]
    fn field_errors_name_the_field() {
        let cases = [
            ("kind = spiral", "kind"),
            ("explicit = 1", "kind"),
            ("kind = growth-rule\nprefix = 0, 1\nrule = fast", "rule"),
            ("kind = growth-rule\nprefix = 0, 1\nrule = q-power", "exponent"),
            ("kind = e-pattern\ncolour = red", "colour"),
            ("kind = e-pattern\nkind = e-pattern", "kind"),
        ];
        for (text, field) in cases {
            match parse_theta(text).unwrap_err() {
                Error::SpecField { field: f, .. } => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other}"),
            }
        }
    }

    #[test]
    fn sequences_round_trip() {
        let psis = [
            PsiSpec::power(1.0, 2.0),
            PsiSpec::harmonic_log(0.5),
            PsiSpec::constant(0.25),
            remark_counterexample(&[0, 1, 3, 6]).unwrap(),
            PhiSpec::log_power(2.0).dual(),
        ];
        for psi in psis {
            let text = psi_to_string(&psi);
            assert_eq!(parse_sequence(&text).unwrap(), SequenceSpec::Psi(psi), "{text}");
        }
        let phi = PhiSpec::log();
        assert_eq!(parse_sequence(&phi_to_string(&phi)).unwrap(), SequenceSpec::Phi(phi));
    }

    #[test]
    fn ratios_and_duals() {
        let text = "sequence = psi\nkind = step\nbreakpoints = 1, 2, 8\nvalues = 1/2, 1/8";
        let psi = parse_sequence(text).unwrap().into_psi();
        assert_eq!(psi.eval_u64(3).unwrap(), 0.125);
        let text = "sequence = psi\ndual-of = phi\nkind = log-power\nexponent = 1";
        let psi = parse_sequence(text).unwrap().into_psi();
        assert_eq!(psi, PhiSpec::log().dual());
    }

    #[test]
    fn bad_sequences() {
        for (text, field) in [
            ("kind = power", "sequence"),
            ("sequence = psi\nkind = power\nc = -1", "c"),
            ("sequence = psi\nkind = step\nbreakpoints = 1, 2\nvalues = 0", "values"),
            ("sequence = psi\nkind = step\nbreakpoints = 2, 3\nvalues = 1", "breakpoints"),
            ("sequence = phi\nkind = harmonic-log", "kind"),
            ("sequence = psi\nkind = power\nexponent = two", "exponent"),
        ] {
            match parse_sequence(text).unwrap_err() {
                Error::SpecField { field: f, .. } => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other}"),
            }
        }
    }

    #[test]
    fn step_csv_rows() {
        let psi = remark_counterexample(&[0, 1, 3]).unwrap();
        let PsiSpec::Step(s) = psi else { panic!() };
        assert_eq!(step_csv(&s), "breakpoint,value\n1,0.5\n2,0.125\n8,\n");
    }
}
