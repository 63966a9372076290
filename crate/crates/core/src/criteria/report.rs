//! Windowed limsup estimates, verdicts and the report they are collected in.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use super::fit::least_squares_slope;
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: f64 = 0.5;
pub const DEFAULT_GAP: f64 = 0.05;
/// Admissible indices (q_k >= 3) a table must have before any verdict.
pub const MIN_ADMISSIBLE: usize = 10;
/// Blocks used when fitting the growth exponent of a windowed statistic.
const GROWTH_BLOCKS: usize = 4;

/// `{2^0, 2^-1, ..., 2^-8}`.
pub fn default_eps_grid() -> Vec<f64> {
    (0..=8).map(|i| 2f64.powi(-i)).collect()
}

/// Limsup proxy: statistics are read on `[⌈ρK⌉, K]` and verdicts need a
/// margin of `gap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowConfig {
    pub rho: f64,
    pub gap: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            rho: DEFAULT_WINDOW,
            gap: DEFAULT_GAP,
        }
    }
}

impl WindowConfig {
    pub fn new(rho: f64, gap: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::domain(format!("window fraction {rho} not in [0, 1)")));
        }
        if !(gap > 0.0 && gap < 1.0) {
            return Err(Error::domain(format!("stability gap {gap} not in (0, 1)")));
        }
        Ok(WindowConfig { rho, gap })
    }

    /// `[max(⌈ρK⌉, floor), K]`.
    pub fn bounds(&self, depth: usize, floor: usize) -> (usize, usize) {
        let lo = ((self.rho * depth as f64).ceil() as usize).max(floor);
        (lo.min(depth), depth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// What a holding criterion says about θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    InOmega,
    NotInOmega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OmegaVerdict {
    #[serde(rename = "in Ω")]
    InOmega,
    #[serde(rename = "not in Ω")]
    NotInOmega,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl fmt::Display for OmegaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaVerdict::InOmega => "in Ω",
            OmegaVerdict::NotInOmega => "not in Ω",
            OmegaVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// One statistic, its window summary and verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionEntry {
    pub name: String,
    /// ε for condition-B entries.
    pub parameter: Option<f64>,
    pub implies: Membership,
    /// `series[k]`, `None` where the statistic is undefined.
    pub series: Vec<Option<f64>>,
    pub window: (usize, usize),
    /// Window-limsup estimate: the maximum over the window.
    pub estimate: f64,
    pub window_min: f64,
    /// Maximum over the later half of the window.
    pub late_max: f64,
    /// Fitted exponent of growth across the window, where used.
    pub growth_exponent: Option<f64>,
    pub verdict: Verdict,
}

impl CriterionEntry {
    /// Summarise `series` over `window`; the verdict is set by the caller.
    pub(crate) fn summarize(
        name: &str,
        parameter: Option<f64>,
        implies: Membership,
        series: Vec<Option<f64>>,
        window: (usize, usize),
    ) -> Self {
        let (lo, hi) = window;
        let late = lo + (hi - lo).div_ceil(2);
        let fold = |from: usize, init: f64, f: fn(f64, f64) -> f64| {
            series[from..=hi.min(series.len() - 1)]
                .iter()
                .flatten()
                .fold(init, |a, &b| f(a, b))
        };
        CriterionEntry {
            name: name.to_string(),
            parameter,
            implies,
            estimate: fold(lo, f64::NEG_INFINITY, f64::max),
            window_min: fold(lo, f64::INFINITY, f64::min),
            late_max: fold(late, f64::NEG_INFINITY, f64::max),
            window,
            series,
            growth_exponent: None,
            verdict: Verdict::Inconclusive,
        }
    }

    pub fn at(&self, k: usize) -> Option<f64> {
        self.series.get(k).copied().flatten()
    }
}

/// Slope of `ln(block max)` against `ln(argmax k)` after cutting the window
/// into at most four blocks; `logs[k]` is the log of the statistic.
pub(crate) fn growth_exponent(logs: &[Option<f64>], window: (usize, usize)) -> Option<f64> {
    let (lo, hi) = window;
    let idx: Vec<usize> = (lo..=hi.min(logs.len() - 1))
        .filter(|&k| logs[k].is_some_and(f64::is_finite))
        .collect();
    let blocks = GROWTH_BLOCKS.min(idx.len());
    if blocks < 2 {
        return None;
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for b in 0..blocks {
        let chunk = &idx[b * idx.len() / blocks..(b + 1) * idx.len() / blocks];
        let (at, max) = chunk
            .iter()
            .map(|&k| (k, logs[k].unwrap()))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        xs.push((at.max(1) as f64).ln());
        ys.push(max);
    }
    least_squares_slope(&xs, &ys)
}

/// Verdict for "limsup < ∞" from a growth exponent.
pub(crate) fn bounded_verdict(exponent: Option<f64>, gap: f64) -> Verdict {
    match exponent {
        Some(e) if e <= gap => Verdict::Holds,
        Some(e) if e >= 2.0 * gap => Verdict::Fails,
        _ => Verdict::Inconclusive,
    }
}

/// Verdict for "limsup = ∞" from a growth exponent.
pub(crate) fn unbounded_verdict(exponent: Option<f64>, gap: f64) -> Verdict {
    match exponent {
        Some(e) if e >= 2.0 * gap => Verdict::Holds,
        Some(e) if e <= gap => Verdict::Fails,
        _ => Verdict::Inconclusive,
    }
}

/// All statistics for one table, plus the combined verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub depth: usize,
    pub admissible_from: usize,
    pub config: WindowConfig,
    pub eps_grid: Vec<f64>,
    pub entries: Vec<CriterionEntry>,
    pub condition_b: Option<Verdict>,
    pub omega: OmegaVerdict,
    /// Both an "in Ω" and a "not in Ω" criterion held.
    pub conflict: bool,
    #[serde(skip)]
    pub log_q: Vec<f64>,
}

impl CriterionReport {
    pub fn entry(&self, name: &str) -> Option<&CriterionEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Entries with a given name prefix, e.g. every `condition-b` ε.
    pub fn entries_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CriterionEntry> {
        self.entries.iter().filter(move |e| e.name == name)
    }

    /// Recompute `omega` and `conflict` from the entries.
    pub(crate) fn settle(&mut self) {
        let holds = |m: Membership| {
            self.entries
                .iter()
                .any(|e| e.implies == m && e.verdict == Verdict::Holds)
        };
        let (inside, outside) = (holds(Membership::InOmega), holds(Membership::NotInOmega));
        self.conflict = inside && outside;
        self.omega = match (inside, outside) {
            (true, false) => OmegaVerdict::InOmega,
            (false, true) => OmegaVerdict::NotInOmega,
            _ => OmegaVerdict::Inconclusive,
        };
    }

    /// Column name of an entry in the CSV export.
    pub fn column_name(entry: &CriterionEntry) -> String {
        match entry.parameter {
            Some(eps) => format!("{}[eps={eps}]", entry.name),
            None => entry.name.clone(),
        }
    }

    /// One row per index `k`: `k, log_q`, then one column per entry; empty
    /// cells where a statistic is undefined.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header = vec!["k".to_string(), "log_q".to_string()];
        header.extend(self.entries.iter().map(Self::column_name));
        w.write_record(&header)?;
        for k in 0..=self.depth {
            let mut row = vec![k.to_string(), format_float(self.log_q.get(k).copied())];
            row.extend(self.entries.iter().map(|e| format_float(e.at(k))));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }
}

/// Shortest round-trip decimal, empty for `None`.
pub fn format_float(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(v) if v.is_infinite() => if v > 0.0 { "inf" } else { "-inf" }.to_string(),
        Some(v) => format!("{v:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_bounds() {
        let w = WindowConfig::default();
        assert_eq!(w.bounds(200, 3), (100, 200));
        assert_eq!(w.bounds(11, 3), (6, 11));
        assert_eq!(w.bounds(12, 8), (8, 12));
        assert!(WindowConfig::new(1.0, 0.05).is_err());
        assert!(WindowConfig::new(0.5, 0.0).is_err());
    }

    #[test]
    fn summary_statistics() {
        let series = vec![None, Some(9.0), Some(1.0), Some(3.0), Some(2.0), None];
        let e = CriterionEntry::summarize("x", None, Membership::InOmega, series, (2, 5));
        assert_eq!(e.estimate, 3.0);
        assert_eq!(e.window_min, 1.0);
        // later half is [4, 5]
        assert_eq!(e.late_max, 2.0);
    }

    #[test]
    fn growth_exponent_of_powers() {
        let logs: Vec<Option<f64>> = (0..400).map(|k| (k > 0).then(|| 1.5 * (k as f64).ln())).collect();
        let g = growth_exponent(&logs, (200, 399)).unwrap();
        assert!((g - 1.5).abs() < 0.01, "{g}");
        let flat: Vec<Option<f64>> = vec![Some(0.3); 50];
        assert_eq!(growth_exponent(&flat, (25, 49)), Some(0.0));
        assert_eq!(growth_exponent(&flat, (49, 49)), None);
    }

    #[test]
    fn float_format() {
        assert_eq!(format_float(Some(0.1)), "0.1");
        assert_eq!(format_float(Some(1.0)), "1.0");
        assert_eq!(format_float(None), "");
        assert_eq!(format_float(Some(f64::INFINITY)), "inf");
    }
}
