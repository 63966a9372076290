//! Truncated target sets `⋃_{Q0 <= q <= Q} B(qθ mod 1, ψ(q))` and the
//! pointwise hit counts they correspond to.

use std::io::Write;

use malachite_nz::natural::Natural;
use serde::Serialize;

use super::arcs::ArcUnion;
use crate::convergents::{CirclePoint, ConvergentTable};
use crate::criteria::report::format_float;
use crate::error::{Error, Result};
use crate::sequences::khinchin::CompensatedSum;
use crate::sequences::psi::PsiSpec;
use crate::theta::ThetaSpec;

pub const DEFAULT_DELTA: f64 = 1e-15;
/// A target union is flagged when the centre error reaches this fraction of
/// the smallest radius.
const PRECISION_FLAG_RATIO: f64 = 0.01;

/// Multiples `qθ mod 1` for `q <= q_max`, certified to `delta`.
#[derive(Debug, Clone)]
pub struct Orbit {
    table: ConvergentTable,
    q_max: u64,
    delta: f64,
}

impl Orbit {
    pub fn new(theta: &ThetaSpec, q_max: u64, delta: f64) -> Result<Self> {
        let table = theta.table_for_precision(&Natural::from(q_max), delta)?;
        Ok(Orbit { table, q_max, delta })
    }

    pub fn table(&self) -> &ConvergentTable {
        &self.table
    }

    pub fn point(&self, q: u64) -> Result<CirclePoint> {
        if q > self.q_max {
            return Err(Error::InsufficientPrecision {
                q: q.to_string(),
                detail: format!("orbit built for q <= {}", self.q_max),
            });
        }
        self.table.frac_multiple(&Natural::from(q), self.delta)
    }

    fn check_window(&self, q0: u64, q: u64) -> Result<()> {
        if q0 < 1 || q0 > q {
            return Err(Error::domain(format!("window [{q0}, {q}] needs 1 <= Q0 <= Q")));
        }
        if q > self.q_max {
            return Err(Error::domain(format!("Q = {q} beyond orbit range {}", self.q_max)));
        }
        Ok(())
    }

    /// Nominal, inner and outer unions over `[q0, q]`.
    pub fn target_union(&self, psi: &PsiSpec, q0: u64, q: u64) -> Result<TargetUnion> {
        self.check_window(q0, q)?;
        let mut t = TargetUnion::empty(q0, q);
        for n in q0..=q {
            t.add(self.point(n)?, psi.eval_u64(n)?);
        }
        t.finish();
        Ok(t)
    }

    /// Every `n` in `[q0, q]` with ‖nθ − s‖ < ψ(n), deciding only margins
    /// larger than the certified error.
    pub fn hit_count(&self, psi: &PsiSpec, s: f64, q0: u64, q: u64) -> Result<HitReport> {
        Ok(self.hit_counts(psi, &[s], q0, q)?.remove(0))
    }

    /// [`Orbit::hit_count`] for several targets, evaluating each multiple once.
    pub fn hit_counts(&self, psi: &PsiSpec, targets: &[f64], q0: u64, q: u64) -> Result<Vec<HitReport>> {
        self.check_window(q0, q)?;
        let mut reports: Vec<HitReport> = targets
            .iter()
            .map(|s| HitReport {
                s: s.rem_euclid(1.0),
                q0,
                q,
                count: 0,
                uncertain: 0,
                hits: Vec::new(),
            })
            .collect();
        for n in q0..=q {
            let c = self.point(n)?;
            let psi_q = psi.eval_u64(n)?;
            for report in &mut reports {
                report.record(n, c, psi_q);
            }
        }
        Ok(reports)
    }

    /// Measures of the unions over `[q0, Q_j]` for each checkpoint.
    pub fn tail_measure_profile(&self, psi: &PsiSpec, q0: u64, checkpoints: &[u64]) -> Result<MeasureProfile> {
        let Some(&last) = checkpoints.last() else {
            return Err(Error::domain("no checkpoints"));
        };
        if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("checkpoints must increase strictly"));
        }
        if checkpoints[0] < q0 {
            return Err(Error::domain(format!("checkpoint {} below Q0 = {q0}", checkpoints[0])));
        }
        self.check_window(q0, last)?;
        let mut t = TargetUnion::empty(q0, last);
        let mut bound = CompensatedSum::default();
        let mut profile = MeasureProfile {
            q0,
            checkpoints: checkpoints.to_vec(),
            measure: Vec::new(),
            inner: Vec::new(),
            outer: Vec::new(),
            union_bound: Vec::new(),
        };
        let mut next = 0;
        for n in q0..=last {
            let psi_q = psi.eval_u64(n)?;
            t.add(self.point(n)?, psi_q);
            bound.add(2.0 * psi_q.max(0.0));
            if n == checkpoints[next] {
                profile.measure.push(t.nominal.measure());
                profile.inner.push(t.inner.measure());
                profile.outer.push(t.outer.measure());
                profile.union_bound.push(bound.value().min(1.0));
                next += 1;
            }
        }
        Ok(profile)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetUnion {
    pub q0: u64,
    pub q: u64,
    pub nominal: ArcUnion,
    /// Radii shrunk by each centre's certified error.
    pub inner: ArcUnion,
    /// Radii grown by each centre's certified error.
    pub outer: ArcUnion,
    pub max_error: f64,
    pub min_radius: f64,
    /// Centre error is not small against the smallest radius.
    pub precision_flag: bool,
}

impl TargetUnion {
    fn empty(q0: u64, q: u64) -> Self {
        TargetUnion {
            q0,
            q,
            nominal: ArcUnion::new(),
            inner: ArcUnion::new(),
            outer: ArcUnion::new(),
            max_error: 0.0,
            min_radius: f64::INFINITY,
            precision_flag: false,
        }
    }

    fn add(&mut self, c: CirclePoint, radius: f64) {
        self.nominal.insert_point(c, radius);
        self.inner.insert_point(c, radius - c.error_bound);
        self.outer.insert_point(c, radius + c.error_bound);
        self.max_error = self.max_error.max(c.error_bound);
        if radius > 0.0 {
            self.min_radius = self.min_radius.min(radius);
        }
    }

    fn finish(&mut self) {
        self.precision_flag = self.min_radius.is_finite() && self.max_error >= PRECISION_FLAG_RATIO * self.min_radius;
    }

    pub fn measure(&self) -> f64 {
        self.nominal.measure()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hit {
    pub q: u64,
    pub distance: f64,
    pub psi_q: f64,
    /// ψ(q) − ‖qθ − s‖.
    pub margin: f64,
    /// The margin exceeds the certified error of qθ.
    pub certain: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HitReport {
    pub s: f64,
    pub q0: u64,
    pub q: u64,
    /// Certain hits.
    pub count: u64,
    /// Margins within the certified error, hit or miss.
    pub uncertain: u64,
    /// Certain hits and every uncertain case.
    pub hits: Vec<Hit>,
}

impl HitReport {
    fn record(&mut self, n: u64, c: CirclePoint, psi_q: f64) {
        let distance = c.distance_to(self.s);
        let margin = psi_q - distance;
        let certain = margin.abs() > c.error_bound;
        if certain && margin > 0.0 {
            self.count += 1;
        } else if !certain {
            self.uncertain += 1;
        }
        if margin > 0.0 || !certain {
            self.hits.push(Hit {
                q: n,
                distance,
                psi_q,
                margin,
                certain,
            });
        }
    }

    pub fn hit_qs(&self) -> Vec<u64> {
        self.hits.iter().filter(|h| h.certain).map(|h| h.q).collect()
    }

    /// Columns `q, distance, psi_q, margin, certain`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record(["q", "distance", "psi_q", "margin", "certain"])?;
        for h in &self.hits {
            w.write_record([
                h.q.to_string(),
                format_float(Some(h.distance)),
                format_float(Some(h.psi_q)),
                format_float(Some(h.margin)),
                h.certain.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureProfile {
    pub q0: u64,
    pub checkpoints: Vec<u64>,
    pub measure: Vec<f64>,
    pub inner: Vec<f64>,
    pub outer: Vec<f64>,
    /// `min(1, Σ_{Q0 <= q <= Q_j} 2ψ(q))`.
    pub union_bound: Vec<f64>,
}

impl MeasureProfile {
    pub fn is_monotone(&self) -> bool {
        [&self.measure, &self.inner, &self.outer]
            .iter()
            .all(|v| v.windows(2).all(|w| w[0] <= w[1]))
    }

    pub fn final_measure(&self) -> f64 {
        *self.measure.last().expect("nonempty profile")
    }

    /// Columns `Q, inner_measure, outer_measure, union_bound, measure`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record(["Q", "inner_measure", "outer_measure", "union_bound", "measure"])?;
        for j in 0..self.checkpoints.len() {
            w.write_record([
                self.checkpoints[j].to_string(),
                format_float(Some(self.inner[j])),
                format_float(Some(self.outer[j])),
                format_float(Some(self.union_bound[j])),
                format_float(Some(self.measure[j])),
            ])?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// [`Orbit::target_union`] on a fresh orbit.
pub fn target_union(theta: &ThetaSpec, psi: &PsiSpec, q0: u64, q: u64, delta: f64) -> Result<TargetUnion> {
    Orbit::new(theta, q, delta)?.target_union(psi, q0, q)
}

/// [`Orbit::hit_count`] on a fresh orbit.
pub fn hit_count(theta: &ThetaSpec, psi: &PsiSpec, s: f64, q0: u64, q: u64, delta: f64) -> Result<HitReport> {
    Orbit::new(theta, q, delta)?.hit_count(psi, s, q0, q)
}

/// [`Orbit::tail_measure_profile`] on a fresh orbit.
pub fn tail_measure_profile(
    theta: &ThetaSpec,
    psi: &PsiSpec,
    q0: u64,
    checkpoints: &[u64],
    delta: f64,
) -> Result<MeasureProfile> {
    let last = *checkpoints.last().ok_or_else(|| Error::domain("no checkpoints"))?;
    Orbit::new(theta, last, delta)?.tail_measure_profile(psi, q0, checkpoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::arcs::rasterized_measure;

    #[test]
    fn half_radius_covers() {
        let t = target_union(&ThetaSpec::golden(), &PsiSpec::constant(0.5), 3, 40, DEFAULT_DELTA).unwrap();
        assert_eq!(t.measure(), 1.0);
        let h = hit_count(&ThetaSpec::golden(), &PsiSpec::constant(0.5), 0.123, 1, 100, DEFAULT_DELTA).unwrap();
        assert_eq!(h.count, 100);
    }

    #[test]
    fn zero_radius_never_hits() {
        let h = hit_count(&ThetaSpec::golden(), &PsiSpec::constant(0.0), 0.3, 1, 100, DEFAULT_DELTA).unwrap();
        assert_eq!(h.count, 0);
        assert_eq!(h.uncertain, 0);
    }

    #[test]
    fn golden_inverse_square_hits() {
        // 50-digit θ: ‖θ‖ = 0.381966 < 1, ‖2θ‖ = 0.236068 < 1/4, ‖3θ‖ = 0.145898 > 1/9
        let h = hit_count(&ThetaSpec::golden(), &PsiSpec::power(1.0, 2.0), 0.0, 1, 10, DEFAULT_DELTA).unwrap();
        assert_eq!(h.hit_qs(), vec![1, 2]);
        assert_eq!(h.count, 2);
    }

    #[test]
    fn union_bound_on_small_radii() {
        let n = 50u64;
        let psi = PsiSpec::constant(1.0 / (4.0 * n as f64));
        let t = target_union(&ThetaSpec::golden(), &psi, 11, 10 + n, DEFAULT_DELTA).unwrap();
        assert!(t.measure() <= 0.5 + 1e-12);
    }

    #[test]
    fn golden_half_inverse_matches_raster() {
        let theta = ThetaSpec::golden();
        let psi = PsiSpec::power(0.5, 1.0);
        let orbit = Orbit::new(&theta, 10_000, DEFAULT_DELTA).unwrap();
        let t = orbit.target_union(&psi, 1, 10_000).unwrap();
        let balls: Vec<(f64, f64)> = (1..=10_000u64)
            .map(|q| (orbit.point(q).unwrap().value, psi.eval_u64(q).unwrap()))
            .collect();
        let r = rasterized_measure(&balls, 1_000_000);
        assert!((t.measure() - r).abs() <= 2e-4, "{} vs {r}", t.measure());
        assert!(!t.precision_flag);
        assert!(t.inner.measure() <= t.measure() && t.measure() <= t.outer.measure());
    }

    #[test]
    fn profile_is_monotone() {
        let p = tail_measure_profile(
            &ThetaSpec::golden(),
            &PsiSpec::harmonic_log(1.0),
            100,
            &[1000, 3000, 10_000],
            DEFAULT_DELTA,
        )
        .unwrap();
        assert!(p.is_monotone());
        // float simulation of the same union
        assert!((p.measure[0] - 0.699).abs() < 2e-3, "{:?}", p.measure);
        assert!((p.measure[2] - 0.876).abs() < 2e-3, "{:?}", p.measure);
        let mut out = Vec::new();
        p.write_csv(&mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("Q,inner_measure,outer_measure,union_bound,measure\n1000,"));
    }

    #[test]
    fn bad_windows() {
        let o = Orbit::new(&ThetaSpec::golden(), 100, DEFAULT_DELTA).unwrap();
        let psi = PsiSpec::constant(0.1);
        assert!(o.target_union(&psi, 0, 10).is_err());
        assert!(o.target_union(&psi, 20, 10).is_err());
        assert!(o.target_union(&psi, 1, 101).is_err());
        assert!(o.tail_measure_profile(&psi, 10, &[50, 40]).is_err());
        assert!(o.tail_measure_profile(&psi, 10, &[5, 40]).is_err());
    }

    #[test]
    fn explicit_theta_runs_out() {
        let theta = ThetaSpec::explicit(&[0, 1, 2, 3]);
        let e = Orbit::new(&theta, 1000, DEFAULT_DELTA).unwrap_err();
        assert!(e.to_string().contains("insufficient precision at q = 1000"), "{e}");
    }
}
