//! Finite unions of half-open arcs on the circle `[0, 1)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::convergents::CirclePoint;
use crate::sequences::khinchin::CompensatedSum;

/// `f64` key with a total order, for endpoints known to be finite.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Disjoint arcs `[l, r)` with `0 <= l < r <= 1`, sorted by `l`; an arc
/// through 0 is stored as two pieces. Touching arcs are merged, so the
/// representation is canonical.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArcUnion {
    arcs: BTreeMap<Key, f64>,
}

impl ArcUnion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        let mut u = Self::new();
        u.insert_interval(0.0, 1.0);
        u
    }

    /// Add the open ball of `radius` around `center` (arcs are stored
    /// half-open, which changes nothing measurable). A radius of 1/2 or more
    /// covers the circle; a radius that is zero, negative or NaN adds nothing.
    pub fn insert_arc(&mut self, center: f64, radius: f64) {
        if !(radius > 0.0) {
            return;
        }
        if radius >= 0.5 {
            self.insert_interval(0.0, 1.0);
            return;
        }
        let c = center.rem_euclid(1.0);
        let c = if c >= 1.0 { 0.0 } else { c };
        let (l, r) = (c - radius, c + radius);
        if l < 0.0 {
            self.insert_interval(l + 1.0, 1.0);
            self.insert_interval(0.0, r);
        } else if r > 1.0 {
            self.insert_interval(l, 1.0);
            self.insert_interval(0.0, r - 1.0);
        } else {
            self.insert_interval(l, r);
        }
    }

    /// [`insert_arc`](Self::insert_arc) at a certified point.
    pub fn insert_point(&mut self, center: CirclePoint, radius: f64) {
        self.insert_arc(center.value, radius);
    }

    /// Union with `[l, r)`, for `0 <= l <= r <= 1`.
    pub fn insert_interval(&mut self, l: f64, r: f64) {
        let (mut l, mut r) = (l.max(0.0), r.min(1.0));
        if !(l < r) {
            return;
        }
        if let Some((&Key(pl), &pr)) = self.arcs.range(..=Key(l)).next_back() {
            if pr >= l {
                if pr >= r {
                    return;
                }
                l = pl;
                self.arcs.remove(&Key(pl));
            }
        }
        while let Some((&Key(nl), &nr)) = self.arcs.range(Key(l)..).next() {
            if nl > r {
                break;
            }
            r = r.max(nr);
            self.arcs.remove(&Key(nl));
        }
        self.arcs.insert(Key(l), r);
    }

    /// Total length, summed with compensation.
    pub fn measure(&self) -> f64 {
        let mut s = CompensatedSum::default();
        for (&Key(l), &r) in &self.arcs {
            s.add(r - l);
        }
        s.value().clamp(0.0, 1.0)
    }

    pub fn contains(&self, s: f64) -> bool {
        let s = s.rem_euclid(1.0);
        self.arcs
            .range(..=Key(s))
            .next_back()
            .is_some_and(|(_, &r)| s < r)
    }

    /// Number of stored pieces; an arc through 0 counts twice.
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> Vec<(f64, f64)> {
        self.arcs.iter().map(|(&Key(l), &r)| (l, r)).collect()
    }
}

/// Summary of a union suitable for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcSummary {
    pub measure: f64,
    pub pieces: usize,
}

impl From<&ArcUnion> for ArcSummary {
    fn from(u: &ArcUnion) -> Self {
        ArcSummary {
            measure: u.measure(),
            pieces: u.len(),
        }
    }
}

/// Fraction of the `grid` cell centres `(i + 1/2)/grid` covered by any of
/// the balls `(center, radius)`, marked one ball at a time without merging.
///
/// Each endpoint is off by at most half a cell, so the result is within
/// `components / grid` of the exact measure.
pub fn rasterized_measure(balls: &[(f64, f64)], grid: usize) -> f64 {
    let g = grid as f64;
    let mut diff = vec![0i64; grid + 1];
    let mut mark = |l: f64, r: f64| {
        // cells with l <= (i + 1/2)/g < r
        let lo = (l * g - 0.5).ceil().max(0.0) as usize;
        let hi = ((r * g - 0.5).ceil().max(0.0) as usize).min(grid);
        if lo < hi {
            diff[lo] += 1;
            diff[hi] -= 1;
        }
    };
    for &(c, rad) in balls {
        if !(rad > 0.0) {
            continue;
        }
        if rad >= 0.5 {
            mark(0.0, 1.0);
            continue;
        }
        let c = c.rem_euclid(1.0);
        let (l, r) = (c - rad, c + rad);
        if l < 0.0 {
            mark(l + 1.0, 1.0);
            mark(0.0, r);
        } else if r > 1.0 {
            mark(l, 1.0);
            mark(0.0, r - 1.0);
        } else {
            mark(l, r);
        }
    }
    let (mut depth, mut covered) = (0i64, 0usize);
    for d in &diff[..grid] {
        depth += d;
        if depth > 0 {
            covered += 1;
        }
    }
    covered as f64 / g
}
