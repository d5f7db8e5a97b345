//! Distance distribution functions represented exactly as finite step functions.
//!
//! A [`Ddf`] is stored as strictly increasing jump locations together with the
//! cumulative level reached just after each jump. Evaluation is left-continuous:
//! `F(x)` is the total mass located strictly below `x`. Whatever mass is not
//! placed at a finite location sits at `+∞`, so `F(+∞) = 1` always holds.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, PnError, Result};

/// Jump locations closer than this are merged into one knot.
pub const KNOT_MERGE_TOL: f64 = 1e-12;
/// Slack allowed when comparing two d.d.f. values pointwise.
pub const VALUE_TOL: f64 = 1e-12;
const MASS_TOL: f64 = 1e-9;
const SIBLEY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Ddf {
    locs: Vec<f64>,
    levels: Vec<f64>,
}

impl Ddf {
    /// Builds a d.d.f. from `(location, mass)` pairs given in ascending location order.
    pub fn from_jumps(jumps: &[(f64, f64)]) -> Result<Self> {
        let mut locs: Vec<f64> = Vec::with_capacity(jumps.len());
        let mut levels: Vec<f64> = Vec::with_capacity(jumps.len());
        let mut total = 0.0;
        for (i, &(loc, mass)) in jumps.iter().enumerate() {
            if !loc.is_finite() || loc < 0.0 {
                return invalid(format!("jump {i}: location {loc} must be finite and >= 0"));
            }
            if !mass.is_finite() || mass <= 0.0 {
                return invalid(format!("jump {i}: mass {mass} must be finite and > 0"));
            }
            total += mass;
            if total > 1.0 + MASS_TOL {
                return invalid(format!("jump masses sum to {total} > 1"));
            }
            let level = total.min(1.0);
            match locs.last() {
                Some(&prev) if loc < prev - KNOT_MERGE_TOL => {
                    return invalid(format!("jump {i}: location {loc} is below the previous location {prev}"));
                }
                Some(&prev) if loc - prev < KNOT_MERGE_TOL => {
                    *levels.last_mut().unwrap() = level;
                }
                _ => {
                    locs.push(loc);
                    levels.push(level);
                }
            }
        }
        Ok(Self { locs, levels })
    }

    /// Builds a d.d.f. from knots paired with the level reached just after each knot.
    ///
    /// Knots must be ascending. Entries that do not raise the level are dropped.
    pub(crate) fn from_levels<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut locs: Vec<f64> = Vec::new();
        let mut levels: Vec<f64> = Vec::new();
        let mut prev_level = 0.0;
        let mut prev_loc = f64::NEG_INFINITY;
        for (loc, level) in points {
            if loc < prev_loc {
                return Err(PnError::Internal(format!("knots out of order at {loc}")));
            }
            prev_loc = loc;
            let level = level.min(1.0);
            if level < prev_level - VALUE_TOL {
                return Err(PnError::Internal(format!("step levels decrease at {loc}: {prev_level} -> {level}")));
            }
            if level <= prev_level {
                continue;
            }
            prev_level = level;
            match locs.last() {
                Some(&last) if loc - last < KNOT_MERGE_TOL => *levels.last_mut().unwrap() = level,
                _ => {
                    locs.push(loc);
                    levels.push(level);
                }
            }
        }
        Ok(Self { locs, levels })
    }

    /// `ε_a`: the unit step located at `a`.
    pub fn epsilon(a: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return invalid(format!("epsilon location {a} must be finite and >= 0"));
        }
        Ok(Self { locs: vec![a], levels: vec![1.0] })
    }

    /// `ε_0`, the maximal element of the d.d.f. order.
    pub fn identity() -> Self {
        Self { locs: vec![0.0], levels: vec![1.0] }
    }

    /// The minimal d.d.f.: no finite mass at all.
    pub fn bottom() -> Self {
        Self { locs: Vec::new(), levels: Vec::new() }
    }

    /// Step approximation of a continuous d.d.f. given by its quantile function:
    /// `k` jumps of mass `1/k` at the mid-quantiles `(i - 1/2) / k`.
    pub fn from_quantile_fn(k: usize, quantile: impl Fn(f64) -> f64) -> Result<Self> {
        if k == 0 {
            return invalid("quantile sampling needs at least one jump");
        }
        let mass = 1.0 / k as f64;
        let mut jumps: Vec<(f64, f64)> = (0..k).map(|i| (quantile((i as f64 + 0.5) * mass), mass)).collect();
        if jumps.iter().any(|(x, _)| !x.is_finite() || *x < 0.0) {
            return invalid("quantile function produced a negative or non-finite location");
        }
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self::from_jumps(&jumps)
    }

    pub fn locations(&self) -> &[f64] {
        &self.locs
    }

    /// Cumulative level just after each jump location.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.locs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locs.is_empty()
    }

    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.locs.iter().enumerate().map(move |(i, &loc)| {
            let prev = if i == 0 { 0.0 } else { self.levels[i - 1] };
            (loc, self.levels[i] - prev)
        })
    }

    pub fn finite_mass(&self) -> f64 {
        self.levels.last().copied().unwrap_or(0.0)
    }

    /// If this is `ε_a`, returns `a`.
    pub fn as_epsilon(&self) -> Option<f64> {
        match (self.locs.as_slice(), self.levels.as_slice()) {
            ([a], [l]) if *l == 1.0 => Some(*a),
            _ => None,
        }
    }

    /// Checked evaluation on `[0, +∞]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return invalid(format!("d.d.f. argument {x} must be >= 0"));
        }
        Ok(self.value(x))
    }

    /// Left-continuous value; arguments `<= 0` give 0 and `+∞` gives 1.
    pub fn value(&self, x: f64) -> f64 {
        if x == f64::INFINITY {
            return 1.0;
        }
        let n = self.locs.partition_point(|&l| l < x);
        if n == 0 {
            0.0
        } else {
            self.levels[n - 1]
        }
    }

    /// Right limit `F(x+)`: mass located at or below `x`.
    pub fn value_right(&self, x: f64) -> f64 {
        let n = self.locs.partition_point(|&l| l <= x);
        if n == 0 {
            0.0
        } else {
            self.levels[n - 1]
        }
    }

    /// `x ↦ F(x / c)`, i.e. every jump location multiplied by `c > 0`.
    pub fn scale_locations(&self, c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return invalid(format!("location scale {c} must be finite and > 0"));
        }
        let points: Vec<(f64, f64)> = self.locs.iter().zip(&self.levels).map(|(l, v)| (l * c, *v)).collect();
        Self::from_levels(points)
    }

    /// Largest value of `self(x) - other(x)` and a point where it is attained.
    ///
    /// Knots of both functions closer than [`KNOT_MERGE_TOL`] are treated as one
    /// knot, so the comparison is taken at one point strictly inside every gap
    /// between consecutive knot clusters and beyond the last one.
    pub fn max_excess(&self, other: &Ddf) -> (f64, f64) {
        let mut best = (0.0, f64::NEG_INFINITY);
        for x in comparison_points(&[self, other]) {
            let d = self.value(x) - other.value(x);
            if d > best.1 {
                best = (x, d);
            }
        }
        best
    }

    /// Pointwise order `self ≤ other`.
    pub fn leq(&self, other: &Ddf) -> bool {
        self.max_excess(other).1 <= VALUE_TOL
    }

    /// Modified Lévy (Sibley) distance, by bisection to absolute tolerance `1e-9`.
    pub fn sibley_distance(&self, other: &Ddf) -> f64 {
        if self == other {
            return 0.0;
        }
        let ok = |h: f64| shifted_below(self, other, h) && shifted_below(other, self, h);
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while hi - lo > SIBLEY_TOL {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// `ddf_leq(F, G)`.
pub fn ddf_leq(f: &Ddf, g: &Ddf) -> bool {
    f.leq(g)
}

/// `x ↦ l⁻[inf_i F_i](x)` as a step d.d.f.
///
/// The pointwise infimum of finitely many left-continuous step functions is
/// again a left-continuous step function, so the left limit only fixes the
/// value at 0, which is 0 for every member.
pub fn left_limit_of_infimum(family: &[Ddf]) -> Result<Ddf> {
    if family.is_empty() {
        return invalid("infimum over an empty family of d.d.f.s");
    }
    if family.len() == 1 {
        return Ok(family[0].clone());
    }
    let refs: Vec<&Ddf> = family.iter().collect();
    let clusters = knot_clusters(&refs);
    let points = clusters.iter().map(|&(first, last)| {
        let level = family.iter().map(|f| f.value_right(last)).fold(1.0, f64::min);
        (first, level)
    });
    Ddf::from_levels(points)
}

/// Sorted union of all knots of the given functions, grouped into clusters of
/// knots closer than [`KNOT_MERGE_TOL`]; each cluster is `(first, last)`.
pub(crate) fn knot_clusters(fs: &[&Ddf]) -> Vec<(f64, f64)> {
    let mut all: Vec<f64> = fs.iter().flat_map(|f| f.locs.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    let mut clusters: Vec<(f64, f64)> = Vec::new();
    for x in all {
        match clusters.last_mut() {
            Some(c) if x - c.1 < KNOT_MERGE_TOL => c.1 = x,
            _ => clusters.push((x, x)),
        }
    }
    clusters
}

/// Points at which two step functions must be compared: one inside each gap
/// between knot clusters (0 counts as a knot) and one past the last cluster.
pub(crate) fn comparison_points(fs: &[&Ddf]) -> Vec<f64> {
    let mut clusters = knot_clusters(fs);
    if clusters.first().is_none_or(|c| c.0 > 0.0) {
        clusters.insert(0, (0.0, 0.0));
    }
    let mut pts: Vec<f64> = clusters.windows(2).map(|w| 0.5 * (w[0].1 + w[1].0)).collect();
    let last = clusters.last().unwrap().1;
    pts.push(last + 1.0 + last.abs());
    pts
}

// sup_{0 < x < 1/h} a(x) - b(x + h) <= h
fn shifted_below(a: &Ddf, b: &Ddf, h: f64) -> bool {
    let end = 1.0 / h;
    let mut cuts: Vec<f64> = vec![0.0, end];
    cuts.extend(a.locs.iter().copied().filter(|&x| x > 0.0 && x < end));
    cuts.extend(b.locs.iter().map(|x| x - h).filter(|&x| x > 0.0 && x < end));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let holds = |x: f64| a.value(x) <= b.value(x + h) + h;
    for w in cuts.windows(2) {
        if w[0] > 0.0 && !holds(w[0]) {
            return false;
        }
        if !holds(0.5 * (w[0] + w[1])) {
            return false;
        }
    }
    true
}

impl fmt::Display for Ddf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.as_epsilon() {
            return write!(f, "ε_{a}");
        }
        write!(f, "[")?;
        for (i, (loc, mass)) in self.jumps().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({loc}, {mass})")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Ddf {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.jumps().map(|(l, m)| [l, m]))
    }
}

impl<'de> Deserialize<'de> for Ddf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(f64, f64)> = Vec::deserialize(deserializer)?;
        Ddf::from_jumps(&pairs).map_err(D::Error::custom)
    }
}
