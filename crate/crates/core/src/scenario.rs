//! Seeded families of random piecewise self-maps of an interval.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::discont::{Closed, Piece, PiecewiseMap1D};
use crate::error::{invalid, Result};
use crate::sampling::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// Constant value on each piece.
    Constant,
    /// Affine on each piece, with end values drawn independently.
    Affine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFamily {
    pub count: usize,
    /// Inclusive range for the number of pieces.
    pub pieces: [usize; 2],
    /// Range piece values are drawn from; values are clamped into the domain.
    pub values: [f64; 2],
    pub domain: [f64; 2],
    pub kind: MapKind,
    pub min_separation: f64,
}

impl Default for ScenarioFamily {
    fn default() -> Self {
        Self {
            count: 100,
            pieces: [1, 5],
            values: [0.0, 1.0],
            domain: [0.0, 1.0],
            kind: MapKind::Constant,
            min_separation: 0.01,
        }
    }
}

const MAX_ATTEMPTS: usize = 10_000;

impl ScenarioFamily {
    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.domain;
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return invalid(format!("scenario domain [{lo}, {hi}] must satisfy lo < hi"));
        }
        let [pmin, pmax] = self.pieces;
        if pmin == 0 || pmin > pmax {
            return invalid(format!("pieces range [{pmin}, {pmax}] must satisfy 1 <= min <= max"));
        }
        let [vlo, vhi] = self.values;
        if !vlo.is_finite() || !vhi.is_finite() || vlo > vhi {
            return invalid(format!("value range [{vlo}, {vhi}] is empty"));
        }
        if !(self.min_separation > 0.0) {
            return invalid("min_separation must be positive");
        }
        if pmax as f64 * self.min_separation >= hi - lo {
            return invalid(format!(
                "{pmax} pieces cannot be separated by {} inside [{lo}, {hi}]",
                self.min_separation
            ));
        }
        Ok(())
    }
}

/// Draws `family.count` maps. Breakpoints are uniform in the domain, sorted, and
/// redrawn until consecutive ones (and the domain ends) are `min_separation` apart.
pub fn generate_scenarios(family: &ScenarioFamily, seed: u64) -> Result<Vec<PiecewiseMap1D>> {
    family.validate()?;
    let [lo, hi] = family.domain;
    let [vlo, vhi] = family.values;
    let mut r = rng(seed);
    let draw_value = |r: &mut rand_chacha::ChaCha8Rng| {
        let v = if vlo == vhi { vlo } else { r.gen_range(vlo..=vhi) };
        v.clamp(lo, hi)
    };
    let mut maps = Vec::with_capacity(family.count);
    for _ in 0..family.count {
        let n = r.gen_range(family.pieces[0]..=family.pieces[1]);
        let mut breaks = Vec::new();
        let mut ok = n == 1;
        for _ in 0..MAX_ATTEMPTS {
            if ok {
                break;
            }
            breaks = (0..n - 1).map(|_| r.gen_range(lo..hi)).collect::<Vec<f64>>();
            breaks.sort_by(f64::total_cmp);
            let mut ends = vec![lo];
            ends.extend_from_slice(&breaks);
            ends.push(hi);
            ok = ends.windows(2).all(|w| w[1] - w[0] >= family.min_separation);
        }
        if !ok {
            return invalid(format!(
                "could not place {n} pieces with separation {} after {MAX_ATTEMPTS} draws",
                family.min_separation
            ));
        }
        let mut ends = vec![lo];
        ends.extend_from_slice(&breaks);
        ends.push(hi);
        let pieces: Vec<Piece> = ends
            .windows(2)
            .map(|w| {
                let closed = if r.gen_bool(0.5) { Closed::Left } else { Closed::Right };
                let affine = match family.kind {
                    MapKind::Constant => [0.0, draw_value(&mut r)],
                    MapKind::Affine => {
                        let (ya, yb) = (draw_value(&mut r), draw_value(&mut r));
                        let a = (yb - ya) / (w[1] - w[0]);
                        [a, ya - a * w[0]]
                    }
                };
                Piece { from: w[0], to: w[1], closed, affine }
            })
            .collect();
        maps.push(fix_ownership(lo, hi, pieces)?);
    }
    Ok(maps)
}

// a piece owns one end, so exactly one owner per breakpoint forces every piece
// to share the side drawn for the first
fn fix_ownership(lo: f64, hi: f64, mut pieces: Vec<Piece>) -> Result<PiecewiseMap1D> {
    let side = pieces[0].closed;
    for p in &mut pieces {
        p.closed = side;
    }
    // affine pieces may overshoot by rounding at their ends
    for p in &mut pieces {
        let (ya, yb) = (p.at(p.from), p.at(p.to));
        if !(lo <= ya.min(yb) && ya.max(yb) <= hi) {
            let (ya, yb) = (ya.clamp(lo, hi), yb.clamp(lo, hi));
            let a = (yb - ya) / (p.to - p.from);
            p.affine = [a, ya - a * p.from];
            if !(lo <= p.at(p.from) && p.at(p.to) <= hi && lo <= p.at(p.to) && p.at(p.from) <= hi) {
                p.affine = [0.0, ya];
            }
        }
    }
    PiecewiseMap1D::new(lo, hi, pieces)
}
