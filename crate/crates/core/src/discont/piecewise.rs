use serde::{Deserialize, Serialize};

use crate::error::{invalid, PnError, Result};
use crate::map::SelfMap;
use crate::vector::Vector;

/// Which piece owns an interior breakpoint: `Left` means the piece's left end
/// is closed, `Right` its right end. Domain endpoints always belong to their piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closed {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub from: f64,
    pub to: f64,
    pub closed: Closed,
    /// `[a, b]` for `x ↦ a·x + b`.
    pub affine: [f64; 2],
}

impl Piece {
    pub fn constant(from: f64, to: f64, closed: Closed, value: f64) -> Self {
        Self { from, to, closed, affine: [0.0, value] }
    }

    #[inline]
    pub fn at(&self, x: f64) -> f64 {
        let [a, b] = self.affine;
        if a == 0.0 {
            b
        } else {
            a * x + b
        }
    }
}

/// A piecewise-affine self-map of `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewise", into = "RawPiecewise")]
pub struct PiecewiseMap1D {
    lo: f64,
    hi: f64,
    pieces: Vec<Piece>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiecewise {
    domain: [f64; 2],
    pieces: Vec<Piece>,
}

impl TryFrom<RawPiecewise> for PiecewiseMap1D {
    type Error = PnError;
    fn try_from(raw: RawPiecewise) -> Result<Self> {
        PiecewiseMap1D::new(raw.domain[0], raw.domain[1], raw.pieces)
    }
}

impl From<PiecewiseMap1D> for RawPiecewise {
    fn from(m: PiecewiseMap1D) -> Self {
        RawPiecewise { domain: [m.lo, m.hi], pieces: m.pieces }
    }
}

/// One-sided limit images of a map at a point, plus the attained value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSet {
    pub values: Vec<Vector>,
    pub attained: Vector,
}

impl PiecewiseMap1D {
    pub fn new(lo: f64, hi: f64, pieces: Vec<Piece>) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return invalid(format!("domain [{lo}, {hi}] must be a finite interval with lo < hi"));
        }
        let (Some(first), Some(last)) = (pieces.first(), pieces.last()) else {
            return invalid("map needs at least one piece");
        };
        if first.from != lo || last.to != hi {
            return invalid(format!("pieces cover [{}, {}] but the domain is [{lo}, {hi}]", first.from, last.to));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !(p.from < p.to) {
                return invalid(format!("piece {i}: from {} must be < to {}", p.from, p.to));
            }
            if p.affine.iter().any(|c| !c.is_finite()) {
                return invalid(format!("piece {i}: affine coefficients must be finite"));
            }
            for x in [p.from, p.to] {
                let y = p.at(x);
                if !(lo <= y && y <= hi) {
                    return invalid(format!("piece {i}: image {y} at x = {x} leaves the domain [{lo}, {hi}]"));
                }
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if w[0].to != w[1].from {
                return invalid(format!("pieces {i} and {} do not meet: {} vs {}", i + 1, w[0].to, w[1].from));
            }
            let owners = (w[0].closed == Closed::Right) as u8 + (w[1].closed == Closed::Left) as u8;
            if owners != 1 {
                return invalid(format!(
                    "breakpoint {} must be owned by exactly one adjacent piece, found {owners}",
                    w[0].to
                ));
            }
        }
        Ok(Self { lo, hi, pieces })
    }

    /// Piecewise-constant map with the given interior breakpoints and values.
    pub fn step(lo: f64, hi: f64, breakpoints: &[f64], values: &[f64], closed: &[Closed]) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 || closed.len() != values.len() {
            return invalid("step map needs one value and one ownership flag per piece");
        }
        let mut ends = vec![lo];
        ends.extend_from_slice(breakpoints);
        ends.push(hi);
        let pieces = ends
            .windows(2)
            .zip(values.iter().zip(closed))
            .map(|(w, (&v, &c))| Piece::constant(w[0], w[1], c, v))
            .collect();
        Self::new(lo, hi, pieces)
    }

    /// Single affine piece `a·x + b` on `[lo, hi]`.
    pub fn affine(lo: f64, hi: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(lo, hi, vec![Piece { from: lo, to: hi, closed: Closed::Left, affine: [a, b] }])
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Interior breakpoints.
    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.pieces[..self.pieces.len() - 1].iter().map(|p| p.to)
    }

    fn owner(&self, x: f64) -> usize {
        // first piece whose right end is >= x
        let i = self.pieces.partition_point(|p| p.to < x).min(self.pieces.len() - 1);
        let p = &self.pieces[i];
        if x == p.to && i + 1 < self.pieces.len() && p.closed != Closed::Right {
            i + 1
        } else {
            i
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(self.lo <= x && x <= self.hi) {
            return invalid(format!("x = {x} outside the domain [{}, {}]", self.lo, self.hi));
        }
        Ok(self.value(x))
    }

    /// Evaluation at a point already known to lie in the domain.
    pub fn value(&self, x: f64) -> f64 {
        self.pieces[self.owner(x)].at(x)
    }

    /// `(f(x-), f(x+))`, each absent at the corresponding domain end.
    pub fn one_sided_limits(&self, x: f64) -> Result<(Option<f64>, Option<f64>)> {
        if !(self.lo <= x && x <= self.hi) {
            return invalid(format!("x = {x} outside the domain [{}, {}]", self.lo, self.hi));
        }
        let right_idx = self.pieces.partition_point(|p| p.to <= x).min(self.pieces.len() - 1);
        let left_idx = self.pieces.partition_point(|p| p.to < x).min(self.pieces.len() - 1);
        let left = (x > self.lo).then(|| self.pieces[left_idx].at(x));
        let right = (x < self.hi).then(|| self.pieces[right_idx].at(x));
        Ok((left, right))
    }

    /// `T_f(p)`: limits of `f(p_i)` along sequences `p_i → p` with `p_i ≠ p`.
    pub fn continuoufication(&self, p: f64) -> Result<LimitSet> {
        let (l, r) = self.one_sided_limits(p)?;
        let mut vals: Vec<f64> = l.into_iter().chain(r).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        Ok(LimitSet { values: vals.into_iter().map(Vector::scalar).collect(), attained: Vector::scalar(self.value(p)) })
    }

    /// Largest `|f(b) - q|` over interior breakpoints `b` and `q ∈ T_f(b)`.
    pub fn max_gap(&self) -> f64 {
        self.breakpoints()
            .map(|b| {
                let fb = self.value(b);
                let (l, r) = self.one_sided_limits(b).expect("breakpoints lie in the domain");
                l.into_iter().chain(r).map(|q| (fb - q).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Solutions of `a·x + b = x` lying in the closure of each piece.
    pub fn piece_fixed_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for p in &self.pieces {
            let [a, b] = p.affine;
            if a == 1.0 {
                if b == 0.0 {
                    out.push(p.from);
                }
                continue;
            }
            let x = b / (1.0 - a);
            if p.from <= x && x <= p.to {
                out.push(x);
            }
        }
        out
    }

    /// Largest absolute slope.
    pub fn max_slope(&self) -> f64 {
        self.pieces.iter().map(|p| p.affine[0].abs()).fold(0.0, f64::max)
    }
}

impl SelfMap for PiecewiseMap1D {
    fn dim(&self) -> usize {
        1
    }

    fn apply(&self, p: &Vector) -> Vector {
        Vector::scalar(self.value(p.coords()[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn jump_map() -> PiecewiseMap1D {
        PiecewiseMap1D::step(0.0, 1.0, &[0.5], &[0.6, 0.2], &[Closed::Left, Closed::Left]).unwrap()
    }

    fn scalars(s: &LimitSet) -> Vec<f64> {
        s.values.iter().map(|v| v.coords()[0]).collect()
    }

    #[test]
    fn continuoufication_examples() {
        let f = PiecewiseMap1D::affine(0.0, 1.0, -1.0, 1.0).unwrap();
        let s = f.continuoufication(0.5).unwrap();
        assert_eq!(scalars(&s), vec![0.5]);
        assert_eq!(s.attained.coords(), &[0.5]);

        let j = jump_map();
        let s = j.continuoufication(0.5).unwrap();
        assert_eq!(scalars(&s), vec![0.2, 0.6]);
        assert_eq!(s.attained.coords(), &[0.2]);
        assert_eq!(scalars(&j.continuoufication(0.25).unwrap()), vec![0.6]);
        assert!(j.continuoufication(1.5).is_err());
    }

    #[test]
    fn endpoints_have_one_sided_limits() {
        let f = PiecewiseMap1D::affine(0.0, 1.0, 0.5, 0.0).unwrap();
        assert_eq!(f.one_sided_limits(0.0).unwrap(), (None, Some(0.0)));
        assert_eq!(f.one_sided_limits(1.0).unwrap(), (Some(0.5), None));
    }

    #[test]
    fn ownership_decides_value() {
        let j = jump_map();
        assert_eq!(j.value(0.5), 0.2);
        let k = PiecewiseMap1D::step(0.0, 1.0, &[0.5], &[0.6, 0.2], &[Closed::Right, Closed::Right]).unwrap();
        assert_eq!(k.value(0.5), 0.6);
        assert_eq!(k.value(0.0), 0.6);
        assert_eq!(k.value(1.0), 0.2);
        assert_eq!(j.max_gap(), (0.2f64 - 0.6).abs());
    }

    #[test]
    fn validation() {
        // two owners
        assert!(PiecewiseMap1D::step(0.0, 1.0, &[0.5], &[0.6, 0.2], &[Closed::Right, Closed::Left]).is_err());
        // no owner
        assert!(PiecewiseMap1D::step(0.0, 1.0, &[0.5], &[0.6, 0.2], &[Closed::Left, Closed::Right]).is_err());
        // leaves the domain
        assert!(PiecewiseMap1D::affine(0.0, 1.0, 2.0, 0.0).is_err());
        // degenerate domain
        assert!(PiecewiseMap1D::affine(1.0, 1.0, 0.0, 1.0).is_err());
        // gap between pieces
        let pieces = vec![Piece::constant(0.0, 0.4, Closed::Left, 0.1), Piece::constant(0.5, 1.0, Closed::Left, 0.1)];
        assert!(PiecewiseMap1D::new(0.0, 1.0, pieces).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"domain":[0.0,1.0],"pieces":[{"from":0.0,"to":0.5,"closed":"left","affine":[0.0,0.6]},{"from":0.5,"to":1.0,"closed":"left","affine":[0.0,0.2]}]}"#;
        let m: PiecewiseMap1D = serde_json::from_str(text).unwrap();
        assert_eq!(m, jump_map());
        assert_eq!(serde_json::to_string(&m).unwrap(), text);
        let bad = text.replace("0.6]", "1.6]");
        assert!(serde_json::from_str::<PiecewiseMap1D>(&bad).is_err());
    }

    #[test]
    fn fixed_points_of_pieces() {
        let f = PiecewiseMap1D::affine(0.0, 1.0, 0.3, 0.123).unwrap();
        let fp = f.piece_fixed_points();
        assert_eq!(fp.len(), 1);
        assert!((f.value(fp[0]) - fp[0]).abs() < 1e-15);
        assert!(jump_map().piece_fixed_points().is_empty());
    }
}
