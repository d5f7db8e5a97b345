use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::map::SelfMap;
use crate::vector::{BoxDomain, Vector};

/// A map sampled on the full lattice of a box.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMap {
    domain: BoxDomain,
    counts: Vec<usize>,
    steps: Vec<f64>,
    points: Vec<Vector>,
    images: Vec<Vector>,
}

impl SampledMap {
    /// Samples `map` with spacing as close to `h` as the box allows on each axis.
    pub fn sample(map: &dyn SelfMap, domain: &BoxDomain, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return invalid(format!("grid resolution {h} must be positive"));
        }
        if map.dim() != domain.dim() {
            return invalid("map and domain dimensions differ");
        }
        let widths: Vec<f64> = domain.lo.coords().iter().zip(domain.hi.coords()).map(|(a, b)| b - a).collect();
        let counts: Vec<usize> = widths.iter().map(|w| (w / h).round().max(1.0) as usize + 1).collect();
        let total = counts.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
        match total {
            Some(n) if n <= 50_000_000 => {}
            _ => return invalid(format!("grid with resolution {h} is too large")),
        }
        let steps: Vec<f64> = widths.iter().zip(&counts).map(|(w, n)| w / (n - 1) as f64).collect();
        let points = grid_points(domain, &counts);
        let images: Vec<Vector> = points.iter().map(|p| map.apply(p)).collect();
        if let Some((p, fp)) = points.iter().zip(&images).find(|(_, fp)| !domain.contains(fp)) {
            return invalid(format!("image {fp} of {p} leaves the domain box"));
        }
        Ok(Self { domain: domain.clone(), counts, steps, points, images })
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn images(&self) -> &[Vector] {
        &self.images
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Largest lattice spacing over the axes.
    pub fn resolution(&self) -> f64 {
        self.steps.iter().copied().fold(0.0, f64::max)
    }

    /// Indices of lattice points other than `idx` whose offset along each axis
    /// is at most `radius` (a superset of the Euclidean ball).
    pub fn window(&self, idx: usize, radius: f64) -> Vec<usize> {
        let d = self.counts.len();
        let mut pos = vec![0usize; d];
        let mut rem = idx;
        for k in (0..d).rev() {
            pos[k] = rem % self.counts[k];
            rem /= self.counts[k];
        }
        let ranges: Vec<(usize, usize)> = (0..d)
            .map(|k| {
                let n = self.counts[k];
                let m = if radius.is_finite() { ((radius / self.steps[k]).floor() as usize).min(n - 1) } else { n - 1 };
                (pos[k].saturating_sub(m), (pos[k] + m).min(n - 1))
            })
            .collect();
        let mut out = Vec::new();
        let mut cur: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        loop {
            let flat = cur.iter().zip(&self.counts).fold(0usize, |acc, (&c, &n)| acc * n + c);
            if flat != idx {
                out.push(flat);
            }
            let mut k = d;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < ranges[k].1 {
                    cur[k] += 1;
                    break;
                }
                cur[k] = ranges[k].0;
            }
        }
    }
}

/// Full tensor grid, first axis varying slowest; the last point on each axis is exactly `hi`.
pub(crate) fn grid_points(domain: &BoxDomain, counts: &[usize]) -> Vec<Vector> {
    let d = counts.len();
    let axis = |k: usize, i: usize| {
        let (a, b) = (domain.lo.coords()[k], domain.hi.coords()[k]);
        let n = counts[k];
        if i + 1 == n {
            b
        } else {
            a + (b - a) * i as f64 / (n - 1) as f64
        }
    };
    let total: usize = counts.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut c = vec![0.0; d];
            for k in (0..d).rev() {
                c[k] = axis(k, idx % counts[k]);
                idx /= counts[k];
            }
            Vector::new(c).expect("grid coordinates are finite")
        })
        .collect()
}

/// Two constant values separated by the hyperplane `normal·p = threshold`:
/// `low` where `normal·p < threshold`, `high` elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfPlaneMap {
    pub normal: Vector,
    pub threshold: f64,
    pub low: Vector,
    pub high: Vector,
}

impl HalfPlaneMap {
    pub fn new(normal: Vector, threshold: f64, low: Vector, high: Vector) -> Result<Self> {
        if normal.dim() != low.dim() || low.dim() != high.dim() {
            return invalid("half-plane map components differ in dimension");
        }
        if normal.is_zero() || !threshold.is_finite() {
            return invalid("half-plane normal must be nonzero and threshold finite");
        }
        Ok(Self { normal, threshold, low, high })
    }

    /// Size of the jump across the separating hyperplane.
    pub fn jump(&self) -> f64 {
        self.low.distance(&self.high)
    }
}

impl SelfMap for HalfPlaneMap {
    fn dim(&self) -> usize {
        self.normal.dim()
    }

    fn apply(&self, p: &Vector) -> Vector {
        let s: f64 = self.normal.coords().iter().zip(p.coords()).map(|(a, b)| a * b).sum();
        if s < self.threshold {
            self.low.clone()
        } else {
            self.high.clone()
        }
    }
}
