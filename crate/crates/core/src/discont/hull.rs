use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::vector::Vector;

/// Convex hull of a finite set in one or two dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hull {
    Interval([f64; 2]),
    /// Counter-clockwise vertices without collinear points. Degenerate hulls
    /// have one or two vertices.
    Polygon(Vec<[f64; 2]>),
}

pub fn convex_hull(values: &[Vector]) -> Result<Hull> {
    let Some(first) = values.first() else {
        return invalid("convex hull of an empty set");
    };
    if values.iter().any(|v| v.dim() != first.dim()) {
        return invalid("convex hull of points with mixed dimensions");
    }
    match first.dim() {
        1 => {
            let xs = values.iter().map(|v| v.coords()[0]);
            let lo = xs.clone().fold(f64::INFINITY, f64::min);
            let hi = xs.fold(f64::NEG_INFINITY, f64::max);
            Ok(Hull::Interval([lo, hi]))
        }
        2 => {
            let pts: Vec<[f64; 2]> = values.iter().map(|v| [v.coords()[0], v.coords()[1]]).collect();
            Ok(Hull::Polygon(monotone_chain(pts)))
        }
        d => invalid(format!("convex hulls are supported in 1 and 2 dimensions, got {d}")),
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn monotone_chain(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

impl Hull {
    /// Euclidean distance from `p` to the hull (0 inside).
    pub fn distance(&self, p: &Vector) -> f64 {
        match self {
            Hull::Interval([lo, hi]) => {
                let x = p.coords()[0];
                (lo - x).max(x - hi).max(0.0)
            }
            Hull::Polygon(vs) => {
                let q = [p.coords()[0], p.coords()[1]];
                match vs.len() {
                    0 => f64::INFINITY,
                    1 => dist(q, vs[0]),
                    2 => segment_distance(q, vs[0], vs[1]),
                    n => {
                        let inside = (0..n).all(|i| cross(vs[i], vs[(i + 1) % n], q) >= 0.0);
                        if inside {
                            0.0
                        } else {
                            (0..n).map(|i| segment_distance(q, vs[i], vs[(i + 1) % n])).fold(f64::INFINITY, f64::min)
                        }
                    }
                }
            }
        }
    }

    pub fn contains(&self, p: &Vector) -> bool {
        self.distance(p) == 0.0
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn segment_distance(q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(q, a);
    }
    let s = (((q[0] - a[0]) * ab[0] + (q[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    dist(q, [a[0] + s * ab[0], a[1] + s * ab[1]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn interval_hulls() {
        assert_eq!(convex_hull(&[v(&[0.6]), v(&[0.2])]).unwrap(), Hull::Interval([0.2, 0.6]));
        let h = convex_hull(&[v(&[0.5])]).unwrap();
        assert_eq!(h, Hull::Interval([0.5, 0.5]));
        assert!(h.contains(&v(&[0.5])));
        assert_eq!(Hull::Interval([0.2, 0.6]).distance(&v(&[0.7])), 0.7 - 0.6);
        assert!(convex_hull(&[]).is_err());
    }

    #[test]
    fn polygon_drops_interior_points() {
        let h = convex_hull(&[v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[0.2, 0.2])]).unwrap();
        assert_eq!(h, Hull::Polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]));
        assert!(h.contains(&v(&[0.2, 0.2])));
        assert!((h.distance(&v(&[1.0, 1.0])) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_polygons() {
        let seg = convex_hull(&[v(&[0.0, 0.0]), v(&[1.0, 1.0]), v(&[0.5, 0.5])]).unwrap();
        assert_eq!(seg, Hull::Polygon(vec![[0.0, 0.0], [1.0, 1.0]]));
        assert!(seg.contains(&v(&[0.25, 0.25])));
        assert!(convex_hull(&[v(&[0.0, 0.0, 0.0])]).is_err());
    }
}
