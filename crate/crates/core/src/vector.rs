use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A point of the finite-dimensional real vector space underlying a PN space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return invalid("vector must have at least one coordinate");
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return invalid("vector coordinates must be finite");
        }
        Ok(Self(coords))
    }

    pub fn scalar(x: f64) -> Self {
        Self(vec![x])
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    /// Euclidean norm. In one dimension this is exactly `|x|`.
    pub fn norm(&self) -> f64 {
        if self.0.len() == 1 {
            return self.0[0].abs();
        }
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.iter().map(|x| x * c).collect())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    /// Total order used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn add(self, rhs: &'a Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn sub(self, rhs: &'a Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

/// Axis-aligned box `[lo, hi]` used as the compact convex domain of sampled maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lo: Vector,
    pub hi: Vector,
}

impl BoxDomain {
    pub fn new(lo: Vector, hi: Vector) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return invalid("box corners have different dimensions");
        }
        if lo.coords().iter().zip(hi.coords()).any(|(a, b)| !(a < b)) {
            return invalid("box must have lo < hi on every axis");
        }
        Ok(Self { lo, hi })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(Vector::new(vec![lo])?, Vector::new(vec![hi])?)
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(Vector::new(vec![lo; dim])?, Vector::new(vec![hi; dim])?)
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn contains(&self, p: &Vector) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(self.lo.coords().iter().zip(self.hi.coords()))
                .all(|(x, (a, b))| *a <= *x && *x <= *b)
    }

    /// Nearest point of the box.
    pub fn clamp(&self, p: &Vector) -> Vector {
        Vector(
            p.coords()
                .iter()
                .zip(self.lo.coords().iter().zip(self.hi.coords()))
                .map(|(x, (a, b))| x.clamp(*a, *b))
                .collect(),
        )
    }
}
