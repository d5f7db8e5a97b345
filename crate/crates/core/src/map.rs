//! Self-maps that can be probed pointwise.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::vector::Vector;

pub trait SelfMap: Sync {
    fn dim(&self) -> usize;

    fn apply(&self, p: &Vector) -> Vector;

    /// A Lipschitz constant, when one is known.
    fn lipschitz(&self) -> Option<f64> {
        None
    }
}

/// `p ↦ offset + scale·(p - center)`. Covers constant maps (`scale = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub scale: f64,
    pub center: Vector,
    pub offset: Vector,
}

impl AffineMap {
    pub fn new(scale: f64, center: Vector, offset: Vector) -> Result<Self> {
        if center.dim() != offset.dim() {
            return invalid("affine map center and offset differ in dimension");
        }
        if !scale.is_finite() {
            return invalid("affine map scale must be finite");
        }
        Ok(Self { scale, center, offset })
    }

    pub fn constant(value: Vector) -> Self {
        Self { scale: 0.0, center: Vector::zeros(value.dim()), offset: value }
    }

    pub fn identity(dim: usize) -> Self {
        Self { scale: 1.0, center: Vector::zeros(dim), offset: Vector::zeros(dim) }
    }
}

impl SelfMap for AffineMap {
    fn dim(&self) -> usize {
        self.offset.dim()
    }

    fn apply(&self, p: &Vector) -> Vector {
        if self.scale == 0.0 {
            return self.offset.clone();
        }
        &self.offset + &(p - &self.center).scale(self.scale)
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.scale.abs())
    }
}

/// Wraps a closure as a [`SelfMap`].
pub struct FnMap<F> {
    dim: usize,
    f: F,
    lipschitz: Option<f64>,
}

impl<F: Fn(&Vector) -> Vector + Sync> FnMap<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f, lipschitz: None }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }
}

impl<F: Fn(&Vector) -> Vector + Sync> SelfMap for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, p: &Vector) -> Vector {
        (self.f)(p)
    }

    fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }
}
