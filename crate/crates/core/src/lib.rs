//! Executable probabilistic normed spaces: exact algebra on step distance
//! distribution functions, t-norms and triangle functions, PN-space axiom
//! checks, the probabilistic measure of discontinuity of a self-map, and
//! numerical searches for approximate fixed points of discontinuous maps.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ddf;
pub mod discont;
pub mod error;
pub mod fixpoint;
pub mod map;
pub mod neighborhoods;
pub mod sampling;
pub mod scenario;
pub mod space;
pub mod tnorm;
pub mod vector;

pub use ddf::{ddf_leq, left_limit_of_infimum, Ddf};
pub use error::{PnError, Result};
pub use map::{AffineMap, FnMap, SelfMap};
pub use space::PnSpace;
pub use tnorm::{tau_apply, TNorm, TriangleFn};
pub use vector::{BoxDomain, Vector};
