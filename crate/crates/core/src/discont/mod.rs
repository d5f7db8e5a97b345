//! Discontinuous self-maps, their continuoufication `T_f`, and the probabilistic
//! measure of discontinuity `ψ_f`.
//!
//! On finite grids the inner infimum of `ψ_f` ranges over `N_p(δ)` *without* `p`
//! itself: keeping `p` would pin every estimate to `ε_0` because `ν_θ = ε_0`.

mod hull;
mod piecewise;
mod psi;
mod sampled;

pub use hull::{convex_hull, Hull};
pub use piecewise::{Closed, LimitSet, Piece, PiecewiseMap1D};
pub use psi::{
    default_t_grid, psi_agreement_check, psi_estimate, psi_exact, EstimatorSchedule, PsiAgreement, PsiAtT, PsiEstimate,
    PsiLevel,
};
pub(crate) use sampled::grid_points;
pub use sampled::{HalfPlaneMap, SampledMap};
