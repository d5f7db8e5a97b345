//! Strong neighborhoods, the probabilistic diameter `R_A`, and a semi-decision
//! procedure for strong t-continuity.
//!
//! `R_A` follows its defining formula literally: it is the left limit of
//! `x ↦ inf_{p∈A} ν_p(x)`, a radius about the origin rather than a pairwise
//! diameter of `A`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ddf::{left_limit_of_infimum, Ddf};
use crate::discont::grid_points;
use crate::error::{invalid, PnError, Result};
use crate::map::SelfMap;
use crate::space::PnSpace;
use crate::tnorm::TNorm;
use crate::vector::{BoxDomain, Vector};

/// A finite nonempty set of points, deduplicated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vector>", into = "Vec<Vector>")]
pub struct PointSet {
    points: Vec<Vector>,
}

impl PointSet {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return invalid("point set is empty");
        };
        let dim = first.dim();
        if points.iter().any(|p| p.dim() != dim) {
            return invalid("point set mixes dimensions");
        }
        let mut unique: Vec<Vector> = Vec::with_capacity(points.len());
        for p in points {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        Ok(Self { points: unique })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }
}

impl TryFrom<Vec<Vector>> for PointSet {
    type Error = PnError;
    fn try_from(v: Vec<Vector>) -> Result<Self> {
        PointSet::new(v)
    }
}

impl From<PointSet> for Vec<Vector> {
    fn from(s: PointSet) -> Self {
        s.points
    }
}

/// `q ∈ N_p(t)`, i.e. `ν_{p-q}(t) > 1 - t`.
pub fn in_strong_neighborhood(space: &PnSpace, p: &Vector, t: f64, q: &Vector) -> Result<bool> {
    if !(t > 0.0) {
        return invalid(format!("neighborhood parameter t = {t} must be > 0"));
    }
    Ok(space.prob_norm(&(p - q))?.value(t) > 1.0 - t)
}

/// `R_A`.
pub fn prob_diameter(space: &PnSpace, a: &[Vector]) -> Result<Ddf> {
    if a.is_empty() {
        return invalid("probabilistic diameter of an empty set");
    }
    let family = a.iter().map(|p| space.prob_norm(p)).collect::<Result<Vec<_>>>()?;
    left_limit_of_infimum(&family)
}

/// A uniform lattice filling a box, used to stand in for neighborhoods.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeLattice {
    domain: BoxDomain,
    per_axis: usize,
    points: Vec<Vector>,
}

impl ProbeLattice {
    /// Roughly `budget` points: `⌊budget^{1/d}⌋` (at least 2) per axis.
    pub fn uniform(domain: BoxDomain, budget: usize) -> Result<Self> {
        let d = domain.dim();
        let mut per_axis = (budget as f64).powf(1.0 / d as f64).floor() as usize;
        while (per_axis + 1).checked_pow(d as u32).is_some_and(|n| n <= budget) {
            per_axis += 1;
        }
        if per_axis < 2 {
            return invalid(format!("probe budget {budget} too small for dimension {d}"));
        }
        let points = grid_points(&domain, &vec![per_axis; d]);
        Ok(Self { domain, per_axis, points })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// Every point of the box lies within this distance of some lattice point.
    pub fn covering_radius(&self) -> f64 {
        let steps = self
            .domain
            .lo
            .coords()
            .iter()
            .zip(self.domain.hi.coords())
            .map(|(a, b)| (b - a) / (self.per_axis - 1) as f64);
        0.5 * steps.map(|s| s * s).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointWitness {
    pub p: Vector,
    pub witness_tprime: Option<f64>,
}

/// Outcome of [`strong_t_continuity_test`]. A missing witness means
/// "inconclusive", not "discontinuous".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub t: f64,
    pub points: Vec<PointWitness>,
    pub pass: bool,
}

/// `{t·2^{-k} : k = 0..=20}`.
pub fn default_tprime_schedule(t: f64) -> Vec<f64> {
    (0..=20).map(|k| t * 0.5_f64.powi(k)).collect()
}

/// Searches, for each sample point `p`, the first `t′` in the schedule with
/// `R_{f(N_p(t′))}(t) > 1 - t`, where the neighborhood is represented by its
/// lattice points plus `p`.
///
/// In a space with generator `ε_g` and a map with known Lipschitz constant `L`,
/// a lattice witness is accepted only if it survives the bound
/// `g·(max ‖f(q)‖ + L·ρ) < t`, the maximum running over lattice points within
/// `r + ρ` of `p` (`r` the neighborhood radius, `ρ` the lattice covering radius).
/// That bound covers every point of `N_p(t′)` inside the box.
pub fn strong_t_continuity_test(
    space: &PnSpace,
    f: &dyn SelfMap,
    domain_sample: &PointSet,
    t: f64,
    tprime_schedule: &[f64],
    lattice: &ProbeLattice,
) -> Result<ContinuityReport> {
    if !(t > 0.0) {
        return invalid(format!("t = {t} must be > 0"));
    }
    if tprime_schedule.is_empty() {
        return invalid("t' schedule is empty");
    }
    if let Some(s) = tprime_schedule.iter().find(|s| !(**s > 0.0)) {
        return invalid(format!("t' = {s} must be > 0"));
    }
    if domain_sample.dim() != space.dimension() || lattice.domain().dim() != space.dimension() {
        return invalid("sample, lattice and space dimensions differ");
    }
    let images: Vec<Vector> = lattice.points().par_iter().map(|q| f.apply(q)).collect();
    let rho = lattice.covering_radius();

    let witness_for = |p: &Vector| -> Result<Option<f64>> {
        let fp = f.apply(p);
        for &tp in tprime_schedule {
            let mut members: Vec<Vector> = vec![fp.clone()];
            for (q, fq) in lattice.points().iter().zip(&images) {
                if in_strong_neighborhood(space, p, tp, q)? {
                    members.push(fq.clone());
                }
            }
            let r = prob_diameter(space, &members)?;
            if !(r.value(t) > 1.0 - t) {
                continue;
            }
            if let (Some(g), Some(l)) = (space.epsilon_generator(), f.lipschitz()) {
                if t < 1.0 {
                    let reach = space.neighborhood_radius(tp) + rho;
                    let sup = lattice
                        .points()
                        .iter()
                        .zip(&images)
                        .filter(|(q, _)| p.distance(q) < reach)
                        .map(|(_, fq)| fq.norm())
                        .fold(fp.norm(), f64::max);
                    if !(g * (sup + l * rho) < t) {
                        continue;
                    }
                }
            }
            return Ok(Some(tp));
        }
        Ok(None)
    };

    let points = domain_sample
        .points()
        .par_iter()
        .map(|p| {
            if !lattice.domain().contains(p) {
                return invalid(format!("sample point {p} lies outside the probe box"));
            }
            Ok(PointWitness { p: p.clone(), witness_tprime: witness_for(p)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = points.iter().all(|w| w.witness_tprime.is_some());
    Ok(ContinuityReport { t, points, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairViolation {
    pub index: usize,
    /// `ν_{f(p)-f(q)}(t)`, which should exceed `1 - t`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub t: f64,
    pub checked: usize,
    pub violations: Vec<PairViolation>,
    pub pass: bool,
}

/// Checks `ν_{f(p)-f(q)}(t) > 1 - t` on distinct pairs of a map that has passed
/// [`strong_t_continuity_test`] at the same `t` in a `τ_M` space.
pub fn pairwise_continuity_check(
    space: &PnSpace,
    f: &dyn SelfMap,
    pairs: &[(Vector, Vector)],
    t: f64,
    certificate: &ContinuityReport,
) -> Result<PairwiseReport> {
    if space.tau().kind != TNorm::M {
        return invalid(format!("theorem requires τ = τ_M, space has τ_{}", space.tau().kind));
    }
    if !certificate.pass || certificate.t != t {
        return Err(PnError::Precondition(format!(
            "map is not certified strong {t}-continuous (certificate t = {}, pass = {})",
            certificate.t, certificate.pass
        )));
    }
    let mut violations = Vec::new();
    for (index, (p, q)) in pairs.iter().enumerate() {
        if p == q {
            return invalid(format!("pair {index} is not distinct"));
        }
        let value = space.prob_norm(&(&f.apply(p) - &f.apply(q)))?.value(t);
        if !(value > 1.0 - t) {
            violations.push(PairViolation { index, value });
        }
    }
    Ok(PairwiseReport { t, checked: pairs.len(), pass: violations.is_empty(), violations })
}
