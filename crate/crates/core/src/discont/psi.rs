use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::piecewise::PiecewiseMap1D;
use super::sampled::SampledMap;
use crate::ddf::{left_limit_of_infimum, Ddf};
use crate::error::{invalid, PnError, Result};
use crate::map::SelfMap;
use crate::space::PnSpace;
use crate::vector::{BoxDomain, Vector};

/// `ψ_f` for a 1D piecewise map from its breakpoint limit sets:
/// the left-limit infimum of `ν_{f(b)-q}` over breakpoints `b` and `q ∈ T_f(b)`.
/// Continuity points contribute `ε_0`.
pub fn psi_exact(space: &PnSpace, map: &PiecewiseMap1D) -> Result<Ddf> {
    if space.dimension() != 1 {
        return invalid(format!("exact ψ needs a one-dimensional space, got dimension {}", space.dimension()));
    }
    let mut family = vec![Ddf::identity()];
    for b in map.breakpoints() {
        let fb = map.value(b);
        for q in map.continuoufication(b)?.values {
            family.push(space.prob_norm(&Vector::scalar(fb - q.coords()[0]))?);
        }
    }
    left_limit_of_infimum(&family)
}

/// Refinement schedules for [`psi_estimate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorSchedule {
    /// Strictly descending neighborhood parameters `δ_k`.
    pub delta: Vec<f64>,
    /// Strictly descending grid resolutions.
    pub grid: Vec<f64>,
    pub t_grid: Vec<f64>,
}

impl Default for EstimatorSchedule {
    fn default() -> Self {
        Self {
            delta: (0..=6).map(|k| 0.2 * 0.5_f64.powi(k)).collect(),
            grid: vec![1.0 / 1024.0],
            t_grid: default_t_grid(1.0, 256),
        }
    }
}

/// `count` evenly spaced values in `(0, max]`.
pub fn default_t_grid(max: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|i| max * i as f64 / count as f64).collect()
}

impl EstimatorSchedule {
    pub fn validate(&self) -> Result<()> {
        for (name, xs) in [("delta", &self.delta), ("grid", &self.grid)] {
            if xs.is_empty() {
                return invalid(format!("{name} schedule is empty"));
            }
            if xs.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
                return invalid(format!("{name} schedule must be positive and finite"));
            }
            if xs.windows(2).any(|w| !(w[0] > w[1])) {
                return invalid(format!("{name} schedule must be strictly descending"));
            }
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return invalid("t_grid must be nonempty and positive");
        }
        Ok(())
    }

    pub fn finest_grid(&self) -> f64 {
        *self.grid.last().expect("validated schedule")
    }
}

/// One `(grid, δ)` refinement level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiLevel {
    pub h: f64,
    pub delta: f64,
    /// `max_p max_{q ∈ N_p(δ), q ≠ p} ‖f(p) - f(q)‖` on the grid.
    pub max_gap: f64,
    /// Grid points whose neighborhood held no other grid point.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiAtT {
    pub t: f64,
    pub value: f64,
    /// Values at the last two refinement levels of the finest grid.
    pub bracket: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiEstimate {
    pub psi: Ddf,
    pub per_t: Vec<PsiAtT>,
    pub levels: Vec<PsiLevel>,
    pub warnings: Vec<String>,
}

/// Grid estimate of `ψ_f(t) = inf_p liminf_{δ→0} inf_{q ∈ N_p(δ)} ν_{f(p)-f(q)}(t)`.
///
/// In a simple space `ν_v` only depends on `‖v‖` and decreases in it, so the
/// inner infimum over a neighborhood is the profile of the largest image gap,
/// and the infimum over `p` is the profile of the largest such gap over the grid.
/// Neighborhoods shrink with `δ`, so the gap is nonincreasing along the schedule
/// and the per-`t` values nondecreasing; both are checked.
pub fn psi_estimate(
    space: &PnSpace,
    map: &dyn SelfMap,
    domain: &BoxDomain,
    schedule: &EstimatorSchedule,
) -> Result<PsiEstimate> {
    schedule.validate()?;
    if map.dim() != space.dimension() || domain.dim() != space.dimension() {
        return invalid("map, domain and space dimensions differ");
    }
    let radii: Vec<f64> = schedule.delta.iter().map(|&d| space.neighborhood_radius(d)).collect();
    let mut levels = Vec::new();
    let mut warnings = Vec::new();
    let mut finest: Vec<f64> = Vec::new();

    for &h in &schedule.grid {
        let sampled = SampledMap::sample(map, domain, h)?;
        let (gaps, skipped) = level_gaps(&sampled, &radii);
        for (k, &delta) in schedule.delta.iter().enumerate() {
            if skipped[k] > 0 {
                warnings.push(format!(
                    "grid h = {h}: {} points have no grid neighbor within δ = {delta}; skipped",
                    skipped[k]
                ));
            }
            levels.push(PsiLevel { h, delta, max_gap: gaps[k], skipped: skipped[k] });
        }
        for k in 1..gaps.len() {
            for &t in &schedule.t_grid {
                let before = space.norm_profile(gaps[k - 1]).value(t);
                let after = space.norm_profile(gaps[k]).value(t);
                if after < before {
                    return Err(PnError::Internal(format!(
                        "ψ estimate decreased under refinement at h = {h}, t = {t}: {before} -> {after}"
                    )));
                }
            }
        }
        finest = gaps;
    }

    let last = *finest.last().expect("nonempty delta schedule");
    let prev = if finest.len() >= 2 { finest[finest.len() - 2] } else { last };
    let psi = space.norm_profile(last);
    let prev_psi = space.norm_profile(prev);
    let per_t = schedule
        .t_grid
        .iter()
        .map(|&t| PsiAtT { t, value: psi.value(t), bracket: [prev_psi.value(t), psi.value(t)] })
        .collect();
    Ok(PsiEstimate { psi, per_t, levels, warnings })
}

/// Largest neighbor gap per radius, and how many points had an empty neighborhood.
fn level_gaps(s: &SampledMap, radii: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let k = radii.len();
    let widest = radii[0];
    let per_point: Vec<(Vec<f64>, Vec<bool>)> = (0..s.points().len())
        .into_par_iter()
        .map(|i| {
            let p = &s.points()[i];
            let fp = &s.images()[i];
            // bucket[j] = largest gap among neighbors inside radii[0..=j] but not radii[j+1]
            let mut bucket = vec![f64::NEG_INFINITY; k];
            for j in s.window(i, widest) {
                let d = p.distance(&s.points()[j]);
                let depth = radii.iter().take_while(|&&r| d < r).count();
                if depth == 0 {
                    continue;
                }
                let gap = fp.distance(&s.images()[j]);
                if gap > bucket[depth - 1] {
                    bucket[depth - 1] = gap;
                }
            }
            let mut gaps = vec![0.0; k];
            let mut seen = vec![false; k];
            let mut run = f64::NEG_INFINITY;
            for j in (0..k).rev() {
                run = run.max(bucket[j]);
                seen[j] = run > f64::NEG_INFINITY;
                gaps[j] = run.max(0.0);
            }
            (gaps, seen)
        })
        .collect();
    let mut gaps = vec![0.0_f64; k];
    let mut skipped = vec![0usize; k];
    for (g, seen) in &per_point {
        for j in 0..k {
            gaps[j] = gaps[j].max(g[j]);
            if !seen[j] {
                skipped[j] += 1;
            }
        }
    }
    (gaps, skipped)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiAgreement {
    pub psi_exact: Ddf,
    pub psi_estimate: Ddf,
    pub distance: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares the grid estimate of `ψ_f` with the limit-set formula; the Sibley
/// distance between them must not exceed twice the finest grid resolution.
pub fn psi_agreement_check(
    space: &PnSpace,
    map: &PiecewiseMap1D,
    schedule: &EstimatorSchedule,
) -> Result<PsiAgreement> {
    let exact = psi_exact(space, map)?;
    let (lo, hi) = map.domain();
    let est = psi_estimate(space, map, &BoxDomain::interval(lo, hi)?, schedule)?;
    let distance = exact.sibley_distance(&est.psi);
    let tolerance = 2.0 * schedule.finest_grid();
    Ok(PsiAgreement { psi_exact: exact, psi_estimate: est.psi, distance, tolerance, pass: distance <= tolerance })
}
