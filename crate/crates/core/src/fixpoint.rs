//! Exhaustive search for approximate fixed points `ν_{f(p*)-p*} ≥ ψ_f` and for
//! points with `p* ∈ con T_f(p*)`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ddf::{Ddf, VALUE_TOL};
use crate::discont::{convex_hull, psi_estimate, psi_exact, EstimatorSchedule, Hull, PiecewiseMap1D, SampledMap};
use crate::error::{invalid, PnError, Result};
use crate::map::SelfMap;
use crate::space::PnSpace;
use crate::vector::{BoxDomain, Vector};

/// What to search: an exactly known 1D piecewise map, or any map on a box
/// handled through its lattice samples.
#[derive(Clone, Copy)]
pub enum SearchTarget<'a> {
    Piecewise(&'a PiecewiseMap1D),
    Sampled { map: &'a dyn SelfMap, domain: &'a BoxDomain },
}

impl<'a> SearchTarget<'a> {
    fn map(&self) -> &'a dyn SelfMap {
        match *self {
            SearchTarget::Piecewise(m) => m,
            SearchTarget::Sampled { map, .. } => map,
        }
    }

    fn dim(&self) -> usize {
        self.map().dim()
    }
}

/// Grid points of the interval at spacing `h`, plus breakpoints and the fixed
/// points of individual affine pieces, sorted and deduplicated.
fn piecewise_candidates(m: &PiecewiseMap1D, h: f64) -> Vec<f64> {
    let (lo, hi) = m.domain();
    let n = ((hi - lo) / h).round().max(1.0) as usize;
    let mut xs: Vec<f64> = (0..=n).map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 }).collect();
    xs.extend(m.breakpoints());
    xs.extend(m.piece_fixed_points());
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn check_resolution(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return invalid(format!("search resolution {h} must be positive"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixPointReport {
    pub candidate: Vector,
    /// `ν_{f(p*)-p*}`.
    pub residual: Ddf,
    pub psi: Ddf,
    /// `ψ ≤ residual` in the d.d.f. order.
    pub dominance: bool,
    /// Largest `ψ(t) - residual(t)` over the shared knot structure.
    pub margin: f64,
    /// Resolution of the grid the candidate came from.
    pub h: f64,
}

struct Scored {
    p: Vector,
    residual: Ddf,
    dist: f64,
    margin: f64,
    dominance: bool,
}

fn better(a: &Scored, b: &Scored) -> Ordering {
    b.dominance
        .cmp(&a.dominance)
        .then(a.margin.total_cmp(&b.margin))
        .then(a.dist.total_cmp(&b.dist))
        .then(a.p.lex_cmp(&b.p))
}

/// Scans all candidates and keeps the one with the best dominance margin;
/// ties go to the smaller displacement, then the lexicographically smallest point.
/// Without a dominating candidate the grid is halved up to `max_refinements`
/// times before a [`PnError::TheoremViolation`] is returned.
pub fn find_approx_fixed_point(
    space: &PnSpace,
    target: SearchTarget<'_>,
    psi: &Ddf,
    h: f64,
    max_refinements: usize,
) -> Result<FixPointReport> {
    check_resolution(h)?;
    if target.dim() != space.dimension() {
        return invalid("map and space dimensions differ");
    }
    let mut h = h;
    let mut best: Option<Scored> = None;
    for round in 0..=max_refinements {
        let (points, images) = candidates_with_images(target, h)?;
        let scored: Vec<Scored> = points
            .into_par_iter()
            .zip(images.into_par_iter())
            .map(|(p, fp)| {
                let diff = &fp - &p;
                let residual = space.norm_profile(diff.norm());
                let margin = psi.max_excess(&residual).1;
                Scored { dist: diff.norm(), dominance: margin <= VALUE_TOL, margin, residual, p }
            })
            .collect();
        let round_best = scored.into_iter().min_by(better).expect("at least one candidate");
        let done = round_best.dominance;
        best = Some(round_best);
        if done {
            break;
        }
        if round < max_refinements {
            h *= 0.5;
        }
    }
    let best = best.expect("searched at least once");
    if !best.dominance {
        return Err(PnError::TheoremViolation(format!(
            "no candidate with ν_(f(p)-p) ≥ ψ at resolution {h}; best {} misses by {}",
            best.p, best.margin
        )));
    }
    Ok(FixPointReport {
        candidate: best.p,
        residual: best.residual,
        psi: psi.clone(),
        dominance: true,
        margin: best.margin,
        h,
    })
}

fn candidates_with_images(target: SearchTarget<'_>, h: f64) -> Result<(Vec<Vector>, Vec<Vector>)> {
    Ok(match target {
        SearchTarget::Piecewise(m) => {
            let xs = piecewise_candidates(m, h);
            let images = xs.iter().map(|&x| Vector::scalar(m.value(x))).collect();
            (xs.into_iter().map(Vector::scalar).collect(), images)
        }
        SearchTarget::Sampled { map, domain } => {
            let s = SampledMap::sample(map, domain, h)?;
            (s.points().to_vec(), s.images().to_vec())
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KakutaniReport {
    pub point: Vector,
    pub hull: Hull,
    /// Distance from `point` to `con T_f(point)`.
    pub distance: f64,
    /// The generators of the hull, `T_f(point)`.
    #[serde(skip)]
    pub limit_values: Vec<Vector>,
}

/// Finds a candidate `p` with `dist(p, con T_f(p)) ≤ tol`, preferring exact
/// containment.
///
/// For sampled maps `T_f(p)` is approximated by the images of the lattice
/// neighbors of `p` (excluding `p`) within one cell diagonal.
pub fn kakutani_search(target: SearchTarget<'_>, h: f64, tol: f64, max_refinements: usize) -> Result<KakutaniReport> {
    check_resolution(h)?;
    if !(tol >= 0.0) {
        return invalid(format!("tolerance {tol} must be >= 0"));
    }
    let mut h = h;
    let mut best: Option<KakutaniReport> = None;
    for round in 0..=max_refinements {
        let found = kakutani_round(target, h)?;
        let done = found.distance <= tol;
        best = Some(found);
        if done {
            break;
        }
        if round < max_refinements {
            h *= 0.5;
        }
    }
    let best = best.expect("searched at least once");
    if best.distance > tol {
        return Err(PnError::TheoremViolation(format!(
            "no point within {tol} of its own continuoufied hull; best {} at distance {}",
            best.point, best.distance
        )));
    }
    Ok(best)
}

fn kakutani_round(target: SearchTarget<'_>, h: f64) -> Result<KakutaniReport> {
    let reports: Vec<KakutaniReport> = match target {
        SearchTarget::Piecewise(m) => piecewise_candidates(m, h)
            .into_par_iter()
            .map(|x| {
                let values = m.continuoufication(x)?.values;
                let hull = convex_hull(&values)?;
                let point = Vector::scalar(x);
                Ok(KakutaniReport { distance: hull.distance(&point), point, hull, limit_values: values })
            })
            .collect::<Result<_>>()?,
        SearchTarget::Sampled { map, domain } => {
            let s = SampledMap::sample(map, domain, h)?;
            let reach = s.resolution() * (domain.dim() as f64).sqrt() * (1.0 + 1e-9);
            (0..s.points().len())
                .into_par_iter()
                .map(|i| {
                    let p = &s.points()[i];
                    let values: Vec<Vector> = s
                        .window(i, reach)
                        .into_iter()
                        .filter(|&j| p.distance(&s.points()[j]) <= reach)
                        .map(|j| s.images()[j].clone())
                        .collect();
                    let hull = convex_hull(&values)?;
                    Ok(KakutaniReport { distance: hull.distance(p), point: p.clone(), hull, limit_values: values })
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(reports
        .into_iter()
        .min_by(|a, b| a.distance.total_cmp(&b.distance).then(a.point.lex_cmp(&b.point)))
        .expect("at least one candidate"))
}

/// Settings for [`verify_fixed_point_existence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Search grid resolution.
    pub h: f64,
    /// Containment tolerance for the Kakutani search; `None` means `h`.
    pub tol: Option<f64>,
    pub max_refinements: usize,
    pub estimator: EstimatorSchedule,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { h: 1.0 / 1024.0, tol: None, max_refinements: 1, estimator: EstimatorSchedule::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiRoute {
    Exact,
    Estimate,
}

/// `ν_{f(p*)-p*}(t) ≥ min_{q ∈ T_f(p*)} ν_{f(p*)-q}(t) ≥ ψ(t)` on the t-grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofChain {
    pub point: Vector,
    pub holds: bool,
    pub checked: usize,
    /// First `t` where the chain failed, if any.
    pub first_failure: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub candidate: Vector,
    pub residual: Ddf,
    pub psi: Ddf,
    pub psi_route: PsiRoute,
    pub dominance: bool,
    pub margin: f64,
    pub kakutani: KakutaniReport,
    pub chain: ProofChain,
}

impl ExistenceReport {
    pub fn holds(&self) -> bool {
        self.dominance && self.chain.holds
    }
}

/// Runs `ψ` (exact for piecewise maps in 1D, otherwise estimated), the
/// approximate fixed point search and the Kakutani search, then checks the
/// inequality chain at the Kakutani point on every `t` of the estimator's t-grid.
pub fn verify_fixed_point_existence(
    space: &PnSpace,
    target: SearchTarget<'_>,
    config: &VerifyConfig,
) -> Result<ExistenceReport> {
    config.estimator.validate()?;
    let (psi, route) = match target {
        SearchTarget::Piecewise(m) if space.dimension() == 1 => (psi_exact(space, m)?, PsiRoute::Exact),
        SearchTarget::Piecewise(m) => {
            let (lo, hi) = m.domain();
            let est = psi_estimate(space, m, &BoxDomain::interval(lo, hi)?, &config.estimator)?;
            (est.psi, PsiRoute::Estimate)
        }
        SearchTarget::Sampled { map, domain } => {
            (psi_estimate(space, map, domain, &config.estimator)?.psi, PsiRoute::Estimate)
        }
    };
    let fix = find_approx_fixed_point(space, target, &psi, config.h, config.max_refinements)?;
    let tol = config.tol.unwrap_or(config.h);
    let kak = kakutani_search(target, config.h, tol, config.max_refinements)?;

    let p = &kak.point;
    let fp = target.map().apply(p);
    let residual = space.prob_norm(&(&fp - p))?;
    let widest = kak.limit_values.iter().map(|q| fp.distance(q)).fold(0.0, f64::max);
    let middle = space.norm_profile(widest);
    // a point off the hull by `d` can sit up to `d` farther from f(p) than any generator
    let slack = kak.distance * space.generator().locations().last().copied().unwrap_or(0.0);
    let mut first_failure = None;
    for &t in &config.estimator.t_grid {
        let first = residual.value(t + slack) + VALUE_TOL >= middle.value(t);
        let second = middle.value(t) + VALUE_TOL >= psi.value(t);
        if !(first && second) {
            first_failure = Some(t);
            break;
        }
    }
    let chain = ProofChain {
        point: p.clone(),
        holds: first_failure.is_none(),
        checked: config.estimator.t_grid.len(),
        first_failure,
    };
    Ok(ExistenceReport {
        candidate: fix.candidate,
        residual: fix.residual,
        psi,
        psi_route: route,
        dominance: fix.dominance,
        margin: fix.margin,
        kakutani: kak,
        chain,
    })
}
