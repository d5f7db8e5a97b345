//! Experiment configuration files.

use std::path::{Path, PathBuf};

use pnkit_core::discont::{EstimatorSchedule, HalfPlaneMap, PiecewiseMap1D};
use pnkit_core::fixpoint::VerifyConfig;
use pnkit_core::scenario::ScenarioFamily;
use pnkit_core::{BoxDomain, PnSpace, SelfMap};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_space")]
    pub space: PnSpace,
    pub map: Option<PiecewiseMap1D>,
    pub sampled_map: Option<SampledSpec>,
    pub scenarios: Option<ScenarioFamily>,
    #[serde(default)]
    pub schedules: Schedules,
    #[serde(default)]
    pub search: Search,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

fn default_space() -> PnSpace {
    PnSpace::simple(1).expect("default space is valid")
}

/// A two-valued map split by a hyperplane, restricted to a box.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledSpec {
    pub half_plane: HalfPlaneMap,
    pub domain: BoxDomain,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schedules {
    pub delta: Vec<f64>,
    pub grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// Descending `t′` values; `t·2^{-k}` for `k = 0..=20` when absent.
    pub tprime: Option<Vec<f64>>,
}

impl Default for Schedules {
    fn default() -> Self {
        let e = EstimatorSchedule::default();
        Self { delta: e.delta, grid: e.grid, t_grid: e.t_grid, tprime: None }
    }
}

impl Schedules {
    pub fn estimator(&self) -> EstimatorSchedule {
        EstimatorSchedule { delta: self.delta.clone(), grid: self.grid.clone(), t_grid: self.t_grid.clone() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Search {
    pub h: f64,
    pub tol: Option<f64>,
    pub max_refinements: usize,
}

impl Default for Search {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self { h: v.h, tol: v.tol, max_refinements: v.max_refinements }
    }
}

/// The maps an experiment runs on, in scenario-id order.
pub enum Maps {
    Piecewise(Vec<PiecewiseMap1D>),
    Sampled(SampledSpec),
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path_str = e.path().to_string();
            let inner = e.into_inner();
            Failure::Validation(format!(
                "{}:{}:{}: field `{path_str}`: {inner}",
                path.display(),
                inner.line(),
                inner.column()
            ))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Failure> {
        let bad = |m: String| Err(Failure::Validation(m));
        self.schedules.estimator().validate().map_err(|e| Failure::Validation(format!("schedules: {e}")))?;
        if let Some(tp) = &self.schedules.tprime {
            if tp.is_empty() || tp.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
                return bad("schedules.tprime must be nonempty, positive and finite".into());
            }
            if tp.windows(2).any(|w| !(w[0] > w[1])) {
                return bad("schedules.tprime must be strictly descending".into());
            }
        }
        if !(self.search.h > 0.0) || !self.search.h.is_finite() {
            return bad(format!("search.h = {} must be positive", self.search.h));
        }
        if let Some(t) = self.search.tol {
            if !(t >= 0.0) {
                return bad(format!("search.tol = {t} must be >= 0"));
            }
        }
        let given = [self.map.is_some(), self.sampled_map.is_some(), self.scenarios.is_some()];
        if given.iter().filter(|g| **g).count() > 1 {
            return bad("give at most one of `map`, `sampled_map` and `scenarios`".into());
        }
        if (self.map.is_some() || self.scenarios.is_some()) && self.space.dimension() != 1 {
            return bad(format!("piecewise maps live on an interval but space.dimension = {}", self.space.dimension()));
        }
        if let Some(fam) = &self.scenarios {
            if self.seed.is_none() {
                return bad("`seed` is required when `scenarios` is given".into());
            }
            fam.validate().map_err(|e| Failure::Validation(format!("scenarios: {e}")))?;
        }
        if let Some(s) = &self.sampled_map {
            BoxDomain::new(s.domain.lo.clone(), s.domain.hi.clone())
                .map_err(|e| Failure::Validation(format!("sampled_map.domain: {e}")))?;
            let hp = &s.half_plane;
            HalfPlaneMap::new(hp.normal.clone(), hp.threshold, hp.low.clone(), hp.high.clone())
                .map_err(|e| Failure::Validation(format!("sampled_map.half_plane: {e}")))?;
            if hp.dim() != s.domain.dim() || hp.dim() != self.space.dimension() {
                return bad("sampled_map, its domain and the space differ in dimension".into());
            }
            if !s.domain.contains(&hp.low) || !s.domain.contains(&hp.high) {
                return bad("sampled_map values must lie in its domain".into());
            }
        }
        Ok(())
    }

    pub fn require_seed(&self) -> Result<u64, Failure> {
        self.seed.ok_or_else(|| Failure::Validation("this command draws samples; `seed` is required".into()))
    }

    pub fn maps(&self) -> Result<Maps, Failure> {
        if let Some(m) = &self.map {
            return Ok(Maps::Piecewise(vec![m.clone()]));
        }
        if let Some(s) = &self.sampled_map {
            return Ok(Maps::Sampled(s.clone()));
        }
        if let Some(fam) = &self.scenarios {
            let maps = pnkit_core::scenario::generate_scenarios(fam, self.require_seed()?)?;
            return Ok(Maps::Piecewise(maps));
        }
        Err(Failure::Validation("config names no map: give `map`, `sampled_map` or `scenarios`".into()))
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            h: self.search.h,
            tol: self.search.tol,
            max_refinements: self.search.max_refinements,
            estimator: self.schedules.estimator(),
        }
    }
}
