//! Simple probabilistic normed spaces over `ℝ^d` and a sample-based axiom checker.

use serde::{Deserialize, Serialize};

use crate::ddf::{Ddf, VALUE_TOL};
use crate::error::{invalid, Result};
use crate::tnorm::{TNorm, TriangleFn};
use crate::vector::Vector;

const GENERATOR_MASS_TOL: f64 = 1e-12;

/// The simple space `ν_p(x) = G(x / ‖p‖)` built from a generator d.d.f. `G`,
/// together with the triangle functions `τ` and `τ*`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PnSpace {
    dimension: usize,
    generator: Ddf,
    tau: TriangleFn,
    tau_star: TriangleFn,
}

#[derive(Deserialize)]
struct RawSpace {
    dimension: usize,
    #[serde(default = "default_generator")]
    generator: Ddf,
    #[serde(default = "default_tau")]
    tau: TNorm,
    #[serde(default = "default_tau")]
    tau_star: TNorm,
}

fn default_generator() -> Ddf {
    Ddf::epsilon(1.0).unwrap()
}

fn default_tau() -> TNorm {
    TNorm::M
}

impl<'de> Deserialize<'de> for PnSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSpace::deserialize(d)?;
        PnSpace::new(raw.dimension, raw.generator, raw.tau, raw.tau_star).map_err(serde::de::Error::custom)
    }
}

impl PnSpace {
    /// The generator must carry all of its mass at finite locations.
    pub fn new(dimension: usize, generator: Ddf, tau: TNorm, tau_star: TNorm) -> Result<Self> {
        if dimension == 0 {
            return invalid("space dimension must be positive");
        }
        if generator.is_empty() {
            return invalid("generator has no finite jump");
        }
        if (generator.finite_mass() - 1.0).abs() > GENERATOR_MASS_TOL {
            return invalid(format!("generator finite mass is {}, expected 1", generator.finite_mass()));
        }
        Ok(Self { dimension, generator, tau: TriangleFn::new(tau), tau_star: TriangleFn::new(tau_star) })
    }

    /// `(ε_1, τ_M, τ_M)` in dimension `d`.
    pub fn simple(dimension: usize) -> Result<Self> {
        Self::new(dimension, default_generator(), TNorm::M, TNorm::M)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generator(&self) -> &Ddf {
        &self.generator
    }

    pub fn tau(&self) -> TriangleFn {
        self.tau
    }

    pub fn tau_star(&self) -> TriangleFn {
        self.tau_star
    }

    /// `ν_p`.
    pub fn prob_norm(&self, p: &Vector) -> Result<Ddf> {
        if p.dim() != self.dimension {
            return invalid(format!("vector of dimension {} in a space of dimension {}", p.dim(), self.dimension));
        }
        Ok(self.norm_profile(p.norm()))
    }

    /// The d.d.f. of any vector with Euclidean norm `r`.
    pub fn norm_profile(&self, r: f64) -> Ddf {
        if r == 0.0 {
            Ddf::identity()
        } else {
            self.generator.scale_locations(r).expect("norms are finite and positive")
        }
    }

    /// `Some(g)` when the generator is the single step `ε_g`.
    pub fn epsilon_generator(&self) -> Option<f64> {
        self.generator.as_epsilon()
    }

    /// Radius `r` such that `N_p(t) = { q : ‖p - q‖ < r }` (possibly infinite).
    ///
    /// `G(t/s) > 1 - t` holds iff `t/s` exceeds the first knot `a` whose level
    /// passes `1 - t`, i.e. iff `s < t/a`.
    pub fn neighborhood_radius(&self, t: f64) -> f64 {
        if t > 1.0 {
            return f64::INFINITY;
        }
        let threshold = 1.0 - t;
        let idx = self.generator.levels().iter().position(|&l| l > threshold);
        match idx.map(|i| self.generator.locations()[i]) {
            Some(a) if a > 0.0 => t / a,
            Some(_) => f64::INFINITY,
            None => 0.0,
        }
    }
}

/// One axiom's outcome: how many comparisons were made and the worst one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    pub worst: Option<AxiomViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomViolation {
    /// Index into the sample list; `None` for the null vector check.
    pub sample: Option<usize>,
    pub lambda: Option<f64>,
    /// Argument where the offending inequality fails by the most.
    pub x: f64,
    pub excess: f64,
}

#[derive(Debug, Default)]
struct Tally {
    checked: usize,
    violations: usize,
    worst: Option<AxiomViolation>,
}

impl Tally {
    fn record(&mut self, bad: Option<AxiomViolation>) {
        self.checked += 1;
        if let Some(v) = bad {
            self.violations += 1;
            if self.worst.as_ref().is_none_or(|w| v.excess > w.excess) {
                self.worst = Some(v);
            }
        }
    }

    fn finish(self) -> AxiomResult {
        AxiomResult {
            passed: self.violations == 0,
            checked: self.checked,
            violations: self.violations,
            worst: self.worst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub n1: AxiomResult,
    pub n2: AxiomResult,
    pub n3: AxiomResult,
    pub n4: AxiomResult,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.n1.passed && self.n2.passed && self.n3.passed && self.n4.passed
    }
}

/// Checks N1–N4 on the given vector pairs.
///
/// N1 is checked at the null vector and at every nonzero sample, N2 by exact
/// equality of jump lists, N3 and N4 by the d.d.f. order on exact `τ` outputs.
pub fn check_axioms(space: &PnSpace, samples: &[(Vector, Vector)], lambdas: &[f64]) -> Result<AxiomReport> {
    if samples.is_empty() {
        return invalid("axiom check needs at least one sample pair");
    }
    if let Some(l) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return invalid(format!("lambda {l} outside [0, 1]"));
    }
    let (mut n1, mut n2, mut n3, mut n4) = (Tally::default(), Tally::default(), Tally::default(), Tally::default());

    let theta = Vector::zeros(space.dimension());
    let id = Ddf::identity();
    n1.record((space.prob_norm(&theta)? != id).then_some(AxiomViolation {
        sample: None,
        lambda: None,
        x: 0.0,
        excess: 1.0,
    }));

    let leq_violation = |lhs: &Ddf, rhs: &Ddf, sample: usize, lambda: Option<f64>| {
        let (x, excess) = lhs.max_excess(rhs);
        (excess > VALUE_TOL).then_some(AxiomViolation { sample: Some(sample), lambda, x, excess })
    };

    for (i, (p, q)) in samples.iter().enumerate() {
        for v in [p, q] {
            let nu = space.prob_norm(v)?;
            if !v.is_zero() {
                // the two sides of N1 differ wherever nu and ε_0 differ
                let (x, excess) = id.max_excess(&nu);
                n1.record((nu == id).then_some(AxiomViolation {
                    sample: Some(i),
                    lambda: None,
                    x,
                    excess: excess.max(0.0),
                }));
            }
            let neg = space.prob_norm(&-v)?;
            let (x, excess) = nu.max_excess(&neg);
            let (x2, excess2) = neg.max_excess(&nu);
            let (x, excess) = if excess >= excess2 { (x, excess) } else { (x2, excess2) };
            n2.record((neg != nu).then_some(AxiomViolation { sample: Some(i), lambda: None, x, excess }));
        }

        let nu_p = space.prob_norm(p)?;
        let nu_q = space.prob_norm(q)?;
        let nu_sum = space.prob_norm(&(p + q))?;
        let bound = space.tau().apply(&nu_p, &nu_q);
        n3.record(leq_violation(&bound, &nu_sum, i, None));

        for &lambda in lambdas {
            let a = space.prob_norm(&p.scale(lambda))?;
            let b = space.prob_norm(&p.scale(1.0 - lambda))?;
            let rhs = space.tau_star().apply(&a, &b);
            n4.record(leq_violation(&nu_p, &rhs, i, Some(lambda)));
        }
    }

    Ok(AxiomReport { n1: n1.finish(), n2: n2.finish(), n3: n3.finish(), n4: n4.finish() })
}

/// `{0, 0.1, ..., 1}`.
pub fn default_lambdas() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prob_norm_examples() {
        let s = PnSpace::simple(2).unwrap();
        let p = Vector::new(vec![0.0, 2.0]).unwrap();
        assert_eq!(s.prob_norm(&p).unwrap(), Ddf::epsilon(2.0).unwrap());
        assert_eq!(s.prob_norm(&Vector::zeros(2)).unwrap(), Ddf::identity());
        assert_eq!(s.prob_norm(&-&p).unwrap(), s.prob_norm(&p).unwrap());
        assert!(s.prob_norm(&Vector::scalar(1.0)).is_err());
    }

    #[test]
    fn generator_must_be_proper() {
        let half = Ddf::from_jumps(&[(1.0, 0.25), (2.0, 0.25)]).unwrap();
        assert!(PnSpace::new(1, half, TNorm::M, TNorm::M).is_err());
        assert!(PnSpace::new(1, Ddf::bottom(), TNorm::M, TNorm::M).is_err());
        assert!(PnSpace::new(0, Ddf::epsilon(1.0).unwrap(), TNorm::M, TNorm::M).is_err());
    }

    #[test]
    fn n4_at_lambda_zero_is_identity() {
        let s = PnSpace::simple(3).unwrap();
        let p = Vector::new(vec![0.3, -1.2, 0.5]).unwrap();
        let q = Vector::new(vec![1.0, 0.0, 0.0]).unwrap();
        let rep = check_axioms(&s, &[(p, q)], &[0.0]).unwrap();
        assert!(rep.n4.passed);
        assert_eq!(rep.n4.checked, 1);
    }

    #[test]
    fn degenerate_generator_breaks_n1() {
        let s = PnSpace::new(1, Ddf::identity(), TNorm::M, TNorm::M).unwrap();
        let rep = check_axioms(&s, &[(Vector::scalar(1.0), Vector::scalar(-2.0))], &[0.5]).unwrap();
        assert!(!rep.n1.passed);
        assert_eq!(rep.n1.violations, 2);
    }

    #[test]
    fn neighborhood_radius_matches_epsilon_generator() {
        let s = PnSpace::new(1, Ddf::epsilon(2.0).unwrap(), TNorm::M, TNorm::M).unwrap();
        assert_eq!(s.neighborhood_radius(0.5), 0.25);
        assert_eq!(s.neighborhood_radius(1.5), f64::INFINITY);
    }

    #[test]
    fn json_config_shape() {
        let s: PnSpace =
            serde_json::from_str(r#"{"dimension": 2, "generator": [[1.0, 1.0]], "tau": "M", "tau_star": "Prod"}"#)
                .unwrap();
        assert_eq!(s.tau_star().kind, TNorm::Prod);
        assert!(serde_json::from_str::<PnSpace>(r#"{"dimension": 1, "generator": [[1.0, 0.5]]}"#).is_err());
    }
}
