//! The t-norms `W`, `Prod`, `M` and the triangle functions `τ_T` they induce.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ddf::{Ddf, KNOT_MERGE_TOL};
use crate::error::{invalid, PnError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TNorm {
    /// Łukasiewicz: `max(a + b - 1, 0)`.
    W,
    /// Product: `a·b`.
    Prod,
    /// Minimum: `min(a, b)`.
    M,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::W, TNorm::Prod, TNorm::M];

    pub fn apply(self, a: f64, b: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return invalid(format!("t-norm arguments ({a}, {b}) must lie in [0, 1]"));
        }
        Ok(self.eval(a, b))
    }

    /// Unchecked evaluation for arguments already known to be in `[0, 1]`.
    #[inline]
    pub fn eval(self, a: f64, b: f64) -> f64 {
        match self {
            // a + b - 1 is not exact in floating point, so keep 1 an exact identity
            TNorm::W if a == 1.0 => b,
            TNorm::W if b == 1.0 => a,
            TNorm::W => (a + b - 1.0).max(0.0),
            TNorm::Prod => a * b,
            TNorm::M => a.min(b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TNorm::W => "W",
            TNorm::Prod => "Prod",
            TNorm::M => "M",
        }
    }
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TNorm {
    type Err = PnError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "W" | "w" => Ok(TNorm::W),
            "Prod" | "prod" | "P" => Ok(TNorm::Prod),
            "M" | "m" | "min" => Ok(TNorm::M),
            other => invalid(format!("unknown t-norm {other:?}; expected W, Prod or M")),
        }
    }
}

/// A triangle function on d.d.f.s. Only the `τ_T` family is provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TriangleFn {
    pub kind: TNorm,
}

impl TriangleFn {
    pub fn new(kind: TNorm) -> Self {
        Self { kind }
    }

    pub fn apply(&self, f: &Ddf, g: &Ddf) -> Ddf {
        tau_apply(self.kind, f, g)
    }
}

/// `τ_T(F, G)(x) = sup_{u+v=x} T(F(u), G(v))`, computed exactly for step inputs.
///
/// The output can only jump at the pairwise sums of input jump locations. Between
/// two consecutive sums the result is constant, so it is evaluated once at the
/// midpoint (and once past the last sum) and the jump list is rebuilt from those
/// levels.
pub fn tau_apply(kind: TNorm, f: &Ddf, g: &Ddf) -> Ddf {
    let mut sums: Vec<f64> = Vec::with_capacity(f.len() * g.len());
    for &a in f.locations() {
        for &b in g.locations() {
            sums.push(a + b);
        }
    }
    sums.sort_by(f64::total_cmp);
    let clusters = merge_sorted(&sums);
    let levels = clusters.iter().enumerate().map(|(i, &(first, last))| {
        let x = match clusters.get(i + 1) {
            Some(next) => 0.5 * (last + next.0),
            None => last + 1.0 + last.abs(),
        };
        (first, sup_convolution_at(kind, f, g, x))
    });
    Ddf::from_levels(levels).expect("sup-convolution levels are nondecreasing")
}

fn merge_sorted(xs: &[f64]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &x in xs {
        match out.last_mut() {
            Some(c) if x - c.1 < KNOT_MERGE_TOL => c.1 = x,
            _ => out.push((x, x)),
        }
    }
    out
}

/// `sup_{0 ≤ u ≤ x} T(F(u), G(x - u))` at a single `x > 0`.
///
/// As a function of `u` the integrand is piecewise constant with breaks at the
/// jumps of `F` and at `x - b_j`; at a break it never exceeds its value just to
/// the left, so the open pieces' midpoints suffice. Splits with `u > x` would
/// need `G` at a negative argument, where it is 0.
pub fn sup_convolution_at(kind: TNorm, f: &Ddf, g: &Ddf, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut cuts: Vec<f64> = Vec::with_capacity(f.len() + g.len() + 2);
    cuts.push(0.0);
    cuts.push(x);
    cuts.extend(f.locations().iter().copied().filter(|&a| a > 0.0 && a < x));
    cuts.extend(g.locations().iter().map(|b| x - b).filter(|&u| u > 0.0 && u < x));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let u = 0.5 * (w[0] + w[1]);
            kind.eval(f.value(u), g.value(x - u))
        })
        .fold(0.0, f64::max)
}

/// Largest residual per t-norm axiom over a sample of triples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TNormAxiomReport {
    pub kind: TNorm,
    pub samples: usize,
    pub commutativity: f64,
    pub associativity: f64,
    pub monotonicity: f64,
    pub identity: f64,
}

impl TNormAxiomReport {
    pub fn max_residual(&self) -> f64 {
        self.commutativity.max(self.associativity).max(self.monotonicity).max(self.identity)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Evaluates the four t-norm axioms on each `(a, b, c)`.
///
/// Monotonicity is tested as `T(min(a,b), c) ≤ T(max(a,b), c)`, identity as
/// `|T(a, 1) - a|`.
pub fn check_tnorm_axioms(kind: TNorm, samples: &[(f64, f64, f64)]) -> Result<TNormAxiomReport> {
    let mut rep = TNormAxiomReport {
        kind,
        samples: samples.len(),
        commutativity: 0.0,
        associativity: 0.0,
        monotonicity: 0.0,
        identity: 0.0,
    };
    for &(a, b, c) in samples {
        for v in [a, b, c] {
            if !(0.0..=1.0).contains(&v) {
                return invalid(format!("sample value {v} outside [0, 1]"));
            }
        }
        let t = |x, y| kind.eval(x, y);
        rep.commutativity = rep.commutativity.max((t(a, b) - t(b, a)).abs());
        rep.associativity = rep.associativity.max((t(t(a, b), c) - t(a, t(b, c))).abs());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        rep.monotonicity = rep.monotonicity.max(t(lo, c) - t(hi, c)).max(t(c, lo) - t(c, hi));
        rep.identity = rep.identity.max((t(a, 1.0) - a).abs()).max((t(1.0, a) - a).abs());
    }
    Ok(rep)
}
