use std::path::{Path, PathBuf};

use pnkit_core::discont::{psi_agreement_check, psi_estimate, psi_exact, PiecewiseMap1D};
use pnkit_core::fixpoint::{
    find_approx_fixed_point, kakutani_search, verify_fixed_point_existence, PsiRoute, SearchTarget,
};
use pnkit_core::neighborhoods::{
    default_tprime_schedule, pairwise_continuity_check, prob_diameter, strong_t_continuity_test, PointSet, ProbeLattice,
};
use pnkit_core::sampling::{rng, vector_pairs};
use pnkit_core::space::{self, default_lambdas};
use pnkit_core::{tau_apply, BoxDomain, Ddf, PnError, SelfMap, TNorm, Vector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Maps, SampledSpec};
use crate::Failure;

fn print_json(v: &impl Serialize) -> Result<(), Failure> {
    emit(&(to_pretty(v)? + "\n"))
}

// a closed pipe downstream is not an error
fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Other(e.to_string())),
        _ => Ok(()),
    }
}

fn to_pretty(v: &impl Serialize) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Other(e.to_string()))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

/// `eps:a` or a JSON list of `[location, mass]` pairs.
fn parse_ddf(spec: &str) -> Result<Ddf, Failure> {
    let spec = spec.trim();
    if let Some(a) = spec.strip_prefix("eps:") {
        let a: f64 = a.trim().parse().map_err(|_| Failure::Validation(format!("bad location in {spec:?}")))?;
        return Ok(Ddf::epsilon(a)?);
    }
    serde_json::from_str(spec).map_err(|e| Failure::Validation(format!("d.d.f. {spec:?}: {e}")))
}

pub fn tau(kind: TNorm, f: &str, g: &str) -> Result<(), Failure> {
    let h = tau_apply(kind, &parse_ddf(f)?, &parse_ddf(g)?);
    emit(&(serde_json::to_string(&h).map_err(|e| Failure::Other(e.to_string()))? + "\n"))
}

pub fn ddf(f: &str, g: Option<&str>, at: &[f64]) -> Result<(), Failure> {
    let f = parse_ddf(f)?;
    let values = at.iter().map(|&x| Ok(json!([x, f.eval(x)?]))).collect::<Result<Vec<_>, PnError>>()?;
    let mut out = json!({ "ddf": f, "display": f.to_string(), "values": values });
    if let Some(g) = g {
        let g = parse_ddf(g)?;
        out["other"] = json!(g);
        out["leq"] = json!(f.leq(&g));
        out["geq"] = json!(g.leq(&f));
        out["sibley_distance"] = json!(f.sibley_distance(&g));
    }
    print_json(&out)
}

pub fn check_axioms(path: &Path, pairs: usize, range: f64) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(path)?;
    if pairs == 0 || !(range > 0.0) {
        return Err(Failure::Validation("--pairs and --range must be positive".into()));
    }
    let samples = vector_pairs(cfg.require_seed()?, cfg.space.dimension(), pairs, range);
    let report = space::check_axioms(&cfg.space, &samples, &default_lambdas())?;
    print_json(&report)?;
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Theorem("the space violates a PN-space axiom".into()))
    }
}

pub fn diameter(path: &Path, points: &str) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(path)?;
    let set: PointSet = serde_json::from_str(points).map_err(|e| Failure::Validation(format!("--points: {e}")))?;
    print_json(&prob_diameter(&cfg.space, set.points())?)
}

/// One map of an experiment together with its domain.
enum Target {
    Piecewise(PiecewiseMap1D),
    Sampled(SampledSpec),
}

impl Target {
    fn all(cfg: &ExperimentConfig) -> Result<Vec<Target>, Failure> {
        Ok(match cfg.maps()? {
            Maps::Piecewise(ms) => ms.into_iter().map(Target::Piecewise).collect(),
            Maps::Sampled(s) => vec![Target::Sampled(s)],
        })
    }

    fn map(&self) -> &dyn SelfMap {
        match self {
            Target::Piecewise(m) => m,
            Target::Sampled(s) => &s.half_plane,
        }
    }

    fn domain(&self) -> Result<BoxDomain, Failure> {
        match self {
            Target::Piecewise(m) => Ok(BoxDomain::interval(m.domain().0, m.domain().1)?),
            Target::Sampled(s) => Ok(s.domain.clone()),
        }
    }

    fn search<'a>(&'a self, domain: &'a BoxDomain) -> SearchTarget<'a> {
        match self {
            Target::Piecewise(m) => SearchTarget::Piecewise(m),
            Target::Sampled(s) => SearchTarget::Sampled { map: &s.half_plane, domain },
        }
    }

    fn describe(&self) -> Value {
        match self {
            Target::Piecewise(m) => json!(m),
            Target::Sampled(s) => json!(s),
        }
    }
}

// a uniform tensor grid with `per_axis` points on every axis of the box
fn grid_sample(domain: &BoxDomain, per_axis: usize) -> Result<PointSet, Failure> {
    let d = domain.dim();
    let per_axis = per_axis.max(2);
    let total = per_axis.pow(d as u32);
    let pts = (0..total)
        .map(|mut idx| {
            let mut c = vec![0.0; d];
            for k in (0..d).rev() {
                let i = idx % per_axis;
                idx /= per_axis;
                let (a, b) = (domain.lo.coords()[k], domain.hi.coords()[k]);
                c[k] = if i + 1 == per_axis { b } else { a + (b - a) * i as f64 / (per_axis - 1) as f64 };
            }
            Vector::new(c)
        })
        .collect::<Result<Vec<_>, PnError>>()?;
    Ok(PointSet::new(pts)?)
}

fn random_pairs(domain: &BoxDomain, n: usize, seed: u64) -> Vec<(Vector, Vector)> {
    let mut r = rng(seed);
    let mut draw = || {
        let c = domain.lo.coords().iter().zip(domain.hi.coords()).map(|(a, b)| r.gen_range(*a..=*b)).collect();
        Vector::new(c).expect("finite box")
    };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (p, q) = (draw(), draw());
        if p != q {
            out.push((p, q));
        }
    }
    out
}

pub fn continuity(path: &Path, t: f64, samples: usize, probe_budget: usize, pairs: usize) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(path)?;
    let seed = cfg.require_seed()?;
    let schedule = cfg.schedules.tprime.clone().unwrap_or_else(|| default_tprime_schedule(t));
    let mut results = Vec::new();
    let mut violated = false;
    for (id, target) in Target::all(&cfg)?.iter().enumerate() {
        let domain = target.domain()?;
        let sample = grid_sample(&domain, samples)?;
        let lattice = ProbeLattice::uniform(domain.clone(), probe_budget)?;
        let cert = strong_t_continuity_test(&cfg.space, target.map(), &sample, t, &schedule, &lattice)?;
        let consequence = if cert.pass {
            let ps = random_pairs(&domain, pairs, seed.wrapping_add(id as u64));
            let r = pairwise_continuity_check(&cfg.space, target.map(), &ps, t, &cert)?;
            violated |= !r.pass;
            Some(r)
        } else {
            None
        };
        results.push(json!({
            "scenario_id": id,
            "map": target.describe(),
            "continuity": cert,
            "pairwise": consequence,
        }));
    }
    print_json(&results)?;
    if violated {
        return Err(Failure::Theorem("a certified map has a pair with ν_(f(p)-f(q))(t) <= 1 - t".into()));
    }
    Ok(())
}

pub fn psi(path: &Path) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(path)?;
    let schedule = cfg.schedules.estimator();
    let targets = Target::all(&cfg)?;
    let results = targets
        .par_iter()
        .enumerate()
        .map(|(id, target)| {
            let domain = target.domain()?;
            let estimate = psi_estimate(&cfg.space, target.map(), &domain, &schedule)?;
            let (exact, agreement) = match target {
                Target::Piecewise(m) => {
                    let r = psi_agreement_check(&cfg.space, m, &schedule)?;
                    (Some(r.psi_exact.clone()), Some(r))
                }
                Target::Sampled(_) => (None, None),
            };
            Ok(json!({
                "scenario_id": id,
                "map": target.describe(),
                "psi_exact": exact,
                "estimate": estimate,
                "agreement": agreement,
            }))
        })
        .collect::<Result<Vec<Value>, Failure>>()?;
    print_json(&results)?;
    let disagree = results.iter().filter(|r| r["agreement"]["pass"] == json!(false)).count();
    if disagree > 0 {
        return Err(Failure::Theorem(format!("{disagree} maps where the two ψ routes disagree")));
    }
    Ok(())
}

pub fn fixpoint(path: &Path) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(path)?;
    let vc = cfg.verify_config();
    let targets = Target::all(&cfg)?;
    let results: Vec<Value> = targets
        .par_iter()
        .enumerate()
        .map(|(id, target)| {
            let domain = target.domain()?;
            let (psi, route) = match target {
                Target::Piecewise(m) => (psi_exact(&cfg.space, m)?, PsiRoute::Exact),
                Target::Sampled(s) => {
                    (psi_estimate(&cfg.space, &s.half_plane, &domain, &vc.estimator)?.psi, PsiRoute::Estimate)
                }
            };
            let search = target.search(&domain);
            let mut entry = json!({ "scenario_id": id, "map": target.describe(), "psi_route": route });
            match find_approx_fixed_point(&cfg.space, search, &psi, vc.h, vc.max_refinements) {
                Ok(r) => entry["fixpoint"] = json!(r),
                Err(PnError::TheoremViolation(m)) => entry["fixpoint_error"] = json!(m),
                Err(e) => return Err(e.into()),
            }
            match kakutani_search(search, vc.h, vc.tol.unwrap_or(vc.h), vc.max_refinements) {
                Ok(k) => entry["kakutani"] = json!(k),
                Err(PnError::TheoremViolation(m)) => entry["kakutani_error"] = json!(m),
                Err(e) => return Err(e.into()),
            }
            Ok(entry)
        })
        .collect::<Result<_, Failure>>()?;
    print_json(&results)?;
    let failed =
        results.iter().filter(|r| r.get("fixpoint_error").is_some() || r.get("kakutani_error").is_some()).count();
    if failed > 0 {
        return Err(Failure::Theorem(format!("{failed} maps without an approximate fixed point")));
    }
    Ok(())
}

#[derive(Serialize)]
struct CurveRow {
    scenario_id: usize,
    t: f64,
    psi_t: f64,
    residual_t: f64,
    dominance: bool,
}

pub fn verify_t34(path: &Path, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(path)?;
    let vc = cfg.verify_config();
    let targets = Target::all(&cfg)?;
    let outcomes = targets
        .par_iter()
        .map(|target| {
            let domain = target.domain()?;
            match verify_fixed_point_existence(&cfg.space, target.search(&domain), &vc) {
                Ok(r) => Ok(Ok(r)),
                Err(PnError::TheoremViolation(m)) => Ok(Err(m)),
                Err(e) => Err(Failure::from(e)),
            }
        })
        .collect::<Result<Vec<_>, Failure>>()?;

    let mut entries = Vec::with_capacity(outcomes.len());
    let mut rows = Vec::new();
    let mut holding = 0;
    for (id, (target, outcome)) in targets.iter().zip(&outcomes).enumerate() {
        let mut entry = json!({ "scenario_id": id, "map": target.describe() });
        match outcome {
            Ok(r) => {
                holding += r.holds() as usize;
                entry["holds"] = json!(r.holds());
                entry["report"] = json!(r);
                for &t in &vc.estimator.t_grid {
                    rows.push(CurveRow {
                        scenario_id: id,
                        t,
                        psi_t: r.psi.value(t),
                        residual_t: r.residual.value(t),
                        dominance: r.dominance,
                    });
                }
            }
            Err(m) => {
                entry["holds"] = json!(false);
                entry["error"] = json!(m);
            }
        }
        entries.push(entry);
    }
    let report = json!({
        "seed": cfg.seed,
        "space": cfg.space,
        "settings": {
            "h": vc.h,
            "tol": vc.tol.unwrap_or(vc.h),
            "max_refinements": vc.max_refinements,
            "delta": vc.estimator.delta,
            "grid": vc.estimator.grid,
        },
        "count": entries.len(),
        "holds": holding,
        "scenarios": entries,
    });
    let text = to_pretty(&report)? + "\n";

    match out.or_else(|| cfg.output.clone()) {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| Failure::Other(format!("{}: {e}", dir.display())))?;
            write_file(&dir.join("report.json"), text.as_bytes())?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| Failure::Other(e.to_string()))?;
            }
            if rows.is_empty() {
                w.write_record(["scenario_id", "t", "psi_t", "residual_t", "dominance"])
                    .map_err(|e| Failure::Other(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Other(e.to_string()))?;
            write_file(&dir.join("curves.csv"), &bytes)?;
            emit(&format!("{holding}/{} scenarios hold; wrote {}\n", targets.len(), dir.display()))?;
        }
        None => emit(&text)?,
    }
    if holding < targets.len() {
        return Err(Failure::Theorem(format!(
            "the existence check failed on {} of {} scenarios",
            targets.len() - holding,
            targets.len()
        )));
    }
    Ok(())
}

pub fn gen_scenarios(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(path)?;
    let Some(fam) = &cfg.scenarios else {
        return Err(Failure::Validation("config has no `scenarios` family".into()));
    };
    let seed = match seed {
        Some(s) => s,
        None => cfg.require_seed()?,
    };
    let maps = pnkit_core::scenario::generate_scenarios(fam, seed)?;
    let text = to_pretty(&maps)? + "\n";
    match out {
        Some(p) => write_file(&p, text.as_bytes()),
        None => emit(&text),
    }
}
