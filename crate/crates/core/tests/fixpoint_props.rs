use pnkit_core::discont::{psi_estimate, psi_exact, EstimatorSchedule, PiecewiseMap1D};
use pnkit_core::fixpoint::{find_approx_fixed_point, kakutani_search, SearchTarget};
use pnkit_core::scenario::{generate_scenarios, MapKind, ScenarioFamily};
use pnkit_core::{BoxDomain, Ddf, FnMap, PnSpace, Vector};

const H: f64 = 1.0 / 256.0;

fn corpus(kind: MapKind, seed: u64) -> Vec<PiecewiseMap1D> {
    generate_scenarios(&ScenarioFamily { count: 30, kind, ..ScenarioFamily::default() }, seed).unwrap()
}

#[test]
fn kakutani_distance_does_not_grow_under_refinement() {
    for kind in [MapKind::Constant, MapKind::Affine] {
        for m in corpus(kind, 3) {
            let t = SearchTarget::Piecewise(&m);
            let mut last = f64::INFINITY;
            for k in 0..4 {
                let h = 1.0 / (16 << k) as f64;
                let d = kakutani_search(t, h, f64::INFINITY, 0).unwrap().distance;
                assert!(d <= last, "{m:?}: {d} after {last}");
                last = d;
            }
        }
    }
}

#[test]
fn sampled_kakutani_distance_does_not_grow_under_refinement() {
    let f = FnMap::new(1, |p: &Vector| Vector::scalar(if p.coords()[0] < 0.37 { 0.9 } else { 0.1 }));
    let d = BoxDomain::interval(0.0, 1.0).unwrap();
    let t = SearchTarget::Sampled { map: &f, domain: &d };
    let mut last = f64::INFINITY;
    for h in [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0] {
        let k = kakutani_search(t, h, f64::INFINITY, 0).unwrap();
        assert!(k.distance <= last);
        last = k.distance;
    }
    assert_eq!(last, 0.0);
}

#[test]
fn continuous_piecewise_maps_reach_exact_fixed_points() {
    let s = PnSpace::simple(1).unwrap();
    let fam = ScenarioFamily { count: 30, pieces: [1, 1], kind: MapKind::Affine, ..ScenarioFamily::default() };
    for m in generate_scenarios(&fam, 12).unwrap() {
        let psi = psi_exact(&s, &m).unwrap();
        assert_eq!(psi, Ddf::identity());
        let r = find_approx_fixed_point(&s, SearchTarget::Piecewise(&m), &psi, H, 0).unwrap();
        let bound = m.max_slope() * H + H;
        assert!(r.residual.sibley_distance(&Ddf::identity()) <= bound);
    }
}

#[test]
fn smooth_sampled_map_residual_is_within_one_cell_modulus() {
    let s = PnSpace::simple(1).unwrap();
    let l = 1.5;
    let f = FnMap::new(1, |p: &Vector| Vector::scalar(0.5 + 0.3 * (5.0 * p.coords()[0]).sin())).with_lipschitz(l);
    let d = BoxDomain::interval(0.0, 1.0).unwrap();
    // stop refining δ while neighborhoods still hold a grid neighbor
    let delta = (0..6).map(|k| 0.2 * 0.5_f64.powi(k)).collect();
    let sched = EstimatorSchedule { delta, grid: vec![H], ..EstimatorSchedule::default() };
    let est = psi_estimate(&s, &f, &d, &sched).unwrap();
    assert!(est.warnings.is_empty());
    let r = find_approx_fixed_point(&s, SearchTarget::Sampled { map: &f, domain: &d }, &est.psi, H, 0).unwrap();
    assert!(r.dominance);
    assert!(r.residual.sibley_distance(&Ddf::identity()) <= l * H + H);
}

#[test]
fn every_corpus_map_has_a_dominating_candidate() {
    let s = PnSpace::simple(1).unwrap();
    for kind in [MapKind::Constant, MapKind::Affine] {
        for m in corpus(kind, 5) {
            let psi = psi_exact(&s, &m).unwrap();
            let r = find_approx_fixed_point(&s, SearchTarget::Piecewise(&m), &psi, H, 1).unwrap();
            assert!(r.dominance, "{m:?}");
            let x = r.candidate.coords()[0];
            assert!((m.value(x) - x).abs() <= psi.as_epsilon().unwrap() + 1e-12);
        }
    }
}
