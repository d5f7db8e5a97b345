use pnkit_core::discont::{convex_hull, psi_estimate, psi_exact, EstimatorSchedule, Hull, PiecewiseMap1D};
use pnkit_core::sampling::{random_vector, rng};
use pnkit_core::scenario::{generate_scenarios, MapKind, ScenarioFamily};
use pnkit_core::{ddf_leq, BoxDomain, Ddf, PnSpace, TNorm, Vector};
use rand::Rng;

fn corpus(kind: MapKind, seed: u64) -> Vec<PiecewiseMap1D> {
    let fam = ScenarioFamily { count: 40, kind, ..ScenarioFamily::default() };
    generate_scenarios(&fam, seed).unwrap()
}

#[test]
fn psi_scales_with_the_generator() {
    let base = PnSpace::simple(1).unwrap();
    for c in [0.5, 2.0] {
        let s = PnSpace::new(1, Ddf::epsilon(c).unwrap(), TNorm::M, TNorm::M).unwrap();
        for m in corpus(MapKind::Constant, 4) {
            let a = psi_exact(&base, &m).unwrap();
            let b = psi_exact(&s, &m).unwrap();
            match a.as_epsilon() {
                Some(0.0) => assert_eq!(b, Ddf::identity()),
                _ => assert_eq!(b, a.scale_locations(c).unwrap()),
            }
        }
    }
}

#[test]
fn psi_is_identity_exactly_without_gaps() {
    let s = PnSpace::simple(1).unwrap();
    for kind in [MapKind::Constant, MapKind::Affine] {
        for m in corpus(kind, 8) {
            let psi = psi_exact(&s, &m).unwrap();
            assert_eq!(psi == Ddf::identity(), m.max_gap() == 0.0, "{m:?}");
            if m.max_gap() > 0.0 {
                assert_eq!(psi.as_epsilon(), Some(m.max_gap()));
            }
        }
    }
}

#[test]
fn psi_lies_below_every_breakpoint_profile() {
    let g = Ddf::from_jumps(&[(0.5, 0.5), (1.0, 0.5)]).unwrap();
    let s = PnSpace::new(1, g, TNorm::M, TNorm::M).unwrap();
    for m in corpus(MapKind::Affine, 15) {
        let psi = psi_exact(&s, &m).unwrap();
        for b in m.breakpoints() {
            let fb = m.value(b);
            for q in m.continuoufication(b).unwrap().values {
                let nu = s.prob_norm(&Vector::scalar(fb - q.coords()[0])).unwrap();
                assert!(ddf_leq(&psi, &nu));
            }
        }
    }
}

#[test]
fn estimate_of_a_constant_map_is_identity() {
    let s = PnSpace::simple(2).unwrap();
    let f = pnkit_core::AffineMap::constant(Vector::new(vec![0.3, 0.7]).unwrap());
    let sched = EstimatorSchedule { grid: vec![1.0 / 32.0], ..EstimatorSchedule::default() };
    let est = psi_estimate(&s, &f, &BoxDomain::cube(2, 0.0, 1.0).unwrap(), &sched).unwrap();
    assert_eq!(est.psi, Ddf::identity());
}

// outside iff some direction strictly separates the query from every input
fn outside_brute(pts: &[[f64; 2]], q: [f64; 2]) -> bool {
    (0..3600).any(|k| {
        let a = k as f64 * std::f64::consts::TAU / 3600.0;
        let d = [a.cos(), a.sin()];
        let dq = d[0] * q[0] + d[1] * q[1];
        pts.iter().all(|p| d[0] * p[0] + d[1] * p[1] < dq - 1e-9)
    })
}

#[test]
fn polygon_hull_matches_brute_force() {
    let mut r = rng(77);
    for _ in 0..100 {
        let n = r.gen_range(1..12);
        let vs: Vec<Vector> = (0..n).map(|_| random_vector(&mut r, 2, 1.0)).collect();
        let pts: Vec<[f64; 2]> = vs.iter().map(|v| [v.coords()[0], v.coords()[1]]).collect();
        let hull = convex_hull(&vs).unwrap();
        let Hull::Polygon(verts) = &hull else { panic!("2D hull expected") };
        for v in verts {
            assert!(pts.contains(v));
        }
        for v in &vs {
            assert!(hull.distance(v) < 1e-12);
        }
        for _ in 0..50 {
            let q = random_vector(&mut r, 2, 1.5);
            let d = hull.distance(&q);
            if d > 0.0 && d < 1e-3 {
                continue;
            }
            assert_eq!(d > 0.0, outside_brute(&pts, [q.coords()[0], q.coords()[1]]), "{q} vs {verts:?}");
        }
    }
}

#[test]
fn interval_hull_matches_min_max() {
    let mut r = rng(78);
    for _ in 0..100 {
        let xs: Vec<f64> = (0..r.gen_range(1..10)).map(|_| r.gen_range(-3.0..3.0)).collect();
        let vs: Vec<Vector> = xs.iter().map(|&x| Vector::scalar(x)).collect();
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(convex_hull(&vs).unwrap(), Hull::Interval([lo, hi]));
    }
}
