mod common;

use common::{lattice_ddf, mass_below, probe_points};
use pnkit_core::{ddf_leq, left_limit_of_infimum, Ddf};
use proptest::prelude::*;

// smallest h on a 1e-4 grid for which both shifted inequalities hold on a
// dense x-grid of (0, 1/h) refined around every knot
fn sibley_brute(f: &Ddf, g: &Ddf) -> f64 {
    let fj: Vec<(f64, f64)> = f.jumps().collect();
    let gj: Vec<(f64, f64)> = g.jumps().collect();
    let knots: Vec<f64> = fj.iter().chain(&gj).map(|j| j.0).collect();
    for k in 0..=10_000 {
        let h = k as f64 * 1e-4;
        let end = if h == 0.0 { 1e6 } else { 1.0 / h };
        let mut xs: Vec<f64> = (1..4000).map(|i| end.min(20.0) * i as f64 / 4000.0).collect();
        for &a in &knots {
            for d in [-h - 1e-7, -h + 1e-7, 1e-7, -1e-7, h + 1e-7] {
                if a + d > 0.0 && a + d < end {
                    xs.push(a + d);
                }
            }
        }
        let ok = xs.iter().all(|&x| {
            mass_below(&fj, x) <= mass_below(&gj, x + h) + h + 1e-15
                && mass_below(&gj, x) <= mass_below(&fj, x + h) + h + 1e-15
        });
        if ok {
            return h;
        }
    }
    1.0
}

#[test]
fn sibley_matches_brute_force_scan() {
    let e = |a| Ddf::epsilon(a).unwrap();
    let cases = [
        (e(0.2), e(0.3)),
        (e(0.0), e(0.25)),
        (e(0.0), e(3.0)),
        (Ddf::from_jumps(&[(0.5, 0.5), (1.0, 0.5)]).unwrap(), e(0.5)),
        (Ddf::from_jumps(&[(0.25, 0.3)]).unwrap(), e(0.75)),
        (Ddf::from_jumps(&[(0.1, 0.9)]).unwrap(), Ddf::bottom()),
    ];
    for (f, g) in &cases {
        let exact = f.sibley_distance(g);
        let brute = sibley_brute(f, g);
        assert!((exact - brute).abs() <= 2e-4, "{f} vs {g}: {exact} against {brute}");
    }
    assert!((e(0.2).sibley_distance(&e(0.3)) - 0.1).abs() < 1e-8);
}

#[test]
fn sibley_of_vanishing_jumps_decreases_to_zero() {
    let mut last = f64::INFINITY;
    for n in 1..=64 {
        let d = Ddf::epsilon(1.0 / n as f64).unwrap().sibley_distance(&Ddf::identity());
        assert!(d <= last + 1e-9);
        assert!(d <= 1.0 / n as f64 + 1e-8);
        last = d;
    }
    assert!(last < 0.02);
}

proptest! {
    #[test]
    fn evaluation_is_monotone_and_left_continuous(f in lattice_ddf(), xs in prop::collection::vec(0.0f64..6.0, 2..20)) {
        let jumps: Vec<(f64, f64)> = f.jumps().collect();
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        for w in xs.windows(2) {
            prop_assert!(f.value(w[0]) <= f.value(w[1]));
        }
        for x in xs {
            prop_assert!((f.value(x) - mass_below(&jumps, x)).abs() < 1e-12);
        }
        for (l, _) in &jumps {
            // left-continuous: the value at a knot equals the value just below
            prop_assert_eq!(f.value(*l), f.value(*l - 1e-9));
            prop_assert!(f.value_right(*l) >= f.value(*l));
        }
        prop_assert_eq!(f.value(0.0), 0.0);
        prop_assert_eq!(f.value(f64::INFINITY), 1.0);
    }

    #[test]
    fn order_is_a_partial_order(f in lattice_ddf(), g in lattice_ddf(), h in lattice_ddf()) {
        let brute = |a: &Ddf, b: &Ddf| probe_points().iter().all(|&x| a.value(x) <= b.value(x) + 1e-12);
        prop_assert_eq!(ddf_leq(&f, &g), brute(&f, &g));
        prop_assert!(ddf_leq(&f, &f));
        if ddf_leq(&f, &g) && ddf_leq(&g, &f) {
            prop_assert_eq!(&f, &g);
        }
        if ddf_leq(&f, &g) && ddf_leq(&g, &h) {
            prop_assert!(ddf_leq(&f, &h));
        }
        prop_assert!(ddf_leq(&f, &Ddf::identity()));
        prop_assert!(ddf_leq(&Ddf::bottom(), &f));
    }

    #[test]
    fn sibley_is_a_symmetric_bounded_distance(f in lattice_ddf(), g in lattice_ddf()) {
        let d = f.sibley_distance(&g);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!((d - g.sibley_distance(&f)).abs() < 1e-9);
        prop_assert_eq!(f.sibley_distance(&f), 0.0);
        if f != g {
            prop_assert!(d > 0.0);
        }
    }

    #[test]
    fn infimum_is_pointwise_minimum(fs in prop::collection::vec(lattice_ddf(), 1..5)) {
        let inf = left_limit_of_infimum(&fs).unwrap();
        for x in probe_points() {
            let brute = fs.iter().map(|f| f.value(x)).fold(1.0, f64::min);
            prop_assert!((inf.value(x) - brute).abs() < 1e-12);
        }
        for f in &fs {
            prop_assert!(ddf_leq(&inf, f));
        }
    }

    #[test]
    fn location_scaling_composes(f in lattice_ddf(), c in 0.1f64..10.0) {
        let g = f.scale_locations(c).unwrap();
        for x in probe_points() {
            prop_assert_eq!(g.value(x * c), f.value(x));
        }
    }
}
