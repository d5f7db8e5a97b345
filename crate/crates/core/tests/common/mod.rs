#![allow(dead_code)]

use pnkit_core::Ddf;
use proptest::prelude::*;
use rand::Rng;

/// Step d.d.f.s with knots on the lattice `k/16`, `k < 32`, some with mass
/// missing at infinity.
pub fn lattice_ddf() -> impl Strategy<Value = Ddf> {
    (prop::collection::btree_map(0u32..32, 1u32..20, 1..6), 0u32..4).prop_map(|(m, deficit)| {
        let total: u32 = m.values().sum::<u32>() + deficit;
        let jumps: Vec<(f64, f64)> = m.into_iter().map(|(k, w)| (k as f64 / 16.0, w as f64 / total as f64)).collect();
        Ddf::from_jumps(&jumps).unwrap()
    })
}

pub fn random_lattice_ddf(r: &mut impl Rng) -> Ddf {
    let n = r.gen_range(1..=5);
    let mut ks: Vec<u32> = (0..n).map(|_| r.gen_range(0..32)).collect();
    ks.sort();
    ks.dedup();
    let ws: Vec<u32> = ks.iter().map(|_| r.gen_range(1..20)).collect();
    let total = ws.iter().sum::<u32>() + r.gen_range(0..4);
    let jumps: Vec<(f64, f64)> =
        ks.iter().zip(&ws).map(|(&k, &w)| (k as f64 / 16.0, w as f64 / total as f64)).collect();
    Ddf::from_jumps(&jumps).unwrap()
}

/// Cumulative mass strictly below `x`, straight from a jump list.
pub fn mass_below(jumps: &[(f64, f64)], x: f64) -> f64 {
    jumps.iter().filter(|(l, _)| *l < x).map(|(_, m)| m).sum()
}

/// Points where two lattice d.d.f.s can differ: off-lattice offsets between
/// and beyond the knots.
pub fn probe_points() -> Vec<f64> {
    (0..80).map(|k| k as f64 / 16.0 + 1.0 / 64.0).collect()
}
