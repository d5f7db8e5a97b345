//! Seeded sample generators shared by the axiom checks, tests and the CLI.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ddf::Ddf;
use crate::vector::Vector;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Triples in `[0, 1]³`; about one coordinate in twenty is snapped to 0 or 1.
pub fn unit_triples(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut r = rng(seed);
    let mut draw = move || match r.gen_range(0..40) {
        0 => 0.0,
        1 => 1.0,
        _ => r.gen::<f64>(),
    };
    (0..n).map(|_| (draw(), draw(), draw())).collect()
}

pub fn random_vector(r: &mut impl Rng, dim: usize, half_width: f64) -> Vector {
    Vector::new((0..dim).map(|_| r.gen_range(-half_width..=half_width)).collect()).expect("finite coordinates")
}

pub fn vector_pairs(seed: u64, dim: usize, n: usize, half_width: f64) -> Vec<(Vector, Vector)> {
    let mut r = rng(seed);
    (0..n).map(|_| (random_vector(&mut r, dim, half_width), random_vector(&mut r, dim, half_width))).collect()
}

/// A step d.d.f. with 1 to `max_jumps` jumps at locations in `[0, max_loc)`.
/// Roughly one in four has part of its mass left at infinity.
pub fn random_step_ddf(r: &mut impl Rng, max_jumps: usize, max_loc: f64) -> Ddf {
    let k = r.gen_range(1..=max_jumps.max(1));
    let mut locs: Vec<f64> =
        (0..k).map(|_| if r.gen_range(0..10) == 0 { 0.0 } else { r.gen_range(0.0..max_loc) }).collect();
    locs.sort_by(f64::total_cmp);
    locs.dedup();
    let weights: Vec<f64> = locs.iter().map(|_| r.gen_range(0.05..1.0)).collect();
    let total = weights.iter().sum::<f64>() * if r.gen_range(0..4) == 0 { 1.3 } else { 1.0 };
    let jumps: Vec<(f64, f64)> = locs.into_iter().zip(weights).map(|(l, w)| (l, w / total)).collect();
    Ddf::from_jumps(&jumps).expect("random masses sum to at most 1")
}
