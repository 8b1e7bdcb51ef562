//! Deterministic sampling helpers used by the verification suites.

use crate::math::Vec2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded RNG with a stable stream across runs and platforms.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample from the open unit disk (rejection-free polar draw).
pub fn sample_unit_disk(rng: &mut ChaCha8Rng) -> Vec2 {
    let r = rng.gen::<f64>().sqrt();
    let a = rng.gen::<f64>() * std::f64::consts::TAU;
    Vec2::new(r * a.cos(), r * a.sin())
}

/// n evenly spaced values covering [a, b] inclusive (n >= 2).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// n log-spaced values covering [a, b] inclusive (0 < a < b, n >= 2).
pub fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && a > 0.0 && b > a);
    let (la, lb) = (a.ln(), b.ln());
    let h = (lb - la) / (n - 1) as f64;
    (0..n).map(|i| (la + h * i as f64).exp()).collect()
}
