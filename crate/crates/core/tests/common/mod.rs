#![allow(dead_code)]

use fuzzy_moqp::{FuzzyBounds, FuzzyMoqpInstance, FuzzyRow, QuadraticObjective};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `B Bᵗ` for a random nonnegative `B`, so the result is PSD with
/// nonnegative entries.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<Vec<f64>> {
    let b: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0.0..scale)).collect()).collect();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|s| b[i][s] * b[j][s]).sum()).collect())
        .collect()
}

/// Random instance with nonnegative data whose tightest crisp region still
/// contains the nominal lower corner `l`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, k: usize, m: usize) -> FuzzyMoqpInstance {
    let l: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let u: Vec<f64> = l.iter().map(|lj| lj + rng.random_range(1.0..5.0)).collect();
    let t: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
    let objectives = (0..k)
        .map(|_| {
            let c = (0..n).map(|_| rng.random_range(0.0..5.0)).collect();
            QuadraticObjective::new(c, random_psd(rng, n, 1.5))
        })
        .collect();
    let rows = (0..m)
        .map(|_| {
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
            let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
            let at_l: f64 = a.iter().zip(&d).zip(&l).map(|((a, d), l)| (a + d) * l).sum();
            FuzzyRow { a, d, b: at_l + rng.random_range(1.0..10.0), p: rng.random_range(0.5..3.0) }
        })
        .collect();
    FuzzyMoqpInstance::new(objectives, rows, FuzzyBounds { l, r, u, t })
}
