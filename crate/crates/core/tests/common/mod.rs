#![allow(dead_code)]

use graphon::{IntervalSet, Partition, StepGraphon};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_measures(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|r| r / total).collect()
}

/// Symmetric matrix with entries in [0, 1]; each entry is zero with
/// probability `zero_prob`.
pub fn random_blocks(rng: &mut impl Rng, n: usize, zero_prob: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            if !rng.random_bool(zero_prob) {
                let v = rng.random_range(0.05..=1.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
    }
    m
}

pub fn random_step(rng: &mut impl Rng, n: usize, zero_prob: f64) -> StepGraphon {
    let p = Partition::new(random_measures(rng, n)).unwrap();
    StepGraphon::new(p, random_blocks(rng, n, zero_prob)).unwrap()
}

pub fn random_homogeneous(rng: &mut impl Rng, n: usize, zero_prob: f64) -> StepGraphon {
    StepGraphon::lift(random_blocks(rng, n, zero_prob)).unwrap()
}

pub fn random_connected_step(rng: &mut impl Rng, max_n: usize, zero_prob: f64) -> StepGraphon {
    loop {
        let n = rng.random_range(1..=max_n);
        let w = random_step(rng, n, zero_prob);
        if graphon::is_connected(&w.clone().into()) {
            return w;
        }
    }
}

/// Union of a nonempty random subset of blocks.
pub fn random_block_set(rng: &mut impl Rng, p: &Partition) -> IntervalSet {
    loop {
        let picked: Vec<usize> = (0..p.len()).filter(|_| rng.random_bool(0.4)).collect();
        if !picked.is_empty() {
            return IntervalSet::blocks(p, &picked).unwrap();
        }
    }
}

/// Up to three random intervals, possibly empty.
pub fn random_interval_set(rng: &mut impl Rng) -> IntervalSet {
    let k = rng.random_range(0..=3);
    let parts: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let a: f64 = rng.random();
            let b: f64 = rng.random();
            (a.min(b), a.max(b))
        })
        .filter(|(a, b)| b > a)
        .collect();
    IntervalSet::new(parts).unwrap()
}

/// Random step graphons with up to `max_n` blocks and some exact zeros.
pub fn arb_step(max_n: usize) -> impl Strategy<Value = StepGraphon> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.1f64..1.0, n),
                prop::collection::vec(0.0f64..=1.0, n * n),
                prop::collection::vec(any::<bool>(), n * n),
            )
        })
        .prop_map(|(raw, vals, zero)| {
            let n = raw.len();
            let total: f64 = raw.iter().sum();
            let p = Partition::new(raw.iter().map(|r| r / total).collect()).unwrap();
            let m = DMatrix::from_fn(n, n, |i, j| {
                let (a, b) = (i.min(j), i.max(j));
                if zero[a * n + b] {
                    0.0
                } else {
                    vals[a * n + b]
                }
            });
            StepGraphon::new(p, m).unwrap()
        })
}

/// A random permutation of `0..n` as a strategy.
pub fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}
