//! W-random graphs and their empirical shortest-path distances.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitset::BitMatrix;
use crate::connectivity::{is_connected, Hops};
use crate::error::{Error, Result};
use crate::graphon::Graphon;
use crate::varadhan::distance_field;

pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha, seed_from_u64)";

#[derive(Debug, Clone)]
pub struct SampledGraph {
    latent: Vec<f64>,
    adjacency: BitMatrix,
    seed: u64,
}

impl SampledGraph {
    pub fn len(&self) -> usize {
        self.latent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.latent.is_empty()
    }

    pub fn latent(&self) -> &[f64] {
        &self.latent
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i, j)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.count_ones() / 2
    }

    /// Edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| {
            self.adjacency
                .row_ones(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// `u v` per line, 0-indexed.
    pub fn write_edge_list(&self, mut out: impl Write) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Draws `n` uniform latent points, then joins each pair `i < j` with
/// probability `W(x_i, x_j)`.
pub fn sample_graph(w: &Graphon, n: usize, seed: u64) -> Result<SampledGraph> {
    if n == 0 {
        return Err(Error::invalid("a sampled graph needs at least one vertex"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let latent: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let p = w.partition();
    let blocks: Vec<usize> = latent
        .iter()
        .map(|&x| p.block_of(x))
        .collect::<Result<_>>()?;
    let values = w.values();
    let mut adjacency = BitMatrix::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < values[(blocks[i], blocks[j])] {
                adjacency.set(i, j);
                adjacency.set(j, i);
            }
        }
    }
    Ok(SampledGraph {
        latent,
        adjacency,
        seed,
    })
}

/// Histogram of shortest-path lengths over unordered pairs of distinct
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceProfile {
    pub pairs: usize,
    pub histogram: BTreeMap<u32, usize>,
    pub unreachable: usize,
}

impl DistanceProfile {
    /// Fraction of pairs at distance at most `d`.
    pub fn fraction_within(&self, d: u32) -> f64 {
        let hit: usize = self.histogram.range(..=d).map(|(_, c)| c).sum();
        hit as f64 / self.pairs.max(1) as f64
    }
}

pub fn distance_profile(adjacency: &BitMatrix) -> DistanceProfile {
    let n = adjacency.len();
    let mut histogram = BTreeMap::new();
    let mut unreachable = 0;
    for s in 0..n {
        for d in &adjacency.bfs(s)[s + 1..] {
            match d {
                Some(d) => *histogram.entry(*d).or_insert(0) += 1,
                None => unreachable += 1,
            }
        }
    }
    DistanceProfile {
        pairs: n * n.saturating_sub(1) / 2,
        histogram,
        unreachable,
    }
}

pub fn empirical_distance_profile(g: &SampledGraph) -> DistanceProfile {
    distance_profile(&g.adjacency)
}

/// Sampled shortest paths against `d_W` at the latent coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct VaradhanComparison {
    pub vertices: usize,
    pub trials: usize,
    pub seed: u64,
    pub rng: &'static str,
    pub pairs: usize,
    /// Fraction of pairs whose graph distance equals `d_W`.
    pub agreement: f64,
    /// Fraction of pairs with graph distance `d_W` or `d_W + 1`.
    pub agreement_within_one: f64,
    /// Graph distance minus `d_W`, over connected pairs.
    pub deviation: BTreeMap<i64, usize>,
    pub disconnected_pairs: usize,
}

/// Samples `trials` graphs with seeds `seed, seed + 1, …` and compares every
/// pair of vertices.
pub fn compare_with_varadhan(
    w: &Graphon,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<VaradhanComparison> {
    if !is_connected(w) {
        return Err(Error::Disconnected);
    }
    let field = distance_field(w);
    let mut deviation = BTreeMap::new();
    let (mut pairs, mut exact, mut near, mut disconnected) = (0, 0, 0, 0);
    for trial in 0..trials {
        let g = sample_graph(w, n, seed.wrapping_add(trial as u64))?;
        for s in 0..n {
            let bfs = g.adjacency.bfs(s);
            for (t, reached) in bfs.iter().enumerate().skip(s + 1) {
                pairs += 1;
                let Some(hops) = *reached else {
                    disconnected += 1;
                    continue;
                };
                let Hops::Finite(d) = field.at(g.latent[s], g.latent[t])? else {
                    continue;
                };
                let gap = hops as i64 - d as i64;
                *deviation.entry(gap).or_insert(0) += 1;
                if gap == 0 {
                    exact += 1;
                }
                if gap == 0 || gap == 1 {
                    near += 1;
                }
            }
        }
    }
    let total = pairs.max(1) as f64;
    Ok(VaradhanComparison {
        vertices: n,
        trials,
        seed,
        rng: RNG_ALGORITHM,
        pairs,
        agreement: exact as f64 / total,
        agreement_within_one: near as f64 / total,
        deviation,
        disconnected_pairs: disconnected,
    })
}
