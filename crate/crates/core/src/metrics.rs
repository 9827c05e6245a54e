//! Communicability distance and embedding, neighbourhood and similarity
//! distances, twin merging and the cut norm.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{Graphon, StepGraphon};
use crate::linalg::{expm, sym_eig, SpectralData};
use crate::partition::{IntervalSet, Partition};

// Step coordinates of f = 1_X − 1_Y in the orthonormal basis 1_{P_i}/√μ_i,
// and the squared L² norm of the part of f that is not constant on blocks.
fn split(p: &Partition, x: &IntervalSet, y: &IntervalSet) -> (DVector<f64>, f64) {
    let xm = x.block_masses(p);
    let ym = y.block_masses(p);
    let both = x.intersection(y).block_masses(p);
    let mut g = DVector::zeros(p.len());
    let mut orthogonal = 0.0;
    for i in 0..p.len() {
        let mu = p.measure(i);
        let a = xm[i] - ym[i];
        g[i] = a / mu.sqrt();
        let sym_diff = xm[i] + ym[i] - 2.0 * both[i];
        orthogonal += (sym_diff - a * a / mu).max(0.0);
    }
    (g, orthogonal)
}

/// `‖e^{𝒲/2}(1_X − 1_Y)‖₂`.
///
/// The adjacency operator annihilates functions with zero block averages,
/// so the exponential is the identity on that part and acts as
/// `expm(B/2)` on the step coordinates.
pub fn communicability_distance(w: &StepGraphon, x: &IntervalSet, y: &IntervalSet) -> Result<f64> {
    let (g, orthogonal) = split(w.partition(), x, y);
    let half = expm(&(w.symmetrized_operator() * 0.5))?;
    Ok(((half * g).norm_squared() + orthogonal).sqrt())
}

/// Pairwise communicability distances between the given sets.
pub fn communicability_matrix(w: &StepGraphon, sets: &[IntervalSet]) -> Result<DMatrix<f64>> {
    let half = expm(&(w.symmetrized_operator() * 0.5))?;
    let n = sets.len();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let (g, orthogonal) = split(w.partition(), &sets[i], &sets[j]);
            let d = ((&half * g).norm_squared() + orthogonal).sqrt();
            out[(i, j)] = d;
            out[(j, i)] = d;
        }
    }
    Ok(out)
}

/// Coordinates `c_k = e^{λ_k/2} ⟨1_X, φ_k⟩` for the `K` largest eigenvalues.
#[derive(Debug, Clone, Serialize)]
pub struct Embedding {
    pub truncation: usize,
    pub eigenvalues: Vec<f64>,
    pub coordinates: Vec<f64>,
    /// Norm of the part of `e^{𝒲/2} 1_X` not captured by the coordinates.
    pub residual: f64,
}

/// Spectral data shared by embeddings of many sets.
#[derive(Debug, Clone)]
pub struct Embedder {
    partition: Partition,
    spectrum: SpectralData,
    truncation: usize,
}

impl Embedder {
    pub fn new(w: &StepGraphon, truncation: usize) -> Result<Self> {
        if truncation > w.len() {
            return Err(Error::invalid(format!(
                "truncation {truncation} exceeds the {} available eigenpairs",
                w.len()
            )));
        }
        Ok(Embedder {
            partition: w.partition().clone(),
            spectrum: sym_eig(&w.symmetrized_operator())?,
            truncation,
        })
    }

    pub fn spectrum(&self) -> &SpectralData {
        &self.spectrum
    }

    /// Block values of the eigenfunction `φ_k`.
    pub fn eigenfunction(&self, k: usize) -> DVector<f64> {
        let v = self.spectrum.vector(k);
        DVector::from_iterator(
            v.len(),
            v.iter()
                .zip(self.partition.measures())
                .map(|(a, mu)| a / mu.sqrt()),
        )
    }

    fn weighted(&self, g: &DVector<f64>) -> Vec<f64> {
        (0..self.spectrum.len())
            .map(|k| (self.spectrum.eigenvalues[k] / 2.0).exp() * self.spectrum.vector(k).dot(g))
            .collect()
    }

    pub fn embed(&self, x: &IntervalSet) -> Embedding {
        let (g, orthogonal) = split(&self.partition, x, &IntervalSet::empty());
        let all = self.weighted(&g);
        let tail: f64 = all[self.truncation..].iter().map(|c| c * c).sum();
        Embedding {
            truncation: self.truncation,
            eigenvalues: self.spectrum.eigenvalues[..self.truncation].to_vec(),
            coordinates: all[..self.truncation].to_vec(),
            residual: (tail + orthogonal).sqrt(),
        }
    }

    /// Norm of `e^{𝒲/2}(1_X − 1_Y)` outside the retained coordinates, so
    /// that `‖c(X) − c(Y)‖² + residual² = d_C(X, Y)²`.
    pub fn pair_residual(&self, x: &IntervalSet, y: &IntervalSet) -> f64 {
        let (g, orthogonal) = split(&self.partition, x, y);
        let all = self.weighted(&g);
        (all[self.truncation..].iter().map(|c| c * c).sum::<f64>() + orthogonal).sqrt()
    }
}

pub fn communicability_embedding(w: &StepGraphon, x: &IntervalSet, k: usize) -> Result<Embedding> {
    Ok(Embedder::new(w, k)?.embed(x))
}

pub fn kernel_residual(w: &StepGraphon, x: &IntervalSet, y: &IntervalSet, k: usize) -> Result<f64> {
    Ok(Embedder::new(w, k)?.pair_residual(x, y))
}

/// `Σ_k |v_ik − v_jk| μ_k` for every pair of blocks or cells.
pub fn neighbourhood_matrix(w: &Graphon) -> DMatrix<f64> {
    row_distances(&w.partition(), w.values())
}

fn row_distances(p: &Partition, values: &DMatrix<f64>) -> DMatrix<f64> {
    let n = values.nrows();
    let mu = p.measures();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let d: f64 = (0..n)
                .map(|k| (values[(i, k)] - values[(j, k)]).abs() * mu[k])
                .sum();
            out[(i, j)] = d;
            out[(j, i)] = d;
        }
    }
    out
}

/// `r_W(x, y) = ‖W(x, ·) − W(y, ·)‖₁`.
pub fn neighbourhood_distance(w: &Graphon, x: f64, y: f64) -> Result<f64> {
    let p = w.partition();
    let (i, j) = (p.block_of(x)?, p.block_of(y)?);
    let v = w.values();
    Ok((0..p.len())
        .map(|k| (v[(i, k)] - v[(j, k)]).abs() * p.measure(k))
        .sum())
}

/// `r̄_W = r_{W∘W}`.
pub fn similarity_distance(w: &Graphon, x: f64, y: f64) -> Result<f64> {
    neighbourhood_distance(&w.comp_power(2)?, x, y)
}

pub fn similarity_matrix(w: &Graphon) -> Result<DMatrix<f64>> {
    Ok(neighbourhood_matrix(&w.comp_power(2)?))
}

pub const TWIN_TOLERANCE: f64 = 1e-9;

/// Merges blocks whose rows are within `tol` in weighted L¹, repeating until
/// no such pair remains. Merged blocks are laid out in order of their first
/// member, so the result is a measure-preserving relabelling of the
/// coarsened graphon.
pub fn merge_twins(w: &StepGraphon, tol: f64) -> Result<StepGraphon> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::invalid(format!(
            "twin tolerance {tol} must be nonnegative"
        )));
    }
    let mut current = w.clone();
    loop {
        let n = current.len();
        let r = row_distances(current.partition(), current.blocks());
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut root = i;
            while parent[root] != root {
                root = parent[root];
            }
            parent[i] = root;
            root
        }
        for i in 0..n {
            for j in i + 1..n {
                if r[(i, j)] < tol {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        let groups: Vec<usize> = roots.iter().copied().unique().collect();
        if groups.len() == n {
            return Ok(current);
        }
        let label: Vec<usize> = roots
            .iter()
            .map(|r| groups.iter().position(|g| g == r).unwrap())
            .collect();
        let m = groups.len();
        let mu = current.partition().measures();
        let mut mass = vec![0.0; m];
        for i in 0..n {
            mass[label[i]] += mu[i];
        }
        let mut blocks = DMatrix::zeros(m, m);
        for i in 0..n {
            for j in 0..n {
                blocks[(label[i], label[j])] += current.blocks()[(i, j)] * mu[i] * mu[j];
            }
        }
        for a in 0..m {
            for b in 0..m {
                blocks[(a, b)] /= mass[a] * mass[b];
            }
        }
        current = StepGraphon::new(Partition::new(mass)?, tidy(blocks))?;
    }
}

fn tidy(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    m = (m + t) * 0.5;
    m.apply(|v| *v = v.clamp(0.0, 1.0));
    m
}

pub const MAX_CUT_BLOCKS: usize = 24;

/// `sup_{S,T} |∫_{S×T} W|`, exact for step graphons.
///
/// The objective is bilinear in the per-block masses of `S` and `T`, so it
/// suffices to take whole blocks. Each `S` is visited in Gray-code order
/// while the column sums `c_j = Σ_{i∈S} A_ij μ_i` are updated in place; the
/// best `T` then collects the blocks where `c_j` has the chosen sign.
pub fn cut_norm(w: &StepGraphon) -> Result<f64> {
    signed_cut_norm(w.partition(), w.blocks())
}

pub(crate) fn signed_cut_norm(p: &Partition, a: &DMatrix<f64>) -> Result<f64> {
    let n = p.len();
    if n > MAX_CUT_BLOCKS {
        return Err(Error::TooManyBlocks {
            n,
            max: MAX_CUT_BLOCKS,
        });
    }
    let mu = p.measures();
    let mut c = vec![0.0; n];
    let mut inside = vec![false; n];
    let mut best: f64 = 0.0;
    for step in 1u64..(1u64 << n) {
        let flip = step.trailing_zeros() as usize;
        let sign = if inside[flip] { -1.0 } else { 1.0 };
        inside[flip] = !inside[flip];
        for (j, cj) in c.iter_mut().enumerate() {
            *cj += sign * a[(flip, j)] * mu[flip];
        }
        let (mut pos, mut neg) = (0.0, 0.0);
        for (cj, m) in c.iter().zip(mu) {
            if *cj > 0.0 {
                pos += cj * m;
            } else {
                neg -= cj * m;
            }
        }
        best = best.max(pos).max(neg);
    }
    Ok(best)
}

pub const MAX_PERMUTATION_BLOCKS: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct CutDistance {
    pub value: f64,
    /// Applied to the second graphon via [`StepGraphon::permute_blocks`].
    pub permutation: Vec<usize>,
    /// Only block permutations are searched, so `value` bounds `δ_□` from
    /// above.
    pub upper_bound: bool,
}

/// `min_σ ‖W₁ − W₂^σ‖_□` over block permutations of equal-block graphons.
pub fn cut_distance_homogeneous(w1: &StepGraphon, w2: &StepGraphon) -> Result<CutDistance> {
    let n = w1.len();
    if w2.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w2.len(),
        });
    }
    if !w1.partition().is_homogeneous() || !w2.partition().is_homogeneous() {
        return Err(Error::invalid(
            "cut distance search needs equal-measure blocks",
        ));
    }
    if n > MAX_PERMUTATION_BLOCKS {
        return Err(Error::TooManyBlocks {
            n,
            max: MAX_PERMUTATION_BLOCKS,
        });
    }
    let mut best: Option<CutDistance> = None;
    for sigma in (0..n).permutations(n) {
        let diff = w1.blocks() - w2.permute_blocks(&sigma)?.blocks();
        let value = signed_cut_norm(w1.partition(), &diff)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(CutDistance {
                value,
                permutation: sigma,
                upper_bound: true,
            });
        }
    }
    Ok(best.expect("at least one permutation"))
}
