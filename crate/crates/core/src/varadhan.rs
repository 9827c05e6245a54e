//! Shortest-path distance on graphons from short-time heat asymptotics.
//!
//! The set function `δ_W(U, V) = inf{m : ⟨1_U, 𝒲^m 1_V⟩ > 0}` and the
//! pointwise distance `d_W` (level sets `B_n` of the first composition power
//! whose support contains a point) are computed combinatorially on the
//! support graph. The heat route, `log p_t(U, V) / log t` as `t → 0⁺`, is
//! implemented separately and only used to cross-check.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::connectivity::{
    block_distance_matrix, default_epsilon, is_connected_with, support_graph, Hops, WalkDistances,
};
use crate::error::{Error, Result};
use crate::graphon::{Graphon, StepGraphon};
use crate::linalg::{analytic_transform, expm, norm1, TaylorFamily};
use crate::partition::{IntervalSet, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Step,
    Grid,
}

/// Pointwise Varadhan distance at block/cell resolution.
///
/// Entry `(i, j)` with `i ≠ j` is the distance between any point of block
/// `i` and any point of block `j`; the diagonal holds the distance between
/// two distinct points of the same block. `d(x, x) = 0` is applied by
/// [`DistanceField::at`].
#[derive(Debug, Clone)]
pub struct DistanceField {
    representation: Representation,
    partition: Partition,
    distances: WalkDistances,
    connected: bool,
}

impl DistanceField {
    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn distances(&self) -> &WalkDistances {
        &self.distances
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn block(&self, i: usize, j: usize) -> Hops {
        self.distances.get(i, j)
    }

    pub fn within_block(&self, i: usize) -> Hops {
        self.distances.get(i, i)
    }

    /// `d_W(x, y)`.
    pub fn at(&self, x: f64, y: f64) -> Result<Hops> {
        let i = self.partition.block_of(x)?;
        let j = self.partition.block_of(y)?;
        if x == y {
            return Ok(Hops::Finite(0));
        }
        Ok(self.distances.get(i, j))
    }

    /// Number of nonempty layers `B_1, …, B_D`; equals the diameter for a
    /// connected graphon.
    pub fn layer_count(&self) -> Hops {
        self.distances.max()
    }

    /// `μ⊗μ(B_n)` for `n = 0..=D`; unreachable mass is dropped.
    pub fn layer_measures(&self) -> Vec<f64> {
        let mu = self.partition.measures();
        let top = self
            .distances
            .rows()
            .flatten()
            .filter_map(|h| h.finite())
            .max()
            .unwrap_or(0) as usize;
        let mut out = vec![0.0; top + 1];
        for i in 0..mu.len() {
            for j in 0..mu.len() {
                if let Hops::Finite(d) = self.distances.get(i, j) {
                    out[d as usize] += mu[i] * mu[j];
                }
            }
        }
        out
    }
}

/// Builds the `B_n` layers by breadth-first search on the support graph.
pub fn distance_field_with(w: &Graphon, epsilon: f64) -> DistanceField {
    let s = support_graph(w, epsilon);
    DistanceField {
        representation: if w.is_grid() {
            Representation::Grid
        } else {
            Representation::Step
        },
        partition: w.partition(),
        distances: block_distance_matrix(&s),
        connected: is_connected_with(w, epsilon),
    }
}

pub fn distance_field(w: &Graphon) -> DistanceField {
    distance_field_with(w, default_epsilon(w))
}

/// `d_W(x, y)` for a single pair; use [`distance_field`] for repeated
/// lookups.
pub fn varadhan_distance(w: &Graphon, x: f64, y: f64) -> Result<Hops> {
    let p = w.partition();
    let (i, j) = (p.block_of(x)?, p.block_of(y)?);
    if x == y {
        return Ok(Hops::Finite(0));
    }
    Ok(support_graph(w, default_epsilon(w)).walk_distance(i, j))
}

/// `δ_W(U, V)`: zero on overlap, otherwise the smallest walk distance
/// between blocks touched by `U` and `V`.
pub fn delta_sets(w: &Graphon, u: &IntervalSet, v: &IntervalSet) -> Result<Hops> {
    delta_sets_with(&distance_field(w), u, v)
}

/// [`delta_sets`] against a precomputed field.
pub fn delta_sets_with(field: &DistanceField, u: &IntervalSet, v: &IntervalSet) -> Result<Hops> {
    if u.measure() <= 0.0 || v.measure() <= 0.0 {
        return Err(Error::EmptySet);
    }
    if u.intersection_measure(v) > 0.0 {
        return Ok(Hops::Finite(0));
    }
    let touched = |set: &IntervalSet| -> Vec<usize> {
        set.block_masses(&field.partition)
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(|(i, _)| i)
            .collect()
    };
    let (bu, bv) = (touched(u), touched(v));
    Ok(bu
        .iter()
        .flat_map(|&i| bv.iter().map(move |&j| field.block(i, j)))
        .min()
        .unwrap_or(Hops::Unreachable))
}

/// Operator generating the semigroup in [`heat_expectation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `p_t = ⟨1_V, e^{𝒲t} 1_U⟩`.
    Adjacency,
    /// `q_t = ⟨1_V, e^{−ℒt} 1_U⟩`.
    Laplacian,
}

// (e^{Gt} − I) u, summed as a series while ‖Gt‖₁ ≤ 1 so that small results
// keep full relative precision.
fn exp_minus_identity_apply(g: &DMatrix<f64>, t: f64, u: &DVector<f64>) -> Result<DVector<f64>> {
    let gt = g * t;
    if norm1(&gt) > 1.0 {
        return Ok(expm(&gt)? * u - u);
    }
    let mut term = u.clone();
    let mut sum = DVector::zeros(u.len());
    for k in 1..=200 {
        term = (&gt * term) / k as f64;
        sum += &term;
        let small = term
            .iter()
            .zip(sum.iter())
            .all(|(d, s)| d.abs() <= 1e-17 * s.abs());
        if small {
            break;
        }
    }
    Ok(sum)
}

/// Heat expectation between two interval sets.
///
/// On a step graphon `1_U` splits into its block averages `u` and a
/// remainder orthogonal to step functions. The adjacency operator acts as
/// `M = A·diag(μ)` on the first part and kills the second; the Laplacian acts
/// as `diag(k) − M` on the first part and multiplies the second by `k`. Grids
/// are treated as step graphons on their cells.
pub fn heat_expectation(
    w: &Graphon,
    u: &IntervalSet,
    v: &IntervalSet,
    t: f64,
    generator: Generator,
) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::invalid(format!(
            "time {t} must be finite and nonnegative"
        )));
    }
    let step = w.to_step();
    heat_expectation_step(&step, u, v, t, generator)
}

fn heat_expectation_step(
    w: &StepGraphon,
    u: &IntervalSet,
    v: &IntervalSet,
    t: f64,
    generator: Generator,
) -> Result<f64> {
    let p = w.partition();
    let mu = p.measures();
    let u_mass = u.block_masses(p);
    let v_mass = v.block_masses(p);
    let uv_mass = u.intersection(v).block_masses(p);
    let coeff = DVector::from_iterator(p.len(), u_mass.iter().zip(mu).map(|(m, mu)| m / mu));
    let overlap: f64 = uv_mass.iter().sum();
    if t == 0.0 {
        return Ok(overlap);
    }
    let m = w.operator_matrix();
    match generator {
        Generator::Adjacency => {
            let delta = exp_minus_identity_apply(&m, t, &coeff)?;
            Ok(overlap
                + v_mass
                    .iter()
                    .zip(delta.iter())
                    .map(|(a, b)| a * b)
                    .sum::<f64>())
        }
        Generator::Laplacian => {
            let k = w.degree();
            let mut lap = -m;
            for i in 0..p.len() {
                lap[(i, i)] += k.values()[i];
            }
            let delta = exp_minus_identity_apply(&(-lap), t, &coeff)?;
            let step_part: f64 = v_mass.iter().zip(delta.iter()).map(|(a, b)| a * b).sum();
            let orthogonal: f64 = (0..p.len())
                .map(|i| {
                    let inner = uv_mass[i] - v_mass[i] * coeff[i];
                    (-k.values()[i] * t).exp_m1() * inner
                })
                .sum();
            Ok(overlap + step_part + orthogonal)
        }
    }
}

/// Strictly decreasing positive times at which the slope is fitted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid(Vec<f64>);

pub const MIN_TIME: f64 = 1e-8;

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::invalid("slope fit needs at least two times"));
        }
        if times.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid("time grid must be strictly decreasing"));
        }
        let last = *times.last().unwrap();
        if last < MIN_TIME || !times[0].is_finite() {
            return Err(Error::invalid(format!(
                "times must lie in [{MIN_TIME:e}, ∞), got minimum {last:e}"
            )));
        }
        Ok(TimeGrid(times))
    }

    /// `k` log-spaced points from `hi` down to `lo`.
    pub fn log_spaced(hi: f64, lo: f64, k: usize) -> Result<Self> {
        if !(hi > lo && lo > 0.0) || k < 2 {
            return Err(Error::invalid(format!(
                "log grid needs hi > lo > 0 and k >= 2, got {hi}:{lo}:{k}"
            )));
        }
        let (a, b) = (hi.ln(), lo.ln());
        TimeGrid::new(
            (0..k)
                .map(|i| (a + (b - a) * i as f64 / (k - 1) as f64).exp())
                .collect(),
        )
    }

    /// Eight points from `1e-3` down to `1e-5`.
    pub fn standard() -> Self {
        TimeGrid::log_spaced(1e-3, 1e-5, 8).expect("default grid is valid")
    }

    pub fn times(&self) -> &[f64] {
        &self.0
    }
}

impl std::str::FromStr for TimeGrid {
    type Err = Error;

    /// `"hi:lo:k"`, log-spaced.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("expected `hi:lo:k`, got `{s}`")));
        }
        let f = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("bad time `{v}`: {e}")))
        };
        let k = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::invalid(format!("bad count `{}`: {e}", parts[2])))?;
        TimeGrid::log_spaced(f(parts[0])?, f(parts[1])?, k)
    }
}

/// Least-squares fit of `log |value|` against `log t`.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeEstimate {
    pub t_grid: Vec<f64>,
    pub log_values: Vec<f64>,
    pub slope: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// `slope` rounded to the nearest integer.
    pub estimate: i64,
}

pub const SLOPE_TOLERANCE: f64 = 0.1;
pub const RESIDUAL_TOLERANCE: f64 = 1e-3;

impl SlopeEstimate {
    fn fit(t_grid: &TimeGrid, values: &[f64]) -> Result<Self> {
        let xs: Vec<f64> = t_grid.times().iter().map(|t| t.ln()).collect();
        let mut ys = Vec::with_capacity(values.len());
        for (t, v) in t_grid.times().iter().zip(values) {
            if *v == 0.0 || !v.is_finite() {
                return Err(Error::NonPositive { t: *t });
            }
            ys.push(v.abs().ln());
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let residual = (xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        Ok(SlopeEstimate {
            t_grid: t_grid.times().to_vec(),
            log_values: ys,
            slope,
            residual,
            estimate: slope.round() as i64,
        })
    }

    /// `|slope − round(slope)| < 0.1` and residual below `1e-3`.
    pub fn is_integral(&self) -> bool {
        (self.slope - self.slope.round()).abs() < SLOPE_TOLERANCE
            && self.residual < RESIDUAL_TOLERANCE
    }
}

/// Slope of `log p_t(U, V)` against `log t` over the grid.
pub fn varadhan_slope(
    w: &Graphon,
    u: &IntervalSet,
    v: &IntervalSet,
    t_grid: &TimeGrid,
) -> Result<SlopeEstimate> {
    if u.measure() <= 0.0 || v.measure() <= 0.0 {
        return Err(Error::EmptySet);
    }
    let step = w.to_step();
    let values = t_grid
        .times()
        .iter()
        .map(|&t| heat_expectation_step(&step, u, v, t, Generator::Adjacency))
        .collect::<Result<Vec<_>>>()?;
    SlopeEstimate::fit(t_grid, &values)
}

/// Slope of `log |f(Lt)_ij|` with `L = weights + diag(diagonal)`.
///
/// `weights` must be nonnegative with the zero pattern of `adjacency`.
pub fn general_varadhan_slope(
    adjacency: &DMatrix<f64>,
    weights: &DMatrix<f64>,
    diagonal: &[f64],
    family: &TaylorFamily,
    i: usize,
    j: usize,
    t_grid: &TimeGrid,
) -> Result<SlopeEstimate> {
    let n = adjacency.nrows();
    if weights.shape() != adjacency.shape() || !adjacency.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: weights.nrows(),
        });
    }
    if diagonal.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: diagonal.len(),
        });
    }
    if i >= n || j >= n {
        return Err(Error::invalid(format!(
            "pair ({i}, {j}) out of range for {n} vertices"
        )));
    }
    for r in 0..n {
        for c in 0..n {
            let (a, m) = (adjacency[(r, c)], weights[(r, c)]);
            if m < 0.0 || (a == 0.0) != (m == 0.0) {
                return Err(Error::ZeroPattern { i: r, j: c });
            }
        }
    }
    let mut l = weights.clone();
    for (k, d) in diagonal.iter().enumerate() {
        l[(k, k)] += d;
    }
    let values = t_grid
        .times()
        .iter()
        .map(|&t| analytic_transform(family, &l, t).map(|f| f.value[(i, j)]))
        .collect::<Result<Vec<_>>>()?;
    SlopeEstimate::fit(t_grid, &values)
}
