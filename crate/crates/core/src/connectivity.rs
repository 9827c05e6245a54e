//! Connectedness, walk distances and diameter at block/cell resolution.
//!
//! Everything is read off the support graph `S_ij = [value_ij > ε]`. For a
//! step graphon, `supp(W^{∘m})` on `P_i × P_j` is exactly `(S^m)_ij`, so the
//! walk distance `min{m ≥ 1 : (S^m)_ij}` decides both reachability between
//! sets and the pointwise Varadhan distance. On grids the same computation is
//! a discretization of the measurable-set definitions.
//!
//! The countable-block infinite path graphon (connected but without finite
//! diameter) has no finite representation here.

use serde::Serialize;

use crate::bitset::BitMatrix;
use crate::graphon::{Graphon, StepGraphon};
use crate::linalg::sym_eig;

pub const STEP_EPSILON: f64 = 1e-12;
pub const GRID_EPSILON: f64 = 1e-9;

/// Support threshold matching the representation: exact zeros for step
/// graphons, quadrature noise for grids.
pub fn default_epsilon(w: &Graphon) -> f64 {
    if w.is_grid() {
        GRID_EPSILON
    } else {
        STEP_EPSILON
    }
}

/// Hop count, with an explicit marker for "no walk of any length".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hops {
    Finite(u32),
    Unreachable,
}

impl Hops {
    pub fn finite(self) -> Option<u32> {
        match self {
            Hops::Finite(d) => Some(d),
            Hops::Unreachable => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Hops::Finite(_))
    }
}

impl From<Option<u32>> for Hops {
    fn from(d: Option<u32>) -> Self {
        d.map_or(Hops::Unreachable, Hops::Finite)
    }
}

impl std::fmt::Display for Hops {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Hops::Finite(d) => write!(f, "{d}"),
            Hops::Unreachable => write!(f, "inf"),
        }
    }
}

impl Serialize for Hops {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Hops::Finite(d) => s.serialize_u32(*d),
            Hops::Unreachable => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SupportGraph {
    adjacency: BitMatrix,
    epsilon: f64,
}

impl SupportGraph {
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i, j)
    }

    pub fn has_loop(&self, i: usize) -> bool {
        self.adjacency.get(i, i)
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.adjacency
    }

    /// Whether block `i` has a neighbour other than itself.
    pub fn has_neighbor(&self, i: usize) -> bool {
        self.adjacency.row_ones(i).any(|j| j != i)
    }

    /// Connected components, ignoring self-loops, as lists of block indices.
    /// Shortest closed walk through `i`.
    fn return_distance(&self, i: usize) -> Hops {
        if self.has_loop(i) {
            Hops::Finite(1)
        } else if self.has_neighbor(i) {
            Hops::Finite(2)
        } else {
            Hops::Unreachable
        }
    }

    /// One entry of [`block_distance_matrix`], from a single search.
    pub fn walk_distance(&self, i: usize, j: usize) -> Hops {
        if i == j {
            self.return_distance(i)
        } else {
            self.adjacency.bfs(i)[j].into()
        }
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = self
                .adjacency
                .bfs(s)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect();
            for &v in &members {
                label[v] = out.len();
            }
            out.push(members);
        }
        out
    }
}

pub fn support_graph(w: &Graphon, epsilon: f64) -> SupportGraph {
    let values = w.values();
    let n = values.nrows();
    let mut adjacency = BitMatrix::new(n);
    for i in 0..n {
        for j in 0..n {
            if values[(i, j)] > epsilon {
                adjacency.set(i, j);
            }
        }
    }
    SupportGraph { adjacency, epsilon }
}

/// Square matrix of walk distances.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistances {
    n: usize,
    data: Vec<Hops>,
}

impl WalkDistances {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Hops {
        self.data[i * self.n + j]
    }

    /// Largest entry; `Unreachable` dominates.
    pub fn max(&self) -> Hops {
        self.data.iter().copied().max().unwrap_or(Hops::Finite(0))
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Hops]> {
        self.data.chunks(self.n)
    }
}

/// `d'(i, j) = min{m ≥ 1 : (S^m)_ij}`, including `i = j`: the diagonal is 1
/// with a self-loop, 2 when the block has any neighbour, otherwise
/// unreachable.
pub fn block_distance_matrix(s: &SupportGraph) -> WalkDistances {
    let n = s.len();
    let mut data = vec![Hops::Unreachable; n * n];
    for i in 0..n {
        let dist = s.adjacency.bfs(i);
        for j in 0..n {
            data[i * n + j] = if i == j {
                s.return_distance(i)
            } else {
                dist[j].into()
            };
        }
    }
    WalkDistances { n, data }
}

/// Whether no positive-measure set is cut off from its complement.
///
/// With two or more blocks this is connectivity of the support graph; a
/// single block needs a positive value so that subsets of it interact.
pub fn is_connected_with(w: &Graphon, epsilon: f64) -> bool {
    let s = support_graph(w, epsilon);
    match s.len() {
        0 => false,
        1 => s.has_loop(0),
        _ => s.components().len() == 1,
    }
}

pub fn is_connected(w: &Graphon) -> bool {
    is_connected_with(w, default_epsilon(w))
}

/// Least `M` such that every pair of positive-measure sets is joined by a
/// walk of length at most `M`; `Unreachable` when no such bound exists.
pub fn diameter(w: &Graphon) -> Hops {
    block_distance_matrix(&support_graph(w, default_epsilon(w))).max()
}

/// Dimension of the Laplacian kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelDim {
    Finite(usize),
    Infinite,
}

/// `dim ker(T_k − 𝒲)` for a step graphon.
///
/// On the step subspace the Laplacian is `diag(k) − M`, similar to the
/// symmetric `diag(k) − D^{1/2} A D^{1/2}`; on the orthogonal complement it
/// multiplies by `k`, which has an infinite-dimensional kernel as soon as
/// some block has zero degree.
pub fn laplacian_kernel_dim(w: &StepGraphon, tolerance: f64) -> KernelDim {
    let k = w.degree();
    if k.values().iter().any(|&d| d <= tolerance) {
        return KernelDim::Infinite;
    }
    let mut l = -w.symmetrized_operator();
    for i in 0..w.len() {
        l[(i, i)] += k.values()[i];
    }
    let spectrum = sym_eig(&l).expect("symmetrized Laplacian is symmetric");
    KernelDim::Finite(
        spectrum
            .eigenvalues
            .iter()
            .filter(|v| v.abs() <= tolerance)
            .count(),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityReport {
    pub connected: bool,
    pub diameter: Hops,
    pub components: usize,
    pub epsilon: f64,
    /// Grid answers are a cell-level discretization of the set-level
    /// definitions.
    pub approximate: bool,
}

pub fn connectivity_report(w: &Graphon, epsilon: f64) -> ConnectivityReport {
    let s = support_graph(w, epsilon);
    ConnectivityReport {
        connected: is_connected_with(w, epsilon),
        diameter: block_distance_matrix(&s).max(),
        components: s.components().len(),
        epsilon,
        approximate: w.is_grid(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use nalgebra::DMatrix;

    #[test]
    fn bipartite_support_and_diameter() {
        let w: Graphon = builtin::bipartite().into();
        let s = support_graph(&w, STEP_EPSILON);
        assert!(!s.has_edge(0, 0) && s.has_edge(0, 1) && s.has_edge(1, 0) && !s.has_edge(1, 1));
        assert!(is_connected(&w));
        assert_eq!(diameter(&w), Hops::Finite(2));
        let d = block_distance_matrix(&s);
        assert_eq!(d.get(0, 0), Hops::Finite(2));
        assert_eq!(d.get(0, 1), Hops::Finite(1));
    }

    #[test]
    fn erdos_renyi_is_trivially_connected() {
        let w: Graphon = builtin::erdos_renyi(0.3).unwrap().into();
        assert!(is_connected(&w));
        assert_eq!(diameter(&w), Hops::Finite(1));
        let zero: Graphon = builtin::erdos_renyi(0.0).unwrap().into();
        assert!(!is_connected(&zero));
        assert_eq!(diameter(&zero), Hops::Unreachable);
    }

    #[test]
    fn block_diagonal_is_disconnected() {
        let w = StepGraphon::from_rows(
            vec![1.0 / 3.0, 2.0 / 3.0],
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let w: Graphon = w.into();
        assert!(!is_connected(&w));
        assert_eq!(diameter(&w), Hops::Unreachable);
        assert_eq!(support_graph(&w, STEP_EPSILON).components().len(), 2);
    }

    #[test]
    fn cycle_walk_distances() {
        let w: Graphon = builtin::cycle(6).unwrap().into();
        let d = block_distance_matrix(&support_graph(&w, STEP_EPSILON));
        assert_eq!(d.get(0, 3), Hops::Finite(3));
        assert_eq!(d.get(0, 2), Hops::Finite(2));
        assert_eq!(d.get(4, 4), Hops::Finite(2));
    }

    #[test]
    fn self_loop_distance() {
        let w: Graphon = StepGraphon::lift(DMatrix::from_element(1, 1, 0.7))
            .unwrap()
            .into();
        let d = block_distance_matrix(&support_graph(&w, STEP_EPSILON));
        assert_eq!(d.get(0, 0), Hops::Finite(1));
    }

    #[test]
    fn circular_band_support_width_and_diameter() {
        let w: Graphon = builtin::circular_band(1.0 / 7.0, 700).unwrap().into();
        let s = support_graph(&w, GRID_EPSILON);
        for j in 0..700usize {
            let k = j.min(700 - j);
            assert_eq!(s.has_edge(0, j), k <= 100, "cell offset {k}");
        }
        assert_eq!(diameter(&w), Hops::Finite(4));
        let report = connectivity_report(&w, GRID_EPSILON);
        assert!(report.connected && report.approximate);
    }

    #[test]
    fn laplacian_kernel_detects_components() {
        let connected = builtin::cycle(5).unwrap();
        assert_eq!(laplacian_kernel_dim(&connected, 1e-9), KernelDim::Finite(1));
        let split =
            StepGraphon::from_rows(vec![0.5, 0.5], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(laplacian_kernel_dim(&split, 1e-9), KernelDim::Finite(2));
        let isolated =
            StepGraphon::from_rows(vec![0.5, 0.5], &[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(laplacian_kernel_dim(&isolated, 1e-9), KernelDim::Infinite);
    }
}
