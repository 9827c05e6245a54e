//! Step and grid graphons together with their operator algebra.
//!
//! A [`StepGraphon`] is `Σ A_ij 1_{P_i × P_j}` for a partition `P` and a
//! symmetric matrix `A` with entries in `[0, 1]`. Its adjacency operator acts
//! on the step subspace as `M = A·diag(μ)` and annihilates the orthogonal
//! complement, so composition powers are `step_P(M^{m-1} A)` exactly.
//!
//! A [`GridGraphon`] stores cell averages on a uniform `n × n` grid and is the
//! approximate carrier for analytic kernels; its composition powers use the
//! midpoint rule.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::partition::{check_permutation, Partition};

const SYMMETRY_TOLERANCE: f64 = 1e-12;

fn validate_kernel(values: &DMatrix<f64>, tolerance: f64) -> Result<()> {
    if !values.is_square() {
        return Err(Error::invalid(format!(
            "kernel matrix must be square, got {}x{}",
            values.nrows(),
            values.ncols()
        )));
    }
    let n = values.nrows();
    for i in 0..n {
        for j in 0..n {
            let v = values[(i, j)];
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!(
                    "entry ({i}, {j}) = {v} is outside [0, 1]"
                )));
            }
            if (v - values[(j, i)]).abs() > tolerance {
                return Err(Error::invalid(format!(
                    "matrix is not symmetric at ({i}, {j}): {v} vs {}",
                    values[(j, i)]
                )));
            }
        }
    }
    Ok(())
}

/// Averages with the transpose and clamps to `[0, 1]`; used on results whose
/// symmetry and range hold mathematically but not to the last ulp.
fn tidy(mut values: DMatrix<f64>) -> DMatrix<f64> {
    let n = values.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (values[(i, j)] + values[(j, i)]);
            values[(i, j)] = avg;
            values[(j, i)] = avg;
        }
    }
    values.apply(|v| *v = v.clamp(0.0, 1.0));
    values
}

/// Real function that is constant on the blocks of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFunction {
    partition: Partition,
    values: DVector<f64>,
}

impl BlockFunction {
    pub fn new(partition: Partition, values: DVector<f64>) -> Result<Self> {
        if values.len() != partition.len() {
            return Err(Error::DimensionMismatch {
                expected: partition.len(),
                found: values.len(),
            });
        }
        Ok(BlockFunction { partition, values })
    }

    pub fn constant(partition: Partition, c: f64) -> Self {
        let n = partition.len();
        BlockFunction {
            partition,
            values: DVector::from_element(n, c),
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.values[self.partition.block_of(x)?])
    }

    /// `∫ f`.
    pub fn integral(&self) -> f64 {
        self.values
            .iter()
            .zip(self.partition.measures())
            .map(|(v, m)| v * m)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon {
    partition: Partition,
    blocks: DMatrix<f64>,
}

impl StepGraphon {
    /// `step_P(A)`.
    pub fn new(partition: Partition, blocks: DMatrix<f64>) -> Result<Self> {
        if blocks.nrows() != partition.len() || blocks.ncols() != partition.len() {
            return Err(Error::DimensionMismatch {
                expected: partition.len(),
                found: blocks.nrows().max(blocks.ncols()),
            });
        }
        validate_kernel(&blocks, SYMMETRY_TOLERANCE)?;
        Ok(StepGraphon { partition, blocks })
    }

    /// `lift_n(A)`: the step graphon on the homogeneous partition.
    pub fn lift(adjacency: DMatrix<f64>) -> Result<Self> {
        if adjacency.nrows() == 0 {
            return Err(Error::invalid("cannot lift an empty matrix"));
        }
        StepGraphon::new(Partition::uniform(adjacency.nrows()), adjacency)
    }

    /// Convenience constructor from row vectors.
    pub fn from_rows(measures: Vec<f64>, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("block rows must form a square matrix"));
        }
        let blocks = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        StepGraphon::new(Partition::new(measures)?, blocks)
    }

    fn from_parts(partition: Partition, blocks: DMatrix<f64>) -> Self {
        StepGraphon {
            partition,
            blocks: tidy(blocks),
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn blocks(&self) -> &DMatrix<f64> {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.partition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partition.is_empty()
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let i = self.partition.block_of(x)?;
        let j = self.partition.block_of(y)?;
        Ok(self.blocks[(i, j)])
    }

    /// The matrix `M = A·diag(μ)` by which the adjacency operator acts on
    /// block coefficient vectors.
    pub fn operator_matrix(&self) -> DMatrix<f64> {
        let mu = self.partition.measures();
        DMatrix::from_fn(self.len(), self.len(), |i, j| self.blocks[(i, j)] * mu[j])
    }

    /// `B = D^{1/2} A D^{1/2}` with `D = diag(μ)`: the operator on the step
    /// subspace written in the orthonormal basis `1_{P_i}/√μ_i`.
    pub fn symmetrized_operator(&self) -> DMatrix<f64> {
        let s: Vec<f64> = self.partition.measures().iter().map(|m| m.sqrt()).collect();
        DMatrix::from_fn(self.len(), self.len(), |i, j| {
            s[i] * self.blocks[(i, j)] * s[j]
        })
    }

    /// Kernel of `𝒲^m`, computed as `step_P(M^{m-1} A)`.
    pub fn comp_power(&self, m: usize) -> Result<StepGraphon> {
        if m == 0 {
            return Err(Error::ZeroPower);
        }
        let op = self.operator_matrix();
        let mut acc = self.blocks.clone();
        for _ in 1..m {
            acc = &op * acc;
        }
        Ok(StepGraphon::from_parts(self.partition.clone(), acc))
    }

    /// Degree function `k_i = Σ_j A_ij μ_j`.
    pub fn degree(&self) -> BlockFunction {
        let ones = BlockFunction::constant(self.partition.clone(), 1.0);
        self.apply_adjacency(&ones)
            .expect("constant function shares the partition")
    }

    /// `𝒲 f` for a function constant on this graphon's blocks.
    pub fn apply_adjacency(&self, f: &BlockFunction) -> Result<BlockFunction> {
        if f.partition() != &self.partition {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: f.partition().len(),
            });
        }
        BlockFunction::new(self.partition.clone(), self.operator_matrix() * f.values())
    }

    /// Rearranges blocks so that new block `k` is old block `sigma[k]`; this
    /// is `W^φ` for the measure-preserving map `φ` that sends each new block
    /// affinely onto its old counterpart.
    pub fn permute_blocks(&self, sigma: &[usize]) -> Result<StepGraphon> {
        let partition = self.partition.permuted(sigma)?;
        let n = self.len();
        let blocks = DMatrix::from_fn(n, n, |k, l| self.blocks[(sigma[k], sigma[l])]);
        Ok(StepGraphon { partition, blocks })
    }

    /// `φ(x)`: where a point `x` of `permute_blocks(sigma)` sits in `self`.
    pub fn permuted_point(&self, sigma: &[usize], x: f64) -> Result<f64> {
        check_permutation(sigma, self.len())?;
        let permuted = self.partition.permuted(sigma)?;
        let k = permuted.block_of(x)?;
        let offset = x - permuted.interval(k).0;
        let (lo, hi) = self.partition.interval(sigma[k]);
        Ok((lo + offset).min(hi))
    }

    /// Cell averages on a uniform grid of resolution `n`.
    pub fn render_grid(&self, n: usize) -> GridGraphon {
        let values = mat(&Partition::uniform(n), &Graphon::Step(self.clone()));
        GridGraphon {
            values: tidy(values),
        }
    }
}

/// Uniform `n × n` grid of cell-averaged kernel values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGraphon {
    values: DMatrix<f64>,
}

impl GridGraphon {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 {
            return Err(Error::invalid("grid resolution must be positive"));
        }
        validate_kernel(&values, SYMMETRY_TOLERANCE)?;
        Ok(GridGraphon { values })
    }

    /// Cell averages of a symmetric kernel `f`, approximated by the midpoint
    /// rule on `subsamples × subsamples` points per cell.
    pub fn from_fn(n: usize, subsamples: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if n == 0 || subsamples == 0 {
            return Err(Error::invalid(
                "grid resolution and subsamples must be positive",
            ));
        }
        let h = 1.0 / (n * subsamples) as f64;
        let points = n * subsamples;
        let coords: Vec<f64> = (0..points).map(|k| (k as f64 + 0.5) * h).collect();
        let mut values = DMatrix::zeros(n, n);
        let weight = 1.0 / (subsamples * subsamples) as f64;
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for a in 0..subsamples {
                    for b in 0..subsamples {
                        acc += f(coords[i * subsamples + a], coords[j * subsamples + b]);
                    }
                }
                values[(i, j)] = acc * weight;
                values[(j, i)] = acc * weight;
            }
        }
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::invalid(format!(
                "kernel value {bad} is outside [0, 1]"
            )));
        }
        Ok(GridGraphon { values })
    }

    pub(crate) fn from_values_unchecked(values: DMatrix<f64>) -> Self {
        GridGraphon {
            values: tidy(values),
        }
    }

    pub fn resolution(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn partition(&self) -> Partition {
        Partition::uniform(self.resolution())
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let i = cell_of(x, self.resolution())?;
        let j = cell_of(y, self.resolution())?;
        Ok(self.values[(i, j)])
    }

    /// The same cell values read as a step graphon on the uniform partition.
    pub fn as_step(&self) -> StepGraphon {
        StepGraphon {
            partition: self.partition(),
            blocks: self.values.clone(),
        }
    }

    /// Midpoint-rule composition power: `K_{k+1}(x_i, x_j) = (1/n) Σ_l K_k(x_i, x_l) W(x_l, x_j)`.
    pub fn comp_power(&self, m: usize) -> Result<GridGraphon> {
        if m == 0 {
            return Err(Error::ZeroPower);
        }
        let h = 1.0 / self.resolution() as f64;
        let mut acc = self.values.clone();
        for _ in 1..m {
            acc = (&acc * &self.values) * h;
        }
        Ok(GridGraphon::from_values_unchecked(acc))
    }

    /// Row cell-averages.
    pub fn degree(&self) -> BlockFunction {
        let h = 1.0 / self.resolution() as f64;
        let values = DVector::from_fn(self.resolution(), |i, _| self.values.row(i).sum() * h);
        BlockFunction {
            partition: self.partition(),
            values,
        }
    }

    pub fn apply_adjacency(&self, f: &BlockFunction) -> Result<BlockFunction> {
        if f.values().len() != self.resolution() || !f.partition().is_homogeneous() {
            return Err(Error::DimensionMismatch {
                expected: self.resolution(),
                found: f.values().len(),
            });
        }
        let h = 1.0 / self.resolution() as f64;
        BlockFunction::new(self.partition(), (&self.values * f.values()) * h)
    }
}

fn cell_of(x: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(x));
    }
    Ok(((x * n as f64) as usize).min(n - 1))
}

/// A graphon in one of the two computable representations.
#[derive(Debug, Clone, PartialEq)]
pub enum Graphon {
    Step(StepGraphon),
    Grid(GridGraphon),
}

impl From<StepGraphon> for Graphon {
    fn from(w: StepGraphon) -> Self {
        Graphon::Step(w)
    }
}

impl From<GridGraphon> for Graphon {
    fn from(w: GridGraphon) -> Self {
        Graphon::Grid(w)
    }
}

impl Graphon {
    pub fn is_grid(&self) -> bool {
        matches!(self, Graphon::Grid(_))
    }

    /// The partition on which the kernel is block constant.
    pub fn partition(&self) -> Partition {
        match self {
            Graphon::Step(w) => w.partition().clone(),
            Graphon::Grid(w) => w.partition(),
        }
    }

    /// Block or cell values.
    pub fn values(&self) -> &DMatrix<f64> {
        match self {
            Graphon::Step(w) => w.blocks(),
            Graphon::Grid(w) => w.values(),
        }
    }

    /// Exact step-graphon view; a grid is block constant on its cells.
    pub fn to_step(&self) -> StepGraphon {
        match self {
            Graphon::Step(w) => w.clone(),
            Graphon::Grid(w) => w.as_step(),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match self {
            Graphon::Step(w) => w.eval(x, y),
            Graphon::Grid(w) => w.eval(x, y),
        }
    }

    pub fn comp_power(&self, m: usize) -> Result<Graphon> {
        Ok(match self {
            Graphon::Step(w) => Graphon::Step(w.comp_power(m)?),
            Graphon::Grid(w) => Graphon::Grid(w.comp_power(m)?),
        })
    }

    pub fn degree(&self) -> BlockFunction {
        match self {
            Graphon::Step(w) => w.degree(),
            Graphon::Grid(w) => w.degree(),
        }
    }

    pub fn apply_adjacency(&self, f: &BlockFunction) -> Result<BlockFunction> {
        match self {
            Graphon::Step(w) => w.apply_adjacency(f),
            Graphon::Grid(w) => w.apply_adjacency(f),
        }
    }
}

/// `mat_P(W)`: block averages `w_ij = (1/μ_iμ_j) ∫_{P_i×P_j} W`, integrated
/// exactly by intersecting `P` with the graphon's own partition.
pub fn mat(partition: &Partition, w: &Graphon) -> DMatrix<f64> {
    let own = w.partition();
    if *partition == own {
        return w.values().clone();
    }
    let overlap = partition.overlap(&own);
    let mass = &overlap * w.values() * overlap.transpose();
    let mu = partition.measures();
    DMatrix::from_fn(partition.len(), partition.len(), |i, j| {
        mass[(i, j)] / (mu[i] * mu[j])
    })
}

/// `coarsen_P(W) = step_P(mat_P(W))`.
pub fn coarsen(partition: &Partition, w: &Graphon) -> StepGraphon {
    StepGraphon::from_parts(partition.clone(), mat(partition, w))
}
