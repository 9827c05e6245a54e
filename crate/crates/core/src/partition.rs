//! Partitions of the unit interval and finite unions of intervals.
//!
//! Blocks are identified with consecutive half-open subintervals
//! `[b_{i-1}, b_i)` of `[0, 1]`; the last block is closed at 1.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Ordered list of positive block measures summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    measures: Vec<f64>,
    breakpoints: Vec<f64>,
}

impl Partition {
    pub fn new(measures: Vec<f64>) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::invalid("partition needs at least one block"));
        }
        if let Some(bad) = measures.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::invalid(format!(
                "block measure {bad} is not positive"
            )));
        }
        let total: f64 = measures.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::invalid(format!(
                "block measures sum to {total}, expected 1"
            )));
        }
        let mut breakpoints = Vec::with_capacity(measures.len() + 1);
        breakpoints.push(0.0);
        let mut acc = 0.0;
        for m in &measures[..measures.len() - 1] {
            acc += m;
            breakpoints.push(acc);
        }
        breakpoints.push(1.0);
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "partition breakpoints are not strictly increasing",
            ));
        }
        Ok(Partition {
            measures,
            breakpoints,
        })
    }

    /// The homogeneous partition into `n` blocks of measure `1/n`.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform partition needs n > 0");
        let breakpoints = (0..=n).map(|i| i as f64 / n as f64).collect();
        Partition {
            measures: vec![1.0 / n as f64; n],
            breakpoints,
        }
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn measure(&self, i: usize) -> f64 {
        self.measures[i]
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Endpoints `(a, b)` of block `i`.
    pub fn interval(&self, i: usize) -> (f64, f64) {
        (self.breakpoints[i], self.breakpoints[i + 1])
    }

    pub fn is_homogeneous(&self) -> bool {
        let n = self.len() as f64;
        self.measures.iter().all(|m| (m * n - 1.0).abs() <= 1e-12)
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        // first breakpoint strictly greater than x, among b_1..b_{n-1}
        let inner = &self.breakpoints[1..self.len()];
        Ok(inner.partition_point(|&b| b <= x))
    }

    /// `overlap[(i, a)] = μ(P_i ∩ Q_a)` for `self = P`, `other = Q`.
    pub fn overlap(&self, other: &Partition) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.len(), other.len());
        let (mut i, mut a) = (0, 0);
        while i < self.len() && a < other.len() {
            let (lo1, hi1) = self.interval(i);
            let (lo2, hi2) = other.interval(a);
            let len = hi1.min(hi2) - lo1.max(lo2);
            if len > 0.0 {
                out[(i, a)] = len;
            }
            if hi1 <= hi2 {
                i += 1;
            } else {
                a += 1;
            }
        }
        out
    }

    /// Partition whose block `k` has the measure of block `sigma[k]`.
    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        check_permutation(sigma, self.len())?;
        Partition::new(sigma.iter().map(|&s| self.measures[s]).collect())
    }
}

pub(crate) fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sigma.len(),
        });
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::invalid(format!(
                "{sigma:?} is not a permutation of 0..{n}"
            )));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Finite union of disjoint half-open intervals `[a, b)` in `[0, 1]`,
/// kept sorted with touching pieces merged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut items: Vec<(f64, f64)> = Vec::new();
        for (a, b) in intervals {
            if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a >= b {
                return Err(Error::invalid(format!(
                    "interval [{a}, {b}) must satisfy 0 <= a < b <= 1"
                )));
            }
            items.push((a, b));
        }
        items.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(items.len());
        for (a, b) in items {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(IntervalSet { intervals: merged })
    }

    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![(0.0, 1.0)],
        }
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        IntervalSet::new([(a, b)])
    }

    /// The block `P_i` as a set.
    pub fn block(partition: &Partition, i: usize) -> Self {
        let (a, b) = partition.interval(i);
        IntervalSet {
            intervals: vec![(a, b)],
        }
    }

    /// Union of the listed blocks.
    pub fn blocks(partition: &Partition, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= partition.len()) {
            return Err(Error::invalid(format!(
                "block {bad} out of range for a partition of {} blocks",
                partition.len()
            )));
        }
        IntervalSet::new(indices.iter().map(|&i| partition.interval(i)))
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x < b)
    }

    /// `μ(self ∩ [lo, hi))`.
    pub fn measure_in(&self, lo: f64, hi: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0))
            .sum()
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = self.intervals[i];
            let (a2, b2) = other.intervals[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo, hi));
            }
            if b1 <= b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::new(self.intervals.iter().chain(&other.intervals).copied())
            .expect("union of valid interval sets is valid")
    }

    pub fn intersection_measure(&self, other: &IntervalSet) -> f64 {
        self.intersection(other).measure()
    }

    /// Per-block masses `μ(self ∩ P_i)`.
    pub fn block_masses(&self, partition: &Partition) -> Vec<f64> {
        (0..partition.len())
            .map(|i| {
                let (lo, hi) = partition.interval(i);
                self.measure_in(lo, hi)
            })
            .collect()
    }
}

impl std::str::FromStr for IntervalSet {
    type Err = Error;

    /// Parses `"a..b,c..d"`; the literal `"empty"` gives the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "empty" {
            return Ok(IntervalSet::empty());
        }
        let mut pieces = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .split_once("..")
                .ok_or_else(|| Error::invalid(format!("expected `a..b`, got `{part}`")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::invalid(format!("bad endpoint `{v}`: {e}")))
            };
            pieces.push((parse(a)?, parse(b)?));
        }
        IntervalSet::new(pieces)
    }
}

impl std::fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(a, b)| format!("{a}..{b}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}
