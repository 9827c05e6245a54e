//! Named graphons used throughout the examples.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphon::{GridGraphon, StepGraphon};

/// Two halves joined completely: `lift([[0, 1], [1, 0]])`.
pub fn bipartite() -> StepGraphon {
    StepGraphon::lift(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]))
        .expect("bipartite adjacency is valid")
}

/// Constant kernel `p`.
pub fn erdos_renyi(p: f64) -> Result<StepGraphon> {
    StepGraphon::lift(DMatrix::from_element(1, 1, p))
}

/// Adjacency matrix of the cycle `C_n`, vertices in cyclic order.
pub fn cycle_adjacency(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        let d = i.abs_diff(j);
        if d == 1 || (d > 0 && d == n - 1) {
            1.0
        } else {
            0.0
        }
    })
}

/// `lift(C_n)`.
pub fn cycle(n: usize) -> Result<StepGraphon> {
    if n < 2 {
        return Err(Error::invalid("a cycle needs at least two vertices"));
    }
    StepGraphon::lift(cycle_adjacency(n))
}

/// Normalized circular distance `min(|x-y|, 1-|x-y|)`.
pub fn circular_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).abs();
    d.min(1.0 - d)
}

// CDF of the triangular law on (-1, 1), the distribution of s - r for
// independent uniforms on [0, 1).
fn triangle_cdf(z: f64) -> f64 {
    if z <= -1.0 {
        0.0
    } else if z <= 0.0 {
        0.5 * (1.0 + z) * (1.0 + z)
    } else if z < 1.0 {
        1.0 - 0.5 * (1.0 - z) * (1.0 - z)
    } else {
        1.0
    }
}

/// Circular band `1{Δ(x,y) ≤ τ}` as exact cell averages on an `n`-cell grid.
///
/// For cells `i, j` the difference `x - y` is `(i - j + s - r)/n` with `s - r`
/// triangular, so the average is a difference of triangular CDFs.
pub fn circular_band(tau: f64, n: usize) -> Result<GridGraphon> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!(
            "band half-width {tau} must be positive"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("grid resolution must be positive"));
    }
    let nf = n as f64;
    let band = tau * nf;
    let values = DMatrix::from_fn(n, n, |i, j| {
        if tau >= 0.5 {
            return 1.0;
        }
        let d = i as f64 - j as f64;
        // |u| <= τ, plus the wrap-around |u| >= 1 - τ
        let near = triangle_cdf(band - d) - triangle_cdf(-band - d);
        let far = triangle_cdf(-(nf - band) - d) + 1.0 - triangle_cdf(nf - band - d);
        near + far
    });
    Ok(GridGraphon::from_values_unchecked(values))
}

/// `1 - max(x, y)` as exact cell averages on an `n`-cell grid.
pub fn one_minus_max(n: usize) -> Result<GridGraphon> {
    if n == 0 {
        return Err(Error::invalid("grid resolution must be positive"));
    }
    let h = 1.0 / n as f64;
    let values = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            // E[max] of two uniforms on [a, a+h) is a + 2h/3
            1.0 - (i as f64 * h + 2.0 * h / 3.0)
        } else {
            1.0 - (i.max(j) as f64 + 0.5) * h
        }
    });
    Ok(GridGraphon::from_values_unchecked(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_rows_have_degree_two() {
        let a = cycle_adjacency(6);
        for i in 0..6 {
            assert_eq!(a.row(i).sum(), 2.0);
            assert_eq!(a[(i, i)], 0.0);
        }
        assert_eq!(a[(0, 5)], 1.0);
    }

    #[test]
    fn circular_band_matches_subsampled_midpoint_rule() {
        let tau = 0.2;
        let exact = circular_band(tau, 20).unwrap();
        let sampled = GridGraphon::from_fn(20, 64, |x, y| {
            if circular_distance(x, y) <= tau {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let err = (exact.values() - sampled.values()).abs().max();
        assert!(err < 2e-2, "max deviation {err}");
    }

    #[test]
    fn circular_band_support_half_width() {
        let g = circular_band(1.0 / 7.0, 700).unwrap();
        let v = g.values();
        assert!((v[(0, 100)] - 0.5).abs() < 1e-9);
        assert!(v[(0, 101)] < 1e-9);
        assert!(v[(0, 600)] > 0.4);
        assert!(v[(0, 599)] < 1e-9);
    }

    #[test]
    fn one_minus_max_matches_midpoint_rule() {
        let exact = one_minus_max(8).unwrap();
        let sampled = GridGraphon::from_fn(8, 200, |x, y| 1.0 - x.max(y)).unwrap();
        assert!((exact.values() - sampled.values()).abs().max() < 1e-5);
    }
}
