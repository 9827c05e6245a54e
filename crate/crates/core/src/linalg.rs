//! Dense symmetric eigensolver, matrix exponential and truncated analytic
//! matrix functions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const SYMMETRY_TOLERANCE: f64 = 1e-9;
const JACOBI_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order and
/// eigenvectors stored as orthonormal columns.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralData {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vector(&self, k: usize) -> DVector<f64> {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(&self.eigenvalues));
        &self.eigenvectors * lambda * self.eigenvectors.transpose()
    }

    /// `V g(Λ) Vᵀ`.
    pub fn apply_fn(&self, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let diag = DVector::from_iterator(self.len(), self.eigenvalues.iter().map(|&l| g(l)));
        &self.eigenvectors * DMatrix::from_diagonal(&diag) * self.eigenvectors.transpose()
    }
}

fn check_square(b: &DMatrix<f64>) -> Result<()> {
    if !b.is_square() {
        return Err(Error::invalid(format!(
            "expected a square matrix, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    Ok(())
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `1e-12 · ‖B‖_F`.
pub fn sym_eig(b: &DMatrix<f64>) -> Result<SpectralData> {
    check_square(b)?;
    let n = b.nrows();
    let scale = b.norm().max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (b[(i, j)] - b[(j, i)]).abs() > SYMMETRY_TOLERANCE * scale {
                return Err(Error::invalid(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let mut a = (b + b.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let target = JACOBI_TOLERANCE * b.norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if i != j {
                acc += a[(i, j)] * a[(i, j)];
            }
        }
    }
    acc.sqrt()
}

pub(crate) fn norm1(x: &DMatrix<f64>) -> f64 {
    x.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring around a Taylor core.
///
/// `X` is scaled by `2^-s` until `‖X/2^s‖₁ ≤ 0.5`.
pub fn expm(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_square(x)?;
    let n = x.nrows();
    let norm = norm1(x);
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let scaled = x / 2f64.powi(squarings as i32);

    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=40 {
        term = (&term * &scaled) / k as f64;
        sum += &term;
        if norm1(&term) <= 1e-18 * norm1(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if sum.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow { norm });
    }
    Ok(sum)
}

/// A power series `f(t) = Σ α_k t^k` with all coefficients nonzero.
#[derive(Clone)]
pub struct TaylorFamily {
    name: String,
    coefficient: fn(usize) -> f64,
    radius: f64,
}

impl std::fmt::Debug for TaylorFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TaylorFamily")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .finish()
    }
}

fn inverse_factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc / i as f64)
}

impl TaylorFamily {
    pub fn new(name: impl Into<String>, coefficient: fn(usize) -> f64, radius: f64) -> Self {
        TaylorFamily {
            name: name.into(),
            coefficient,
            radius,
        }
    }

    /// `e^t`, `α_k = 1/k!`.
    pub fn exp() -> Self {
        TaylorFamily::new("exp", inverse_factorial, f64::INFINITY)
    }

    /// `(1 - t)^{-1}`, `α_k = 1`.
    pub fn resolvent() -> Self {
        TaylorFamily::new("resolvent", |_| 1.0, 1.0)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "exp" => Ok(TaylorFamily::exp()),
            "resolvent" => Ok(TaylorFamily::resolvent()),
            other => Err(Error::invalid(format!(
                "unknown transform `{other}` (expected exp or resolvent)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        (self.coefficient)(k)
    }

    /// Fails on the first zero coefficient up to `order`.
    pub fn check_nonzero(&self, order: usize) -> Result<()> {
        match (0..=order).find(|&k| self.coefficient(k) == 0.0) {
            Some(k) => Err(Error::ZeroCoefficient {
                family: self.name.clone(),
                k,
            }),
            None => Ok(()),
        }
    }
}

/// Truncated `f(Lt) = Σ α_k t^k L^k`.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub value: DMatrix<f64>,
    /// Highest power retained.
    pub order: usize,
    /// Entrywise a-priori bound `(1/n) Σ_{k>order} |α_k| (K n t)^k` on the
    /// discarded tail.
    pub tail_bound: f64,
}

const MAX_TERMS: usize = 200;
const TERM_RATIO: f64 = 1e-16;

/// Evaluates `f(Lt)` by its power series.
///
/// Requires `|t|·K·n` below the radius of convergence, where
/// `K = max |L_ij|`; under that guard `|(L^k)_ij| ≤ K^k n^{k-1}` makes the
/// series absolutely convergent. Terms are added until, for three
/// consecutive orders, every entry of the new term is below `1e-16` of the
/// corresponding entry of the running sum (entries that stay exactly zero
/// count as converged), with a cap of 200 terms.
pub fn analytic_transform(family: &TaylorFamily, l: &DMatrix<f64>, t: f64) -> Result<Transformed> {
    check_square(l)?;
    let n = l.nrows();
    let k_max = l.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let guard = t.abs() * k_max * n as f64;
    if guard >= family.radius() {
        return Err(Error::ConvergenceGuard {
            t,
            value: guard,
            radius: family.radius(),
        });
    }
    family.check_nonzero(0)?;
    let lt = l * t;
    let mut power = DMatrix::<f64>::identity(n, n);
    let mut sum = DMatrix::<f64>::identity(n, n) * family.coefficient(0);
    let mut quiet = 0;
    let mut order = 0;
    for k in 1..=MAX_TERMS {
        let alpha = family.coefficient(k);
        if alpha == 0.0 {
            return Err(Error::ZeroCoefficient {
                family: family.name().to_string(),
                k,
            });
        }
        power = &power * &lt;
        let term = &power * alpha;
        sum += &term;
        order = k;
        let negligible = term
            .iter()
            .zip(sum.iter())
            .all(|(dt, s)| dt.abs() <= TERM_RATIO * s.abs());
        quiet = if negligible { quiet + 1 } else { 0 };
        if quiet == 3 {
            break;
        }
    }
    let ratio = guard;
    let tail_bound = (order + 1..order + 60)
        .map(|k| family.coefficient(k).abs() * ratio.powi(k as i32))
        .sum::<f64>()
        / n.max(1) as f64;
    Ok(Transformed {
        value: sum,
        order,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_eigenproblem() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3.0]);
        let s = sym_eig(&b).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 1.0]);
        assert_abs_diff_eq!(s.vector(0)[1].abs(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn symmetrized_bipartite_spectrum() {
        // det(B - λI) = λ² - 1/4
        let b = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let s = sym_eig(&b).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvalues[1], -0.5, epsilon = 1e-15);
    }

    #[test]
    fn rejects_asymmetric() {
        let b = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(sym_eig(&b).is_err());
    }

    #[test]
    fn expm_closed_forms() {
        let zero = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(expm(&zero).unwrap(), DMatrix::identity(3, 3));
        let d = DMatrix::from_row_slice(2, 2, &[1.5, 0.0, 0.0, -2.0]);
        let e = expm(&d).unwrap();
        assert_abs_diff_eq!(e[(0, 0)], 1.5f64.exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(e[(1, 1)], (-2.0f64).exp(), epsilon = 1e-15);
        for &t in &[0.3, 1.0, 4.0] {
            let swap = DMatrix::from_row_slice(2, 2, &[0.0, t, t, 0.0]);
            let e = expm(&swap).unwrap();
            assert!((e[(0, 0)] / t.cosh() - 1.0).abs() < 1e-12);
            assert!((e[(0, 1)] / t.sinh() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn expm_overflow_is_reported() {
        let big = DMatrix::from_element(2, 2, 1e4);
        assert!(matches!(expm(&big), Err(Error::Overflow { .. })));
    }

    #[test]
    fn transform_of_zero_is_alpha0() {
        let z = DMatrix::<f64>::zeros(3, 3);
        let r = analytic_transform(&TaylorFamily::resolvent(), &z, 0.1).unwrap();
        assert_eq!(r.value, DMatrix::identity(3, 3));
    }

    #[test]
    fn transform_guard_and_zero_coefficients() {
        let l = DMatrix::from_element(3, 3, 1.0);
        assert!(matches!(
            analytic_transform(&TaylorFamily::resolvent(), &l, 0.5),
            Err(Error::ConvergenceGuard { .. })
        ));
        let odd = TaylorFamily::new(
            "sinh",
            |k| if k % 2 == 1 { 1.0 } else { 0.0 },
            f64::INFINITY,
        );
        assert!(matches!(
            analytic_transform(&odd, &l, 0.01),
            Err(Error::ZeroCoefficient { k: 0, .. })
        ));
    }
}
