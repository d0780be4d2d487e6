//! Dense complex linear algebra helpers built on nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<Complex64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

const SCHUR_MAX_ITER: usize = 10_000;

/// Roots of the characteristic polynomial, counted with multiplicity.
pub fn eigenvalues(a: &CMat) -> Result<Vec<C64>> {
    check_square(a)?;
    if !a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::EigenFailure("matrix has non-finite entries".into()));
    }
    match a.nrows() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![a[(0, 0)]]),
        2 => Ok(eigenvalues_2x2(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]).to_vec()),
        _ => {
            let schur = a
                .clone()
                .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
                .ok_or_else(|| Error::EigenFailure("complex Schur iteration did not converge".into()))?;
            let (_, t) = schur.unpack();
            Ok(t.diagonal().iter().copied().collect())
        }
    }
}

/// Closed-form roots of a 2×2 matrix. The smaller root is recovered from
/// the determinant, which keeps it accurate when it is close to zero.
pub fn eigenvalues_2x2(a: C64, b: C64, c: C64, d: C64) -> [C64; 2] {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = if (half_tr + disc).norm() >= (half_tr - disc).norm() { half_tr + disc } else { half_tr - disc };
    let l2 = if l1.norm() > 0.0 { det / l1 } else { half_tr - disc };
    [l1, l2]
}

/// Eigen-decomposition A = V diag(λ) V⁻¹ with the rows of V⁻¹ as left
/// eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    pub right: CMat,
    pub right_inv: CMat,
}

/// Eigenvectors from the complex Schur form by back-substitution. Fails
/// when V is numerically singular (defective or nearly defective input).
pub fn eigen_decomposition(a: &CMat) -> Result<EigenDecomposition> {
    check_square(a)?;
    let n = a.nrows();
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::EigenFailure("complex Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let mut x = CMat::zeros(n, n);
    for k in 0..n {
        let lk = t[(k, k)];
        x[(k, k)] = ONE;
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in (i + 1)..=k {
                s += t[(i, j)] * x[(j, k)];
            }
            let mut denom = t[(i, i)] - lk;
            if denom.norm() < f64::EPSILON * scale {
                denom = C64::new(f64::EPSILON * scale, 0.0);
            }
            x[(i, k)] = -s / denom;
        }
        let norm = x.column(k).norm();
        x.column_mut(k).unscale_mut(norm);
    }
    let right = q * x;
    let right_inv = right
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::EigenFailure("eigenvector matrix is singular".into()))?;
    let values = t.diagonal().iter().copied().collect();
    Ok(EigenDecomposition { values, right, right_inv })
}

impl EigenDecomposition {
    /// ‖V⁻¹‖·‖V‖, a cheap proxy for the eigenvector condition number.
    pub fn condition(&self) -> f64 {
        self.right.norm() * self.right_inv.norm()
    }
}

/// Sorts roots lexicographically by (Re, Im).
pub fn sort_roots(roots: &mut [C64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

pub fn check_square(a: &CMat) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}×{}", a.nrows(), a.ncols())));
    }
    Ok(())
}

pub fn trace(a: &CMat) -> C64 {
    a.diagonal().iter().copied().sum()
}

/// Tr(A·B) without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> C64 {
    let mut s = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn real_diag(values: &[f64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(v, 0.0)),
    ))
}
