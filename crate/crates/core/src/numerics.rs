//! Dense complex linear algebra shared by the solvers.
//!
//! Matrices are column-major `nalgebra` storage, so extracting a column is a
//! contiguous O(n) slice.

use nalgebra::{Cholesky, DMatrix, DVector, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexVector = DVector<Complex64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Singular values below `PINV_CUTOFF * sigma_max` are treated as zero.
pub const PINV_CUTOFF: f64 = 1e-10;

pub fn ensure_finite_vector(v: &ComplexVector, what: &'static str) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub fn ensure_finite_matrix(m: &ComplexMatrix, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// `aᴴ b`, conjugating the first argument.
pub fn hermitian_inner(a: &ComplexVector, b: &ComplexVector) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "inner product of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.dotc(b))
}

/// Squared l2 norm of a complex vector.
pub fn norm_sq(v: &ComplexVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Matrix made of the columns of `x` listed in `cols`, in that order.
pub fn select_columns(x: &ComplexMatrix, cols: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(x.nrows(), cols.len(), |i, j| x[(i, cols[j])])
}

/// Gram matrix `Xᴴ X`.
pub fn gram(x: &ComplexMatrix) -> ComplexMatrix {
    x.ad_mul(x)
}

/// Minimum-norm least-squares solution `X⁺ y` through a thin SVD.
///
/// Rank-deficient systems are handled by zeroing singular values below
/// [`PINV_CUTOFF`] times the largest one.
pub fn least_squares(x: &ComplexMatrix, y: &ComplexVector) -> Result<ComplexVector> {
    if x.nrows() != y.len() {
        return Err(Error::Dimension(format!(
            "least squares with {} rows and response of length {}",
            x.nrows(),
            y.len()
        )));
    }
    if x.ncols() == 0 {
        return Ok(ComplexVector::zeros(0));
    }
    let svd = SVD::try_new(x.clone(), true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Dimension("SVD failed to converge".into()))?;
    let u = svd.u.as_ref().expect("left vectors requested");
    let v_t = svd.v_t.as_ref().expect("right vectors requested");
    let s_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut out = ComplexVector::zeros(x.ncols());
    if s_max == 0.0 {
        return Ok(out);
    }
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= PINV_CUTOFF * s_max {
            continue;
        }
        let coef = u.column(i).dotc(y) / s;
        // row i of Vᴴ is the conjugate of the i-th right singular vector
        for j in 0..x.ncols() {
            out[j] += v_t[(i, j)].conj() * coef;
        }
    }
    Ok(out)
}

/// Scales every column to unit l2 norm, returning the original norms.
pub fn normalize_columns(x: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>)> {
    let mut out = x.clone();
    let mut scales = Vec::with_capacity(x.ncols());
    for j in 0..x.ncols() {
        let norm = x.column(j).norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroColumn(j));
        }
        out.column_mut(j).unscale_mut(norm);
        scales.push(norm);
    }
    Ok((out, scales))
}

/// Solves a Hermitian positive (semi)definite system `A x = b`.
///
/// Falls back to a ridge-regularized Cholesky when the factorization fails;
/// the returned flag is `true` in that case.
pub(crate) fn solve_hermitian(a: &ComplexMatrix, b: &ComplexVector) -> (ComplexVector, bool) {
    if let Some(chol) = Cholesky::new(a.clone()) {
        let x = chol.solve(b);
        if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return (x, false);
        }
    }
    let k = a.nrows();
    let trace: f64 = (0..k).map(|i| a[(i, i)].re.abs()).sum();
    let mut ridge = 1e-12 * (trace / k.max(1) as f64).max(f64::MIN_POSITIVE);
    loop {
        let mut reg = a.clone();
        for i in 0..k {
            reg[(i, i)] += Complex64::new(ridge, 0.0);
        }
        if let Some(chol) = Cholesky::new(reg) {
            return (chol.solve(b), true);
        }
        ridge *= 100.0;
    }
}
