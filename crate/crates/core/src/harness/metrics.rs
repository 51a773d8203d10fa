//! Per-trial scoring.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 1 when the estimated support equals the true one, 0 otherwise.
///
/// Both supports must have the same size; order does not matter.
pub fn per_indicator(true_support: &[usize], found_support: &[usize]) -> Result<u8> {
    if true_support.len() != found_support.len() {
        return Err(Error::SupportSize {
            expected: true_support.len(),
            found: found_support.len(),
        });
    }
    let mut a = true_support.to_vec();
    let mut b = found_support.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    Ok(u8::from(a == b))
}

/// `‖s − ŝ‖²` with both vectors ordered by ascending grid index, so the
/// k-th smallest true angle is compared with the k-th smallest estimate.
pub fn squared_error(
    true_support: &[usize],
    s_true: &[Complex64],
    found_support: &[usize],
    s_hat: &[Complex64],
) -> Result<f64> {
    if true_support.len() != s_true.len() || found_support.len() != s_hat.len() {
        return Err(Error::Dimension("support and amplitude lengths differ".into()));
    }
    if true_support.len() != found_support.len() {
        return Err(Error::SupportSize {
            expected: true_support.len(),
            found: found_support.len(),
        });
    }
    let ordered = |support: &[usize], values: &[Complex64]| {
        let mut pairs: Vec<(usize, Complex64)> = support.iter().copied().zip(values.iter().copied()).collect();
        pairs.sort_by_key(|p| p.0);
        pairs.into_iter().map(|p| p.1).collect::<Vec<_>>()
    };
    let a = ordered(true_support, s_true);
    let b = ordered(found_support, s_hat);
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum())
}

/// Square root of the mean of per-trial squared errors; `None` without trials.
pub fn rmse(squared_errors: &[f64]) -> Option<f64> {
    if squared_errors.is_empty() {
        return None;
    }
    Some((squared_errors.iter().sum::<f64>() / squared_errors.len() as f64).sqrt())
}
