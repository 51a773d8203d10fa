//! Greedy baselines: orthogonal matching pursuit and CoSaMP.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{ensure_finite_matrix, ensure_finite_vector, least_squares, select_columns, ComplexMatrix, ComplexVector};

/// Iteration cap used when callers do not choose one.
pub const COSAMP_MAX_ITER: usize = 50;

/// K-sparse estimate from a greedy method.
#[derive(Debug, Clone, Serialize)]
pub struct GreedySolution {
    /// Ascending column indices.
    pub active_set: Vec<usize>,
    #[serde(skip)]
    pub beta: ComplexVector,
    pub iterations: usize,
    /// CoSaMP: the support stopped changing before the cap. Always true for OMP.
    pub converged: bool,
}

fn check(y: &ComplexVector, x: &ComplexMatrix, k: usize) -> Result<()> {
    ensure_finite_matrix(x, "design matrix")?;
    ensure_finite_vector(y, "response")?;
    if y.len() != x.nrows() {
        return Err(Error::Dimension(format!(
            "response of length {} for a design with {} rows",
            y.len(),
            x.nrows()
        )));
    }
    if k == 0 || k > x.nrows() || k > x.ncols() {
        return Err(Error::Config(format!(
            "sparsity {k} must lie in 1..={}",
            x.nrows().min(x.ncols())
        )));
    }
    Ok(())
}

fn scatter(p: usize, support: &[usize], coef: &ComplexVector) -> ComplexVector {
    let mut out = ComplexVector::zeros(p);
    for (&j, c) in support.iter().zip(coef.iter()) {
        out[j] = *c;
    }
    out
}

/// Indices of the `count` largest magnitudes, ties to the lowest index.
fn largest(values: &[f64], count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // stable sort keeps lower indices first among equal magnitudes
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order.truncate(count);
    order
}

/// Orthogonal matching pursuit: `k` rounds of max-correlation selection,
/// each followed by a least-squares refit on the selected columns.
pub fn omp(y: &ComplexVector, x: &ComplexMatrix, k: usize) -> Result<GreedySolution> {
    check(y, x, k)?;
    let p = x.ncols();
    let mut support: Vec<usize> = Vec::with_capacity(k);
    let mut selected = vec![false; p];
    let mut residual = y.clone();
    let mut coef = ComplexVector::zeros(0);
    for _ in 0..k {
        let corr = x.ad_mul(&residual);
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for j in (0..p).filter(|&j| !selected[j]) {
            let m = corr[j].norm();
            if m > best.0 {
                best = (m, j);
            }
        }
        selected[best.1] = true;
        support.push(best.1);
        let xa = select_columns(x, &support);
        coef = least_squares(&xa, y)?;
        residual = y - xa * &coef;
    }
    let beta = scatter(p, &support, &coef);
    support.sort_unstable();
    Ok(GreedySolution {
        active_set: support,
        beta,
        iterations: k,
        converged: true,
    })
}

/// CoSaMP: merge the `2k` largest proxy entries with the current support,
/// fit by least squares on the union, prune to the `k` largest coefficients.
/// Stops when the support repeats or after `max_iter` rounds; a diverging
/// run is returned as is.
pub fn cosamp(y: &ComplexVector, x: &ComplexMatrix, k: usize, max_iter: usize) -> Result<GreedySolution> {
    check(y, x, k)?;
    if max_iter == 0 {
        return Err(Error::Config("CoSaMP needs at least one iteration".into()));
    }
    let p = x.ncols();
    let mut support: Vec<usize> = Vec::new();
    let mut beta = ComplexVector::zeros(p);
    let mut residual = y.clone();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let proxy: Vec<f64> = x.ad_mul(&residual).iter().map(|c| c.norm()).collect();
        let mut merged = largest(&proxy, (2 * k).min(p));
        merged.extend(support.iter().copied());
        merged.sort_unstable();
        merged.dedup();
        let b = least_squares(&select_columns(x, &merged), y)?;
        let mags: Vec<f64> = b.iter().map(|c| c.norm()).collect();
        let mut next: Vec<usize> = largest(&mags, k).into_iter().map(|i| merged[i]).collect();
        next.sort_unstable();
        beta = ComplexVector::zeros(p);
        for (i, &j) in merged.iter().enumerate() {
            if next.binary_search(&j).is_ok() {
                beta[j] = b[i];
            }
        }
        residual = y - x * &beta;
        let same = next == support;
        support = next;
        if same {
            converged = true;
            break;
        }
    }
    Ok(GreedySolution {
        active_set: support,
        beta,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) / 2f64.sqrt()
        })
    }

    fn sparse_truth() -> ComplexVector {
        let mut s = ComplexVector::zeros(10);
        s[1] = Complex64::new(0.3, -0.2);
        s[4] = Complex64::new(2.0, 0.0);
        s[8] = Complex64::new(0.0, -1.0);
        s
    }

    #[test]
    fn omp_orthonormal_picks_largest_correlations() {
        let x = gaussian(12, 10, 1).qr().q();
        let s = sparse_truth();
        let y = &x * &s;
        let sol = omp(&y, &x, 3).unwrap();
        assert_eq!(sol.active_set, vec![1, 4, 8]);
        assert!((&sol.beta - &s).norm() < 1e-12);
    }

    #[test]
    fn cosamp_orthonormal_recovers_in_one_pass() {
        let x = gaussian(12, 10, 2).qr().q();
        let s = sparse_truth();
        let y = &x * &s;
        let sol = cosamp(&y, &x, 3, COSAMP_MAX_ITER).unwrap();
        assert_eq!(sol.active_set, vec![1, 4, 8]);
        assert!((&sol.beta - &s).norm() < 1e-12);
        // the second pass only confirms the support
        assert_eq!(sol.iterations, 2);
        assert!(sol.converged);
    }

    #[test]
    fn omp_residual_shrinks_and_indices_are_distinct() {
        let x = gaussian(15, 40, 3);
        let y = gaussian(15, 1, 4).column(0).into_owned();
        let mut prev = f64::INFINITY;
        for k in 1..=8 {
            let sol = omp(&y, &x, k).unwrap();
            let mut set = sol.active_set.clone();
            set.dedup();
            assert_eq!(set.len(), k);
            let r = (&y - &x * &sol.beta).norm();
            assert!(r <= prev + 1e-12);
            prev = r;
        }
    }

    #[test]
    fn cosamp_returns_k_columns() {
        for seed in 0..10 {
            let x = gaussian(15, 40, 10 + seed);
            let y = gaussian(15, 1, 30 + seed).column(0).into_owned();
            let sol = cosamp(&y, &x, 4, 5).unwrap();
            assert_eq!(sol.active_set.len(), 4);
            assert!(sol.iterations <= 5);
        }
    }

    #[test]
    fn ties_go_to_lowest_index() {
        assert_eq!(largest(&[1.0, 3.0, 3.0, 2.0], 2), vec![1, 2]);
        let x = ComplexMatrix::identity(3, 3);
        let y = ComplexVector::from_element(3, Complex64::new(1.0, 0.0));
        assert_eq!(omp(&y, &x, 1).unwrap().active_set, vec![0]);
    }

    #[test]
    fn rejects_bad_sparsity() {
        let x = gaussian(5, 8, 5);
        let y = gaussian(5, 1, 6).column(0).into_owned();
        assert!(omp(&y, &x, 0).is_err());
        assert!(omp(&y, &x, 6).is_err());
        assert!(cosamp(&y, &x, 2, 0).is_err());
    }
}
