//! Pathwise weighted elastic net.
//!
//! For a fixed mixing value `α` the elastic-net objective
//! `½‖y − Xβ‖² + λ Σ (α|β_j| + (1−α)/2 |β_j|²)` equals the Lasso objective on
//! augmented data `y_a = [y; 0]`, `X_a = [X; √η I]` with penalty `γ = λα`
//! and ridge `η = λ(1−α)`. The K-sparse solution is tracked across a
//! decreasing grid of `α` values, each warm-started from the knots of the
//! previous value, and the `α` whose debiased fit has the smallest residual
//! sum of squares wins.
//!
//! Weights are applied before augmentation: the weighted problem is the
//! unit-weight one on `X diag(w)⁻¹`, so its ridge reads `η Σ w_j² |β_j|² / 2`
//! in the original coordinates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lars::{homotopy, Design, WeightVector};
use crate::numerics::{least_squares, norm_sq, select_columns, ComplexMatrix, ComplexVector};

/// Strictly decreasing mixing values in `(0, 1]`, starting at exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaGrid(Vec<f64>);

impl AlphaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.first() != Some(&1.0) {
            return Err(Error::Config("alpha grid must start at 1".into()));
        }
        if values.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("alpha grid must be strictly decreasing".into()));
        }
        if values.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::Config("alpha values must be positive".into()));
        }
        Ok(Self(values))
    }

    /// Only `α = 1`: the weighted Lasso.
    pub fn lasso() -> Self {
        Self(vec![1.0])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl Default for AlphaGrid {
    /// `{1.00, 0.95, …, 0.05}`.
    fn default() -> Self {
        Self((0..20).map(|i| (20 - i) as f64 / 20.0).collect())
    }
}

/// Augmented design `[X; √η I]`.
#[derive(Debug, Clone)]
pub struct Augmented {
    pub x: ComplexMatrix,
    n: usize,
}

impl Augmented {
    /// `[y; 0_p]`.
    pub fn response(&self, y: &ComplexVector) -> Result<ComplexVector> {
        if y.len() != self.n {
            return Err(Error::Dimension(format!(
                "response of length {} for {} original rows",
                y.len(),
                self.n
            )));
        }
        let mut out = ComplexVector::zeros(self.x.nrows());
        out.rows_mut(0, self.n).copy_from(y);
        Ok(out)
    }
}

pub fn augment(x: &ComplexMatrix, eta: f64) -> Result<Augmented> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Config(format!("ridge {eta} must be a finite nonnegative value")));
    }
    let (n, p) = x.shape();
    let mut xa = ComplexMatrix::zeros(n + p, p);
    xa.view_mut((0, 0), (n, p)).copy_from(x);
    let s = eta.sqrt();
    for j in 0..p {
        xa[(n + j, j)].re = s;
    }
    Ok(Augmented { x: xa, n })
}

/// Outcome of one `α` value on the grid.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaRun {
    pub alpha: f64,
    /// `λ_1(α) … λ_K(α)`.
    pub knots: Vec<f64>,
    /// Ridge used for the K-th knot (0 for `α = 1`).
    pub eta: f64,
    /// Augmented-Lasso knot `γ_K`.
    pub gamma: f64,
    /// Knot solution at `λ_K(α)`.
    #[serde(skip)]
    pub beta: ComplexVector,
    /// Active set at the K-th knot, in order of entry.
    pub active_set: Vec<usize>,
    pub rss: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedAlpha {
    pub alpha: f64,
    pub reason: String,
}

/// K-sparse weighted elastic-net estimate.
#[derive(Debug, Clone, Serialize)]
pub struct WenSolution {
    #[serde(skip)]
    pub beta: ComplexVector,
    /// Ascending column indices.
    pub active_set: Vec<usize>,
    pub alpha_selected: f64,
    pub lambda_k: f64,
    pub rss: f64,
    pub debiased: bool,
    pub runs: Vec<AlphaRun>,
    pub skipped: Vec<SkippedAlpha>,
}

/// Debiased least-squares fit on `support` and its residual sum of squares.
pub fn debiased_fit(
    x: &ComplexMatrix,
    y: &ComplexVector,
    support: &[usize],
) -> Result<(ComplexVector, f64)> {
    let xa = select_columns(x, support);
    let coef = least_squares(&xa, y)?;
    let rss = norm_sq(&(y - xa * &coef));
    Ok((coef, rss))
}

impl Design {
    /// Pathwise weighted elastic net on this design (see [`c_pw_wen`]).
    pub fn pw_wen(
        &self,
        y: &ComplexVector,
        weights: &WeightVector,
        alphas: &AlphaGrid,
        k: usize,
        debias: bool,
    ) -> Result<WenSolution> {
        if k == 0 || k > self.n_rows() {
            return Err(Error::Config(format!(
                "sparsity {k} must lie in 1..={}",
                self.n_rows()
            )));
        }
        let xty = self.correlate(y)?;
        let mut runs: Vec<AlphaRun> = Vec::with_capacity(alphas.values().len());
        let mut skipped = Vec::new();
        let mut warm: Option<Vec<f64>> = None;

        for &alpha in alphas.values() {
            let outcome = if alpha == 1.0 {
                self.lasso_knot(&xty, weights, k)?
            } else if let Some(prev) = &warm {
                self.augmented_knot(&xty, weights, alpha, prev, k)?
            } else {
                Err("no completed alpha to warm-start from".to_string())
            };
            match outcome {
                Ok(found) => {
                    let mut support = found.active_set.clone();
                    support.sort_unstable();
                    let (_, rss) = debiased_fit(self.x(), y, &support)?;
                    warm = Some(found.knots.clone());
                    runs.push(AlphaRun {
                        alpha,
                        knots: found.knots,
                        eta: found.eta,
                        gamma: found.gamma,
                        beta: found.beta,
                        active_set: found.active_set,
                        rss,
                    });
                }
                Err(reason) => skipped.push(SkippedAlpha { alpha, reason }),
            }
        }

        if runs.is_empty() {
            let detail = skipped
                .iter()
                .map(|s| format!("alpha {}: {}", s.alpha, s.reason))
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::AllAlphasStalled(detail));
        }

        // strict comparison keeps the larger alpha on ties
        let best = (1..runs.len()).fold(0, |b, i| if runs[i].rss < runs[b].rss { i } else { b });
        let chosen = &runs[best];
        let mut support = chosen.active_set.clone();
        support.sort_unstable();
        let beta = if debias {
            let (coef, _) = debiased_fit(self.x(), y, &support)?;
            let mut out = ComplexVector::zeros(self.n_cols());
            for (i, &j) in support.iter().enumerate() {
                out[j] = coef[i];
            }
            out
        } else {
            chosen.beta.clone()
        };
        Ok(WenSolution {
            beta,
            active_set: support,
            alpha_selected: chosen.alpha,
            lambda_k: chosen.knots[k - 1],
            rss: chosen.rss,
            debiased: debias,
            skipped,
            runs,
        })
    }
}

/// K-th knot of one alpha value; `Err(reason)` when the homotopy stalls.
type KnotOutcome = std::result::Result<KthKnot, String>;

struct KthKnot {
    knots: Vec<f64>,
    eta: f64,
    gamma: f64,
    beta: ComplexVector,
    active_set: Vec<usize>,
}

impl Design {
    fn lasso_knot(&self, xty: &ComplexVector, weights: &WeightVector, k: usize) -> Result<KnotOutcome> {
        let mut path = homotopy(self.gram(), xty, 0.0, weights, k, self.mode())?;
        if let Some(reason) = path.stalled {
            return Ok(Err(reason));
        }
        Ok(Ok(KthKnot {
            knots: path.knots[1..].to_vec(),
            eta: 0.0,
            gamma: path.knots[k],
            beta: path.solutions.swap_remove(k),
            active_set: path.active_sets.swap_remove(k),
        }))
    }

    /// Reruns the homotopy once per knot on augmented data, with the ridge
    /// for knot `k` taken from the previous alpha's `λ_k`.
    fn augmented_knot(
        &self,
        xty: &ComplexVector,
        weights: &WeightVector,
        alpha: f64,
        previous: &[f64],
        k: usize,
    ) -> Result<KnotOutcome> {
        let mut knots = Vec::with_capacity(k);
        for kk in 1..=k {
            let eta = previous[kk - 1] * (1.0 - alpha);
            let mut path = homotopy(self.gram(), xty, eta, weights, kk, self.mode())?;
            if let Some(reason) = path.stalled {
                return Ok(Err(format!("knot {kk}: {reason}")));
            }
            let gamma = path.knots[kk];
            knots.push(gamma / alpha);
            if kk == k {
                return Ok(Ok(KthKnot {
                    knots,
                    eta,
                    gamma,
                    beta: path.solutions.swap_remove(kk),
                    active_set: path.active_sets.swap_remove(kk),
                }));
            }
        }
        unreachable!("loop returns at kk == k")
    }
}

/// K-sparse weighted elastic net over a grid of `α` values.
///
/// The first grid value (`α = 1`) runs the weighted Lasso homotopy directly.
/// Each later `α_i` reruns the homotopy on augmented data once per knot `k`,
/// with ridge `λ_k(α_{i−1})(1 − α_i)` taken from the previous value, and
/// rescales the resulting knot by `1/α_i`. An `α` whose homotopy stalls is
/// skipped and recorded; later values warm-start from the last completed one.
pub fn c_pw_wen(
    y: &ComplexVector,
    x: &ComplexMatrix,
    weights: &WeightVector,
    alphas: &AlphaGrid,
    k: usize,
    debias: bool,
) -> Result<WenSolution> {
    Design::new(x.clone())?.pw_wen(y, weights, alphas, k, debias)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lars::c_lars_wlasso;
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

    #[test]
    fn alpha_grid_validation() {
        assert_eq!(AlphaGrid::default().values().len(), 20);
        assert_eq!(AlphaGrid::default().values()[0], 1.0);
        assert!((AlphaGrid::default().values()[19] - 0.05).abs() < 1e-15);
        assert!(AlphaGrid::new(vec![0.9, 0.5]).is_err());
        assert!(AlphaGrid::new(vec![1.0, 0.5, 0.5]).is_err());
        assert!(AlphaGrid::new(vec![1.0, 0.0]).is_err());
        assert!(AlphaGrid::new(vec![1.0, 0.3]).is_ok());
    }

    #[test]
    fn augment_shapes() {
        let x = gaussian(40, 180, 1);
        let a = augment(&x, 0.3).unwrap();
        assert_eq!(a.x.shape(), (220, 180));
        let z = augment(&x, 0.0).unwrap();
        assert!(z.x.rows(40, 180).iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        assert!(augment(&x, -1.0).is_err());
    }

    #[test]
    fn augmented_objective_matches_elastic_net() {
        let x = gaussian(10, 20, 2);
        let y = gaussian(10, 1, 3).column(0).into_owned();
        let (lambda, alpha): (f64, f64) = (0.3, 0.5);
        let (gamma, eta) = (lambda * alpha, lambda * (1.0 - alpha));
        assert!((gamma - 0.15).abs() < 1e-15 && (eta - 0.15).abs() < 1e-15);
        let aug = augment(&x, eta).unwrap();
        let ya = aug.response(&y).unwrap();
        for seed in 0..100 {
            let beta = gaussian(20, 1, 1000 + seed).column(0).into_owned();
            let l1: f64 = beta.iter().map(|b| b.norm()).sum();
            let l2 = norm_sq(&beta);
            let en = 0.5 * norm_sq(&(&y - &x * &beta))
                + lambda * (alpha * l1 + 0.5 * (1.0 - alpha) * l2);
            let lasso = 0.5 * norm_sq(&(&ya - &aug.x * &beta)) + gamma * l1;
            assert!((en - lasso).abs() < 1e-10 * en.max(1.0));
        }
    }

    #[test]
    fn lasso_grid_matches_homotopy() {
        let x = gaussian(15, 30, 4);
        let y = gaussian(15, 1, 5).column(0).into_owned();
        let w = WeightVector::ones(30);
        let sol = c_pw_wen(&y, &x, &w, &AlphaGrid::lasso(), 4, false).unwrap();
        let path = c_lars_wlasso(&y, &x, &w, 4).unwrap();
        assert_eq!(sol.beta, path.solutions[4]);
        assert_eq!(sol.lambda_k, path.knots[4]);
        let mut set = path.active_sets[4].clone();
        set.sort_unstable();
        assert_eq!(sol.active_set, set);
    }

    #[test]
    fn orthonormal_debiased_is_projection() {
        let x = gaussian(12, 6, 6).qr().q();
        let y = gaussian(12, 1, 7).column(0).into_owned();
        let z = x.ad_mul(&y);
        let grid = AlphaGrid::new(vec![1.0, 0.7, 0.3]).unwrap();
        let sol = c_pw_wen(&y, &x, &WeightVector::ones(6), &grid, 3, true).unwrap();
        for &j in &sol.active_set {
            assert!((sol.beta[j] - z[j]).norm() < 1e-10);
        }
        let outside = (0..6).filter(|j| !sol.active_set.contains(j));
        for j in outside {
            assert_eq!(sol.beta[j], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn rss_selection_picks_minimum() {
        let x = gaussian(20, 50, 8);
        let y = gaussian(20, 1, 9).column(0).into_owned();
        let sol = c_pw_wen(&y, &x, &WeightVector::ones(50), &AlphaGrid::default(), 5, false).unwrap();
        let min = sol.runs.iter().map(|r| r.rss).fold(f64::INFINITY, f64::min);
        assert_eq!(sol.rss, min);
        let first = sol.runs.iter().find(|r| r.rss == min).unwrap();
        assert_eq!(first.alpha, sol.alpha_selected);
        for run in &sol.runs {
            assert_eq!(run.active_set.len(), 5);
            assert!(run.knots.windows(2).all(|w| w[1] < w[0]));
        }
        let chosen = sol.runs.iter().find(|r| r.alpha == sol.alpha_selected).unwrap();
        assert_eq!(sol.beta, chosen.beta);
    }

    #[test]
    fn debias_residual_is_orthogonal() {
        let x = gaussian(20, 50, 10);
        let y = gaussian(20, 1, 11).column(0).into_owned();
        let sol = c_pw_wen(&y, &x, &WeightVector::ones(50), &AlphaGrid::default(), 4, true).unwrap();
        let xa = select_columns(&x, &sol.active_set);
        let r = &y - &x * &sol.beta;
        assert!(xa.ad_mul(&r).camax() <= 1e-8 * y.norm());
        assert!((norm_sq(&r) - sol.rss).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_sparsity() {
        let x = gaussian(5, 10, 12);
        let y = gaussian(5, 1, 13).column(0).into_owned();
        let w = WeightVector::ones(10);
        assert!(c_pw_wen(&y, &x, &w, &AlphaGrid::default(), 0, false).is_err());
        assert!(c_pw_wen(&y, &x, &w, &AlphaGrid::default(), 6, false).is_err());
    }
}
