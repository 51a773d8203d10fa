//! Sequential adaptive elastic net and the one-shot adaptive variants.
//!
//! SAEN runs the pathwise weighted elastic net three times. The first run
//! uses unit weights and keeps `3K` columns; each later run is restricted to
//! the previous support, weighted by `1/|β̂_j|`, and keeps `2K` and then `K`
//! columns. Only the last run is debiased.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lars::{Design, PathMode, WeightVector};
use crate::numerics::{least_squares, ComplexMatrix, ComplexVector};
use crate::wen::{AlphaGrid, WenSolution};

/// Stage-by-stage record of one SAEN run.
#[derive(Debug, Clone, Serialize)]
pub struct SaenTrace {
    /// Supports of the three stages (ascending), nominally of sizes 3K, 2K, K.
    pub stage_supports: Vec<Vec<usize>>,
    /// Weights used by stages 2 and 3.
    pub stage_weights: Vec<WeightVector>,
    #[serde(rename = "final")]
    pub solution: WenSolution,
}

/// Initial estimate behind a one-shot adaptive elastic net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AenKind {
    /// Weights from the minimum-norm least-squares fit `X⁺y`.
    Lse,
    /// Weights from an `n`-sparse elastic net with unit weights, computed
    /// with the linear path step.
    N,
    /// Weights from the `3K`-sparse first SAEN stage.
    #[serde(rename = "3k")]
    ThreeK,
}

impl Design {
    /// SAEN on this design (see [`saen`]).
    pub fn saen(&self, y: &ComplexVector, alphas: &AlphaGrid, k: usize) -> Result<SaenTrace> {
        let (n, p) = (self.n_rows(), self.n_cols());
        if k == 0 || 3 * k >= n.min(p) {
            return Err(Error::Config(format!(
                "SAEN needs 0 < 3K < min(n, p); got K = {k}, n = {n}, p = {p}"
            )));
        }

        let first = self.first_stage(y, alphas, k)?;
        let w2 = WeightVector::adaptive(&first.beta).map_err(|e| stage(2, e))?;
        let k2 = (2 * k).min(w2.finite_indices().len());
        let second = self.pw_wen(y, &w2, alphas, k2, false).map_err(|e| stage(2, e))?;

        let w3 = WeightVector::adaptive(&second.beta).map_err(|e| stage(3, e))?;
        let finite3 = w3.finite_indices().len();
        if finite3 < k {
            return Err(stage(3, Error::SupportSize { expected: k, found: finite3 }));
        }
        let last = self.pw_wen(y, &w3, alphas, k, true).map_err(|e| stage(3, e))?;

        Ok(SaenTrace {
            stage_supports: vec![
                first.active_set.clone(),
                second.active_set.clone(),
                last.active_set.clone(),
            ],
            stage_weights: vec![w2, w3],
            solution: last,
        })
    }

    /// Unit-weight stage at `3K`. If every `α` stalls, the stage retries
    /// with one column fewer, down to `K`.
    fn first_stage(&self, y: &ComplexVector, alphas: &AlphaGrid, k: usize) -> Result<WenSolution> {
        let ones = WeightVector::ones(self.n_cols());
        let mut last_err = None;
        for size in (k..=3 * k).rev() {
            match self.pw_wen(y, &ones, alphas, size, false) {
                Ok(sol) => return Ok(sol),
                Err(e @ Error::AllAlphasStalled(_)) => last_err = Some(e),
                Err(e) => return Err(stage(1, e)),
            }
        }
        Err(stage(
            1,
            last_err.unwrap_or_else(|| Error::Config("no admissible first-stage size".into())),
        ))
    }

    /// One-shot adaptive elastic net (see [`aen_variant`]).
    pub fn aen(&self, y: &ComplexVector, alphas: &AlphaGrid, k: usize, kind: AenKind) -> Result<WenSolution> {
        let (n, p) = (self.n_rows(), self.n_cols());
        if k == 0 || 3 * k >= n.min(p) {
            return Err(Error::Config(format!(
                "adaptive elastic net needs 0 < 3K < min(n, p); got K = {k}, n = {n}, p = {p}"
            )));
        }
        let initial = match kind {
            AenKind::Lse => least_squares(self.x(), y)?,
            AenKind::N => {
                if p <= n {
                    return Err(Error::Config("the n-sparse initial fit needs p > n".into()));
                }
                // The n-sparse fit only supplies weights and runs close to
                // interpolation, where the corrector rarely succeeds; the
                // linear step keeps it affordable.
                self.clone()
                    .with_mode(PathMode::Linear)
                    .pw_wen(y, &WeightVector::ones(p), alphas, n, false)
                    .map_err(|e| stage(1, e))?
                    .beta
            }
            AenKind::ThreeK => self.first_stage(y, alphas, k)?.beta,
        };
        let weights = WeightVector::adaptive(&initial).map_err(|e| stage(2, e))?;
        self.pw_wen(y, &weights, alphas, k, true).map_err(|e| stage(2, e))
    }
}

fn stage(stage: usize, source: Error) -> Error {
    Error::Stage {
        stage,
        source: Box::new(source),
    }
}

/// Sequential adaptive elastic net with target sparsity `k`.
///
/// Requires `3k < min(n, p)`. The returned solution is debiased and has
/// exactly `k` active columns; every stage support is contained in the one
/// before it. Errors carry the stage at which they occurred.
pub fn saen(y: &ComplexVector, x: &ComplexMatrix, alphas: &AlphaGrid, k: usize) -> Result<SaenTrace> {
    Design::new(x.clone())?.saen(y, alphas, k)
}

/// Adaptive elastic net with weights `1/|β̂_init|` from the chosen initial
/// estimate, followed by one debiased `k`-sparse solve.
pub fn aen_variant(
    y: &ComplexVector,
    x: &ComplexMatrix,
    alphas: &AlphaGrid,
    k: usize,
    kind: AenKind,
) -> Result<WenSolution> {
    Design::new(x.clone())?.aen(y, alphas, k, kind)
}
