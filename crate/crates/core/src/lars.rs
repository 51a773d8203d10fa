//! Complex-valued LARS homotopy for the weighted Lasso.
//!
//! The path is computed entirely in Gram form: the solver only touches
//! `XᴴX` and `Xᴴy`. This makes the elastic-net augmentation
//! `[X; √η I]` free (its Gram matrix is `XᴴX + ηI`) and lets callers reuse one
//! Gram matrix across many snapshots that share a design.
//!
//! Each step moves the active coefficients along the equiangular direction,
//! which keeps `|⟨x_j, r⟩| = λ` on the active set. In the complex case the
//! Lasso path is not piecewise linear, so this linear step (the default,
//! [`PathMode::Linear`]) leaves the phases of the active correlations out of
//! line with the coefficients, and knot solutions are close to, but not
//! exactly, Lasso minimisers. In [`PathMode::Exact`] the linear step only
//! predicts the knot; the coefficients are then corrected to the exact
//! restricted minimiser and the knot is refined until the entering column is
//! equicorrelated.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ensure_finite_matrix, ensure_finite_vector, gram, solve_hermitian, ComplexMatrix, ComplexVector};

/// Candidates whose step is at or below `ROOT_FLOOR * λ_{k-1}` are ignored.
pub const ROOT_FLOOR: f64 = 1e-12;

/// Nonnegative penalty weights; `f64::INFINITY` excludes a column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (index, &value) in weights.iter().enumerate() {
            if value.is_nan() || value < 0.0 {
                return Err(Error::InvalidWeight { index, value });
            }
        }
        if !weights.iter().any(|w| w.is_finite()) {
            return Err(Error::Config("weight vector has no finite entry".into()));
        }
        Ok(Self(weights))
    }

    pub fn ones(p: usize) -> Self {
        Self(vec![1.0; p])
    }

    /// Adaptive weights `1 / |β_j|`, with `∞` wherever `β_j = 0`.
    pub fn adaptive(beta: &ComplexVector) -> Result<Self> {
        Self::new(
            beta.iter()
                .map(|b| {
                    let m = b.norm();
                    if m > 0.0 {
                        1.0 / m
                    } else {
                        f64::INFINITY
                    }
                })
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of finite weights, ascending.
    pub fn finite_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&j| self.0[j].is_finite()).collect()
    }
}

/// How the homotopy advances between knots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    /// Linear equiangular step only.
    #[default]
    Linear,
    /// Linear step as predictor, followed by a corrector that enforces the
    /// full complex sub-gradient conditions at every knot.
    Exact,
}

/// A design matrix with its Gram matrix precomputed.
#[derive(Debug, Clone)]
pub struct Design {
    x: ComplexMatrix,
    gram: ComplexMatrix,
    mode: PathMode,
}

impl Design {
    pub fn new(x: ComplexMatrix) -> Result<Self> {
        ensure_finite_matrix(&x, "design matrix")?;
        if x.ncols() == 0 || x.nrows() == 0 {
            return Err(Error::Dimension("design matrix is empty".into()));
        }
        let gram = gram(&x);
        Ok(Self {
            x,
            gram,
            mode: PathMode::default(),
        })
    }

    pub fn with_mode(mut self, mode: PathMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> PathMode {
        self.mode
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    pub fn n_rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.x.ncols()
    }

    /// `Xᴴ y`, after checking the response.
    pub fn correlate(&self, y: &ComplexVector) -> Result<ComplexVector> {
        if y.len() != self.x.nrows() {
            return Err(Error::Dimension(format!(
                "response of length {} for a design with {} rows",
                y.len(),
                self.x.nrows()
            )));
        }
        ensure_finite_vector(y, "response")?;
        Ok(self.x.ad_mul(y))
    }

    /// Weighted Lasso path on this design (see [`c_lars_wlasso`]).
    pub fn lars(&self, y: &ComplexVector, weights: &WeightVector, k: usize) -> Result<KnotPath> {
        if k > self.n_rows() {
            return Err(Error::Config(format!(
                "sparsity {k} exceeds the {} rows of the design",
                self.n_rows()
            )));
        }
        let xty = self.correlate(y)?;
        homotopy(&self.gram, &xty, 0.0, weights, k, self.mode)
    }
}

/// Knots `λ_0 > … > λ_K`, the solutions at those knots and the active sets.
#[derive(Debug, Clone, Serialize)]
pub struct KnotPath {
    pub knots: Vec<f64>,
    /// Solutions in the original (unweighted) coordinates.
    #[serde(skip)]
    pub solutions: Vec<ComplexVector>,
    /// Active sets in order of entry; `active_sets[k]` has `k` indices.
    pub active_sets: Vec<Vec<usize>>,
    /// Number of knots requested.
    pub target: usize,
    /// Set when the path could not reach `target`.
    pub stalled: Option<String>,
    /// An active-set Gram block needed a ridge to factor.
    pub regularized: bool,
    /// Knots at which an active coefficient turned by more than 90 degrees
    /// relative to the previous knot.
    pub anomalies: Vec<usize>,
    /// Knots reached with the plain linear step because the corrector
    /// failed, typically when an active coefficient shrinks to zero.
    pub linearized: Vec<usize>,
}

impl KnotPath {
    pub fn is_complete(&self) -> bool {
        self.stalled.is_none() && self.knots.len() == self.target + 1
    }

    /// Index of the last knot reached.
    pub fn last(&self) -> usize {
        self.knots.len() - 1
    }
}

/// One homotopy step: the knot decrement and the entering column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnotStep {
    pub gamma: f64,
    pub index: usize,
}

/// Roots of `a γ² + b γ + c = 0`, computed without cancellation.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    if a.abs() <= 1e-13 {
        if b == 0.0 {
            return None;
        }
        let r = -c / b;
        return Some((r, r));
    }
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc >= -1e-12 * (b * b).max((4.0 * a * c).abs()) {
            disc = 0.0;
        } else {
            return None;
        }
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    Some((q / a, c / q))
}

/// Step `γ_ℓ ≥ 0` at which `|c_ℓ − γ b_ℓ| = λ_{k−1} − γ`, or `None` when the
/// equation has no real root.
pub fn candidate_gamma(c: Complex64, b: Complex64, lambda_prev: f64) -> Option<f64> {
    let qa = b.norm_sqr() - 1.0;
    let qb = 2.0 * lambda_prev - 2.0 * (c * b.conj()).re;
    let qc = c.norm_sqr() - lambda_prev * lambda_prev;
    let (r1, r2) = quadratic_roots(qa, qb, qc)?;
    Some(if r1 > 0.0 && r2 > 0.0 {
        r1.min(r2)
    } else {
        r1.max(r2).max(0.0)
    })
}

/// Picks the candidate with the smallest admissible step.
///
/// `c` and `b` are indexed by column; only `candidates` are considered. Ties
/// go to the lowest index. Steps at or below `ROOT_FLOOR * lambda_prev` are
/// rejected. The returned knot is `lambda_prev - gamma`, which the caller
/// must check for positivity.
pub fn next_knot(
    c: &[Complex64],
    b: &[Complex64],
    lambda_prev: f64,
    candidates: &[usize],
) -> Result<KnotStep> {
    if !(lambda_prev > 0.0) {
        return Err(Error::Stalled {
            knot: 0,
            reason: format!("non-positive previous knot {lambda_prev}"),
        });
    }
    let floor = ROOT_FLOOR * lambda_prev;
    let mut best: Option<KnotStep> = None;
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    for &l in &sorted {
        let Some(gamma) = candidate_gamma(c[l], b[l], lambda_prev) else {
            continue;
        };
        if gamma <= floor {
            continue;
        }
        if best.is_none_or(|s| gamma < s.gamma) {
            best = Some(KnotStep { gamma, index: l });
        }
    }
    best.ok_or_else(|| Error::Stalled {
        knot: 0,
        reason: "no candidate has a positive root".into(),
    })
}

/// Weighted Lasso homotopy for `½‖y − Xβ‖² + λ Σ w_j |β_j|`.
///
/// Columns with infinite weight never enter. Returns `k + 1` knots unless the
/// path stalls, in which case the truncated path carries `stalled`. When no
/// further column can enter, the path ends with a terminal knot `λ = 0`
/// holding the least-squares fit on the active set.
pub fn c_lars_wlasso(
    y: &ComplexVector,
    x: &ComplexMatrix,
    weights: &WeightVector,
    k: usize,
) -> Result<KnotPath> {
    Design::new(x.clone())?.lars(y, weights, k)
}

/// Newton iterations allowed for one restricted solve.
const NEWTON_ITERS: usize = 60;
/// Predictor-corrector rounds before a segment falls back to the linear step.
const PREDICTOR_ROUNDS: usize = 60;
/// Regula falsi iterations when bracketing a knot.
const BRACKET_ITERS: usize = 200;
/// Coordinate-descent sweeps before handing over to Newton.
const CD_SWEEPS: usize = 1000;
/// Newton accepts a stagnated iterate whose gradient is within this factor
/// of the tolerance.
const STAGNATION_SLACK: f64 = 1e3;

/// Relative tolerance on `max |c_ℓ| − λ` at an exact knot.
const KNOT_TOL: f64 = 1e-11;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Gram-form homotopy on `W⁻¹XᴴXW⁻¹ + ridge · I` with correlations `W⁻¹xty`,
/// where `W = diag(w)`; solutions are mapped back to the original scale.
pub(crate) fn homotopy(
    gram: &ComplexMatrix,
    xty: &ComplexVector,
    ridge: f64,
    weights: &WeightVector,
    k: usize,
    mode: PathMode,
) -> Result<KnotPath> {
    let p = gram.ncols();
    if xty.len() != p || weights.len() != p {
        return Err(Error::Dimension(format!(
            "gram is {p}x{p}, correlations {}, weights {}",
            xty.len(),
            weights.len()
        )));
    }
    for (index, &value) in weights.as_slice().iter().enumerate() {
        if value == 0.0 {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    let cols = weights.finite_indices();
    let m = cols.len();
    if k > m {
        return Err(Error::Config(format!(
            "sparsity {k} exceeds the {m} admissible columns"
        )));
    }
    let inv_w: Vec<f64> = cols.iter().map(|&j| 1.0 / weights.as_slice()[j]).collect();
    let z: Vec<Complex64> = (0..m).map(|l| xty[cols[l]] * inv_w[l]).collect();
    let column = |a: usize| -> Vec<Complex64> {
        (0..m)
            .map(|i| {
                let g = gram[(cols[i], cols[a])] * (inv_w[i] * inv_w[a]);
                // the ridge acts on the weighted coefficients
                if i == a {
                    g + ridge
                } else {
                    g
                }
            })
            .collect()
    };
    let to_original = |active: &[usize], beta: &[Complex64]| -> ComplexVector {
        let mut out = ComplexVector::zeros(p);
        for (&l, b) in active.iter().zip(beta) {
            out[cols[l]] = b * inv_w[l];
        }
        out
    };

    let mut path = KnotPath {
        knots: Vec::with_capacity(k + 1),
        solutions: Vec::with_capacity(k + 1),
        active_sets: Vec::with_capacity(k + 1),
        target: k,
        stalled: None,
        regularized: false,
        anomalies: Vec::new(),
        linearized: Vec::new(),
    };

    let mut entering = 0;
    let mut lambda = 0.0;
    for (l, zl) in z.iter().enumerate() {
        if zl.norm() > lambda {
            lambda = zl.norm();
            entering = l;
        }
    }
    path.knots.push(lambda);
    path.solutions.push(ComplexVector::zeros(p));
    path.active_sets.push(Vec::new());
    if !(lambda > 0.0) {
        path.stalled = Some("response is orthogonal to every admissible column".into());
        return Ok(path);
    }

    // active coefficients, in order of entry
    let mut beta: Vec<Complex64> = Vec::with_capacity(k);
    let mut active: Vec<usize> = Vec::with_capacity(k);
    let mut in_active = vec![false; m];
    let mut active_cols: Vec<Vec<Complex64>> = Vec::with_capacity(k);

    for step in 1..=k {
        active.push(entering);
        in_active[entering] = true;
        active_cols.push(column(entering));
        beta.push(zero());

        let candidates: Vec<usize> = (0..m).filter(|&l| !in_active[l]).collect();
        let seg = Segment::new(&z, &active, &active_cols, &candidates);
        path.regularized |= seg.regularized;

        // once the corrector fails the active set no longer carries an exact
        // solution, so the rest of the path stays linear
        let mut advance = match mode {
            PathMode::Exact if path.linearized.is_empty() => seg.exact(lambda, &beta),
            _ => Advance::Fallback,
        };
        if let Advance::Fallback = advance {
            if mode == PathMode::Exact {
                path.linearized.push(step);
            }
            advance = seg.linear(lambda, &beta);
        }
        let (next_lambda, next_beta, next_entering) = match advance {
            Advance::Knot { lambda, beta, entering } => (lambda, beta, Some(entering)),
            Advance::Stall(reason) => {
                if step < k {
                    path.stalled = Some(format!("knot {}: {reason}", step + 1));
                }
                (0.0, seg.terminal(), None)
            }
            Advance::Fallback => unreachable!("the linear step never falls back"),
        };

        if beta
            .iter()
            .zip(&next_beta)
            .any(|(old, new)| *old != zero() && (old.conj() * new).re < 0.0)
        {
            path.anomalies.push(step);
        }
        beta = next_beta;
        lambda = next_lambda;
        path.knots.push(lambda);
        path.solutions.push(to_original(&active, &beta));
        path.active_sets.push(active.iter().map(|&l| cols[l]).collect());
        match next_entering {
            Some(l) => entering = l,
            None => break,
        }
    }
    Ok(path)
}

/// Result of advancing one segment of the path.
enum Advance {
    Knot {
        lambda: f64,
        beta: Vec<Complex64>,
        entering: usize,
    },
    Stall(String),
    Fallback,
}

/// One segment of the path: the active set is fixed, `λ` decreases until the
/// next column becomes equicorrelated.
struct Segment<'a> {
    z: &'a [Complex64],
    active: &'a [usize],
    active_cols: &'a [Vec<Complex64>],
    candidates: &'a [usize],
    g_aa: ComplexMatrix,
    /// Real form of `g_aa` acting on interleaved (re, im) pairs.
    g_real: DMatrix<f64>,
    z_a: Vec<Complex64>,
    regularized: bool,
}

impl<'a> Segment<'a> {
    fn new(
        z: &'a [Complex64],
        active: &'a [usize],
        active_cols: &'a [Vec<Complex64>],
        candidates: &'a [usize],
    ) -> Self {
        let na = active.len();
        let g_aa = ComplexMatrix::from_fn(na, na, |i, j| active_cols[j][active[i]]);
        let g_real = DMatrix::from_fn(2 * na, 2 * na, |r, c| {
            let g = g_aa[(r / 2, c / 2)];
            match (r % 2, c % 2) {
                (0, 0) | (1, 1) => g.re,
                (0, 1) => -g.im,
                _ => g.im,
            }
        });
        let z_a = active.iter().map(|&j| z[j]).collect();
        let regularized = Cholesky::new(g_aa.clone()).is_none();
        Self {
            z,
            active,
            active_cols,
            candidates,
            g_aa,
            g_real,
            z_a,
            regularized,
        }
    }

    /// Correlations `z − G_{·A} β_A` for every admissible column.
    fn correlations(&self, beta: &[Complex64]) -> Vec<Complex64> {
        let mut corr = self.z.to_vec();
        for (col, &b) in self.active_cols.iter().zip(beta) {
            if b == zero() {
                continue;
            }
            for (cl, g) in corr.iter_mut().zip(col) {
                *cl -= g * b;
            }
        }
        corr
    }

    /// Equiangular direction `δ = G_AA⁻¹ c_A / λ` and its projection `G_{·A} δ`.
    fn direction(&self, corr: &[Complex64], lambda: f64) -> (ComplexVector, Vec<Complex64>) {
        let rhs = ComplexVector::from_iterator(self.active.len(), self.active.iter().map(|&j| corr[j] / lambda));
        let (delta, _) = solve_hermitian(&self.g_aa, &rhs);
        let mut proj = vec![zero(); self.z.len()];
        for (col, d) in self.active_cols.iter().zip(delta.iter()) {
            for (bl, g) in proj.iter_mut().zip(col) {
                *bl += g * d;
            }
        }
        (delta, proj)
    }

    /// End of the path when no further column can enter: the least-squares
    /// fit on the active block, i.e. the solution at `λ = 0`.
    fn terminal(&self) -> Vec<Complex64> {
        let rhs = ComplexVector::from_column_slice(&self.z_a);
        solve_hermitian(&self.g_aa, &rhs).0.iter().copied().collect()
    }

    /// Linear step from `(lambda, beta)` to the next knot.
    fn linear(&self, lambda: f64, beta: &[Complex64]) -> Advance {
        let corr = self.correlations(beta);
        let (delta, proj) = self.direction(&corr, lambda);
        match next_knot(&corr, &proj, lambda, self.candidates) {
            Ok(s) if lambda - s.gamma > ROOT_FLOOR * lambda => Advance::Knot {
                lambda: lambda - s.gamma,
                beta: beta.iter().zip(delta.iter()).map(|(b, d)| b + d * s.gamma).collect(),
                entering: s.index,
            },
            Ok(s) => Advance::Stall(format!("next entry only at lambda = {:.3e}", lambda - s.gamma)),
            Err(Error::Stalled { reason, .. }) => Advance::Stall(reason),
            Err(e) => Advance::Stall(e.to_string()),
        }
    }

    /// Largest `|c_ℓ| − λ` over the inactive columns and where it occurs.
    fn gap(&self, beta: &[Complex64], lambda: f64) -> (f64, usize) {
        let corr = self.correlations(beta);
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for &l in self.candidates {
            let g = corr[l].norm() - lambda;
            if g > best.0 {
                best = (g, l);
            }
        }
        best
    }

    /// Predictor-corrector step: the linear step predicts the knot, the
    /// active coefficients are then moved to the exact minimiser of the
    /// restricted problem and the knot is refined until the entering column
    /// is equicorrelated with the active ones.
    fn exact(&self, lambda0: f64, beta0: &[Complex64]) -> Advance {
        let floor = ROOT_FLOOR * lambda0;
        let (mut hi, mut beta_hi) = (lambda0, beta0.to_vec());
        let mut gap_hi = self.gap(&beta_hi, hi).0;
        for _ in 0..PREDICTOR_ROUNDS {
            let corr = self.correlations(&beta_hi);
            let (delta, proj) = self.direction(&corr, hi);
            let s = match next_knot(&corr, &proj, hi, self.candidates) {
                Ok(s) => s,
                Err(Error::Stalled { reason, .. }) => return Advance::Stall(reason),
                Err(e) => return Advance::Stall(e.to_string()),
            };
            let lo = hi - s.gamma;
            if lo <= floor {
                return Advance::Stall(format!("next entry only at lambda = {lo:.3e}"));
            }
            let start: Vec<Complex64> = beta_hi.iter().zip(delta.iter()).map(|(b, d)| b + d * s.gamma).collect();
            let Some(beta_lo) = self.restricted(lo, &start) else {
                return Advance::Fallback;
            };
            let (gap_lo, idx) = self.gap(&beta_lo, lo);
            if gap_lo.abs() <= KNOT_TOL * lo {
                return Advance::Knot {
                    lambda: lo,
                    beta: beta_lo,
                    entering: idx,
                };
            }
            if gap_lo < 0.0 {
                hi = lo;
                beta_hi = beta_lo;
                gap_hi = gap_lo;
                continue;
            }
            return self.bracket((hi, gap_hi, beta_hi), (lo, gap_lo, beta_lo));
        }
        Advance::Fallback
    }

    /// Illinois regula falsi on `λ ↦ max |c_ℓ(λ)| − λ` between a point below
    /// the knot (`gap < 0`) and one past it (`gap > 0`).
    fn bracket(
        &self,
        (mut a, mut fa, mut ba): (f64, f64, Vec<Complex64>),
        (mut b, mut fb, mut bb): (f64, f64, Vec<Complex64>),
    ) -> Advance {
        let mut side = 0i8;
        for _ in 0..BRACKET_ITERS {
            let mut c = (a * fb - b * fa) / (fb - fa);
            if !(c > b && c < a) {
                c = 0.5 * (a + b);
            }
            let t = (a - c) / (a - b);
            let start: Vec<Complex64> = ba.iter().zip(&bb).map(|(x, y)| x + (y - x) * t).collect();
            let Some(bc) = self.restricted(c, &start) else {
                return Advance::Fallback;
            };
            let (fc, idx) = self.gap(&bc, c);
            if fc.abs() <= KNOT_TOL * c || a - b <= 4.0 * f64::EPSILON * a {
                return Advance::Knot {
                    lambda: c,
                    beta: bc,
                    entering: idx,
                };
            }
            if fc < 0.0 {
                (a, fa, ba) = (c, fc, bc);
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                (b, fb, bb) = (c, fc, bc);
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
        }
        Advance::Fallback
    }

    /// Minimiser of `½ βᴴ G_AA β − Re(z_Aᴴ β) + λ Σ |β_j|` over the active
    /// block. `None` when a coefficient of the minimiser is zero or the
    /// iterations fail to converge.
    fn restricted(&self, lambda: f64, start: &[Complex64]) -> Option<Vec<Complex64>> {
        self.newton(lambda, start)
            .or_else(|| self.newton(lambda, &self.coordinate_descent(lambda, start)?))
    }

    /// Cyclic coordinate descent, used to reach Newton's basin when a
    /// coefficient is close to zero.
    fn coordinate_descent(&self, lambda: f64, start: &[Complex64]) -> Option<Vec<Complex64>> {
        let na = start.len();
        let mut beta = start.to_vec();
        for _ in 0..CD_SWEEPS {
            let mut change = 0.0f64;
            for i in 0..na {
                let gii = self.g_aa[(i, i)].re;
                let mut r = self.z_a[i];
                for (j, b) in beta.iter().enumerate() {
                    if j != i {
                        r -= self.g_aa[(i, j)] * b;
                    }
                }
                let m = r.norm();
                let next = if m <= lambda { zero() } else { r * ((m - lambda) / (m * gii)) };
                change = change.max((next - beta[i]).norm());
                beta[i] = next;
            }
            let scale = beta.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            if change <= 1e-9 * scale {
                break;
            }
        }
        beta.iter().all(|v| *v != zero()).then_some(beta)
    }

    /// Damped Newton in real coordinates.
    fn newton(&self, lambda: f64, start: &[Complex64]) -> Option<Vec<Complex64>> {
        let na = start.len();
        let zmax = self.z_a.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let tol = 1e-12 * lambda + 1e-14 * zmax;
        let mut beta = start.to_vec();
        let objective = |b: &[Complex64]| -> f64 {
            let bv = ComplexVector::from_column_slice(b);
            let quad = bv.dotc(&(&self.g_aa * &bv)).re;
            let lin: f64 = self.z_a.iter().zip(b).map(|(z, v)| (z.conj() * v).re).sum();
            0.5 * quad - lin + lambda * b.iter().map(|v| v.norm()).sum::<f64>()
        };
        let gradient = |b: &[Complex64]| -> Vec<Complex64> {
            let bv = ComplexVector::from_column_slice(b);
            let gb = &self.g_aa * &bv;
            (0..na).map(|i| gb[i] - self.z_a[i] + b[i] * (lambda / b[i].norm())).collect()
        };
        for _ in 0..NEWTON_ITERS {
            let scale = beta.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            if beta.iter().any(|v| v.norm() <= 1e-13 * scale) {
                return None;
            }
            let grad = gradient(&beta);
            let gmax = grad.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            if gmax <= tol {
                return Some(beta);
            }
            let mut h = self.g_real.clone();
            for (i, v) in beta.iter().enumerate() {
                let r = v.norm();
                let (ur, ui) = (v.re / r, v.im / r);
                let s = lambda / r;
                h[(2 * i, 2 * i)] += s * (1.0 - ur * ur);
                h[(2 * i, 2 * i + 1)] -= s * ur * ui;
                h[(2 * i + 1, 2 * i)] -= s * ur * ui;
                h[(2 * i + 1, 2 * i + 1)] += s * (1.0 - ui * ui);
            }
            let rhs = DVector::from_fn(2 * na, |r, _| {
                let g = grad[r / 2];
                -if r % 2 == 0 { g.re } else { g.im }
            });
            let dir = Cholesky::new(h)?.solve(&rhs);
            let slope = -rhs.dot(&dir);
            let f0 = objective(&beta);
            let mut t = 1.0;
            loop {
                let trial: Vec<Complex64> = (0..na)
                    .map(|i| beta[i] + Complex64::new(dir[2 * i], dir[2 * i + 1]) * t)
                    .collect();
                let f1 = objective(&trial);
                if f1 <= f0 + 1e-4 * t * slope + 8.0 * f64::EPSILON * f0.abs() {
                    let moved = beta.iter().zip(&trial).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
                    beta = trial;
                    // no further progress in floating point: the phase of a
                    // small coefficient puts a floor under the gradient
                    if moved <= 4.0 * f64::EPSILON * scale {
                        return (gmax <= STAGNATION_SLACK * tol).then_some(beta);
                    }
                    break;
                }
                t *= 0.5;
                if t < 1e-12 {
                    return None;
                }
            }
        }
        None
    }
}
