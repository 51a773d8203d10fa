//! Monte-Carlo execution.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Method};
use super::metrics::{per_indicator, rmse, squared_error};
use crate::error::{Error, Result};
use crate::greedy::{cosamp, omp};
use crate::lars::{Design, WeightVector};
use crate::model::{generate_snapshot, trial_rng, Scenario, Snapshot, SteeringGrid};
use crate::wen::{debiased_fit, AlphaGrid};

/// Whether trials run on the rayon pool or one after another. Both produce
/// identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// One method on one trial.
#[derive(Debug, Clone, Serialize)]
pub struct MethodTrial {
    pub method: Method,
    pub exact: bool,
    /// `None` when the method failed.
    pub squared_error: Option<f64>,
    pub support: Vec<usize>,
    pub error: Option<String>,
    #[serde(skip)]
    pub wall_ms: f64,
}

/// All methods on one trial at one SNR.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub snr_db: f64,
    pub true_support: Vec<usize>,
    /// Whether SAEN's first-stage support contains the true support.
    pub ub: Option<bool>,
    pub methods: Vec<MethodTrial>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodAggregate {
    pub per: f64,
    /// Over trials where the method returned an estimate.
    pub rmse: Option<f64>,
    pub exact: usize,
    pub failures: usize,
    /// Summed wall-clock time; kept out of the JSON so result files stay
    /// byte-identical between runs.
    #[serde(skip)]
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorSummary {
    pub method: Method,
    pub count: usize,
    pub first_trial: usize,
    pub first_error: String,
}

/// Aggregates at one SNR.
#[derive(Debug, Clone, Serialize)]
pub struct SnrAggregate {
    pub snr_db: f64,
    pub trials: usize,
    /// Present when SAEN was run.
    pub ub: Option<f64>,
    pub methods: BTreeMap<Method, MethodAggregate>,
    pub errors: Vec<ErrorSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub results: Vec<SnrAggregate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<Vec<TrialRecord>>,
}

impl ExperimentReport {
    /// Every method failed on every trial.
    pub fn all_failed(&self) -> bool {
        self.results
            .iter()
            .all(|r| r.methods.values().all(|m| m.failures == r.trials))
    }

    pub fn aggregate(&self, snr_db: f64, method: Method) -> Option<&MethodAggregate> {
        self.results
            .iter()
            .find(|r| r.snr_db == snr_db)
            .and_then(|r| r.methods.get(&method))
    }
}

struct Context<'a> {
    config: &'a ExperimentConfig,
    grid: SteeringGrid,
    design: Design,
    lasso: AlphaGrid,
}

/// Runs the configured experiment on the rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with(config, Execution::Parallel)
}

/// Runs the configured experiment.
///
/// Every trial draws its snapshot from a stream seeded by the master seed and
/// the trial index; the same streams are reused at every SNR. Method failures
/// count as misses and are summarised, they never abort the run.
pub fn run_experiment_with(config: &ExperimentConfig, execution: Execution) -> Result<ExperimentReport> {
    let mut config = config.clone();
    config.validate()?;
    let grid = config.scenario.grid()?;
    let design = Design::new(grid.matrix().clone())?.with_mode(config.path_mode);
    let ctx = Context {
        config: &config,
        grid,
        design,
        lasso: AlphaGrid::lasso(),
    };

    let mut results = Vec::with_capacity(config.snr_db.len());
    let mut all_records = Vec::new();
    for &snr in &config.snr_db {
        let run = |t: usize| ctx.trial(snr, t);
        let records: Vec<TrialRecord> = match execution {
            Execution::Serial => (0..config.trials).map(run).collect::<Result<_>>()?,
            Execution::Parallel => (0..config.trials).into_par_iter().map(run).collect::<Result<_>>()?,
        };
        results.push(aggregate(snr, &config.methods, &records));
        if config.per_trial {
            all_records.extend(records);
        }
    }
    let trials = config.per_trial.then_some(all_records);
    Ok(ExperimentReport {
        config,
        results,
        trials,
    })
}

impl Context<'_> {
    fn trial(&self, snr: f64, trial: usize) -> Result<TrialRecord> {
        let mut rng = trial_rng(self.config.master_seed, trial as u64);
        let snap = generate_snapshot(&self.config.scenario, &self.grid, snr, &mut rng)?;
        let mut ub = None;
        let mut methods = Vec::with_capacity(self.config.methods.len());
        for &method in &self.config.methods {
            let start = Instant::now();
            let outcome = self.solve(method, &snap);
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            if method == Method::Saen {
                ub = Some(matches!(&outcome, Ok((_, Some(true)))));
            }
            let scored = outcome.and_then(|(support, _)| self.score(&snap, &support).map(|s| (support, s)));
            methods.push(match scored {
                Ok((support, (exact, sq))) => MethodTrial {
                    method,
                    exact,
                    squared_error: Some(sq),
                    support,
                    error: None,
                    wall_ms,
                },
                Err(e) => MethodTrial {
                    method,
                    exact: false,
                    squared_error: None,
                    support: Vec::new(),
                    error: Some(e.to_string()),
                    wall_ms,
                },
            });
        }
        Ok(TrialRecord {
            trial,
            snr_db: snr,
            true_support: snap.support.clone(),
            ub,
            methods,
        })
    }

    /// Support found by `method` and, for SAEN, whether the first stage
    /// contains the true support.
    fn solve(&self, method: Method, snap: &Snapshot) -> Result<(Vec<usize>, Option<bool>)> {
        let k = self.config.scenario.k();
        let alphas = &self.config.alpha_grid;
        let y = &snap.y;
        let support = match method {
            Method::Saen => {
                let trace = self.design.saen(y, alphas, k)?;
                let first = &trace.stage_supports[0];
                let covered = snap.support.iter().all(|j| first.contains(j));
                return Ok((trace.solution.active_set, Some(covered)));
            }
            Method::AenLse | Method::AenN | Method::Aen3k => {
                let kind = method.aen_kind().expect("adaptive method");
                self.design.aen(y, alphas, k, kind)?.active_set
            }
            Method::En => {
                let ones = WeightVector::ones(self.design.n_cols());
                self.design.pw_wen(y, &ones, alphas, k, true)?.active_set
            }
            Method::Lasso => {
                let ones = WeightVector::ones(self.design.n_cols());
                self.design.pw_wen(y, &ones, &self.lasso, k, true)?.active_set
            }
            Method::Omp => omp(y, self.design.x(), k)?.active_set,
            Method::Cosamp => cosamp(y, self.design.x(), k, self.config.cosamp_max_iter)?.active_set,
        };
        Ok((support, None))
    }

    /// Exact-recovery indicator and squared error of the debiased fit on
    /// the found support.
    fn score(&self, snap: &Snapshot, support: &[usize]) -> Result<(bool, f64)> {
        let exact = per_indicator(&snap.support, support)? == 1;
        let mut sorted = support.to_vec();
        sorted.sort_unstable();
        let (coef, _) = debiased_fit(self.design.x(), &snap.y, &sorted)?;
        let sq = squared_error(&snap.support, snap.s_true.as_slice(), &sorted, coef.as_slice())?;
        Ok((exact, sq))
    }
}

fn aggregate(snr: f64, methods: &[Method], records: &[TrialRecord]) -> SnrAggregate {
    let trials = records.len();
    let mut out = BTreeMap::new();
    let mut errors = Vec::new();
    for (i, &method) in methods.iter().enumerate() {
        let rows: Vec<&MethodTrial> = records.iter().map(|r| &r.methods[i]).collect();
        let exact = rows.iter().filter(|m| m.exact).count();
        let sq: Vec<f64> = rows.iter().filter_map(|m| m.squared_error).collect();
        let failed: Vec<(usize, &MethodTrial)> = records
            .iter()
            .zip(&rows)
            .filter(|(_, m)| m.error.is_some())
            .map(|(r, m)| (r.trial, *m))
            .collect();
        if let Some((first_trial, first)) = failed.first() {
            errors.push(ErrorSummary {
                method,
                count: failed.len(),
                first_trial: *first_trial,
                first_error: first.error.clone().unwrap_or_default(),
            });
        }
        out.insert(
            method,
            MethodAggregate {
                per: exact as f64 / trials as f64,
                rmse: rmse(&sq),
                exact,
                failures: failed.len(),
                wall_ms: rows.iter().map(|m| m.wall_ms).sum(),
            },
        );
    }
    let ub = methods.contains(&Method::Saen).then(|| {
        records.iter().filter(|r| r.ub == Some(true)).count() as f64 / trials as f64
    });
    SnrAggregate {
        snr_db: snr,
        trials,
        ub,
        methods: out,
        errors,
    }
}

/// Knot paths of one trial, for inspecting how the solvers behave.
#[derive(Debug, Clone, Serialize)]
pub struct PathDump {
    pub scenario: Scenario,
    pub snr_db: f64,
    pub master_seed: u64,
    pub trial: usize,
    pub true_support: Vec<usize>,
    /// Grid angle of each column index, in degrees.
    pub grid_deg: Vec<f64>,
    /// Unit-weight Lasso path up to `3K` knots.
    pub lasso: LassoPathDump,
    /// Per-`α` results of the unit-weight `3K`-sparse elastic net.
    pub elastic_net: crate::wen::WenSolution,
}

#[derive(Debug, Clone, Serialize)]
pub struct LassoPathDump {
    pub knots: Vec<f64>,
    pub active_sets: Vec<Vec<usize>>,
    /// `|β_j|` of the active columns at each knot, in entry order.
    pub magnitudes: Vec<Vec<f64>>,
    pub stalled: Option<String>,
}

/// Paths for trial 0 of `scenario` at `snr_db`.
pub fn trial_paths(config: &ExperimentConfig, snr_db: f64) -> Result<PathDump> {
    let mut config = config.clone();
    config.validate()?;
    let scenario = &config.scenario;
    let grid = scenario.grid()?;
    let design = Design::new(grid.matrix().clone())?.with_mode(config.path_mode);
    let mut rng = trial_rng(config.master_seed, 0);
    let snap = generate_snapshot(scenario, &grid, snr_db, &mut rng)?;
    let k3 = 3 * scenario.k();
    if k3 > design.n_rows() {
        return Err(Error::Config(format!("3K = {k3} exceeds the number of sensors")));
    }
    let ones = WeightVector::ones(design.n_cols());
    let path = design.lars(&snap.y, &ones, k3)?;
    let magnitudes = path
        .active_sets
        .iter()
        .zip(&path.solutions)
        .map(|(set, sol)| set.iter().map(|&j| sol[j].norm()).collect())
        .collect();
    let elastic_net = design.pw_wen(&snap.y, &ones, &config.alpha_grid, k3, false)?;
    Ok(PathDump {
        scenario: scenario.clone(),
        snr_db,
        master_seed: config.master_seed,
        trial: 0,
        true_support: snap.support,
        grid_deg: grid.angles().to_vec(),
        lasso: LassoPathDump {
            knots: path.knots,
            active_sets: path.active_sets,
            magnitudes,
            stalled: path.stalled,
        },
        elastic_net,
    })
}
