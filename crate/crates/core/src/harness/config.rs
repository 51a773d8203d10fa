//! Experiment configuration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::COSAMP_MAX_ITER;
use crate::lars::PathMode;
use crate::model::Scenario;
use crate::saen::AenKind;
use crate::wen::AlphaGrid;

/// Recovery methods the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Saen,
    AenLse,
    AenN,
    #[serde(rename = "aen_3k")]
    Aen3k,
    En,
    Lasso,
    Omp,
    Cosamp,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Saen,
        Method::AenLse,
        Method::AenN,
        Method::Aen3k,
        Method::En,
        Method::Lasso,
        Method::Omp,
        Method::Cosamp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Saen => "saen",
            Method::AenLse => "aen_lse",
            Method::AenN => "aen_n",
            Method::Aen3k => "aen_3k",
            Method::En => "en",
            Method::Lasso => "lasso",
            Method::Omp => "omp",
            Method::Cosamp => "cosamp",
        }
    }

    pub(crate) fn aen_kind(self) -> Option<AenKind> {
        match self {
            Method::AenLse => Some(AenKind::Lse),
            Method::AenN => Some(AenKind::N),
            Method::Aen3k => Some(AenKind::ThreeK),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

/// Parses a comma-separated method list.
pub fn parse_methods(csv: &str) -> Result<Vec<Method>> {
    csv.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// Everything needed to reproduce one Monte-Carlo run.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    pub alpha_grid: AlphaGrid,
    pub path_mode: PathMode,
    pub cosamp_max_iter: usize,
    /// Keep per-trial records in the output.
    pub per_trial: bool,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario, snr_db: Vec<f64>, trials: usize, methods: Vec<Method>, master_seed: u64) -> Self {
        Self {
            scenario,
            snr_db,
            trials,
            methods,
            master_seed,
            alpha_grid: AlphaGrid::default(),
            path_mode: PathMode::default(),
            cosamp_max_iter: COSAMP_MAX_ITER,
            per_trial: false,
        }
    }

    /// Checks the configuration and removes repeated methods.
    pub fn validate(&mut self) -> Result<()> {
        self.scenario.validate()?;
        if self.trials == 0 {
            return Err(Error::Config("at least one trial is required".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("no SNR values given".into()));
        }
        if let Some(bad) = self.snr_db.iter().find(|s| s.is_nan() || **s == f64::NEG_INFINITY) {
            return Err(Error::Config(format!("invalid SNR {bad}")));
        }
        if self.cosamp_max_iter == 0 {
            return Err(Error::Config("CoSaMP needs at least one iteration".into()));
        }
        let mut seen = Vec::with_capacity(self.methods.len());
        self.methods.retain(|m| {
            let fresh = !seen.contains(m);
            seen.push(*m);
            fresh
        });
        Ok(())
    }
}

/// Resolves `1..=7` to a preset, anything else to a scenario JSON file.
pub fn load_scenario(spec: &str) -> Result<Scenario> {
    if let Ok(id) = spec.parse::<u8>() {
        return Scenario::preset(id);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Config(format!("{spec}: {e}")))?;
    Scenario::from_json(&text)
}

/// Parses a comma-separated list of numbers.
pub fn parse_list(csv: &str) -> Result<Vec<f64>> {
    csv.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("'{s}' is not a number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("lars".parse::<Method>().is_err());
        assert_eq!(parse_methods("saen, omp").unwrap(), vec![Method::Saen, Method::Omp]);
    }

    #[test]
    fn validation() {
        let sc = Scenario::preset(2).unwrap();
        let mut cfg = ExperimentConfig::new(sc.clone(), vec![20.0], 5, vec![Method::Omp, Method::Omp], 1);
        cfg.validate().unwrap();
        assert_eq!(cfg.methods, vec![Method::Omp]);
        let mut bad = ExperimentConfig::new(sc.clone(), vec![20.0], 0, vec![Method::Omp], 1);
        assert!(bad.validate().is_err());
        let mut bad = ExperimentConfig::new(sc, vec![f64::NAN], 1, vec![Method::Omp], 1);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0, 5,10").unwrap(), vec![0.0, 5.0, 10.0]);
        assert!(parse_list("1,x").is_err());
        assert!(load_scenario("9").is_err());
        assert_eq!(load_scenario("3").unwrap().doas_deg, vec![44.0, 52.0]);
    }
}
