//! Uniform linear array signal model for single-snapshot compressive
//! beamforming.
//!
//! Angles are given in degrees at the API and converted to radians once.
//! Sensors are spaced half a wavelength apart.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector};

const ANGLE_EPS: f64 = 1e-9;

/// Unit-norm ULA response `a(θ)`; entry `m` is `e^{iπ m sinθ} / √n`.
pub fn steering_vector(theta_deg: f64, n: usize) -> Result<ComplexVector> {
    if !(-90.0..90.0).contains(&theta_deg) {
        return Err(Error::AngleOutOfRange(theta_deg));
    }
    if n == 0 {
        return Err(Error::Config("steering vector needs at least one sensor".into()));
    }
    let phase = PI * theta_deg.to_radians().sin();
    let scale = 1.0 / (n as f64).sqrt();
    Ok(ComplexVector::from_fn(n, |m, _| {
        Complex64::from_polar(scale, phase * m as f64)
    }))
}

/// Angular grid over `[-90, 90)` and its steering matrix.
#[derive(Debug, Clone)]
pub struct SteeringGrid {
    angles: Vec<f64>,
    spacing: f64,
    n_sensors: usize,
    matrix: ComplexMatrix,
}

impl SteeringGrid {
    pub fn build(spacing_deg: f64, n_sensors: usize) -> Result<Self> {
        let count = grid_size(spacing_deg)?;
        if n_sensors == 0 {
            return Err(Error::Config("n_sensors must be positive".into()));
        }
        let angles: Vec<f64> = (0..count).map(|i| -90.0 + i as f64 * spacing_deg).collect();
        let mut matrix = ComplexMatrix::zeros(n_sensors, count);
        for (j, &theta) in angles.iter().enumerate() {
            matrix.set_column(j, &steering_vector(theta, n_sensors)?);
        }
        Ok(Self {
            angles,
            spacing: spacing_deg,
            n_sensors,
            matrix,
        })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn n_sensors(&self) -> usize {
        self.n_sensors
    }

    /// Number of look directions `p`.
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Index of the grid angle equal to `theta` (within 1e-9 deg), if any.
    pub fn index_of(&self, theta_deg: f64) -> Option<usize> {
        let t = (theta_deg + 90.0) / self.spacing;
        let idx = t.round();
        if idx < 0.0 || idx as usize >= self.angles.len() {
            return None;
        }
        let idx = idx as usize;
        ((self.angles[idx] - theta_deg).abs() < ANGLE_EPS).then_some(idx)
    }

    /// Maps each DoA to the closest grid angle.
    ///
    /// An exact midpoint prefers the neighbour that no other DoA maps to
    /// unambiguously, and otherwise the smaller angle. The result is aligned
    /// with `doas_deg`.
    pub fn nearest_support(&self, doas_deg: &[f64]) -> Vec<usize> {
        let last = self.angles.len() - 1;
        let picks: Vec<(usize, Option<usize>)> = doas_deg
            .iter()
            .map(|&doa| {
                let lo = (((doa + 90.0) / self.spacing).floor().max(0.0) as usize).min(last);
                let hi = (lo + 1).min(last);
                let d_lo = (doa - self.angles[lo]).abs();
                let d_hi = (self.angles[hi] - doa).abs();
                if hi == lo || d_lo + ANGLE_EPS < d_hi {
                    (lo, None)
                } else if d_hi + ANGLE_EPS < d_lo {
                    (hi, None)
                } else {
                    (lo, Some(hi))
                }
            })
            .collect();
        let claimed: Vec<usize> = picks
            .iter()
            .filter(|(_, tie)| tie.is_none())
            .map(|(idx, _)| *idx)
            .collect();
        picks
            .iter()
            .map(|&(lo, tie)| match tie {
                Some(hi) if claimed.contains(&lo) && !claimed.contains(&hi) => hi,
                _ => lo,
            })
            .collect()
    }
}

fn grid_size(spacing_deg: f64) -> Result<usize> {
    if !(spacing_deg.is_finite() && spacing_deg > 0.0) {
        return Err(Error::Config(format!("grid spacing {spacing_deg} must be positive")));
    }
    let count = 180.0 / spacing_deg;
    let rounded = count.round();
    if (count - rounded).abs() > 1e-9 || rounded < 1.0 {
        return Err(Error::Config(format!(
            "grid spacing {spacing_deg} does not divide 180 evenly"
        )));
    }
    Ok(rounded as usize)
}

/// A simulation set-up: source DoAs and amplitudes plus array and grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub doas_deg: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub grid_spacing_deg: f64,
    pub n_sensors: usize,
    #[serde(default)]
    pub label: String,
}

impl Scenario {
    pub fn new(
        doas_deg: Vec<f64>,
        magnitudes: Vec<f64>,
        grid_spacing_deg: f64,
        n_sensors: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        let s = Self {
            doas_deg,
            magnitudes,
            grid_spacing_deg,
            n_sensors,
            label: label.into(),
        };
        s.validate()?;
        Ok(s)
    }

    /// Set-ups 1-7 of the reference simulation study.
    pub fn preset(id: u8) -> Result<Self> {
        let (mags, doas, spacing, n): (&[f64], &[f64], f64, usize) = match id {
            1 => (&[0.9, 1.0, 1.0], &[-5.0, 3.0, 6.0], 1.0, 40),
            2 => (&[0.9, 1.0], &[-6.0, 2.0], 1.0, 40),
            3 => (&[0.9, 1.0], &[44.0, 52.0], 1.0, 40),
            4 => (&[0.8, 0.7, 1.0], &[43.0, 44.0, 52.0], 1.0, 40),
            5 => (&[0.9, 0.1, 1.0, 0.4], &[-8.7, -3.8, -3.5, 9.7], 1.0, 40),
            6 => (&[0.8, 1.0, 0.9, 0.4], &[-48.5, -46.4, -31.5, -22.0], 2.0, 30),
            7 => (&[0.7, 1.0, 0.6, 0.7], &[6.0, 8.0, 14.0, 18.0], 2.0, 30),
            _ => return Err(Error::Config(format!("unknown preset {id}; expected 1..=7"))),
        };
        Self::new(doas.to_vec(), mags.to_vec(), spacing, n, format!("set-up {id}"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    /// Number of sources `K`.
    pub fn k(&self) -> usize {
        self.doas_deg.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.doas_deg.len();
        if k == 0 {
            return Err(Error::Config("scenario has no sources".into()));
        }
        if self.magnitudes.len() != k {
            return Err(Error::Config(format!(
                "{} DoAs but {} magnitudes",
                k,
                self.magnitudes.len()
            )));
        }
        if k >= self.n_sensors {
            return Err(Error::Config(format!(
                "K = {k} sources requires more than {} sensors",
                self.n_sensors
            )));
        }
        for &m in &self.magnitudes {
            if !(m > 0.0 && m <= 1.0) {
                return Err(Error::Config(format!("magnitude {m} outside (0, 1]")));
            }
        }
        for (i, &a) in self.doas_deg.iter().enumerate() {
            if !(-90.0..90.0).contains(&a) {
                return Err(Error::AngleOutOfRange(a));
            }
            if self.doas_deg[..i].iter().any(|&b| (a - b).abs() < ANGLE_EPS) {
                return Err(Error::Config(format!("duplicate DoA {a}")));
            }
        }
        grid_size(self.grid_spacing_deg)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<SteeringGrid> {
        SteeringGrid::build(self.grid_spacing_deg, self.n_sensors)
    }

    /// Average source power `σ_s²`.
    pub fn source_power(&self) -> f64 {
        self.magnitudes.iter().map(|m| m * m).sum::<f64>() / self.k() as f64
    }

    /// Complex noise variance `σ²` at the given SNR in dB; `+∞` gives zero.
    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        if snr_db == f64::INFINITY {
            0.0
        } else {
            self.source_power() * 10f64.powf(-snr_db / 10.0)
        }
    }
}

/// Maximal basis coherence: the largest `|a(θ_j)ᴴ a(ϑ)|` over true DoAs and
/// grid angles other than the DoA itself.
pub fn mbc(scenario: &Scenario, grid: &SteeringGrid) -> Result<f64> {
    if grid.n_sensors() != scenario.n_sensors {
        return Err(Error::Dimension(format!(
            "grid built for {} sensors, scenario has {}",
            grid.n_sensors(),
            scenario.n_sensors
        )));
    }
    let mut best = 0.0f64;
    for &theta in &scenario.doas_deg {
        let a = steering_vector(theta, scenario.n_sensors)?;
        for (j, &angle) in grid.angles().iter().enumerate() {
            if (angle - theta).abs() < ANGLE_EPS {
                continue;
            }
            best = best.max(grid.matrix().column(j).dotc(&a).norm());
        }
    }
    Ok(best)
}

/// One simulated array snapshot.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub y: ComplexVector,
    /// Nearest-grid indices of the true DoAs, aligned with `s_true`.
    pub support: Vec<usize>,
    pub s_true: ComplexVector,
}

/// Draws `y = A(θ)s + ε` with uniform source phases and circular Gaussian
/// noise `CN(0, σ²)`, using the exact (possibly off-grid) DoAs.
pub fn generate_snapshot<R: Rng + ?Sized>(
    scenario: &Scenario,
    grid: &SteeringGrid,
    snr_db: f64,
    rng: &mut R,
) -> Result<Snapshot> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::Config(format!("invalid SNR {snr_db}")));
    }
    let n = scenario.n_sensors;
    let s_true = ComplexVector::from_iterator(
        scenario.k(),
        scenario.magnitudes.iter().map(|&m| {
            let phi = rng.random::<f64>() * 2.0 * PI;
            Complex64::from_polar(m, phi)
        }),
    );
    let mut y = ComplexVector::zeros(n);
    for (k, &theta) in scenario.doas_deg.iter().enumerate() {
        y.axpy(s_true[k], &steering_vector(theta, n)?, Complex64::new(1.0, 0.0));
    }
    let sigma2 = scenario.noise_variance(snr_db);
    if sigma2 > 0.0 {
        let sd = (sigma2 / 2.0).sqrt();
        for v in y.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *v += Complex64::new(sd * re, sd * im);
        }
    }
    Ok(Snapshot {
        y,
        support: grid.nearest_support(&scenario.doas_deg),
        s_true,
    })
}

/// Independent random stream for one Monte-Carlo trial.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(master_seed ^ splitmix64(trial)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
