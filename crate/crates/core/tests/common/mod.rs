//! Test-only helpers: random complex designs and an independent proximal
//! gradient solver for the weighted (elastic-net) Lasso.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use saen::{ComplexMatrix, ComplexVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries i.i.d. CN(0, 1).
pub fn complex_gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / 2f64.sqrt()
    })
}

pub fn complex_vector(len: usize, rng: &mut impl Rng) -> ComplexVector {
    complex_gaussian(len, 1, rng).column(0).into_owned()
}

pub fn rel_err(a: &ComplexVector, b: &ComplexVector) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn soft(z: Complex64, t: f64) -> Complex64 {
    let m = z.norm();
    if m <= t {
        Complex64::new(0.0, 0.0)
    } else {
        z * ((m - t) / m)
    }
}

/// Largest eigenvalue of `XᴴX` by power iteration.
fn lipschitz(x: &ComplexMatrix) -> f64 {
    let mut v = ComplexVector::from_element(x.ncols(), Complex64::new(1.0, 0.0));
    let mut est = 0.0;
    for _ in 0..2000 {
        let w = x.ad_mul(&(x * &v));
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm / v.norm();
        v = w.unscale(norm);
        if (next - est).abs() <= 1e-14 * next {
            est = next;
            break;
        }
        est = next;
    }
    est
}

/// Minimizes `½‖y − Xβ‖² + (η/2) Σ w_j² |β_j|² + γ Σ w_j |β_j|` by FISTA with
/// adaptive restart, until the prox-gradient mapping is below `tol` in sup
/// norm. Infinite weights pin the coefficient to zero.
pub fn prox_weighted_en(
    x: &ComplexMatrix,
    y: &ComplexVector,
    weights: &[f64],
    gamma: f64,
    eta: f64,
    tol: f64,
) -> ComplexVector {
    let p = x.ncols();
    let ridge: Vec<f64> = weights
        .iter()
        .map(|w| if w.is_finite() { eta * w * w } else { 0.0 })
        .collect();
    let step_l = lipschitz(x) * 1.0001 + ridge.iter().cloned().fold(0.0, f64::max);
    let grad = |b: &ComplexVector| -> ComplexVector {
        let mut g = x.ad_mul(&(x * b - y));
        for j in 0..p {
            g[j] += b[j] * ridge[j];
        }
        g
    };
    let prox = |v: &ComplexVector| -> ComplexVector {
        ComplexVector::from_fn(p, |j, _| {
            if weights[j].is_finite() {
                soft(v[j], gamma * weights[j] / step_l)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let mut beta = ComplexVector::zeros(p);
    let mut z = beta.clone();
    let mut t = 1.0f64;
    for _ in 0..5_000_000 {
        let next = prox(&(&z - grad(&z) / Complex64::new(step_l, 0.0)));
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let momentum = (t - 1.0) / t_next;
        // restart when the step goes against the previous direction
        let restart = ((&z - &next).dotc(&(&next - &beta))).re > 0.0;
        if restart {
            z = next.clone();
            t = 1.0;
        } else {
            z = &next + (&next - &beta) * Complex64::new(momentum, 0.0);
            t = t_next;
        }
        beta = next;
        let mapped = prox(&(&beta - grad(&beta) / Complex64::new(step_l, 0.0)));
        let gap = (&beta - mapped).camax() * step_l;
        if gap <= tol {
            break;
        }
    }
    beta
}
