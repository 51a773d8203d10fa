//! Solver outputs checked against independent closed forms and the FISTA
//! oracle in `common`.

mod common;

use common::{complex_gaussian, complex_vector, prox_weighted_en, rel_err, rng};
use num_complex::Complex64;
use rand::Rng;
use saen::numerics::least_squares;
use saen::wen::debiased_fit;
use saen::{
    c_lars_wlasso, c_pw_wen, omp, steering_vector, AlphaGrid, ComplexMatrix, ComplexVector, Design, PathMode,
    WeightVector,
};

fn soft(z: Complex64, t: f64) -> Complex64 {
    let m = z.norm();
    if m <= t {
        Complex64::new(0.0, 0.0)
    } else {
        z * ((m - t) / m)
    }
}

fn orthonormal(n: usize, p: usize, seed: u64) -> ComplexMatrix {
    complex_gaussian(n, p, &mut rng(seed)).qr().q()
}

/// Normal-equation least squares, independent of the SVD path.
fn normal_equations(x: &ComplexMatrix, y: &ComplexVector) -> ComplexVector {
    let g = x.adjoint() * x;
    g.cholesky().expect("full column rank").solve(&x.ad_mul(y))
}

#[test]
fn steering_correlation_matches_dirichlet_kernel() {
    for (a, b, n) in [(-6.0, 2.0, 40), (44.0, 45.0, 40), (-48.5, -46.4, 30), (10.0, 10.5, 17)] {
        let got = steering_vector(a, n).unwrap().dotc(&steering_vector(b, n).unwrap()).norm();
        let d = std::f64::consts::PI * (f64::sin(f64::to_radians(a)) - f64::sin(f64::to_radians(b))) / 2.0;
        let want = ((n as f64 * d).sin() / (n as f64 * d.sin())).abs();
        assert!((got - want).abs() < 1e-12, "{a} {b}: {got} vs {want}");
    }
}

#[test]
fn orthonormal_lasso_path_is_soft_thresholding() {
    let x = orthonormal(12, 8, 1);
    let y = complex_vector(12, &mut rng(2));
    let w: Vec<f64> = (0..8).map(|j| 0.6 + 0.1 * j as f64).collect();
    let z = x.ad_mul(&y);
    for mode in [PathMode::Linear, PathMode::Exact] {
        let path = Design::new(x.clone())
            .unwrap()
            .with_mode(mode)
            .lars(&y, &WeightVector::new(w.clone()).unwrap(), 6)
            .unwrap();
        for (lam, beta) in path.knots.iter().zip(&path.solutions) {
            for j in 0..8 {
                assert!((beta[j] - soft(z[j], lam * w[j])).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn orthonormal_elastic_net_has_closed_form() {
    let x = orthonormal(15, 10, 3);
    let y = complex_vector(15, &mut rng(4));
    let w: Vec<f64> = (0..10).map(|j| 0.5 + 0.15 * j as f64).collect();
    let z = x.ad_mul(&y);
    let sol = c_pw_wen(&y, &x, &WeightVector::new(w.clone()).unwrap(), &AlphaGrid::default(), 4, false).unwrap();
    assert!(sol.runs.len() > 1);
    for run in &sol.runs {
        for j in 0..10 {
            let want = soft(z[j], run.gamma * w[j]) / (1.0 + run.eta * w[j] * w[j]);
            assert!((run.beta[j] - want).norm() < 1e-11, "alpha {}", run.alpha);
        }
    }
}

#[test]
fn exact_path_matches_proximal_oracle_at_every_knot() {
    for seed in 0..15u64 {
        let mut g = rng(100 + seed);
        let x = complex_gaussian(12, 25, &mut g);
        let y = complex_vector(12, &mut g);
        let w: Vec<f64> = (0..25).map(|_| g.random_range(0.5..2.0)).collect();
        let path = Design::new(x.clone())
            .unwrap()
            .with_mode(PathMode::Exact)
            .lars(&y, &WeightVector::new(w.clone()).unwrap(), 5)
            .unwrap();
        assert!(path.is_complete());
        for k in 1..=5 {
            let oracle = prox_weighted_en(&x, &y, &w, path.knots[k], 0.0, 1e-10);
            let err = rel_err(&path.solutions[k], &oracle);
            assert!(err < 1e-6, "seed {seed} knot {k}: {err:e}");
        }
    }
}

#[test]
fn exact_path_satisfies_complex_subgradient_conditions() {
    // active columns need c_j = λ w_j β_j/|β_j|, not only |c_j| = λ w_j
    for seed in 0..15u64 {
        let mut g = rng(200 + seed);
        let x = complex_gaussian(15, 30, &mut g);
        let y = complex_vector(15, &mut g);
        let path = Design::new(x.clone())
            .unwrap()
            .with_mode(PathMode::Exact)
            .lars(&y, &WeightVector::ones(30), 8)
            .unwrap();
        for k in 1..path.knots.len() {
            let lam = path.knots[k];
            let beta = &path.solutions[k];
            let corr = x.ad_mul(&(&y - &x * beta));
            for &j in &path.active_sets[k] {
                if beta[j].norm() == 0.0 {
                    continue;
                }
                let want = beta[j] * (lam / beta[j].norm());
                assert!((corr[j] - want).norm() < 1e-8 * lam, "seed {seed} knot {k} column {j}");
            }
        }
    }
}

#[test]
fn wen_knot_solutions_match_proximal_oracle() {
    for seed in 0..8u64 {
        let mut g = rng(300 + seed);
        let x = complex_gaussian(10, 24, &mut g);
        let y = complex_vector(10, &mut g);
        let w: Vec<f64> = (0..24).map(|_| g.random_range(0.5..2.0)).collect();
        let grid = AlphaGrid::new(vec![1.0, 0.8, 0.6, 0.3]).unwrap();
        let sol = Design::new(x.clone())
            .unwrap()
            .with_mode(PathMode::Exact)
            .pw_wen(&y, &WeightVector::new(w.clone()).unwrap(), &grid, 3, false)
            .unwrap();
        for run in &sol.runs {
            let oracle = prox_weighted_en(&x, &y, &w, run.gamma, run.eta, 1e-10);
            assert!(rel_err(&run.beta, &oracle) < 1e-6, "seed {seed} alpha {}", run.alpha);
        }
    }
}

#[test]
fn linear_path_keeps_correlation_moduli_on_the_knot() {
    for seed in 0..10u64 {
        let mut g = rng(400 + seed);
        let x = complex_gaussian(20, 40, &mut g);
        let y = complex_vector(20, &mut g);
        let path = c_lars_wlasso(&y, &x, &WeightVector::ones(40), 12).unwrap();
        for k in 1..path.knots.len() {
            let corr = x.ad_mul(&(&y - &x * &path.solutions[k]));
            let lam = path.knots[k];
            for j in 0..40 {
                let m = corr[j].norm();
                if path.active_sets[k].contains(&j) {
                    assert!((m - lam).abs() < 1e-9 * lam);
                } else {
                    assert!(m < lam * (1.0 + 1e-9));
                }
            }
        }
    }
}

#[test]
fn least_squares_agrees_with_normal_equations() {
    let mut g = rng(5);
    let x = complex_gaussian(20, 6, &mut g);
    let y = complex_vector(20, &mut g);
    let a = least_squares(&x, &y).unwrap();
    let b = normal_equations(&x, &y);
    assert!(rel_err(&a, &b) < 1e-10);

    // underdetermined: minimum-norm solution X^H (X X^H)^-1 y
    let x = complex_gaussian(6, 20, &mut g);
    let y = complex_vector(6, &mut g);
    let a = least_squares(&x, &y).unwrap();
    let xxh = &x * x.adjoint();
    let b = x.adjoint() * xxh.cholesky().unwrap().solve(&y);
    assert!(rel_err(&a, &b) < 1e-10);
}

#[test]
fn debiased_fit_is_projection_onto_support() {
    let mut g = rng(6);
    let x = complex_gaussian(15, 30, &mut g);
    let y = complex_vector(15, &mut g);
    let support = [2, 9, 17, 25];
    let (coef, rss) = debiased_fit(&x, &y, &support).unwrap();
    let xa = ComplexMatrix::from_fn(15, 4, |i, j| x[(i, support[j])]);
    let want = normal_equations(&xa, &y);
    assert!(rel_err(&coef, &want) < 1e-10);
    assert!((rss - (&y - &xa * &want).norm_squared()).abs() < 1e-10);
}

#[test]
fn omp_matches_a_plain_reimplementation() {
    for seed in 0..10u64 {
        let mut g = rng(500 + seed);
        let x = complex_gaussian(16, 40, &mut g);
        let y = complex_vector(16, &mut g);
        let sol = omp(&y, &x, 5).unwrap();

        let mut support: Vec<usize> = Vec::new();
        let mut r = y.clone();
        let mut coef = ComplexVector::zeros(0);
        for _ in 0..5 {
            let c = x.ad_mul(&r);
            let j = (0..40)
                .filter(|j| !support.contains(j))
                .max_by(|&a, &b| c[a].norm().total_cmp(&c[b].norm()))
                .unwrap();
            support.push(j);
            let xa = ComplexMatrix::from_fn(16, support.len(), |i, k| x[(i, support[k])]);
            coef = normal_equations(&xa, &y);
            r = &y - xa * &coef;
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        assert_eq!(sol.active_set, sorted);
        for (k, &j) in support.iter().enumerate() {
            assert!((sol.beta[j] - coef[k]).norm() < 1e-9);
        }
    }
}
