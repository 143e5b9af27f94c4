//! Independent reference computations checked against the library.
//!
//! The oracles here are deliberately naive: O(N^2) DFT sums, direct circular
//! lag sums and explicit projections. None of them go through the FFT or QR
//! paths they check.

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use resent_core::basis::{chebyshev_values, LeastSquares};
use resent_core::*;

fn naive_dft(x: &[f64]) -> Vec<(f64, f64)> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, &v)| {
                let a = -2.0 * PI * (k * j) as f64 / n as f64;
                (re + v * a.cos(), im + v * a.sin())
            })
        })
        .collect()
}

fn direct_autocorr(r: &[f64]) -> Vec<f64> {
    let n = r.len();
    let rss: f64 = r.iter().map(|v| v * v).sum();
    (0..n)
        .map(|l| (0..n).map(|i| r[i] * r[(i + n - l) % n]).sum::<f64>() / rss)
        .collect()
}

fn naive_mlp(r: &[f64], eps: f64) -> f64 {
    let rss: f64 = r.iter().map(|v| v * v).sum();
    let c: Vec<f64> = naive_dft(r)
        .iter()
        .map(|(a, b)| (a * a + b * b) / rss)
        .collect();
    let max = c.iter().cloned().fold(0.0, f64::max);
    c.iter().map(|v| v.max(eps * max).ln()).sum::<f64>() / r.len() as f64
}

fn normals(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn seq(v: Vec<f64>) -> ResidualSequence {
    ResidualSequence::new(v).unwrap()
}

#[test]
fn dft_matches_direct_summation() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for n in [1usize, 2, 3, 7, 16, 31, 64, 100] {
        let x = normals(&mut rng, n);
        let fast = dft(&x).unwrap();
        for (f, (re, im)) in fast.iter().zip(naive_dft(&x)) {
            assert!(
                (f.re - re).abs() < 1e-10 && (f.im - im).abs() < 1e-10,
                "n = {n}"
            );
        }
        let back = inverse_dft(&fast).unwrap();
        for (b, v) in back.iter().zip(&x) {
            assert!((b.re - v).abs() <= 1e-12 * v.abs().max(1.0));
            assert!(b.im.abs() < 1e-12);
        }
    }
}

#[test]
fn wiener_khinchin_matches_direct_lag_sums() {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.random_range(2..=64);
        let r = normals(&mut rng, n);
        let fast = circular_autocorrelation(&seq(r.clone())).unwrap();
        let slow = direct_autocorr(&r);
        let diff = fast
            .iter()
            .zip(&slow)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10, "n = {n}, diff = {diff:e}");
    }
}

#[test]
fn ramp_mlp_and_loss() {
    // |X| ^ 2 = (100, 8, 4, 8), rss = 30
    let frozen_mlp = -0.8636104740452418;
    let r = [1.0, 2.0, 3.0, 4.0];
    let oracle = naive_mlp(&r, 1e-12);
    assert!((oracle - frozen_mlp).abs() < 1e-14);

    let ps = power_spectrum(&seq(r.to_vec())).unwrap();
    let mlp = mean_log_power(&ps.corr_power, RelativeFloor::default()).unwrap();
    assert!((mlp - frozen_mlp).abs() < 1e-13);

    let b = entropy_loss(&seq(r.to_vec()), &LossSpec::with_eta(1.0).unwrap()).unwrap();
    assert_eq!(b.mse, 7.5);
    assert!((b.total - 7.5 * (1.0 - frozen_mlp)).abs() < 1e-12);
    assert!((b.total - 13.977078555339313).abs() < 1e-12);
}

#[test]
fn parseval_on_standard_normal_draw() {
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    let r = normals(&mut rng, 100);
    let ps = power_spectrum(&seq(r)).unwrap();
    let total: f64 = ps.power.iter().sum();
    assert!((total - 100.0 * ps.rss).abs() <= 1e-10 * 100.0 * ps.rss);
}

#[test]
fn circulant_determinant_identity() {
    let mut rng = ChaCha20Rng::seed_from_u64(14);
    for _ in 0..50 {
        let n = rng.random_range(2..=128);
        let r = seq(normals(&mut rng, n));
        let rho = circular_autocorrelation(&r).unwrap();
        let ld = circulant_log_det(&rho, RelativeFloor::default()).unwrap();
        let s = resent_core::spectra::summarize(&r, RelativeFloor::default()).unwrap();
        assert!((ld - n as f64 * s.mlp).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn fourier_coefficients_match_orthogonality_closed_form() {
    let n = 100;
    let grid = Grid::fourier(n).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(15);
    let y = normals(&mut rng, n);
    for order in [1usize, 5, 21, 41, 50] {
        let fit = ols_fit(&grid, &y, Family::Fourier, order, &LossSpec::mse_only()).unwrap();
        let c = fit.model.coefficients();
        let a0 = 2.0 / n as f64 * y.iter().sum::<f64>();
        assert!((c[0] - a0).abs() < 1e-9);
        for m in 1..order {
            let (mut a, mut b) = (0.0, 0.0);
            for (x, v) in grid.locations().iter().zip(&y) {
                a += v * (2.0 * PI * m as f64 * x).cos();
                b += v * (2.0 * PI * m as f64 * x).sin();
            }
            a *= 2.0 / n as f64;
            b *= 2.0 / n as f64;
            assert!((c[m] - a).abs() < 1e-9, "a_{m} at order {order}");
            assert!(
                (c[order - 1 + m] - b).abs() < 1e-9,
                "b_{m} at order {order}"
            );
        }
    }
}

#[test]
fn residuals_are_orthogonal_to_design() {
    let mut rng = ChaCha20Rng::seed_from_u64(16);
    for (family, orders) in [
        (Family::Fourier, vec![1usize, 10, 30, 45]),
        (Family::Chebyshev, vec![1usize, 10, 40, 76]),
    ] {
        let grid = family.natural_grid(100).unwrap();
        let y = normals(&mut rng, 100);
        for order in orders {
            let ls = LeastSquares::new(&grid, family, order).unwrap();
            let (_, r) = ls.solve(&y).unwrap();
            for g in ls.design().tr_mul_vec(&r) {
                assert!(g.abs() < 1e-9, "{family} M = {order}: {g:e}");
            }
        }
    }
}

#[test]
fn nested_rss_is_non_increasing() {
    let mut rng = ChaCha20Rng::seed_from_u64(17);
    for (family, max_order) in [(Family::Fourier, 50usize), (Family::Chebyshev, 100)] {
        let grid = family.natural_grid(100).unwrap();
        let y = normals(&mut rng, 100);
        let mut prev = f64::INFINITY;
        for order in 1..=max_order {
            // Past the rank tolerance the design is rejected outright.
            let fit = match ols_fit(&grid, &y, family, order, &LossSpec::mse_only()) {
                Ok(fit) => fit,
                Err(Error::SingularDesign { .. }) if family == Family::Chebyshev && order > 76 => {
                    break
                }
                Err(e) => panic!("{family} M = {order}: {e}"),
            };
            let rss = fit.residuals.rss();
            assert!(rss <= prev + 1e-10, "{family} M = {order}: {rss} > {prev}");
            prev = rss;
        }
    }
}

#[test]
fn fourier_fit_nulls_low_modes_in_every_realization() {
    let n = 100;
    let grid = Grid::fourier(n).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(18);
    for order in [2usize, 21, 41] {
        let ls = LeastSquares::new(&grid, Family::Fourier, order).unwrap();
        for _ in 0..50 {
            let (_, r) = ls.solve(&normals(&mut rng, n)).unwrap();
            let ps = power_spectrum(&seq(r)).unwrap();
            for k in (0..order).chain(n - order + 1..n) {
                assert!(ps.corr_power[k] < 1e-18, "M = {order}, k = {k}");
            }
        }
    }
}

#[test]
fn chebyshev_recurrence_matches_trigonometric_form() {
    let mut t = vec![0.0; 101];
    for i in 0..=400 {
        let x = -1.0 + 2.0 * i as f64 / 400.0;
        chebyshev_values(x, &mut t);
        for (m, v) in t.iter().enumerate() {
            let closed = (m as f64 * x.acos()).cos();
            assert!((v - closed).abs() < 1e-10, "T_{m}({x})");
        }
    }
}

#[test]
fn predict_plus_residuals_reproduces_data() {
    let mut rng = ChaCha20Rng::seed_from_u64(19);
    for (family, order) in [(Family::Fourier, 21usize), (Family::Chebyshev, 12)] {
        let grid = family.natural_grid(100).unwrap();
        let y = normals(&mut rng, 100);
        let fit = ols_fit(&grid, &y, family, order, &LossSpec::mse_only()).unwrap();
        let yhat = predict(&fit.model, &grid);
        for ((p, r), v) in yhat.iter().zip(fit.residuals.as_slice()).zip(&y) {
            assert!((p + r - v).abs() < 1e-12);
        }
    }
}

/// Brute-force Monte Carlo for the mean lag-1 autocorrelation of white noise
/// with the lowest 2M - 1 Fourier modes projected out, using a different
/// generator and an explicit projection.
#[test]
fn lag_one_dirichlet_value_by_brute_force() {
    let (n, order, draws) = (100usize, 21usize, 100_000);
    let dirichlet = -(1.0
        + 2.0
            * (1..order)
                .map(|j| (2.0 * PI * j as f64 / n as f64).cos())
                .sum::<f64>())
        / (n - (2 * order - 1)) as f64;
    assert!((dirichlet - -0.518171627865857).abs() < 1e-14);

    // Orthonormal real basis of the removed modes.
    let mut basis: Vec<Vec<f64>> = vec![vec![1.0 / (n as f64).sqrt(); n]];
    let norm = (2.0 / n as f64).sqrt();
    for m in 1..order {
        let w = 2.0 * PI * m as f64 / n as f64;
        basis.push((0..n).map(|i| norm * (w * i as f64).cos()).collect());
        basis.push((0..n).map(|i| norm * (w * i as f64).sin()).collect());
    }
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut sum = 0.0;
    for _ in 0..draws {
        let mut r = normals(&mut rng, n);
        for b in &basis {
            let c: f64 = b.iter().zip(&r).map(|(u, v)| u * v).sum();
            for (v, u) in r.iter_mut().zip(b) {
                *v -= c * u;
            }
        }
        let rss: f64 = r.iter().map(|v| v * v).sum();
        let lag: f64 = (0..n).map(|i| r[i] * r[(i + n - 1) % n]).sum();
        sum += lag / rss;
    }
    let mc = sum / draws as f64;
    println!("brute-force mean rho(1) = {mc}, Dirichlet = {dirichlet}");
    assert!((mc - dirichlet).abs() < 0.005);
}

#[test]
fn landscape_of_constant_term_is_a_parabola() {
    let grid = Grid::fourier(30).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(20);
    let y = normals(&mut rng, 30);
    let mean = y.iter().sum::<f64>() / 30.0;
    let rows = loss_landscape(
        &grid,
        &y,
        Family::Fourier,
        1,
        &LossSpec::mse_only(),
        0,
        (2.0 * mean - 3.0, 2.0 * mean + 3.0),
        61,
    )
    .unwrap();
    let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 30.0;
    for row in &rows {
        assert_eq!(row.total, row.mse);
        let d = row.value / 2.0 - mean;
        assert!((row.mse - (var + d * d)).abs() < 1e-12);
    }
    let vertex = rows.iter().min_by(|a, b| a.mse.total_cmp(&b.mse)).unwrap();
    assert!((vertex.value - 2.0 * mean).abs() < 1e-9);

    let rows = loss_landscape(
        &grid,
        &y,
        Family::Fourier,
        3,
        &LossSpec::with_eta(0.7).unwrap(),
        2,
        (-2.0, 2.0),
        41,
    )
    .unwrap();
    assert!(rows.iter().all(|r| r.total.is_finite() && r.total >= r.mse));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parseval_and_mean_one(v in prop::collection::vec(-10.0f64..10.0, 2..80)) {
        prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
        let n = v.len() as f64;
        let ps = power_spectrum(&seq(v)).unwrap();
        let total: f64 = ps.power.iter().sum();
        prop_assert!((total - n * ps.rss).abs() <= 1e-10 * n * ps.rss);
        let mean: f64 = ps.corr_power.iter().sum::<f64>() / n;
        prop_assert!((mean - 1.0).abs() < 1e-12);
        prop_assert!(ps.power.iter().all(|p| *p >= 0.0));
        prop_assert_eq!(ps.signature.iter().cloned().fold(0.0, f64::max), 1.0);
    }

    #[test]
    fn autocorrelation_is_even_and_normalized(v in prop::collection::vec(-5.0f64..5.0, 2..64)) {
        prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
        let n = v.len();
        let rho = circular_autocorrelation(&seq(v)).unwrap();
        prop_assert_eq!(rho[0], 1.0);
        for l in 1..n {
            prop_assert_eq!(rho[l], rho[n - l]);
        }
    }

    #[test]
    fn mlp_is_non_positive_and_scale_free(
        v in prop::collection::vec(-5.0f64..5.0, 2..64),
        c in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
    ) {
        prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
        let floor = RelativeFloor::default();
        let s = resent_core::spectra::summarize(&seq(v.clone()), floor).unwrap();
        prop_assert!(s.mlp <= 0.0);
        let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
        let t = resent_core::spectra::summarize(&seq(scaled), floor).unwrap();
        prop_assert!((s.mlp - t.mlp).abs() < 1e-12);
    }

    #[test]
    fn loss_identities(v in prop::collection::vec(-5.0f64..5.0, 2..64), eta in 0.0f64..10.0) {
        let r = seq(v);
        let plain = entropy_loss(&r, &LossSpec::mse_only()).unwrap();
        prop_assert_eq!(plain.total, mse(r.as_slice()));
        let b = entropy_loss(&r, &LossSpec::with_eta(eta).unwrap()).unwrap();
        prop_assert!(b.total >= b.mse);
        prop_assert!(b.total.is_finite());
    }

    #[test]
    fn loss_is_increasing_in_eta(v in prop::collection::vec(-5.0f64..5.0, 4..64), eta in 0.0f64..5.0) {
        let r = seq(v);
        let lo = entropy_loss(&r, &LossSpec::with_eta(eta).unwrap()).unwrap();
        prop_assume!(lo.mlp < -1e-9 && lo.mse > 0.0);
        let hi = entropy_loss(&r, &LossSpec::with_eta(eta + 0.5).unwrap()).unwrap();
        prop_assert!(hi.total > lo.total);
    }
}

#[test]
fn shuffling_keeps_mse_but_changes_mlp() {
    use rand::seq::SliceRandom;
    let smooth: Vec<f64> = (0..64)
        .map(|i| (2.0 * PI * i as f64 / 64.0).sin() + 0.3)
        .collect();
    let mut shuffled = smooth.clone();
    shuffled.shuffle(&mut ChaCha20Rng::seed_from_u64(21));
    let floor = RelativeFloor::default();
    let a = resent_core::spectra::summarize(&seq(smooth.clone()), floor).unwrap();
    let b = resent_core::spectra::summarize(&seq(shuffled.clone()), floor).unwrap();
    assert!((mse(&smooth) - mse(&shuffled)).abs() < 1e-14);
    assert!((a.mlp - b.mlp).abs() > 0.1, "{} vs {}", a.mlp, b.mlp);
}
