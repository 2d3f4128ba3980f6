#![allow(clippy::needless_range_loop)]

use dftsub::linalg::{dense_svd_norm, power_iteration, spectral_norm, DEFAULT_TOL, MAX_POWER_ITERATIONS};
use dftsub::matrix::{gram_matrix, submatrix};
use dftsub::random_sets::{sample_set, SeedSpec, SetModel};
use dftsub::{Dense64, Dft64, IndexSet};
use num_complex::Complex;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Dense64 {
    let data = (0..rows * cols)
        .map(|_| Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
        .collect();
    Dense64::new(rows, cols, data).unwrap()
}

/// Largest singular value from the eigenvalues of `M^* M`, computed with a
/// Jacobi sweep over the real symmetric embedding `[[Re, -Im], [Im, Re]]`.
fn jacobi_norm(m: &Dense64) -> f64 {
    let (r, c) = (m.rows(), m.cols());
    let mut h = vec![vec![Complex::new(0.0, 0.0); c]; c];
    for i in 0..c {
        for j in 0..c {
            h[i][j] = (0..r).map(|k| m.get(k, i).conj() * m.get(k, j)).sum();
        }
    }
    let d = 2 * c;
    let mut a = vec![vec![0.0f64; d]; d];
    for i in 0..c {
        for j in 0..c {
            a[i][j] = h[i][j].re;
            a[i + c][j + c] = h[i][j].re;
            a[i][j + c] = -h[i][j].im;
            a[i + c][j] = h[i][j].im;
        }
    }
    for _ in 0..100 {
        let off: f64 = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..d {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..d {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..d).map(|i| a[i][i]).fold(0.0, f64::max).sqrt()
}

#[test]
fn dense_svd_agrees_with_jacobi_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let (r, c) = (rng.random_range(1..=12), rng.random_range(1..=12));
        let m = gaussian_matrix(&mut rng, r, c);
        let svd = dense_svd_norm(&m).value;
        let oracle = jacobi_norm(&m);
        assert!((svd - oracle).abs() <= 1e-9 * oracle.max(1.0), "{r}x{c}: {svd} vs {oracle}");
    }
}

#[test]
fn power_iteration_matches_dense_svd_on_500_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let (r, c) = (rng.random_range(1..=64), rng.random_range(1..=64));
        let m = gaussian_matrix(&mut rng, r, c);
        let p = power_iteration(&m, DEFAULT_TOL * 1e-2, MAX_POWER_ITERATIONS).unwrap().value;
        let s = dense_svd_norm(&m).value;
        worst = worst.max((p - s).abs() / s.max(1.0));
    }
    assert!(worst <= 1e-8, "worst relative gap {worst}");
}

#[test]
fn gram_extremes_are_one_plus_minus_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..200u64 {
        let n = rng.random_range(2..=64);
        let f = Dft64::new(n).unwrap();
        let model = SetModel::fixed(n, rng.random_range(1..=n)).unwrap();
        let model2 = SetModel::fixed(n, rng.random_range(1..=n)).unwrap();
        let omega = sample_set(&model, SeedSpec::new(i, 0));
        let t = sample_set(&model2, SeedSpec::new(i, 1));
        let sigma = dense_svd_norm(&submatrix(&f, &omega, &t).unwrap()).value;
        let (lo, hi) = gram_matrix(&f, &omega, &t).unwrap().extreme_eigenvalues().unwrap();
        assert!((hi - (1.0 + sigma)).abs() < 1e-8, "n={n}: {hi} vs 1 + {sigma}");
        assert!((lo - (1.0 - sigma)).abs() < 1e-8, "n={n}: {lo} vs 1 - {sigma}");
    }
}

#[test]
fn nested_sets_have_larger_norms() {
    let n = 16;
    let f = Dft64::new(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let big_o: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.6)).collect();
        let big_t: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.6)).collect();
        let small_o: Vec<usize> = big_o.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        let small_t: Vec<usize> = big_t.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        let norm = |o: &[usize], t: &[usize]| {
            let (o, t) = (IndexSet::new(n, o.to_vec()).unwrap(), IndexSet::new(n, t.to_vec()).unwrap());
            spectral_norm(&submatrix(&f, &o, &t).unwrap(), DEFAULT_TOL).unwrap().value
        };
        assert!(norm(&small_o, &small_t) <= norm(&big_o, &big_t) + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dft_submatrix_norms_lie_in_unit_interval(
        n in 1usize..=40,
        rows in proptest::collection::vec(any::<bool>(), 40),
        cols in proptest::collection::vec(any::<bool>(), 40),
    ) {
        let pick = |mask: &[bool]| IndexSet::new(n, (1..=n).filter(|&j| mask[j - 1]).collect()).unwrap();
        let (o, t) = (pick(&rows), pick(&cols));
        let m = submatrix(&Dft64::new(n).unwrap(), &o, &t).unwrap();
        let norm = spectral_norm(&m, DEFAULT_TOL).unwrap().value;
        prop_assert!((0.0..=1.0 + 1e-10).contains(&norm));
        // every entry has modulus n^{-1/2}
        if !o.is_empty() && !t.is_empty() {
            prop_assert!(norm >= (n as f64).sqrt().recip() - 1e-12);
        }
    }

    #[test]
    fn power_and_svd_agree_on_random_matrices(seed in any::<u64>(), r in 1usize..=24, c in 1usize..=24) {
        let m = gaussian_matrix(&mut ChaCha8Rng::seed_from_u64(seed), r, c);
        let p = power_iteration(&m, 1e-12, MAX_POWER_ITERATIONS).unwrap().value;
        let s = dense_svd_norm(&m).value;
        prop_assert!((p - s).abs() <= 1e-8 * s.max(1.0));
    }
}
