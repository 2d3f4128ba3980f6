use dftsub::random_sets::{
    binomial, enumerate_sets, exact_norm_distribution, exact_tail_probability, outcomes, sample_set, stream_index,
    tail_from_distribution, SeedSpec, SetModel, Side,
};
use dftsub::verify::{rand_coords_check, square_case_check, unit_grid};
use dftsub::Dft64;
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi2_critical(df: usize) -> f64 {
    ChiSquared::new(df as f64).unwrap().inverse_cdf(0.999)
}

#[test]
fn rand_coords_factors_hold_exactly() {
    for n in [6, 8] {
        let f = Dft64::new(n).unwrap();
        for delta in [0.25, 0.5] {
            let rows = rand_coords_check(&f, delta, &unit_grid()).unwrap();
            for r in &rows {
                assert!(r.fixed_one_sided <= 2.0 * r.bernoulli_one_sided + 1e-12, "n={n} delta={delta} u={}", r.u);
                assert!(r.fixed_two_sided <= 4.0 * r.bernoulli_two_sided + 1e-12, "n={n} delta={delta} u={}", r.u);
                assert!(r.ok);
            }
        }
    }
}

#[test]
fn square_case_tails_increase_with_cardinality() {
    let rows = square_case_check(&Dft64::new(8).unwrap(), 4, &unit_grid()).unwrap();
    for r in &rows {
        for m in 0..4 {
            for m2 in m..=4 {
                assert!(r.tails[m] <= r.tails[m2] + 1e-12, "u={} m={m} m'={m2}", r.u);
            }
        }
    }
}

#[test]
fn bernoulli_cardinality_is_binomial_in_the_enumeration() {
    let (n, delta) = (9, 0.3);
    let model = SetModel::bernoulli(n, delta).unwrap();
    let mut by_size = vec![0.0; n + 1];
    for (s, p) in outcomes(&model).unwrap() {
        by_size[s.len()] += p;
    }
    for (k, &p) in by_size.iter().enumerate() {
        let expected = binomial(n, k) * delta.powi(k as i32) * (1.0 - delta).powi((n - k) as i32);
        assert!((p - expected).abs() < 1e-14, "k={k}: {p} vs {expected}");
    }
}

#[test]
fn bernoulli_sampler_follows_binomial_law() {
    let (n, delta, draws) = (20, 0.35, 20_000u64);
    let model = SetModel::bernoulli(n, delta).unwrap();
    let mut counts = vec![0u64; n + 1];
    for i in 0..draws {
        counts[sample_set(&model, SeedSpec::new(3, stream_index(0, i, Side::Rows))).len()] += 1;
    }
    // chi-square over cells with expected count >= 5
    let mut chi2 = 0.0;
    let mut cells = 0;
    for (k, &c) in counts.iter().enumerate() {
        let e = draws as f64 * binomial(n, k) * delta.powi(k as i32) * (1.0 - delta).powi((n - k) as i32);
        if e >= 5.0 {
            chi2 += (c as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    assert!(chi2 < chi2_critical(cells - 1), "chi2 = {chi2} over {cells} cells");
}

#[test]
fn fixed_sampler_is_uniform_over_subsets() {
    let (n, m, draws) = (6, 2, 30_000u64);
    let sets = enumerate_sets(n, Some(m)).unwrap();
    let model = SetModel::fixed(n, m).unwrap();
    let mut counts = vec![0u64; sets.len()];
    for i in 0..draws {
        let s = sample_set(&model, SeedSpec::new(9, i));
        counts[sets.iter().position(|x| *x == s).unwrap()] += 1;
    }
    let e = draws as f64 / sets.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    assert!(chi2 < chi2_critical(sets.len() - 1), "chi2 = {chi2}");
}

#[test]
fn monte_carlo_tail_within_three_standard_errors_of_exact() {
    let n = 8;
    let f = Dft64::new(n).unwrap();
    let model = SetModel::bernoulli(n, 0.5).unwrap();
    let trials = 20_000u64;
    for u in [0.4, 0.6, 0.8] {
        let exact = exact_tail_probability(&f, &model, true, u).unwrap();
        let hits = (0..trials)
            .filter(|&i| {
                let o = sample_set(&model, SeedSpec::new(17, stream_index(0, i, Side::Rows)));
                let t = sample_set(&model, SeedSpec::new(17, stream_index(0, i, Side::Cols)));
                let m = dftsub::matrix::submatrix(&f, &o, &t).unwrap();
                dftsub::linalg::dense_svd_norm(&m).value >= u
            })
            .count();
        let p = hits as f64 / trials as f64;
        let se = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!((p - exact).abs() <= 3.0 * se + 1e-12, "u={u}: {p} vs {exact} (se {se})");
    }
}

#[test]
fn enumeration_guards_reject_large_n() {
    let f = Dft64::new(13).unwrap();
    let model = SetModel::bernoulli(13, 0.5).unwrap();
    assert!(matches!(exact_norm_distribution(&f, &model, true), Err(dftsub::Error::Guard(_))));
    let f = Dft64::new(17).unwrap();
    let model = SetModel::bernoulli(17, 0.5).unwrap();
    assert!(matches!(exact_norm_distribution(&f, &model, false), Err(dftsub::Error::Guard(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fixed_sets_have_exact_cardinality(n in 1usize..200, frac in 0.0f64..=1.0, seed in any::<u64>(), idx in any::<u32>()) {
        let m = (frac * n as f64) as usize;
        let s = sample_set(&SetModel::fixed(n, m).unwrap(), SeedSpec::new(seed, idx as u64));
        prop_assert_eq!(s.len(), m);
        prop_assert!(s.iter().all(|j| (1..=n).contains(&j)));
    }

    #[test]
    fn sampling_is_a_function_of_seed_and_stream(n in 1usize..100, delta in 0.0f64..=1.0, seed in any::<u64>(), idx in any::<u32>()) {
        let model = SetModel::bernoulli(n, delta).unwrap();
        let spec = SeedSpec::new(seed, idx as u64);
        prop_assert_eq!(sample_set(&model, spec), sample_set(&model, spec));
    }

    #[test]
    fn exact_tail_is_nonincreasing_in_u(n in 2usize..=7, delta in 0.1f64..0.9) {
        let dist = exact_norm_distribution(&Dft64::new(n).unwrap(), &SetModel::bernoulli(n, delta).unwrap(), true).unwrap();
        let grid = unit_grid();
        for w in grid.windows(2) {
            prop_assert!(tail_from_distribution(&dist, w[1]) <= tail_from_distribution(&dist, w[0]) + 1e-15);
        }
    }
}
