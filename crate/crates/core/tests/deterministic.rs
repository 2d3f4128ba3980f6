use dftsub::bounds::{donoho_stark, large_sieve, tao_premise};
use dftsub::linalg::dense_svd_norm;
use dftsub::matrix::{dirac_comb, spread, submatrix, IndexSet};
use dftsub::verify::{dirac_comb_check, donoho_stark_exhaustive, large_sieve_check, tao_exhaustive, tao_sampled};
use dftsub::Dft64;
use proptest::prelude::*;

#[test]
fn dirac_combs_are_dependent() {
    for n in [4, 9, 16, 64, 256] {
        let c = dirac_comb_check(n).unwrap();
        assert!((c.norm - 1.0).abs() < 1e-9, "n={n}");
        assert!(c.smallest_gram_eigenvalue.abs() < 1e-9, "n={n}");
        assert_eq!(c.size * c.size, n);
    }
}

#[test]
fn donoho_stark_sound_for_small_n() {
    for n in 4..=8 {
        let c = donoho_stark_exhaustive(n).unwrap();
        assert_eq!(c.pairs, 1 << (2 * n));
        assert!(c.pass(), "n={n}: {c:?}");
        assert!(c.max_norm_under_premise < 1.0);
    }
}

#[test]
fn donoho_stark_bound_value_is_root_of_frobenius_ratio() {
    let r = donoho_stark(3, 5, 16);
    assert!(r.premises_hold);
    assert!((r.bound_value - (15.0f64 / 16.0).sqrt()).abs() < 1e-15);
    let r = donoho_stark(4, 4, 16);
    assert!(!r.premises_hold && r.premise_detail.contains("comb"));
}

#[test]
fn tao_holds_exhaustively_at_five_and_seven() {
    for n in [5, 7] {
        let c = tao_exhaustive(n).unwrap();
        assert!(c.exhaustive && c.pass(), "n={n}: {c:?}");
        assert!(c.premise_pairs > 0);
    }
}

#[test]
fn tao_holds_on_sampled_pairs_at_eleven_and_thirteen() {
    for n in [11, 13] {
        let c = tao_sampled(n, 10_000, 1).unwrap();
        assert_eq!(c.pairs, 10_000);
        assert_eq!(c.premise_pairs, 10_000);
        assert!(c.pass(), "n={n}: {c:?}");
    }
}

#[test]
fn tao_premise_fails_for_composite_n() {
    assert!(tao_premise(3, 4, 7).premises_hold);
    assert!(!tao_premise(3, 4, 8).premises_hold);
    assert!(!tao_premise(4, 4, 7).premises_hold);
    // the comb shows composite n has dependent pairs with |T| + |O| <= n
    let (t, o) = dirac_comb(16).unwrap();
    let norm = dense_svd_norm(&submatrix(&Dft64::new(16).unwrap(), &o, &t).unwrap()).value;
    assert!(t.len() + o.len() <= 16 && (norm - 1.0).abs() < 1e-12);
}

#[test]
fn large_sieve_holds_for_blocks() {
    let c = large_sieve_check(32, 8, 20, 4).unwrap();
    assert_eq!(c.cases, 32 * 8 * 20);
    assert!(c.pass(), "{c:?}");
    assert!(c.max_ratio <= 1.0 + 1e-9);
}

#[test]
fn large_sieve_example() {
    // |T| = 4 adjacent, spread 8 at n = 32: (4 + 4 - 1) / 32
    let omega = IndexSet::new(32, vec![1, 9, 17, 25]).unwrap();
    let r = large_sieve(4, spread(&omega).unwrap(), 32, true).unwrap();
    assert!((r.bound_value - 7.0 / 32.0).abs() < 1e-15);
    let t = IndexSet::block(32, 5, 4).unwrap();
    let norm = dense_svd_norm(&submatrix(&Dft64::new(32).unwrap(), &omega, &t).unwrap()).value;
    assert!(norm * norm <= r.bound_value + 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn frobenius_bound_always_holds(n in 2usize..=24, rows in any::<u32>(), cols in any::<u32>()) {
        let pick = |mask: u32| IndexSet::new(n, (1..=n).filter(|&j| mask >> (j - 1) & 1 == 1).collect()).unwrap();
        let (o, t) = (pick(rows), pick(cols));
        let norm = dense_svd_norm(&submatrix(&Dft64::new(n).unwrap(), &o, &t).unwrap()).value;
        prop_assert!(norm * norm <= (o.len() * t.len()) as f64 / n as f64 + 1e-9);
        if o.len() * t.len() < n {
            prop_assert!(norm < 1.0 - 1e-9);
        }
    }
}
