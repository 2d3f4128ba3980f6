//! Exhaustive and sampled checks of the deterministic and coordinate-model
//! statements, shared by the command line and the test suites.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{is_prime, large_sieve};
use crate::error::{ensure_domain, Error, Result};
use crate::linalg::dense_svd_norm;
use crate::matrix::{dirac_comb, gram_matrix, spread, submatrix, BoundedMatrix, Dft, IndexSet};
use crate::random_sets::{
    enumerate_sets, exact_norm_distribution, sample_set, stream_index, tail_from_distribution, SeedSpec, SetModel,
    Side, MAX_ENUM_TWO_SIDED,
};

/// Slack on every "strictly below one" verdict.
pub const STRICT_MARGIN: f64 = 1e-9;

/// Slack on comparisons of exact probabilities.
pub const PROBABILITY_SLACK: f64 = 1e-12;

fn norm64(f: &Dft<f64>, omega: &IndexSet, t: &IndexSet) -> f64 {
    dense_svd_norm(&submatrix(f, omega, t).expect("sets share the ambient dimension")).value
}

fn two_sided_guard(n: usize) -> Result<()> {
    if n > MAX_ENUM_TWO_SIDED {
        return Err(Error::Guard(format!("exhaustive pair enumeration needs n <= {MAX_ENUM_TWO_SIDED}, got {n}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombCheck {
    pub n: usize,
    pub size: usize,
    pub norm: f64,
    pub smallest_gram_eigenvalue: f64,
}

/// Norm and smallest Gram eigenvalue of the Dirac comb pair.
pub fn dirac_comb_check(n: usize) -> Result<CombCheck> {
    let (t, omega) = dirac_comb(n)?;
    let f = Dft::<f64>::new(n)?;
    let g = gram_matrix(&f, &omega, &t)?;
    let (lo, _) = g.extreme_eigenvalues().expect("comb is nonempty");
    Ok(CombCheck { n, size: t.len(), norm: norm64(&f, &omega, &t), smallest_gram_eigenvalue: lo })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DonohoStarkCheck {
    pub n: usize,
    pub pairs: usize,
    pub premise_pairs: usize,
    /// Largest norm over pairs with `|T||O| < n`.
    pub max_norm_under_premise: f64,
    /// Largest `norm^2 - |O||T|/n` over all pairs.
    pub max_frobenius_excess: f64,
    pub premise_violations: usize,
    pub frobenius_violations: usize,
}

impl DonohoStarkCheck {
    pub fn pass(&self) -> bool {
        self.premise_violations == 0 && self.frobenius_violations == 0
    }
}

/// Every pair `(O, T)` of subsets of `{1, ..., n}`.
pub fn donoho_stark_exhaustive(n: usize) -> Result<DonohoStarkCheck> {
    two_sided_guard(n)?;
    let f = Dft::<f64>::new(n)?;
    let sets = enumerate_sets(n, None)?;
    let per_row: Vec<(usize, f64, f64, usize, usize)> = sets
        .par_iter()
        .map(|omega| {
            let (mut premise, mut max_norm, mut excess, mut pv, mut fv) = (0, 0.0f64, f64::NEG_INFINITY, 0, 0);
            for t in &sets {
                let norm = norm64(&f, omega, t);
                let frob = (omega.len() * t.len()) as f64 / n as f64;
                excess = excess.max(norm * norm - frob);
                if norm * norm > frob + STRICT_MARGIN {
                    fv += 1;
                }
                if omega.len() * t.len() < n {
                    premise += 1;
                    max_norm = max_norm.max(norm);
                    if norm >= 1.0 - STRICT_MARGIN {
                        pv += 1;
                    }
                }
            }
            (premise, max_norm, excess, pv, fv)
        })
        .collect();
    Ok(per_row.into_iter().fold(
        DonohoStarkCheck {
            n,
            pairs: sets.len() * sets.len(),
            premise_pairs: 0,
            max_norm_under_premise: 0.0,
            max_frobenius_excess: f64::NEG_INFINITY,
            premise_violations: 0,
            frobenius_violations: 0,
        },
        |mut acc, (p, m, e, pv, fv)| {
            acc.premise_pairs += p;
            acc.max_norm_under_premise = acc.max_norm_under_premise.max(m);
            acc.max_frobenius_excess = acc.max_frobenius_excess.max(e);
            acc.premise_violations += pv;
            acc.frobenius_violations += fv;
            acc
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaoCheck {
    pub n: usize,
    pub exhaustive: bool,
    pub pairs: usize,
    pub premise_pairs: usize,
    pub max_norm_under_premise: f64,
    pub violations: usize,
}

impl TaoCheck {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

fn tally_tao(n: usize, exhaustive: bool, norms: &[(usize, usize, f64)]) -> TaoCheck {
    let mut c = TaoCheck { n, exhaustive, pairs: norms.len(), premise_pairs: 0, max_norm_under_premise: 0.0, violations: 0 };
    for &(w, t, norm) in norms {
        if w + t <= n {
            c.premise_pairs += 1;
            c.max_norm_under_premise = c.max_norm_under_premise.max(norm);
            if norm >= 1.0 - STRICT_MARGIN {
                c.violations += 1;
            }
        }
    }
    c
}

/// All pairs for prime `n <= 12`.
pub fn tao_exhaustive(n: usize) -> Result<TaoCheck> {
    ensure_domain!(is_prime(n), "n = {n} is not prime");
    two_sided_guard(n)?;
    let f = Dft::<f64>::new(n)?;
    let sets = enumerate_sets(n, None)?;
    let norms: Vec<Vec<(usize, usize, f64)>> = sets
        .par_iter()
        .map(|omega| sets.iter().map(|t| (omega.len(), t.len(), norm64(&f, omega, t))).collect())
        .collect();
    Ok(tally_tao(n, true, &norms.concat()))
}

/// Random pairs with `1 <= |T|`, `1 <= |O|` and `|T| + |O| <= n`, sizes
/// uniform among those, sets uniform given their sizes.
pub fn tao_sampled(n: usize, pairs: usize, seed: u64) -> Result<TaoCheck> {
    ensure_domain!(is_prime(n), "n = {n} is not prime");
    ensure_domain!(n >= 2, "n must be at least 2");
    let f = Dft::<f64>::new(n)?;
    let norms: Vec<(usize, usize, f64)> = (0..pairs as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeedSpec::new(seed, stream_index(1, i, Side::Rows)).rng();
            let t_size = rng.random_range(1..n);
            let w_size = rng.random_range(1..=n - t_size);
            let omega = sample_set(&SetModel::FixedCardinality { n, m: w_size }, SeedSpec::new(seed, stream_index(0, i, Side::Rows)));
            let t = sample_set(&SetModel::FixedCardinality { n, m: t_size }, SeedSpec::new(seed, stream_index(0, i, Side::Cols)));
            (w_size, t_size, norm64(&f, &omega, &t))
        })
        .collect();
    Ok(tally_tao(n, false, &norms))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveCheck {
    pub n: usize,
    pub cases: usize,
    /// Largest `norm^2 - bound`.
    pub max_excess: f64,
    /// Largest `norm^2 / bound`.
    pub max_ratio: f64,
    pub violations: usize,
}

impl SieveCheck {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Every cyclic block `T` with `|T| <= max_block`, each against
/// `omegas_per_block` random `O` with `2 <= |O| <= max_block`.
pub fn large_sieve_check(n: usize, max_block: usize, omegas_per_block: usize, seed: u64) -> Result<SieveCheck> {
    ensure_domain!(n >= 2 && max_block >= 2 && max_block <= n, "need 2 <= max_block <= n");
    let f = Dft::<f64>::new(n)?;
    let blocks: Vec<IndexSet> = (1..=max_block)
        .flat_map(|len| (1..=n).map(move |offset| (offset, len)))
        .map(|(offset, len)| IndexSet::block(n, offset, len))
        .collect::<Result<_>>()?;
    let results: Vec<Result<(f64, f64)>> = blocks
        .par_iter()
        .enumerate()
        .flat_map_iter(|(b, t)| {
            let f = &f;
            (0..omegas_per_block as u64).map(move |i| {
                let mut rng = SeedSpec::new(seed, stream_index(b as u64 + 1, i, Side::Cols)).rng();
                let size = rng.random_range(2..=max_block);
                let omega = sample_set(
                    &SetModel::FixedCardinality { n, m: size },
                    SeedSpec::new(seed, stream_index(b as u64 + 1, i, Side::Rows)),
                );
                let bound = large_sieve(t.len(), spread(&omega)?, n, true)?.bound_value;
                let norm = norm64(f, &omega, t);
                Ok((norm * norm - bound, norm * norm / bound))
            })
        })
        .collect();
    let mut c = SieveCheck { n, cases: 0, max_excess: f64::NEG_INFINITY, max_ratio: 0.0, violations: 0 };
    for r in results {
        let (excess, ratio) = r?;
        c.cases += 1;
        c.max_excess = c.max_excess.max(excess);
        c.max_ratio = c.max_ratio.max(ratio);
        if excess > STRICT_MARGIN {
            c.violations += 1;
        }
    }
    Ok(c)
}

pub fn unit_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoordsRow {
    pub u: f64,
    pub fixed_one_sided: f64,
    pub bernoulli_one_sided: f64,
    pub fixed_two_sided: f64,
    pub bernoulli_two_sided: f64,
    pub ok: bool,
}

impl CoordsRow {
    /// `P(fixed) / P(Bernoulli)` one-sided; 0 when both vanish.
    pub fn ratio_one_sided(&self) -> f64 {
        ratio(self.fixed_one_sided, self.bernoulli_one_sided)
    }

    pub fn ratio_two_sided(&self) -> f64 {
        ratio(self.fixed_two_sided, self.bernoulli_two_sided)
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else if b == 0.0 {
        f64::INFINITY
    } else {
        a / b
    }
}

/// Exact comparison of the fixed-cardinality and Bernoulli coordinate
/// models: `P(||P A|| >= u) <= 2 P(||R A|| >= u)` and
/// `P(||P A P'|| >= u) <= 4 P(||R A R'|| >= u)` at every `u`.
pub fn rand_coords_check<A: BoundedMatrix<f64> + ?Sized>(a: &A, delta: f64, u_grid: &[f64]) -> Result<Vec<CoordsRow>> {
    let n = a.dim();
    let fixed = SetModel::fixed_from_delta(n, delta)?;
    let bern = SetModel::bernoulli(n, delta)?;
    let dists = [
        exact_norm_distribution(a, &fixed, false)?,
        exact_norm_distribution(a, &bern, false)?,
        exact_norm_distribution(a, &fixed, true)?,
        exact_norm_distribution(a, &bern, true)?,
    ];
    Ok(u_grid
        .iter()
        .map(|&u| {
            let [f1, b1, f2, b2] = [0, 1, 2, 3].map(|i| tail_from_distribution(&dists[i], u));
            CoordsRow {
                u,
                fixed_one_sided: f1,
                bernoulli_one_sided: b1,
                fixed_two_sided: f2,
                bernoulli_two_sided: b2,
                ok: f1 <= 2.0 * b1 + PROBABILITY_SLACK && f2 <= 4.0 * b2 + PROBABILITY_SLACK,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquareCaseRow {
    pub u: f64,
    /// `P(||A_{O T}|| >= u)` for `|O| = |T| = m`, `m = 0, 1, ..., max_m`.
    pub tails: Vec<f64>,
    pub monotone: bool,
}

/// Exact tails of `||A_{O T}||` for random `O`, `T` of equal cardinality
/// `m <= max_m`; they must be nondecreasing in `m`.
pub fn square_case_check<A: BoundedMatrix<f64> + ?Sized>(a: &A, max_m: usize, u_grid: &[f64]) -> Result<Vec<SquareCaseRow>> {
    let n = a.dim();
    ensure_domain!(max_m <= n, "max cardinality {max_m} exceeds n = {n}");
    let dists: Vec<Vec<(f64, f64)>> = (0..=max_m)
        .map(|m| exact_norm_distribution(a, &SetModel::fixed(n, m)?, true))
        .collect::<Result<_>>()?;
    Ok(u_grid
        .iter()
        .map(|&u| {
            let tails: Vec<f64> = dists.iter().map(|d| tail_from_distribution(d, u)).collect();
            let monotone = tails.windows(2).all(|w| w[0] <= w[1] + PROBABILITY_SLACK);
            SquareCaseRow { u, tails, monotone }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comb_small() {
        let c = dirac_comb_check(16).unwrap();
        assert!((c.norm - 1.0).abs() < 1e-12 && c.smallest_gram_eigenvalue.abs() < 1e-10);
    }

    #[test]
    fn donoho_stark_n4() {
        let c = donoho_stark_exhaustive(4).unwrap();
        assert_eq!(c.pairs, 256);
        assert!(c.pass());
        // the comb {2,4} x {2,4} reaches the Frobenius bound exactly
        assert!(c.max_frobenius_excess.abs() < 1e-12);
    }

    #[test]
    fn tao_n5() {
        let c = tao_exhaustive(5).unwrap();
        assert!(c.pass() && c.premise_pairs > 0);
        assert!(tao_exhaustive(6).is_err());
        assert!(tao_sampled(13, 200, 1).unwrap().pass());
    }

    #[test]
    fn guards() {
        assert!(matches!(donoho_stark_exhaustive(13), Err(Error::Guard(_))));
    }

    #[test]
    fn sieve_small() {
        assert!(large_sieve_check(16, 4, 5, 0).unwrap().pass());
    }

    #[test]
    fn coords_small() {
        let f = Dft::<f64>::new(5).unwrap();
        let rows = rand_coords_check(&f, 0.4, &unit_grid()).unwrap();
        assert!(rows.iter().all(|r| r.ok));
        // the DFT has orthonormal rows, so one-sided norms are 0 or 1
        let b = 1.0 - 0.6f64.powi(5);
        assert!((rows[0].bernoulli_one_sided - b).abs() < 1e-12);
        assert_eq!(rows[0].fixed_one_sided, 1.0);
    }

    #[test]
    fn square_case_small() {
        let f = Dft::<f64>::new(6).unwrap();
        assert!(square_case_check(&f, 3, &unit_grid()).unwrap().iter().all(|r| r.monotone));
    }
}
