//! Random coordinate models and exact enumeration oracles.
//!
//! Two models select a random subset of `{1, ..., n}`:
//!
//! * [`SetModel::FixedCardinality`]: uniform over all sets with exactly `m`
//!   elements (the projector `P_delta` with `m = floor(delta n)`).
//! * [`SetModel::Bernoulli`]: every index independently with probability
//!   `delta` (the projector `R_delta`).
//!
//! Draws come from ChaCha8 streams keyed by `(master_seed, stream_index)`,
//! so trial `i` never depends on how many draws trial `i - 1` consumed.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure_domain, Error, Result};
use crate::linalg::dense_svd_norm;
use crate::matrix::{submatrix, BoundedMatrix, IndexSet};
use crate::scalar::Real;
use crate::stats::CompensatedSum;

/// Largest `n` for one-sided exact enumeration.
pub const MAX_ENUM_ONE_SIDED: usize = 16;
/// Largest `n` for two-sided exact enumeration.
pub const MAX_ENUM_TWO_SIDED: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetModel {
    FixedCardinality { n: usize, m: usize },
    Bernoulli { n: usize, delta: f64 },
}

impl SetModel {
    pub fn fixed(n: usize, m: usize) -> Result<Self> {
        ensure_domain!(m <= n, "cardinality {m} exceeds dimension {n}");
        Ok(SetModel::FixedCardinality { n, m })
    }

    /// Fixed-cardinality model with `m = floor(delta n)`.
    pub fn fixed_from_delta(n: usize, delta: f64) -> Result<Self> {
        ensure_domain!((0.0..=1.0).contains(&delta), "delta {delta} outside [0, 1]");
        Self::fixed(n, floor_fraction(delta, n))
    }

    pub fn bernoulli(n: usize, delta: f64) -> Result<Self> {
        ensure_domain!((0.0..=1.0).contains(&delta), "delta {delta} outside [0, 1]");
        Ok(SetModel::Bernoulli { n, delta })
    }

    pub fn n(&self) -> usize {
        match *self {
            SetModel::FixedCardinality { n, .. } | SetModel::Bernoulli { n, .. } => n,
        }
    }

    /// `m / n` for the fixed model, `delta` for the Bernoulli model.
    pub fn delta(&self) -> f64 {
        match *self {
            SetModel::FixedCardinality { n, m } => m as f64 / n as f64,
            SetModel::Bernoulli { delta, .. } => delta,
        }
    }

    /// Exact probability of drawing the particular set `s`.
    pub fn probability_of(&self, s: &IndexSet) -> f64 {
        match *self {
            SetModel::FixedCardinality { n, m } => {
                if s.len() == m {
                    1.0 / binomial(n, m)
                } else {
                    0.0
                }
            }
            SetModel::Bernoulli { n, delta } => {
                delta.powi(s.len() as i32) * (1.0 - delta).powi((n - s.len()) as i32)
            }
        }
    }
}

/// `floor(delta n)`, tolerant of representation error such as `0.29 * 100`.
pub fn floor_fraction(delta: f64, n: usize) -> usize {
    let x = delta * n as f64;
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * x.abs().max(1.0) {
        nearest as usize
    } else {
        x.floor() as usize
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self { master_seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Which projector of a trial a stream feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Rows = 0,
    Cols = 1,
}

/// Stream index for `(point, trial, side)`; distinct triples never collide
/// while `trial < 2^39` and `point < 2^24`.
pub fn stream_index(point: u64, trial: u64, side: Side) -> u64 {
    debug_assert!(trial < 1 << 39 && point < 1 << 24);
    (point << 40) | (trial << 1) | side as u64
}

/// Draws a set from `model`; the result depends only on `(model, seed)`.
pub fn sample_set(model: &SetModel, seed: SeedSpec) -> IndexSet {
    let mut rng = seed.rng();
    match *model {
        SetModel::FixedCardinality { n, m } => sample_fixed(n, m, &mut rng),
        SetModel::Bernoulli { n, delta } => sample_bernoulli(n, delta, &mut rng),
    }
}

/// Partial Fisher-Yates over `[1, n]`, sorted afterwards. For `m` much
/// smaller than `n` the permutation is kept sparse; both representations
/// perform the same swaps and therefore return the same set.
fn sample_fixed<R: Rng>(n: usize, m: usize, rng: &mut R) -> IndexSet {
    let mut picked = Vec::with_capacity(m);
    if m.saturating_mul(8) < n {
        let mut moved: HashMap<usize, usize> = HashMap::with_capacity(2 * m);
        for i in 0..m {
            let j = rng.random_range(i..n);
            let at_j = *moved.get(&j).unwrap_or(&j);
            let at_i = *moved.get(&i).unwrap_or(&i);
            moved.insert(j, at_i);
            picked.push(at_j + 1);
        }
    } else {
        let mut perm: Vec<usize> = (1..=n).collect();
        for i in 0..m {
            let j = rng.random_range(i..n);
            perm.swap(i, j);
        }
        picked.extend_from_slice(&perm[..m]);
    }
    picked.sort_unstable();
    IndexSet::from_sorted_unchecked(n, picked)
}

/// Independent inclusion with probability `delta`, by skipping geometric gaps.
fn sample_bernoulli<R: Rng>(n: usize, delta: f64, rng: &mut R) -> IndexSet {
    if delta <= 0.0 {
        return IndexSet::empty(n);
    }
    if delta >= 1.0 {
        return IndexSet::full(n);
    }
    let gaps = Geometric::new(delta).expect("delta in (0, 1)");
    let mut picked = Vec::new();
    let mut next = 0u64; // 0-based candidate
    loop {
        next = next.saturating_add(gaps.sample(rng));
        if next >= n as u64 {
            break;
        }
        picked.push(next as usize + 1);
        next += 1;
    }
    IndexSet::from_sorted_unchecked(n, picked)
}

/// All subsets of `{1, ..., n}` (or those of one cardinality), ordered by
/// cardinality and lexicographically within a cardinality.
pub fn enumerate_sets(n: usize, cardinality: Option<usize>) -> Result<Vec<IndexSet>> {
    if n > MAX_ENUM_ONE_SIDED {
        return Err(Error::Guard(format!("enumeration needs n <= {MAX_ENUM_ONE_SIDED}, got {n}")));
    }
    let sizes: Vec<usize> = match cardinality {
        Some(k) if k > n => return Ok(Vec::new()),
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let mut out = Vec::new();
    for k in sizes {
        let mut comb: Vec<usize> = (1..=k).collect();
        loop {
            out.push(IndexSet::from_sorted_unchecked(n, comb.clone()));
            // advance to the next k-combination in lexicographic order
            let Some(i) = (0..k).rev().find(|&i| comb[i] < n - k + i + 1) else {
                break;
            };
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    Ok(out)
}

/// Every outcome of `model` with its exact probability, in enumeration order.
pub fn outcomes(model: &SetModel) -> Result<Vec<(IndexSet, f64)>> {
    let card = match *model {
        SetModel::FixedCardinality { m, .. } => Some(m),
        SetModel::Bernoulli { .. } => None,
    };
    Ok(enumerate_sets(model.n(), card)?
        .into_iter()
        .map(|s| {
            let p = model.probability_of(&s);
            (s, p)
        })
        .collect())
}

/// Exact law of the norm of a randomly projected matrix: a list of
/// `(norm, probability)` atoms in enumeration order.
///
/// One-sided projection keeps all columns (`P A`); two-sided applies an
/// independent copy of `model` to the columns as well (`P A P'`).
pub fn exact_norm_distribution<T: Real, A: BoundedMatrix<T> + ?Sized>(
    a: &A,
    model: &SetModel,
    two_sided: bool,
) -> Result<Vec<(f64, f64)>> {
    let n = model.n();
    ensure_domain!(n == a.dim(), "model dimension {n} does not match matrix dimension {}", a.dim());
    let limit = if two_sided { MAX_ENUM_TWO_SIDED } else { MAX_ENUM_ONE_SIDED };
    if n > limit {
        return Err(Error::Guard(format!(
            "exact {} enumeration needs n <= {limit}, got {n}",
            if two_sided { "two-sided" } else { "one-sided" }
        )));
    }
    let rows = outcomes(model)?;
    let cols = if two_sided { outcomes(model)? } else { vec![(IndexSet::full(n), 1.0)] };
    let atoms: Vec<Vec<(f64, f64)>> = rows
        .par_iter()
        .map(|(r, pr)| {
            cols.iter()
                .map(|(c, pc)| {
                    let m = submatrix(a, r, c).expect("ambient checked");
                    (dense_svd_norm(&m).value.to_f64_lossy(), pr * pc)
                })
                .collect()
        })
        .collect();
    Ok(atoms.into_iter().flatten().collect())
}

/// `P(norm >= u)` from an exact distribution.
pub fn tail_from_distribution(dist: &[(f64, f64)], u: f64) -> f64 {
    let mut acc = CompensatedSum::default();
    for &(norm, p) in dist {
        if norm >= u {
            acc.add(p);
        }
    }
    acc.total().min(1.0)
}

/// Exact `P(||projected A|| >= u)` by enumerating every outcome.
pub fn exact_tail_probability<T: Real, A: BoundedMatrix<T> + ?Sized>(
    a: &A,
    model: &SetModel,
    two_sided: bool,
    u: f64,
) -> Result<f64> {
    Ok(tail_from_distribution(&exact_norm_distribution(a, model, two_sided)?, u))
}
