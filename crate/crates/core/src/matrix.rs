//! Matrix model: the DFT and other bounded matrices, index sets, dense
//! submatrices, the spike/sine Gram matrix, the Dirac comb and `spread`.
//!
//! Indices are 1-based everywhere, so a set of rows `{1, ..., n}` names the
//! whole matrix.

use std::fmt;

use num_complex::Complex;

use crate::error::{ensure_domain, Error, Result};
use crate::scalar::Real;

/// An `n x n` complex matrix described entrywise, with declared bounds on its
/// spectral norm and on the modulus of its entries.
///
/// Implementations must be pure: the same `(row, col)` always yields the
/// same value.
pub trait BoundedMatrix<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    /// Entry at 1-based `(row, col)`. Callers guarantee `1 <= row, col <= dim`.
    fn entry(&self, row: usize, col: usize) -> Complex<T>;

    fn declared_norm_bound(&self) -> T {
        T::one()
    }

    fn declared_entry_bound(&self) -> T {
        T::one() / T::lit(self.dim() as f64).sqrt()
    }
}

/// Phase `2 pi k / n` reduced into `(-pi, pi]` before scaling, so large
/// products `omega * t` lose no accuracy.
fn unit_root<T: Real>(k: u64, n: u64) -> Complex<T> {
    let k = k % n;
    let signed = if 2 * k > n { k as f64 - n as f64 } else { k as f64 };
    let theta = T::TAU() * T::lit(signed) / T::lit(n as f64);
    Complex::new(theta.cos(), theta.sin())
}

/// Entry `n^{-1/2} exp(2 pi i omega t / n)` of the unitary DFT matrix.
pub fn dft_entry<T: Real>(n: usize, omega: usize, t: usize) -> Result<Complex<T>> {
    ensure_domain!(n >= 1, "dimension must be positive");
    ensure_domain!(
        (1..=n).contains(&omega) && (1..=n).contains(&t),
        "index ({omega}, {t}) outside 1..={n}"
    );
    let scale = T::one() / T::lit(n as f64).sqrt();
    Ok(unit_root::<T>(omega as u64 * t as u64, n as u64) * scale)
}

/// The unitary `n x n` DFT. Entries are read from a table of the `n` scaled
/// roots of unity, never from a materialized `n x n` array.
#[derive(Clone, Debug)]
pub struct Dft<T> {
    n: usize,
    roots: Vec<Complex<T>>,
}

impl<T: Real> Dft<T> {
    pub fn new(n: usize) -> Result<Self> {
        ensure_domain!(n >= 1, "dimension must be positive");
        let scale = T::one() / T::lit(n as f64).sqrt();
        let roots = (0..n as u64)
            .map(|k| unit_root::<T>(k, n as u64) * scale)
            .collect();
        Ok(Self { n, roots })
    }
}

impl<T: Real> BoundedMatrix<T> for Dft<T> {
    fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.roots[(row as u64 * col as u64 % self.n as u64) as usize]
    }
}

/// Normalized Sylvester-Hadamard matrix, a real unitary matrix whose entries
/// are `+-n^{-1/2}`. Exists for `n` a power of two.
#[derive(Clone, Debug)]
pub struct Hadamard<T> {
    n: usize,
    scale: T,
}

impl<T: Real> Hadamard<T> {
    pub fn new(n: usize) -> Result<Self> {
        ensure_domain!(n.is_power_of_two(), "Hadamard order {n} is not a power of two");
        Ok(Self { n, scale: T::one() / T::lit(n as f64).sqrt() })
    }
}

impl<T: Real> BoundedMatrix<T> for Hadamard<T> {
    fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn entry(&self, row: usize, col: usize) -> Complex<T> {
        let sign = if ((row - 1) & (col - 1)).count_ones().is_multiple_of(2) {
            self.scale
        } else {
            -self.scale
        };
        Complex::new(sign, T::zero())
    }
}

/// An explicitly stored `n x n` matrix with caller-declared bounds.
#[derive(Clone, Debug)]
pub struct ExplicitMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
    norm_bound: T,
    entry_bound: T,
}

impl<T: Real> ExplicitMatrix<T> {
    /// Checks that every entry respects `entry_bound` (up to rounding).
    pub fn new(n: usize, data: Vec<Complex<T>>, norm_bound: T, entry_bound: T) -> Result<Self> {
        ensure_domain!(n >= 1, "dimension must be positive");
        ensure_domain!(data.len() == n * n, "expected {} entries, got {}", n * n, data.len());
        let slack = entry_bound * (T::one() + T::lit(64.0) * T::epsilon());
        ensure_domain!(
            data.iter().all(|z| z.norm() <= slack),
            "entry modulus exceeds declared bound"
        );
        Ok(Self { n, data, norm_bound, entry_bound })
    }
}

impl<T: Real> BoundedMatrix<T> for ExplicitMatrix<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.data[(row - 1) * self.n + (col - 1)]
    }

    fn declared_norm_bound(&self) -> T {
        self.norm_bound
    }

    fn declared_entry_bound(&self) -> T {
        self.entry_bound
    }
}

/// A subset of `{1, ..., n}` stored as a strictly increasing list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n: usize,
    indices: Vec<usize>,
}

impl IndexSet {
    /// Builds a set from strictly increasing 1-based indices.
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&j| j == 0 || j > n) {
            return Err(Error::Domain(format!("index {bad} outside 1..={n}")));
        }
        ensure_domain!(
            indices.windows(2).all(|w| w[0] < w[1]),
            "indices must be strictly increasing"
        );
        Ok(Self { n, indices })
    }

    /// Sorts the indices first; duplicates are rejected.
    pub fn from_unsorted(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("duplicate index".into()));
        }
        Self::new(n, indices)
    }

    pub(crate) fn from_sorted_unchecked(n: usize, indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self { n, indices }
    }

    pub fn empty(n: usize) -> Self {
        Self { n, indices: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, indices: (1..=n).collect() }
    }

    /// The cyclic block `{offset + 1, ..., offset + len}`, indices taken mod `n`.
    pub fn block(n: usize, offset: usize, len: usize) -> Result<Self> {
        ensure_domain!(len <= n, "block of length {len} does not fit in {n}");
        let indices = (1..=len).map(|j| (offset + j - 1) % n + 1).collect();
        Self::from_unsorted(n, indices)
    }

    /// Parses comma-separated 1-based indices such as `"4,8,12,16"`. The empty
    /// string is the empty set.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty(n));
        }
        let indices = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid index {:?}", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_unsorted(n, indices)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.n == other.n && self.iter().all(|j| other.contains(j))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j) in self.indices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DenseComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        ensure_domain!(
            data.len() == rows * cols,
            "expected {} entries for a {rows}x{cols} matrix, got {}",
            rows * cols,
            data.len()
        );
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(m: usize) -> Self {
        let mut out = Self::zeros(m, m);
        for i in 0..m {
            out.data[i * m + i] = Complex::new(T::one(), T::zero());
        }
        out
    }

    /// Builds entry `(r, c)` (0-based) from `f(r, c)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * factor).collect() }
    }

    /// `y = M x`.
    pub fn mul_vec_into(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (r, out) in y.iter_mut().enumerate() {
            let row = self.row(r);
            let mut re = T::zero();
            let mut im = T::zero();
            for (a, b) in row.iter().zip(x) {
                re = re + a.re * b.re - a.im * b.im;
                im = im + a.re * b.im + a.im * b.re;
            }
            *out = Complex::new(re, im);
        }
    }

    /// `y = M^* x`.
    pub fn adjoint_mul_vec_into(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        y.iter_mut().for_each(|v| *v = Complex::new(T::zero(), T::zero()));
        for (r, w) in x.iter().enumerate() {
            for (out, a) in y.iter_mut().zip(self.row(r)) {
                // conj(a) * w
                out.re = out.re + a.re * w.re + a.im * w.im;
                out.im = out.im + a.re * w.im - a.im * w.re;
            }
        }
    }
}

fn check_ambient<T: Real, A: BoundedMatrix<T> + ?Sized>(a: &A, omega: &IndexSet, t: &IndexSet) -> Result<()> {
    ensure_domain!(
        omega.ambient() == a.dim() && t.ambient() == a.dim(),
        "index sets over {} and {} do not match matrix dimension {}",
        omega.ambient(),
        t.ambient(),
        a.dim()
    );
    Ok(())
}

/// Restriction of `a` to the rows in `omega` and the columns in `t`.
pub fn submatrix<T: Real, A: BoundedMatrix<T> + ?Sized>(
    a: &A,
    omega: &IndexSet,
    t: &IndexSet,
) -> Result<DenseComplexMatrix<T>> {
    check_ambient(a, omega, t)?;
    let cols = t.as_slice();
    let mut data = Vec::with_capacity(omega.len() * t.len());
    for row in omega.iter() {
        data.extend(cols.iter().map(|&col| a.entry(row, col)));
    }
    Ok(DenseComplexMatrix { rows: omega.len(), cols: t.len(), data })
}

/// Gram matrix of the spikes `{e_j : j in T}` and sines `{f_j : j in Omega}`:
/// the Hermitian block matrix `[[I, F_OT], [F_OT^*, I]]`.
#[derive(Clone, Debug)]
pub struct GramMatrix<T> {
    pub omega_size: usize,
    pub t_size: usize,
    pub off_diagonal: DenseComplexMatrix<T>,
}

impl<T: Real> GramMatrix<T> {
    pub fn dim(&self) -> usize {
        self.omega_size + self.t_size
    }

    pub fn to_dense(&self) -> DenseComplexMatrix<T> {
        let (p, dim) = (self.omega_size, self.dim());
        DenseComplexMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex::new(T::one(), T::zero())
            } else if r < p && c >= p {
                self.off_diagonal.get(r, c - p)
            } else if r >= p && c < p {
                self.off_diagonal.get(c, r - p).conj()
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        let dense = self.to_dense();
        T::hermitian_eigenvalues(dense.rows(), dense.data())
    }

    /// `(smallest, largest)` eigenvalue, or `None` when both sets are empty.
    pub fn extreme_eigenvalues(&self) -> Option<(T, T)> {
        let ev = self.eigenvalues();
        Some((*ev.first()?, *ev.last()?))
    }
}

pub fn gram_matrix<T: Real, A: BoundedMatrix<T> + ?Sized>(
    a: &A,
    omega: &IndexSet,
    t: &IndexSet,
) -> Result<GramMatrix<T>> {
    let off_diagonal = submatrix(a, omega, t)?;
    Ok(GramMatrix { omega_size: omega.len(), t_size: t.len(), off_diagonal })
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: usize) -> Option<usize> {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// The Dirac comb `T = Omega = {sqrt(n), 2 sqrt(n), ..., n}`.
pub fn dirac_comb(n: usize) -> Result<(IndexSet, IndexSet)> {
    let root = exact_sqrt(n)
        .filter(|_| n > 0)
        .ok_or_else(|| Error::Domain(format!("{n} is not a perfect square")))?;
    let comb = IndexSet::from_sorted_unchecked(n, (1..=root).map(|k| k * root).collect());
    Ok((comb.clone(), comb))
}

/// Smallest circular distance between two distinct members of `omega`.
pub fn spread(omega: &IndexSet) -> Result<usize> {
    ensure_domain!(omega.len() >= 2, "spread needs at least two indices, got {}", omega.len());
    let n = omega.ambient();
    let idx = omega.as_slice();
    // Both arcs between any pair consist of whole gaps between neighbours,
    // so the minimum over neighbouring gaps (including the wrap) suffices.
    let wrap = idx[0] + n - idx[idx.len() - 1];
    let best = idx
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(wrap))
        .map(|g| g.min(n - g))
        .min()
        .expect("at least two gaps");
    Ok(best)
}
