//! Spectral and Frobenius norms and the Gram condition number.
//!
//! Small matrices go through a dense SVD; large ones through power iteration
//! on `M^* M`. The dense path doubles as the reference oracle for the
//! iterative one.

use serde::Serialize;

use crate::error::{ensure_domain, Result};
use crate::matrix::DenseComplexMatrix;
use crate::scalar::Real;

/// Default absolute tolerance for [`spectral_norm`].
pub const DEFAULT_TOL: f64 = 1e-10;

/// Matrices whose smaller side is at most this use the dense SVD.
pub const DENSE_SVD_MAX_DIM: usize = 128;

/// Power iteration gives up after this many steps and reports its last iterate.
pub const MAX_POWER_ITERATIONS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    PowerIteration,
    DenseSvd,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormResult<T> {
    pub value: T,
    pub method: NormMethod,
    pub iterations: usize,
    /// Last change `|sigma_k - sigma_{k-1}|` for power iteration, zero for
    /// the dense path.
    pub residual: T,
}

impl<T: Real> NormResult<T> {
    pub fn converged(&self, tol: T) -> bool {
        self.residual <= tol
    }
}

/// Largest singular value of `m` to absolute accuracy `tol`.
///
/// An empty matrix has norm zero.
pub fn spectral_norm<T: Real>(m: &DenseComplexMatrix<T>, tol: T) -> Result<NormResult<T>> {
    ensure_domain!(tol > T::zero(), "tolerance must be positive");
    if m.is_empty() {
        return Ok(NormResult {
            value: T::zero(),
            method: NormMethod::DenseSvd,
            iterations: 0,
            residual: T::zero(),
        });
    }
    if m.rows().min(m.cols()) <= DENSE_SVD_MAX_DIM {
        Ok(dense_svd_norm(m))
    } else {
        power_iteration(m, tol, MAX_POWER_ITERATIONS)
    }
}

/// Spectral norm via a full dense SVD.
pub fn dense_svd_norm<T: Real>(m: &DenseComplexMatrix<T>) -> NormResult<T> {
    let value = if m.is_empty() {
        T::zero()
    } else {
        T::dense_singular_values(m.rows(), m.cols(), m.data())[0]
    };
    NormResult { value, method: NormMethod::DenseSvd, iterations: 0, residual: T::zero() }
}

/// Independent accumulators per dot product; lets the reduction vectorize
/// while keeping a fixed summation order.
const LANES: usize = 8;

/// `M` split into real and imaginary row-major planes.
struct SplitMatrix<T> {
    rows: usize,
    cols: usize,
    re: Vec<T>,
    im: Vec<T>,
}

/// A complex vector split into real and imaginary parts.
struct SplitVec<T> {
    re: Vec<T>,
    im: Vec<T>,
}

impl<T: Real> SplitVec<T> {
    fn zeros(len: usize) -> Self {
        Self { re: vec![T::zero(); len], im: vec![T::zero(); len] }
    }

    fn norm_sqr(&self) -> T {
        lane_sum(&self.re, &self.re) + lane_sum(&self.im, &self.im)
    }

    fn normalize(&mut self) -> T {
        let norm = self.norm_sqr().sqrt();
        if norm > T::zero() {
            self.re.iter_mut().chain(self.im.iter_mut()).for_each(|x| *x = *x / norm);
        }
        norm
    }

    fn fill(&mut self, value: T) {
        self.re.iter_mut().for_each(|x| *x = value);
        self.im.iter_mut().for_each(|x| *x = T::zero());
    }
}

/// `sum a_i b_i` over `LANES` interleaved partial sums.
#[inline(always)]
fn lane_sum<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = [T::zero(); LANES];
    let (ac, bc) = (a.chunks_exact(LANES), b.chunks_exact(LANES));
    let (ar, br) = (ac.remainder(), bc.remainder());
    for (x, y) in ac.zip(bc) {
        for l in 0..LANES {
            acc[l] = acc[l] + x[l] * y[l];
        }
    }
    for (l, (x, y)) in ar.iter().zip(br).enumerate() {
        acc[l] = acc[l] + *x * *y;
    }
    acc.iter().fold(T::zero(), |s, &x| s + x)
}

impl<T: Real> SplitMatrix<T> {
    fn new(m: &DenseComplexMatrix<T>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.data().iter().map(|z| z.re).collect(),
            im: m.data().iter().map(|z| z.im).collect(),
        }
    }

    /// `w = M v`.
    fn mul(&self, v: &SplitVec<T>, w: &mut SplitVec<T>) {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { self.mul_avx2(v, w) };
        }
        self.mul_portable(v, w)
    }

    /// `z = M^* w`.
    fn adjoint_mul(&self, w: &SplitVec<T>, z: &mut SplitVec<T>) {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { self.adjoint_mul_avx2(w, z) };
        }
        self.adjoint_mul_portable(w, z)
    }

    // Wider registers only; without FMA contraction the rounding is the
    // same as on the portable path.
    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn mul_avx2(&self, v: &SplitVec<T>, w: &mut SplitVec<T>) {
        self.mul_portable(v, w)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn adjoint_mul_avx2(&self, w: &SplitVec<T>, z: &mut SplitVec<T>) {
        self.adjoint_mul_portable(w, z)
    }

    #[inline(always)]
    fn mul_portable(&self, v: &SplitVec<T>, w: &mut SplitVec<T>) {
        for r in 0..self.rows {
            let span = r * self.cols..(r + 1) * self.cols;
            let (ar, ai) = (&self.re[span.clone()], &self.im[span]);
            w.re[r] = lane_sum(ar, &v.re) - lane_sum(ai, &v.im);
            w.im[r] = lane_sum(ar, &v.im) + lane_sum(ai, &v.re);
        }
    }

    #[inline(always)]
    fn adjoint_mul_portable(&self, w: &SplitVec<T>, z: &mut SplitVec<T>) {
        z.fill(T::zero());
        for r in 0..self.rows {
            let span = r * self.cols..(r + 1) * self.cols;
            let (ar, ai) = (&self.re[span.clone()], &self.im[span]);
            let (wr, wi) = (w.re[r], w.im[r]);
            for (((zr, zi), &a), &b) in z.re.iter_mut().zip(z.im.iter_mut()).zip(ar).zip(ai) {
                // conj(a + ib) (wr + i wi)
                *zr = *zr + a * wr + b * wi;
                *zi = *zi + a * wi - b * wr;
            }
        }
    }
}

/// Power iteration on the Hermitian product `M^* M`, reporting the square
/// root of the Rayleigh quotient.
///
/// The start vector is the normalized all-ones vector. If `M` annihilates
/// it, the first canonical basis vector is tried, and if that is also
/// annihilated the basis vector of the largest column. Stops when successive
/// estimates differ by at most `tol`, or after `max_iter` steps.
pub fn power_iteration<T: Real>(
    m: &DenseComplexMatrix<T>,
    tol: T,
    max_iter: usize,
) -> Result<NormResult<T>> {
    ensure_domain!(tol > T::zero(), "tolerance must be positive");
    let result = |value, iterations, residual| NormResult {
        value,
        method: NormMethod::PowerIteration,
        iterations,
        residual,
    };
    if m.is_empty() {
        return Ok(result(T::zero(), 0, T::zero()));
    }
    let split = SplitMatrix::new(m);
    let mut v = SplitVec::zeros(split.cols);
    v.fill(T::one());
    v.normalize();
    let mut w = SplitVec::zeros(split.rows);
    let mut z = SplitVec::zeros(split.cols);

    // Rayleigh quotient of M^*M at unit v is |Mv|^2.
    let mut apply = |v: &SplitVec<T>, z: &mut SplitVec<T>| -> T {
        split.mul(v, &mut w);
        split.adjoint_mul(&w, z);
        w.norm_sqr()
    };

    let mut rayleigh = apply(&v, &mut z);
    if rayleigh == T::zero() {
        let fallbacks = [0, largest_column(m)];
        for &col in &fallbacks {
            v.fill(T::zero());
            v.re[col] = T::one();
            rayleigh = apply(&v, &mut z);
            if rayleigh > T::zero() {
                break;
            }
        }
        if rayleigh == T::zero() {
            // Only the zero matrix annihilates its largest column.
            return Ok(result(T::zero(), 1, T::zero()));
        }
    }

    let mut sigma = rayleigh.sqrt();
    let mut residual = T::infinity();
    let mut iterations = 1;
    while iterations < max_iter {
        std::mem::swap(&mut v, &mut z);
        if v.normalize() == T::zero() {
            break;
        }
        rayleigh = apply(&v, &mut z);
        iterations += 1;
        let next = rayleigh.sqrt();
        residual = (next - sigma).abs();
        sigma = next;
        if residual <= tol {
            break;
        }
    }
    Ok(result(sigma, iterations, residual))
}

fn largest_column<T: Real>(m: &DenseComplexMatrix<T>) -> usize {
    let mut sums = vec![T::zero(); m.cols()];
    for r in 0..m.rows() {
        for (s, z) in sums.iter_mut().zip(m.row(r)) {
            *s = *s + z.norm_sqr();
        }
    }
    sums.iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |best, (i, &s)| if s > best.1 { (i, s) } else { best })
        .0
}

/// Square root of the sum of squared entry moduli.
pub fn frobenius_norm<T: Real>(m: &DenseComplexMatrix<T>) -> T {
    m.data().iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Rounding slack accepted above 1 for a measured norm of a submatrix of a
/// unitary matrix.
const UNIT_SLACK: f64 = 1e-9;

/// Condition number `(1 + sigma) / (1 - sigma)` of the spike/sine Gram
/// matrix whose off-diagonal block has norm `sigma`. Infinite (singular
/// Gram matrix) once `sigma >= 1 - 1e-12`.
pub fn condition_number<T: Real>(sigma: T) -> Result<T> {
    ensure_domain!(
        sigma >= T::zero() && sigma <= T::one() + T::lit(UNIT_SLACK),
        "norm {sigma} outside [0, 1]"
    );
    if sigma >= T::one() - T::lit(1e-12) {
        return Ok(T::infinity());
    }
    Ok((T::one() + sigma) / (T::one() - sigma))
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn hermitian_extremes<T: Real>(h: &DenseComplexMatrix<T>) -> Option<(T, T)> {
    if h.rows() != h.cols() {
        return None;
    }
    let ev = T::hermitian_eigenvalues(h.rows(), h.data());
    Some((*ev.first()?, *ev.last()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use crate::matrix::{dirac_comb, submatrix, Dft, IndexSet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseComplexMatrix<f64> {
        DenseComplexMatrix::from_fn(rows, cols, |_, _| {
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn identity_has_norm_one() {
        let r = spectral_norm(&DenseComplexMatrix::<f64>::identity(3), 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert_eq!(r.method, NormMethod::DenseSvd);
        let p = power_iteration(&DenseComplexMatrix::<f64>::identity(3), 1e-12, 100).unwrap();
        assert!((p.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dirac_comb_norm_is_one() {
        let f = Dft::<f64>::new(16).unwrap();
        let (t, w) = dirac_comb(16).unwrap();
        let m = submatrix(&f, &w, &t).unwrap();
        assert!((spectral_norm(&m, 1e-10).unwrap().value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn random_20x30_matches_dense_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(&mut rng, 20, 30);
        let p = power_iteration(&m, 1e-12, MAX_POWER_ITERATIONS).unwrap();
        let d = dense_svd_norm(&m);
        assert!((p.value - d.value).abs() < 1e-10, "{} vs {}", p.value, d.value);
        assert!(p.converged(1e-12));
    }

    #[test]
    fn large_matrix_takes_power_iteration_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 140, 130);
        let r = spectral_norm(&m, 1e-10).unwrap();
        assert_eq!(r.method, NormMethod::PowerIteration);
        assert!((r.value - dense_svd_norm(&m).value).abs() < 1e-8);
    }

    #[test]
    fn empty_matrix_norm_zero_without_iterations() {
        let m = DenseComplexMatrix::<f64>::zeros(0, 5);
        let r = spectral_norm(&m, 1e-10).unwrap();
        assert_eq!((r.value, r.iterations), (0.0, 0));
        assert_eq!(power_iteration(&m, 1e-10, 10).unwrap().iterations, 0);
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        let m = DenseComplexMatrix::<f64>::identity(2);
        assert!(spectral_norm(&m, 0.0).is_err());
    }

    #[test]
    fn fallback_start_vectors() {
        // Columns: (1, -1, 0) annihilates the all-ones vector; e_1 is
        // annihilated as well because the first column is zero.
        let z = Complex::new(0.0, 0.0);
        let data = vec![z, Complex::new(2.0, 0.0), Complex::new(-2.0, 0.0)];
        let m = DenseComplexMatrix::new(1, 3, data).unwrap();
        let r = power_iteration(&m, 1e-12, 1000).unwrap();
        assert!((r.value - 8f64.sqrt()).abs() < 1e-10, "{}", r.value);

        let zero = DenseComplexMatrix::<f64>::zeros(3, 3);
        assert_eq!(power_iteration(&zero, 1e-12, 1000).unwrap().value, 0.0);
    }

    #[test]
    fn iteration_cap_reports_last_iterate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(&mut rng, 30, 30);
        let r = power_iteration(&m, 1e-300, 3).unwrap();
        assert_eq!(r.iterations, 3);
        assert!(r.residual > 0.0);
        assert!(r.value <= dense_svd_norm(&m).value + 1e-12);
    }

    #[test]
    fn frobenius_examples() {
        let f = Dft::<f64>::new(16).unwrap();
        let m = submatrix(&f, &IndexSet::new(16, vec![1, 2]).unwrap(), &IndexSet::new(16, vec![3, 4, 5]).unwrap())
            .unwrap();
        assert!((frobenius_norm(&m) - (6.0f64 / 16.0).sqrt()).abs() < 1e-14);
        assert_eq!(frobenius_norm(&DenseComplexMatrix::<f64>::zeros(0, 0)), 0.0);
        assert!((frobenius_norm(&DenseComplexMatrix::<f64>::identity(7)) - 7f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn condition_number_examples() {
        assert_eq!(condition_number(0.0f64).unwrap(), 1.0);
        assert!((condition_number(0.5f64).unwrap() - 3.0).abs() < 1e-15);
        assert!(condition_number(1.0f64).unwrap().is_infinite());
        assert!(condition_number(1.0f64 - 1e-13).unwrap().is_infinite());
        assert!(condition_number(-0.1f64).is_err());
        assert!(condition_number(1.5f64).is_err());
    }

    #[test]
    fn spectral_norm_is_dominated_by_frobenius() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (r, c) = (rng.random_range(1..20), rng.random_range(1..20));
            let m = random_matrix(&mut rng, r, c);
            assert!(spectral_norm(&m, 1e-10).unwrap().value <= frobenius_norm(&m) + 1e-12);
        }
    }

    #[test]
    fn f32_power_iteration() {
        let f = Dft::<f32>::new(8).unwrap();
        let m = submatrix(&f, &IndexSet::new(8, vec![1, 3, 5]).unwrap(), &IndexSet::new(8, vec![2, 4]).unwrap())
            .unwrap();
        let p = power_iteration(&m, 1e-6, 10_000).unwrap();
        let d = dense_svd_norm(&m);
        assert!((p.value - d.value).abs() < 1e-4);
    }
}
