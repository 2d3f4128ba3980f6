//! Floating point scalar abstraction.
//!
//! Every numeric routine in the crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. The dense factorizations used as
//! reference oracles are delegated to nalgebra at the concrete types.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point type usable as the component type of complex entries.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(x: f64) -> Self;

    /// Converts to `f64` for reporting and statistics.
    fn to_f64_lossy(self) -> f64;

    /// Singular values of a row-major `rows x cols` complex matrix, sorted
    /// in descending order.
    fn dense_singular_values(rows: usize, cols: usize, data: &[Complex<Self>]) -> Vec<Self>;

    /// Eigenvalues of a Hermitian row-major `dim x dim` matrix, sorted in
    /// ascending order. Only the lower triangle is read.
    fn hermitian_eigenvalues(dim: usize, data: &[Complex<Self>]) -> Vec<Self>;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn to_f64_lossy(self) -> f64 {
                self as f64
            }

            fn dense_singular_values(
                rows: usize,
                cols: usize,
                data: &[Complex<Self>],
            ) -> Vec<Self> {
                if rows == 0 || cols == 0 {
                    return Vec::new();
                }
                let m = DMatrix::<Complex<$t>>::from_row_slice(rows, cols, data);
                let mut values: Vec<$t> = m.singular_values().iter().copied().collect();
                values.sort_by(|a, b| b.total_cmp(a));
                values
            }

            fn hermitian_eigenvalues(dim: usize, data: &[Complex<Self>]) -> Vec<Self> {
                if dim == 0 {
                    return Vec::new();
                }
                let m = DMatrix::<Complex<$t>>::from_row_slice(dim, dim, data);
                let mut values: Vec<$t> = m.symmetric_eigenvalues().iter().copied().collect();
                values.sort_by(|a, b| a.total_cmp(b));
                values
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_of_diagonal() {
        let data = [
            Complex::new(3.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, -4.0),
        ];
        let s = f64::dense_singular_values(2, 2, &data);
        assert!((s[0] - 4.0).abs() < 1e-14);
        assert!((s[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eigenvalues_sorted() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let data = [
            Complex::new(2.0f32, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(0.0, -1.0),
            Complex::new(2.0, 0.0),
        ];
        let e = f32::hermitian_eigenvalues(2, &data);
        assert!((e[0] - 1.0).abs() < 1e-5);
        assert!((e[1] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn empty_inputs() {
        assert!(f64::dense_singular_values(0, 3, &[]).is_empty());
        assert!(f64::hermitian_eigenvalues(0, &[]).is_empty());
    }
}
