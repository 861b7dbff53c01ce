//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::{DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt;

/// Floating point scalar the geometry is generic over (`f32` or `f64`).
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + fmt::Display + fmt::Debug + Send + Sync + 'static
{
    /// Machine epsilon of the type.
    fn eps() -> Self;
}

impl Real for f32 {
    fn eps() -> Self {
        f32::EPSILON
    }
}

impl Real for f64 {
    fn eps() -> Self {
        f64::EPSILON
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    <T as FromPrimitive>::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    <T as FromPrimitive>::from_usize(n).expect("integer representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `n!` as a scalar.
pub fn factorial<T: Real>(n: usize) -> T {
    (2..=n).fold(T::one(), |acc, k| acc * from_usize::<T>(k))
}

/// Neumaier-compensated accumulator for a vector-valued series.
#[derive(Clone, Debug)]
pub struct CompensatedVec<T: Real> {
    sum: DVector<T>,
    comp: DVector<T>,
}

impl<T: Real> CompensatedVec<T> {
    pub fn zeros(len: usize) -> Self {
        Self {
            sum: DVector::zeros(len),
            comp: DVector::zeros(len),
        }
    }

    pub fn add(&mut self, term: &DVector<T>) {
        for ((s, c), &t) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(term.iter()) {
            neumaier_step(s, c, t);
        }
    }

    /// Adds `scale * term` without allocating.
    pub fn add_scaled(&mut self, term: &DVector<T>, scale: T) {
        for ((s, c), &t) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(term.iter()) {
            neumaier_step(s, c, t * scale);
        }
    }

    pub fn value(&self) -> DVector<T> {
        &self.sum + &self.comp
    }
}

/// Same as [`CompensatedVec`] for matrices.
#[derive(Clone, Debug)]
pub struct CompensatedMat<T: Real> {
    sum: DMatrix<T>,
    comp: DMatrix<T>,
}

impl<T: Real> CompensatedMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            sum: DMatrix::zeros(rows, cols),
            comp: DMatrix::zeros(rows, cols),
        }
    }

    pub fn add(&mut self, term: &DMatrix<T>) {
        for ((s, c), &t) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(term.iter()) {
            neumaier_step(s, c, t);
        }
    }

    /// Adds `scale * term` without allocating.
    pub fn add_scaled(&mut self, term: &DMatrix<T>, scale: T) {
        for ((s, c), &t) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(term.iter()) {
            neumaier_step(s, c, t * scale);
        }
    }

    pub fn value(&self) -> DMatrix<T> {
        &self.sum + &self.comp
    }
}

#[inline]
fn neumaier_step<T: Real>(sum: &mut T, comp: &mut T, term: T) {
    let t = *sum + term;
    if sum.abs() >= term.abs() {
        *comp += (*sum - t) + term;
    } else {
        *comp += (term - t) + *sum;
    }
    *sum = t;
}

/// Pairwise summation; the result only depends on the order of `values`.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Largest absolute entry of a matrix, or zero for an empty one.
pub fn max_abs<T: Real>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}

/// True when every entry is finite.
pub fn all_finite<T: Real>(values: &[T]) -> bool {
    values.iter().all(|v| v.is_finite())
}
