//! Scalar abstraction shared by every real-valued computation in the crate.
//!
//! Integer data (discriminants, norms, prime counts) stays exact; everything
//! that is a real number (sums, residuals, bounds, residues) is generic over
//! [`Real`], implemented for `f32` and `f64`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Euler–Mascheroni constant to 30 significant digits
/// (OEIS A001620: 0.577215664901532860606512090082402431...).
pub const EULER_GAMMA_DIGITS: &str = "0.577215664901532860606512090082";

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance for the two-route residue agreement check.
    const CROSS_CHECK_TOL: f64;

    fn euler_gamma() -> Self;

    /// Converts an `f64` literal. Every `Real` can represent (a rounding of)
    /// any finite `f64`, so this never fails for finite input.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn from_u64_lossy(n: u64) -> Self {
        Self::from_u64(n).expect("u64 is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const CROSS_CHECK_TOL: f64 = 1e-10;

    fn euler_gamma() -> Self {
        0.577_215_664_901_532_9
    }
}

impl Real for f32 {
    const CROSS_CHECK_TOL: f64 = 1e-4;

    fn euler_gamma() -> Self {
        0.577_215_7
    }
}

/// Neumaier's variant of Kahan summation. Merging two partial sums carries
/// both compensation terms, so per-range partials combine without losing the
/// low-order bits.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}
