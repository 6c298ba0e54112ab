//! Floating-point scalar abstraction shared by every numeric type in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar used for similarities, pencil sums and linkage heights.
///
/// Implemented for `f32` and `f64`. All algorithms are written against this
/// trait; the `*64` aliases at the crate root fix it to `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literals and parsed text.
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).unwrap_or_else(Self::nan)
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).unwrap_or_else(Self::nan)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// A value carried as an unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
///
/// Pencil sums are large (order `p * h`) while cluster sums recovered from
/// them can be small, so each pencil keeps the rounding error of its own
/// accumulation in `lo`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Compensated<T> {
    pub hi: T,
    pub lo: T,
}

impl<T: Scalar> Compensated<T> {
    pub fn new(x: T) -> Self {
        Self {
            hi: x,
            lo: T::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero())
    }

    /// Error-free addition of a plain value.
    pub fn add_value(self, x: T) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = fast_two_sum(s, e + self.lo);
        Self { hi, lo }
    }

    pub fn add_compensated(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (hi, lo) = fast_two_sum(s, e + self.lo + other.lo);
        Self { hi, lo }
    }

    pub fn negated(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn value(self) -> T {
        self.hi + self.lo
    }
}

/// Knuth's branch-free two-sum: `a + b == s + e` exactly.
fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Dekker's two-sum, valid when `|a| >= |b|` or `a == 0`.
fn fast_two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    if a.abs() < b.abs() {
        return two_sum(a, b);
    }
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}
