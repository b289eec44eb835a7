//! Scalar abstraction shared by every computation in the crate.
//!
//! All algorithms are written against [`Scalar`], which asks only for
//! ordered-field operations. The exact instantiation is [`crate::Rat`]
//! (arbitrary precision rationals); `f64`/`f32` are available for quick
//! approximate evaluation, and [`Perturbed`] lets the Zariski machinery
//! reason about `x + ε` for an infinitesimal `ε`.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Square root if the scalar type contains one. Exact types return
    /// `None` for non-squares.
    fn exact_sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Whether comparisons in this type are exact.
    fn is_exact() -> bool;

    fn sign(&self) -> Ordering {
        self.partial_cmp(&Self::zero()).unwrap_or(Ordering::Equal)
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    /// Human-readable form used in diagnostics.
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn exact_sqrt(&self) -> Option<Self> {
        if *self < BigRational::zero() {
            return None;
        }
        // Ratio keeps itself reduced with a positive denominator.
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        if &(&num * &num) == self.numer() && &(&den * &den) == self.denom() {
            Some(Ratio::new(num, den))
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }

    fn render(&self) -> String {
        format_rational(self)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn exact_sqrt(&self) -> Option<Self> {
                if *self < 0.0 {
                    None
                } else {
                    Some(self.sqrt())
                }
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_exact() -> bool {
                false
            }

            fn render(&self) -> String {
                self.to_string()
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// A value `value + slope·ε` with `ε` a positive infinitesimal, ordered
/// lexicographically.
///
/// Products are truncated at first order, so the arithmetic is exact only
/// when at most one factor of each product carries a nonzero slope, and
/// divisors must have a nonzero value part. Linear solves against a
/// constant matrix satisfy both conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbed<T> {
    pub value: T,
    pub slope: T,
}

impl<T: Scalar> Perturbed<T> {
    pub fn new(value: T, slope: T) -> Self {
        Perturbed { value, slope }
    }

    pub fn constant(value: T) -> Self {
        Perturbed {
            value,
            slope: T::zero(),
        }
    }
}

impl<T: Scalar> PartialOrd for Perturbed<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.value.partial_cmp(&other.value)? {
            Ordering::Equal => self.slope.partial_cmp(&other.slope),
            ord => Some(ord),
        }
    }
}

impl<T: Scalar> Add for Perturbed<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Perturbed::new(self.value + rhs.value, self.slope + rhs.slope)
    }
}

impl<T: Scalar> Sub for Perturbed<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Perturbed::new(self.value - rhs.value, self.slope - rhs.slope)
    }
}

impl<T: Scalar> Mul for Perturbed<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let slope = self.value.clone() * rhs.slope + self.slope * rhs.value.clone();
        Perturbed::new(self.value * rhs.value, slope)
    }
}

impl<T: Scalar> Div for Perturbed<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(
            !rhs.value.is_zero(),
            "division by an infinitesimal in Perturbed arithmetic"
        );
        let value = self.value.clone() / rhs.value.clone();
        let slope = (self.slope * rhs.value.clone() - self.value * rhs.slope) / (rhs.value.clone() * rhs.value);
        Perturbed::new(value, slope)
    }
}

impl<T: Scalar> Neg for Perturbed<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Perturbed::new(-self.value, -self.slope)
    }
}

impl<T: Scalar> Zero for Perturbed<T> {
    fn zero() -> Self {
        Perturbed::new(T::zero(), T::zero())
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.slope.is_zero()
    }
}

impl<T: Scalar> One for Perturbed<T> {
    fn one() -> Self {
        Perturbed::constant(T::one())
    }
}

impl<T: Scalar> Scalar for Perturbed<T> {
    fn from_i64(v: i64) -> Self {
        Perturbed::constant(T::from_i64(v))
    }

    fn exact_sqrt(&self) -> Option<Self> {
        None
    }

    fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    fn is_exact() -> bool {
        T::is_exact()
    }
}

/// `p/q` rendering with an explicit denominator, so integers print as `k/1`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
