//! Polynomials of degree at most two, `q₀ + q₁x + q₂x²`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic<T> {
    pub q0: T,
    pub q1: T,
    pub q2: T,
}

impl<T: Scalar> Quadratic<T> {
    pub fn new(q0: T, q1: T, q2: T) -> Self {
        Quadratic { q0, q1, q2 }
    }

    pub fn constant(c: T) -> Self {
        Quadratic::new(c, T::zero(), T::zero())
    }

    pub fn linear(c0: T, c1: T) -> Self {
        Quadratic::new(c0, c1, T::zero())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Quadratic::linear(T::zero(), T::one())
    }

    pub fn eval(&self, x: &T) -> T {
        self.q0.clone() + (self.q1.clone() + self.q2.clone() * x.clone()) * x.clone()
    }

    pub fn derivative_at(&self, x: &T) -> T {
        self.q1.clone() + T::from_i64(2) * self.q2.clone() * x.clone()
    }

    /// `∫_lo^hi q(x) dx`.
    pub fn integral(&self, lo: &T, hi: &T) -> T {
        let antiderivative = |x: &T| {
            let x2 = x.clone() * x.clone();
            let x3 = x2.clone() * x.clone();
            self.q0.clone() * x.clone() + self.q1.clone() * x2 / T::from_i64(2) + self.q2.clone() * x3 / T::from_i64(3)
        };
        antiderivative(hi) - antiderivative(lo)
    }

    pub fn scale(&self, k: &T) -> Self {
        Quadratic::new(
            self.q0.clone() * k.clone(),
            self.q1.clone() * k.clone(),
            self.q2.clone() * k.clone(),
        )
    }

    pub fn degree(&self) -> Option<usize> {
        if !self.q2.is_zero() {
            Some(2)
        } else if !self.q1.is_zero() {
            Some(1)
        } else if !self.q0.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Quadratic<U> {
        Quadratic {
            q0: f(&self.q0),
            q1: f(&self.q1),
            q2: f(&self.q2),
        }
    }
}

impl<T: Scalar> Add for Quadratic<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Quadratic::new(self.q0 + rhs.q0, self.q1 + rhs.q1, self.q2 + rhs.q2)
    }
}

impl<T: Scalar> Sub for Quadratic<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Quadratic::new(self.q0 - rhs.q0, self.q1 - rhs.q1, self.q2 - rhs.q2)
    }
}

impl<T: Scalar> Neg for Quadratic<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Quadratic::new(-self.q0, -self.q1, -self.q2)
    }
}

/// Panics if the product has degree above two.
impl<T: Scalar> Mul for Quadratic<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let deg = |q: &Self| q.degree().unwrap_or(0);
        assert!(deg(&self) + deg(&rhs) <= 2, "product exceeds degree two");
        Quadratic::new(
            self.q0.clone() * rhs.q0.clone(),
            self.q0.clone() * rhs.q1.clone() + self.q1.clone() * rhs.q0.clone(),
            self.q0 * rhs.q2 + self.q1 * rhs.q1 + self.q2 * rhs.q0,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn q(n: i64, d: i64) -> Rat {
        Rat::from_frac(n, d)
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let x = Quadratic::<Rat>::x();
        let p = (Quadratic::constant(q(3, 1)) - x.clone()) * (x.clone() + Quadratic::constant(q(1, 2)));
        // (3 − x)(x + 1/2) = 3/2 + (5/2)x − x²
        assert_eq!(p, Quadratic::new(q(3, 2), q(5, 2), q(-1, 1)));
        assert_eq!(p.eval(&q(3, 1)), q(0, 1));
        assert_eq!(p.derivative_at(&q(0, 1)), q(5, 2));
    }

    #[test]
    fn integral_is_exact() {
        let p = Quadratic::new(q(1, 1), q(-2, 1), q(3, 1));
        // x − x² + x³ on [1, 2] = 1 − 3 + 7
        assert_eq!(p.integral(&q(1, 1), &q(2, 1)), q(5, 1));
        assert_eq!(p.integral(&q(2, 1), &q(2, 1)), q(0, 1));
    }

    #[test]
    #[should_panic(expected = "degree two")]
    fn cubic_product_panics() {
        let x = Quadratic::<Rat>::x();
        let _ = (x.clone() * x.clone()) * x;
    }
}
