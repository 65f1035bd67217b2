//! Exact arithmetic: rationals, dense univariate polynomials, rational
//! functions over Q, number fields with dynamic evaluation, and Gaussian
//! elimination over any of these.
//!
//! Nothing in here ever touches floating point.

mod linalg;
mod numfield;
mod poly;
mod qpoly;
mod ratfun;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use linalg::{det, linsolve, nullspace, rref, Matrix, Rref};
pub use numfield::{NfElem, NumberField};
pub use poly::Poly;
pub use qpoly::{ext_gcd, poly_gcd, rational_roots, squarefree_decomposition, squarefree_part, QPoly};
pub use ratfun::RatFun;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Smallest integer `>= q`.
pub fn ceil_int(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Representative of `q + Z` in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Converts a rational known to be a (small) integer.
pub fn to_i64(q: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Field arithmetic shared by Q, Q(x) and Q[t]/<p>.
///
/// Elements of a quotient ring may carry their modulus, so constants are
/// produced from an existing element (`zero_like`, `one_like`).
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn is_exact_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &Rational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Inverse, or a [`crate::SplitEvent`] when `self` is a zero divisor.
    fn inverse(&self) -> Result<Self>;

    /// Zero test that is uniform over all components of a product of fields:
    /// `Ok(true)` when zero everywhere, `Ok(false)` when a unit, and a split
    /// otherwise.
    fn decide_zero(&self) -> Result<bool> {
        Ok(self.is_exact_zero())
    }

    fn is_exact_one(&self) -> bool {
        *self == self.one_like()
    }

    fn divide(&self, other: &Self) -> Result<Self> {
        Ok(self.times(&other.inverse()?))
    }
}

impl Field for Rational {
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn is_exact_one(&self) -> bool {
        One::is_one(self)
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
