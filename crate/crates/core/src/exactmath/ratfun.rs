use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{poly_gcd, rint, Field, QPoly, Rational};
use crate::error::{Error, Result};

/// Element of Q(x) in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: QPoly,
    den: QPoly,
}

impl RatFun {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den);
        let num = num.divrem_q(&g).0;
        let den = den.divrem_q(&g).0;
        let lc = den.lc().unwrap().clone();
        Ok(RatFun { num: num.scale(&lc.recip()), den: den.scale(&lc.recip()) })
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFun { num: p, den: QPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(QPoly::zero())
    }

    pub fn one() -> Self {
        Self::constant(rint(1))
    }

    pub fn x() -> Self {
        Self::from_poly(QPoly::x())
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_constant() && self.num.is_constant() {
            Some(self.num.coeff(0).cloned().unwrap_or_else(|| rint(0)))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        Self::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den)).unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &QPoly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { Self::one().div(self)? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd - nd')/d^2
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den)).unwrap()
    }

    pub fn eval(&self, at: &Rational) -> Result<Rational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(at) / d)
    }

    /// Order of vanishing at the roots of the irreducible-or-squarefree
    /// polynomial `p` (negative for poles), counted by exact division.
    pub fn valuation_at(&self, p: &QPoly) -> i64 {
        fn mult(mut q: QPoly, p: &QPoly) -> i64 {
            let mut k = 0;
            loop {
                let (quo, r) = q.divrem_q(p);
                if !r.is_zero() {
                    return k;
                }
                q = quo;
                k += 1;
            }
        }
        if self.is_zero() {
            return i64::MAX;
        }
        mult(self.num.clone(), p) - mult(self.den.clone(), p)
    }

    pub fn display(&self) -> RatFunDisplay<'_> {
        RatFunDisplay { f: self, var: "x" }
    }

    /// Whether the printed form has a top-level `+`/`-` or a `/`, i.e. it
    /// needs parentheses when used as a factor.
    pub fn needs_parens(&self) -> bool {
        !self.den.is_constant() || self.num.term_count() > 1
    }

    /// Sign of the leading numerator coefficient.
    pub fn is_negative(&self) -> bool {
        self.num.lc().is_some_and(|c| c.is_negative())
    }
}

impl Field for RatFun {
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        Self::constant(q.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Result<Self> {
        Self::one().div(self)
    }
}

pub struct RatFunDisplay<'a> {
    f: &'a RatFun,
    var: &'a str,
}

/// Splits `p = c * prim` with `prim` integral, primitive, positive leading
/// coefficient; returns the printed form of `prim` (without its content).
fn integral_form(p: &QPoly) -> (Rational, QPoly) {
    let (content, prim) = p.primitive_part();
    (content, QPoly::from_coeffs(prim.into_iter().map(Rational::from_integer).collect()))
}

impl fmt::Display for RatFunDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rf = self.f;
        if rf.den.is_constant() {
            return write!(f, "{}", rf.num.display(self.var));
        }
        // n/d = (a/b) * n'/d' with n', d' primitive integral; print as
        // (a*n')/(b*d')
        let (cn, n_prim) = integral_form(&rf.num);
        let (cd, d_prim) = integral_form(&rf.den);
        let c = cn / cd;
        let (a, b) = (c.numer().clone(), c.denom().clone());
        let num_str = if n_prim.is_constant() {
            a.to_string()
        } else if a.is_one() {
            paren_if(&n_prim, self.var)
        } else if a == -BigInt::one() {
            format!("-{}", paren_if(&n_prim, self.var))
        } else {
            format!("{}*{}", a, paren_if(&n_prim, self.var))
        };
        let den_poly = d_prim.scale(&Rational::from_integer(b));
        let den_str = if den_poly.term_count() == 1 && den_poly.lc().is_some_and(|c| c.is_one()) {
            den_poly.display(self.var).to_string()
        } else {
            format!("({})", den_poly.display(self.var))
        };
        write!(f, "{}/{}", num_str, den_str)
    }
}

fn paren_if(p: &QPoly, var: &str) -> String {
    if p.term_count() > 1 {
        format!("({})", p.display(var))
    } else {
        p.display(var).to_string()
    }
}
