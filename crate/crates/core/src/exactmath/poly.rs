use super::{Field, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients stored low to high.
///
/// The coefficient vector never ends in an exact zero, so the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * var^k`
    pub fn monomial(c: F, k: usize) -> Self {
        if c.is_exact_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![c.zero_like(); k];
        coeffs.push(c);
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `var^k`, `None` when it is zero (no sample to clone).
    pub fn coeff(&self, k: usize) -> Option<&F> {
        self.coeffs.get(k)
    }

    pub fn coeff_or(&self, k: usize, zero: &F) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(|| zero.zero_like())
    }

    pub fn lc(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.negated()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![self.coeffs[0].zero_like(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc: Option<Self> = None;
        for _ in 0..e {
            acc = Some(match acc {
                None => self.clone(),
                Some(a) => a.mul(self),
            });
        }
        acc.unwrap_or_else(|| match self.coeffs.first() {
            Some(c) => Self::constant(c.one_like()),
            None => panic!("0^0 needs a coefficient sample"),
        })
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.times(&c.from_rational_like(&Rational::from_integer(((i + 1) as i64).into()))))
            .collect();
        Self::from_coeffs(out)
    }

    pub fn eval(&self, at: &F) -> F {
        let mut acc = at.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(at).plus(c);
        }
        acc
    }

    /// Division with remainder; fails only when the leading coefficient of
    /// `divisor` is not invertible.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dlc = divisor.lc().ok_or(Error::DivisionByZero)?;
        let dinv = dlc.inverse()?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let zero = dlc.zero_like();
        let mut quot = vec![zero; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].times(&dinv);
            if !c.is_exact_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].minus(&c.times(dc));
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::ShapeMismatch("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Result<Self> {
        match self.lc() {
            None => Ok(Self::zero()),
            Some(lc) => Ok(self.scale(&lc.inverse()?)),
        }
    }

    /// Monic gcd by Euclid's algorithm. Over a product of fields this can
    /// raise a split while inverting leading coefficients.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Lowest index whose coefficient is nonzero, deciding zero-ness
    /// uniformly (may split). `None` for the zero polynomial.
    pub fn valuation(&self) -> Result<Option<usize>> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.decide_zero()? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Degree after deciding which top coefficients vanish (may split).
    pub fn decided_degree(&self) -> Result<Option<usize>> {
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if !c.decide_zero()? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// `self(var + shift)` by Horner's rule.
    pub fn taylor_shift(&self, shift: &F) -> Self {
        let mut acc = Self::zero();
        let Some(first) = self.coeffs.first() else {
            return acc;
        };
        let lin = Poly::from_coeffs(vec![shift.clone(), first.one_like()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }
}
