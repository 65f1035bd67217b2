//! The differential operator algebra `Q(x)[D]` with `Dx = xD + 1`, the
//! quotient by a left ideal `<L>`, and operators acting on series.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactmath::{NfElem, QPoly, RatFun, Rational};
use crate::logseries::{rational_expansion, shift_to_point, LogSeries};

/// `sum_i coeffs[i] * D^i`, coefficients to the left of `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrePoly {
    coeffs: Vec<RatFun>,
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    acc
}

impl OrePoly {
    pub fn new(mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OrePoly { coeffs }
    }

    pub fn from_polys(coeffs: Vec<QPoly>) -> Self {
        Self::new(coeffs.into_iter().map(RatFun::from_poly).collect())
    }

    pub fn zero() -> Self {
        OrePoly { coeffs: Vec::new() }
    }

    pub fn constant(c: RatFun) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(RatFun::one())
    }

    pub fn x() -> Self {
        Self::constant(RatFun::x())
    }

    /// `D^k`
    pub fn d_pow(k: usize) -> Self {
        let mut coeffs = vec![RatFun::zero(); k];
        coeffs.push(RatFun::one());
        OrePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Result<usize> {
        self.coeffs.len().checked_sub(1).ok_or(Error::ZeroOperator)
    }

    pub fn lc(&self) -> Option<&RatFun> {
        self.coeffs.last()
    }

    /// Whether all coefficients are polynomials.
    pub fn is_polynomial(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_polynomial())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        OrePoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `f * self` for a function `f`.
    pub fn scale_left(&self, f: &RatFun) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(f)).collect())
    }

    /// Product in the operator algebra, using
    /// `D^i b = sum_k binom(i, k) b^(k) D^(i-k)`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let top = self.coeffs.len() - 1;
        let mut out = vec![RatFun::zero(); top + other.coeffs.len()];
        for (j, b) in other.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            // derivatives of b up to the highest D-power of self
            let mut derivs = vec![b.clone()];
            for k in 1..=top {
                let next = derivs[k - 1].derivative();
                derivs.push(next);
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, bk) in derivs.iter().enumerate().take(i + 1) {
                    if bk.is_zero() {
                        continue;
                    }
                    let term = a.mul(bk).scale(&binomial(i, k));
                    out[i - k + j] = out[i - k + j].add(&term);
                }
            }
        }
        Self::new(out)
    }

    /// Remainder modulo the left ideal generated by `l`.
    pub fn rem(&self, l: &OrePoly) -> Result<BasisElement> {
        let r = l.order()?;
        let inv_lc = RatFun::one().div(l.lc().unwrap())?;
        let mut a = self.clone();
        while let Ok(n) = a.order() {
            if n < r {
                break;
            }
            let q = OrePoly::d_pow(n - r).scale_left(&a.coeffs[n]);
            let q = q.mul(&OrePoly::constant(inv_lc.clone()));
            a = a.sub(&q.mul(l));
            debug_assert!(a.coeffs.len() <= n);
        }
        let mut coeffs = a.coeffs;
        coeffs.resize(r, RatFun::zero());
        Ok(BasisElement { coeffs })
    }

    pub fn display(&self) -> OperatorDisplay<'_> {
        OperatorDisplay { coeffs: &self.coeffs }
    }
}

pub fn ore_mul(a: &OrePoly, b: &OrePoly) -> OrePoly {
    a.mul(b)
}

pub fn ore_order(a: &OrePoly) -> Result<usize> {
    a.order()
}

/// The class of `D^k` in `Q(x)[D]/<l>`.
pub fn reduce_pow(l: &OrePoly, k: usize) -> Result<BasisElement> {
    OrePoly::d_pow(k).rem(l)
}

/// An element `c_0 + c_1 D + ... + c_{r-1} D^{r-1}` of `Q(x)[D]/<L>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    coeffs: Vec<RatFun>,
}

impl BasisElement {
    /// Pads with zeros up to length `r`; fails if there are more than `r`.
    pub fn new(mut coeffs: Vec<RatFun>, r: usize) -> Result<Self> {
        while coeffs.len() > r && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() > r {
            return Err(Error::ShapeMismatch(format!("element of order {} in a quotient of order {}", coeffs.len() - 1, r)));
        }
        coeffs.resize(r, RatFun::zero());
        Ok(BasisElement { coeffs })
    }

    /// `f * D^k`
    pub fn monomial(f: RatFun, k: usize, r: usize) -> Self {
        let mut coeffs = vec![RatFun::zero(); r];
        coeffs[k] = f;
        BasisElement { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    /// Length of the coefficient vector, the order of the ambient quotient.
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Highest `i` with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn lc(&self) -> Option<&RatFun> {
        self.order().map(|i| &self.coeffs[i])
    }

    pub fn to_ore(&self) -> OrePoly {
        OrePoly::new(self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        BasisElement { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BasisElement { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, f: &RatFun) -> Self {
        BasisElement { coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect() }
    }

    /// `f * D * self`, reduced modulo `l`.
    pub fn d_times(&self, f: &RatFun, l: &OrePoly) -> Result<Self> {
        OrePoly::constant(f.clone()).mul(&OrePoly::d_pow(1)).mul(&self.to_ore()).rem(l)
    }

    pub fn display(&self) -> OperatorDisplay<'_> {
        OperatorDisplay { coeffs: &self.coeffs }
    }
}

/// Prints `sum c_i D^i` by descending `i`, e.g. `x*D^2 - D + 1/x` or
/// `(1/x)*D^2 + 1/3*D`.
pub struct OperatorDisplay<'a> {
    coeffs: &'a [RatFun],
}

impl fmt::Display for OperatorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = if neg { c.neg() } else { c.clone() };
            let body = if i == 0 {
                if neg && a.den().is_constant() && a.num().term_count() > 1 {
                    format!("({})", a.display())
                } else {
                    a.display().to_string()
                }
            } else {
                let d = if i == 1 { "D".to_string() } else { format!("D^{}", i) };
                if a == RatFun::one() {
                    d
                } else if a.needs_parens() {
                    format!("({})*{}", a.display(), d)
                } else {
                    format!("{}*{}", a.display(), d)
                }
            };
            match (first, neg) {
                (true, true) => write!(f, "-{}", body)?,
                (true, false) => write!(f, "{}", body)?,
                (false, true) => write!(f, " - {}", body)?,
                (false, false) => write!(f, " + {}", body)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Valuation of a nonzero rational function at the point of `field`
/// (decided uniformly, so it may split).
pub fn laurent_valuation(q: &RatFun, field: &std::sync::Arc<crate::exactmath::NumberField>) -> Result<i64> {
    let vn = shift_to_point(q.num(), field).valuation()?.ok_or(Error::ZeroPolynomial)?;
    let vd = shift_to_point(q.den(), field).valuation()?.expect("nonzero denominator");
    Ok(vn as i64 - vd as i64)
}

/// `sum_i coeffs[i] * f^(i)`, known at least below `horizon` wherever `f`
/// permits.
fn apply_coeffs(coeffs: &[RatFun], f: &LogSeries, horizon: &Rational) -> Result<LogSeries> {
    let field = f.field().clone();
    let mut out = LogSeries::zero(&field);
    let mut fi = f.clone();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            fi = fi.derivative();
        }
        if c.is_zero() || (fi.is_exact() && fi.is_empty()) {
            continue;
        }
        let term = if c.is_polynomial() {
            rational_expansion(c, &field, 0)?.mul(&fi)?
        } else {
            let vc = laurent_valuation(c, &field)?;
            let vf = fi
                .valuation()
                .into_iter()
                .chain(fi.cutoffs().values().cloned())
                .min()
                .expect("nonzero series");
            let need = horizon - Rational::from_integer(vc.into()) - vf;
            let n = need.ceil().to_integer().try_into().unwrap_or(0usize).max(1);
            rational_expansion(c, &field, n)?.mul(&fi)?
        };
        out = out.add(&term)?;
    }
    Ok(out.truncate(horizon))
}

/// `B . f` for an element of the quotient.
pub fn apply_to_series(b: &BasisElement, f: &LogSeries, horizon: &Rational) -> Result<LogSeries> {
    apply_coeffs(&b.coeffs, f, horizon)
}

/// `A . f` for an operator.
pub fn apply_operator(a: &OrePoly, f: &LogSeries, horizon: &Rational) -> Result<LogSeries> {
    apply_coeffs(&a.coeffs, f, horizon)
}

/// Lifts a scalar of `Q(alpha)` to the polynomial of degree below the
/// modulus degree, read in `x`.
pub fn lift_to_x(a: &NfElem) -> QPoly {
    a.rep().clone()
}

impl fmt::Display for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display().fmt(f)
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rint, NumberField};
    use proptest::prelude::*;

    fn op(cs: &[&[i64]]) -> OrePoly {
        OrePoly::from_polys(cs.iter().map(|c| QPoly::from_ints(c)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(QPoly::from_ints(n), QPoly::from_ints(d)).unwrap()
    }

    #[test]
    fn commutation_rule() {
        let d = OrePoly::d_pow(1);
        assert_eq!(d.mul(&OrePoly::x()), op(&[&[1], &[0, 1]]));
        assert_eq!(d.mul(&d), OrePoly::d_pow(2));
        let xd = op(&[&[], &[0, 1]]);
        assert_eq!(xd.mul(&xd), op(&[&[], &[0, 1], &[0, 0, 1]]));
    }

    #[test]
    fn orders() {
        assert_eq!(op(&[&[1], &[0, 1]]).order().unwrap(), 1);
        assert_eq!(op(&[&[-1], &[0, 1], &[], &[0, 0, 0, 1]]).order().unwrap(), 3);
        assert_eq!(op(&[&[5]]).order().unwrap(), 0);
        assert!(matches!(OrePoly::zero().order(), Err(Error::ZeroOperator)));
    }

    #[test]
    fn reduction_modulo_l() {
        let l = op(&[&[1], &[-1]]);
        assert_eq!(reduce_pow(&l, 1).unwrap(), BasisElement::new(vec![RatFun::one()], 1).unwrap());
        let l = op(&[&[-1, 2], &[1, -4], &[0, 2]]);
        assert_eq!(reduce_pow(&l, 1).unwrap(), BasisElement::monomial(RatFun::one(), 1, 2));
        let want = BasisElement::new(vec![rf(&[1, -2], &[0, 2]), rf(&[-1, 4], &[0, 2])], 2).unwrap();
        assert_eq!(reduce_pow(&l, 2).unwrap(), want);
    }

    #[test]
    fn printing() {
        let b = BasisElement::new(vec![rf(&[1], &[0, 1]), rint_rf(-1), RatFun::x()], 3).unwrap();
        assert_eq!(b.to_string(), "x*D^2 - D + 1/x");
        let b = BasisElement::new(vec![rf(&[9], &[0, 0, 0, 2]), rf(&[-7], &[0, 0, 2]), rf(&[1], &[0, 1])], 3).unwrap();
        assert_eq!(b.to_string(), "(1/x)*D^2 - (7/(2*x^2))*D + 9/(2*x^3)");
        let b = BasisElement::new(vec![RatFun::zero(), RatFun::constant(rat(1, 3)), RatFun::x()], 3).unwrap();
        assert_eq!(b.to_string(), "x*D^2 + 1/3*D");
        let l = op(&[&[1, 2], &[-1, 0, -4], &[0, -2, 4]]);
        assert_eq!(l.to_string(), "(4*x^2 - 2*x)*D^2 - (4*x^2 + 1)*D + 2*x + 1");
        assert_eq!(OrePoly::zero().to_string(), "0");
        assert_eq!(OrePoly::from_polys(vec![QPoly::from_ints(&[1, -1]), QPoly::from_ints(&[1])]).to_string(), "D - (x - 1)");
    }

    fn rint_rf(n: i64) -> RatFun {
        RatFun::constant(rint(n))
    }

    fn at0() -> std::sync::Arc<NumberField> {
        NumberField::rational_point(&rint(0))
    }

    fn mono(mu: Rational, j: u32) -> LogSeries {
        let k = at0();
        LogSeries::monomial(&k, mu, j, NfElem::one(&k))
    }

    #[test]
    fn series_action() {
        let h = rint(4);
        assert!(apply_operator(&op(&[&[1], &[0, 1]]), &mono(rint(-1), 0), &h).unwrap().is_empty());
        let d = OrePoly::d_pow(1);
        let k = at0();
        assert_eq!(
            apply_operator(&d, &mono(rat(1, 2), 0), &h).unwrap(),
            LogSeries::monomial(&k, rat(-1, 2), 0, NfElem::from_rational(&k, rat(1, 2)))
        );
        assert_eq!(apply_operator(&d, &mono(rint(0), 1), &h).unwrap(), mono(rint(-1), 0));
    }

    #[test]
    fn rational_coefficients_expand_to_horizon() {
        // (1/(1 - x)) * 1 known below x^3
        let a = OrePoly::constant(rf(&[1], &[1, -1]));
        let s = apply_operator(&a, &mono(rint(0), 0), &rint(3)).unwrap();
        assert_eq!(s.to_string(), "1 + x + x^2 + O(x^3)");
    }

    fn arb_op() -> impl Strategy<Value = OrePoly> {
        proptest::collection::vec(proptest::collection::vec(-3i64..4, 0..3), 1..3)
            .prop_map(|cs| OrePoly::from_polys(cs.iter().map(|c| QPoly::from_ints(c)).collect()))
    }

    fn arb_power_series() -> impl Strategy<Value = LogSeries> {
        proptest::collection::vec(-3i64..4, 1..5).prop_map(|cs| {
            let k = at0();
            let mut s = LogSeries::zero(&k);
            for (i, c) in cs.iter().enumerate() {
                s.add_term(Rational::from_integer(i.into()), 0, NfElem::from_rational(&k, rint(*c)));
            }
            s.set_cutoff(&rint(0), &Rational::from_integer(cs.len().into()));
            s
        })
    }

    proptest! {
        #[test]
        fn mul_associates_and_distributes(a in arb_op(), b in arb_op(), c in arb_op()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn action_is_compatible_with_product(a in arb_op(), b in arb_op(), f in arb_power_series()) {
            let h = rint(10);
            let lhs = apply_operator(&a.mul(&b), &f, &h).unwrap();
            let rhs = apply_operator(&a, &apply_operator(&b, &f, &h).unwrap(), &h).unwrap();
            let top = lhs.cutoffs().values().chain(rhs.cutoffs().values()).min().cloned().unwrap_or(h);
            prop_assert_eq!(lhs.truncate(&top).drop_cutoffs(), rhs.truncate(&top).drop_cutoffs());
        }

        #[test]
        fn low_powers_are_unit_vectors(k in 0usize..3) {
            let l = op(&[&[1], &[0, 1], &[2, 0, 1], &[0, 0, 0, 1]]);
            prop_assert_eq!(reduce_pow(&l, k).unwrap(), BasisElement::monomial(RatFun::one(), k, 3));
        }
    }
}
