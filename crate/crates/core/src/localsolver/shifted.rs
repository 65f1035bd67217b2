use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{poly_gcd, rational_roots, Field, NfElem, NumberField, Poly, QPoly, Rational};
use crate::logseries::{point_label, shift_to_point};
use crate::oreops::OrePoly;

/// Kind of a point with respect to an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointKind {
    Ordinary,
    RegularSingular,
    Irregular,
}

/// `L` rewritten around `alpha`: with `z = x - alpha`,
/// `L(z^mu) = sum_q F_q(mu) z^(mu + q)` where
/// `F_q(mu) = sum_i l_{i, q+i} mu (mu - 1) ... (mu - i + 1)`.
#[derive(Clone, Debug)]
pub struct ShiftedOperator {
    field: Arc<NumberField>,
    order: usize,
    /// `derivs[n][s]` is the `s`-th derivative of `F_{q0+n}` in `mu`.
    derivs: Vec<Vec<Poly<NfElem>>>,
    leading_vanishes: bool,
}

/// Polynomial coefficients of `L` after clearing denominators from the left.
pub fn polynomial_coefficients(l: &OrePoly) -> Vec<QPoly> {
    let mut den = QPoly::one();
    for c in l.coeffs() {
        let g = poly_gcd(&den, c.den());
        den = den.mul(&c.den().divrem_q(&g).0);
    }
    l.coeffs().iter().map(|c| c.num().mul(&den.divrem_q(c.den()).0)).collect()
}

fn falling(field: &Arc<NumberField>, i: usize) -> Poly<NfElem> {
    let mut acc = Poly::constant(NfElem::one(field));
    for k in 0..i {
        let lin = Poly::from_coeffs(vec![
            NfElem::from_rational(field, -Rational::from_integer(k.into())),
            NfElem::one(field),
        ]);
        acc = acc.mul(&lin);
    }
    acc
}

impl ShiftedOperator {
    pub fn new(l: &OrePoly, field: &Arc<NumberField>) -> Result<Self> {
        let order = l.order()?;
        let shifted: Vec<Poly<NfElem>> =
            polynomial_coefficients(l).iter().map(|p| shift_to_point(p, field)).collect();
        let mut q0 = i64::MAX;
        let mut qmax = i64::MIN;
        for (i, p) in shifted.iter().enumerate() {
            if let Some(v) = p.valuation()? {
                q0 = q0.min(v as i64 - i as i64);
                qmax = qmax.max(p.degree().unwrap() as i64 - i as i64);
            }
        }
        let falls: Vec<Poly<NfElem>> = (0..=order).map(|i| falling(field, i)).collect();
        let zero = NfElem::zero(field);
        let mut derivs = Vec::new();
        for q in q0..=qmax {
            let mut f = Poly::zero();
            for (i, p) in shifted.iter().enumerate() {
                let k = q + i as i64;
                if k < 0 {
                    continue;
                }
                let c = p.coeff_or(k as usize, &zero);
                if !c.is_exact_zero() {
                    f = f.add(&falls[i].scale(&c));
                }
            }
            let mut ds = vec![f];
            for s in 1..=order {
                let next = ds[s - 1].derivative();
                ds.push(next);
            }
            derivs.push(ds);
        }
        let leading_vanishes = shifted[order].coeff_or(0, &zero).decide_zero()?;
        Ok(ShiftedOperator { field: field.clone(), order, derivs, leading_vanishes })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of `F_q` beyond the indicial one.
    pub fn band(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn indicial(&self) -> &Poly<NfElem> {
        &self.derivs[0][0]
    }

    /// `F_{q0+n}^{(s)}(nu)`, zero outside the band.
    pub fn eval(&self, n: usize, s: usize, nu: &Rational) -> NfElem {
        match self.derivs.get(n).and_then(|d| d.get(s)) {
            Some(p) => p.eval(&NfElem::from_rational(&self.field, nu.clone())),
            None => NfElem::zero(&self.field),
        }
    }

    pub fn kind(&self) -> Result<PointKind> {
        if !self.leading_vanishes {
            return Ok(PointKind::Ordinary);
        }
        if self.indicial().decided_degree()? == Some(self.order) {
            Ok(PointKind::RegularSingular)
        } else {
            Ok(PointKind::Irregular)
        }
    }

    /// Rational roots of the indicial polynomial with multiplicities;
    /// fails unless they account for its whole degree.
    pub fn exponents(&self) -> Result<Vec<(Rational, usize)>> {
        if self.kind()? == PointKind::Irregular {
            return Err(Error::IrregularSingularity { point: point_label(&self.field) });
        }
        let f = self.indicial();
        let mut out = Vec::new();
        let mut total = 0;
        for (nu, _) in rational_roots(&norm_polynomial(f, &self.field))? {
            let at = NfElem::from_rational(&self.field, nu.clone());
            let mut mult = 0;
            let mut g = f.clone();
            while !g.is_zero() && g.eval(&at).decide_zero()? {
                mult += 1;
                g = g.derivative();
            }
            if mult > 0 {
                total += mult;
                out.push((nu, mult));
            }
        }
        if total != self.order {
            return Err(Error::UnsupportedExponent {
                point: point_label(&self.field),
                detail: format!("only {} of {} local exponents are rational", total, self.order),
            });
        }
        Ok(out)
    }
}

/// Interpolating polynomial through `(i, ys[i])`, `i = 0, 1, ...`.
fn interpolate(ys: &[Rational]) -> QPoly {
    // Newton divided differences on the nodes 0..n
    let n = ys.len();
    let mut coef = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / Rational::from_integer(level.into());
        }
    }
    let mut acc = QPoly::zero();
    for i in (0..n).rev() {
        let lin = QPoly::from_coeffs(vec![-Rational::from_integer(i.into()), Rational::one()]);
        acc = acc.mul(&lin).add(&QPoly::constant(coef[i].clone()));
    }
    acc
}

/// `N(nu) = Norm_{K/Q} f(nu)`; its rational roots include every rational
/// root of `f` on any component of `K`.
pub fn norm_polynomial(f: &Poly<NfElem>, field: &Arc<NumberField>) -> QPoly {
    if field.degree() == 1 {
        return QPoly::from_coeffs(f.coeffs().iter().map(|c| c.as_rational().unwrap()).collect());
    }
    let deg = f.degree().unwrap_or(0) * field.degree();
    let ys: Vec<Rational> = (0..=deg)
        .map(|k| f.eval(&NfElem::from_rational(field, Rational::from_integer(k.into()))).norm())
        .collect();
    let n = interpolate(&ys);
    if n.is_zero() {
        QPoly::constant(Rational::zero())
    } else {
        n
    }
}
