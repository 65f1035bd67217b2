use std::fmt;
use std::sync::Arc;

use super::qpoly::ext_gcd;
use super::{fmt_rational, rint, Field, Matrix, QPoly, Rational};
use crate::error::{Error, Result, SplitEvent};

/// `Q[t]/<modulus>` for a monic squarefree modulus.
///
/// The modulus is not required to be irreducible; arithmetic proceeds as if
/// it were and reports a [`SplitEvent`] when a zero divisor shows up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    modulus: QPoly,
    name: String,
}

impl NumberField {
    pub fn new(modulus: &QPoly, name: &str) -> Result<Arc<NumberField>> {
        let Some(deg) = modulus.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        if deg == 0 {
            return Err(Error::ShapeMismatch("number field modulus must have degree >= 1".into()));
        }
        let modulus = modulus.monic_q();
        if !super::poly_gcd(&modulus, &modulus.derivative()).is_constant() {
            return Err(Error::ShapeMismatch("number field modulus must be squarefree".into()));
        }
        Ok(Arc::new(NumberField { modulus, name: name.to_string() }))
    }

    /// `Q` presented as `Q[t]/<t - a>`.
    pub fn rational_point(a: &Rational) -> Arc<NumberField> {
        Arc::new(NumberField { modulus: QPoly::linear_root(a), name: "t".into() })
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    /// The rational value of the generator when the modulus is linear.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.degree() == 1 {
            Some(-self.modulus.coeffs()[0].clone())
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct NfElem {
    field: Arc<NumberField>,
    rep: QPoly,
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field.modulus == other.field.modulus) && self.rep == other.rep
    }
}

impl NfElem {
    pub fn new(field: &Arc<NumberField>, rep: &QPoly) -> Self {
        NfElem { field: field.clone(), rep: rep.rem_q(&field.modulus) }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        NfElem { field: field.clone(), rep: QPoly::constant(q) }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        NfElem { field: field.clone(), rep: QPoly::zero() }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rational(field, rint(1))
    }

    /// The class of `t`, i.e. the root this field adjoins.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::new(field, &QPoly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Representative of degree below the modulus degree.
    pub fn rep(&self) -> &QPoly {
        &self.rep
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.rep.degree() {
            None => Some(rint(0)),
            Some(0) => Some(self.rep.coeffs()[0].clone()),
            _ => None,
        }
    }

    fn split_or(&self, g: &QPoly) -> Error {
        let other = self.field.modulus.divrem_q(g).0.monic_q();
        Error::Split(SplitEvent::new(vec![g.clone(), other]))
    }

    /// Multiplication matrix of `self` acting on the power basis.
    pub fn multiplication_matrix(&self) -> Matrix<Rational> {
        let n = self.field.degree();
        let mut rows = vec![vec![rint(0); n]; n];
        let mut basis_elem = QPoly::one();
        for (j, _) in (0..n).enumerate() {
            let prod = self.rep.mul(&basis_elem).rem_q(&self.field.modulus);
            for (i, row) in rows.iter_mut().enumerate() {
                row[j] = prod.coeff(i).cloned().unwrap_or_else(|| rint(0));
            }
            basis_elem = basis_elem.shift(1);
        }
        Matrix::from_rows(rows)
    }

    /// Field norm down to Q (the product over all components).
    pub fn norm(&self) -> Rational {
        super::det(&self.multiplication_matrix()).expect("determinant over Q never splits")
    }
}

impl Field for NfElem {
    fn is_exact_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        Self::from_rational(&self.field, q.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        NfElem { field: self.field.clone(), rep: self.rep.add(&other.rep) }
    }
    fn minus(&self, other: &Self) -> Self {
        NfElem { field: self.field.clone(), rep: self.rep.sub(&other.rep) }
    }
    fn times(&self, other: &Self) -> Self {
        if self.rep.is_zero() || other.rep.is_zero() {
            return self.zero_like();
        }
        if self.field.degree() == 1 {
            return NfElem { field: self.field.clone(), rep: self.rep.mul(&other.rep) };
        }
        NfElem { field: self.field.clone(), rep: self.rep.mul(&other.rep).rem_q(&self.field.modulus) }
    }
    fn negated(&self) -> Self {
        NfElem { field: self.field.clone(), rep: self.rep.neg() }
    }
    fn inverse(&self) -> Result<Self> {
        if self.rep.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        let (g, s, _) = ext_gcd(&self.rep, &self.field.modulus);
        if g.is_constant() {
            Ok(NfElem::new(&self.field, &s))
        } else {
            Err(self.split_or(&g))
        }
    }
    fn decide_zero(&self) -> Result<bool> {
        if self.rep.is_zero() {
            return Ok(true);
        }
        if self.rep.is_constant() {
            return Ok(false);
        }
        let g = super::poly_gcd(&self.rep, &self.field.modulus);
        if g.is_constant() {
            Ok(false)
        } else {
            Err(self.split_or(&g))
        }
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{}", fmt_rational(&q)),
            None => write!(f, "({})", self.rep.display(&self.field.name)),
        }
    }
}
