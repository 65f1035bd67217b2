use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, frac, Field, NfElem, NumberField, Poly, RatFun, Rational};

/// A single stored term `coeff * z^exponent * log(z)^logpow`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exponent: Rational,
    pub logpow: u32,
    pub coeff: NfElem,
}

/// Truncated generalized series in `z = x - alpha`.
///
/// `alpha` is the generator of `field`. Terms are kept per `(exponent,
/// logpow)`. Each exponent class `mu + Z` either is known exactly (no
/// entry in `cutoffs`) or is known below its cutoff only.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    field: Arc<NumberField>,
    terms: BTreeMap<(Rational, u32), NfElem>,
    cutoffs: BTreeMap<Rational, Rational>,
}

/// Smallest element of `class + Z` that is `>= t`.
fn align_up(t: &Rational, class: &Rational) -> Rational {
    let d = t - class;
    class + d.ceil()
}

fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

impl LogSeries {
    pub fn zero(field: &Arc<NumberField>) -> Self {
        LogSeries { field: field.clone(), terms: BTreeMap::new(), cutoffs: BTreeMap::new() }
    }

    pub fn monomial(field: &Arc<NumberField>, exponent: Rational, logpow: u32, coeff: NfElem) -> Self {
        let mut s = Self::zero(field);
        s.add_term(exponent, logpow, coeff);
        s
    }

    pub fn from_terms(field: &Arc<NumberField>, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut s = Self::zero(field);
        for t in terms {
            s.add_term(t.exponent, t.logpow, t.coeff);
        }
        s
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// The expansion point as a field element.
    pub fn point(&self) -> NfElem {
        NfElem::generator(&self.field)
    }

    /// Adds `c * z^mu * log^j` to the known part (ignored beyond a cutoff).
    pub fn add_term(&mut self, mu: Rational, j: u32, c: NfElem) {
        if c.is_exact_zero() || self.cutoff(&mu).is_some_and(|t| mu >= *t) {
            return;
        }
        let key = (mu, j);
        let v = match self.terms.remove(&key) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !v.is_exact_zero() {
            self.terms.insert(key, v);
        }
    }

    /// Declares everything in `mu + Z` at exponents `>= t` unknown.
    pub fn set_cutoff(&mut self, class: &Rational, t: &Rational) {
        let c = frac(class);
        let t = align_up(t, &c);
        let t = match self.cutoffs.get(&c) {
            Some(old) if *old <= t => return,
            _ => t,
        };
        self.terms.retain(|(mu, _), _| frac(mu) != c || *mu < t);
        self.cutoffs.insert(c, t);
    }

    pub fn cutoff(&self, exponent: &Rational) -> Option<&Rational> {
        self.cutoffs.get(&frac(exponent))
    }

    pub fn cutoffs(&self) -> &BTreeMap<Rational, Rational> {
        &self.cutoffs
    }

    /// Forgets all cutoffs, treating the known terms as the exact series.
    pub fn drop_cutoffs(&self) -> Self {
        LogSeries { field: self.field.clone(), terms: self.terms.clone(), cutoffs: BTreeMap::new() }
    }

    pub fn is_exact(&self) -> bool {
        self.cutoffs.is_empty()
    }

    /// No known nonzero term (the series may still be unknown above a cutoff).
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, u32, &NfElem)> {
        self.terms.iter().map(|((mu, j), c)| (mu, *j, c))
    }

    pub fn terms(&self) -> Vec<Term> {
        self.iter()
            .map(|(mu, j, c)| Term { exponent: mu.clone(), logpow: j, coeff: c.clone() })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mu: &Rational, j: u32) -> NfElem {
        self.terms.get(&(mu.clone(), j)).cloned().unwrap_or_else(|| NfElem::zero(&self.field))
    }

    /// Classes that carry a term or a cutoff.
    pub fn classes(&self) -> BTreeSet<Rational> {
        let mut out: BTreeSet<Rational> = self.terms.keys().map(|(mu, _)| frac(mu)).collect();
        out.extend(self.cutoffs.keys().cloned());
        out
    }

    /// Lowest exponent of a known term.
    pub fn valuation(&self) -> Option<Rational> {
        self.terms.keys().next().map(|(mu, _)| mu.clone())
    }

    pub fn max_logpow(&self) -> u32 {
        self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0)
    }

    /// Lower bound for all exponents in `class` (known or not); `None` if
    /// the class is exactly zero.
    fn class_floor(&self, class: &Rational) -> Option<Rational> {
        let known = self.terms.keys().map(|(mu, _)| mu).filter(|mu| frac(mu) == *class).min().cloned();
        min_opt(known, self.cutoffs.get(class).cloned())
    }

    fn check_point(&self, other: &Self) -> Result<()> {
        if self.field.modulus() != other.field.modulus() {
            return Err(Error::PointMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_point(other)?;
        let mut out = self.clone();
        for (c, t) in &other.cutoffs {
            out.set_cutoff(c, t);
        }
        for (mu, j, c) in other.iter() {
            out.add_term(mu.clone(), j, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&NfElem::one(&self.field).negated())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &NfElem) -> Self {
        let mut out = Self::zero(&self.field);
        out.cutoffs = self.cutoffs.clone();
        if c.is_exact_zero() {
            return out;
        }
        for (key, v) in &self.terms {
            let p = v.times(c);
            if !p.is_exact_zero() {
                out.terms.insert(key.clone(), p);
            }
        }
        out
    }

    /// Multiplication by `z^q`.
    pub fn shift(&self, q: &Rational) -> Self {
        LogSeries {
            field: self.field.clone(),
            terms: self.terms.iter().map(|((mu, j), c)| ((mu + q, *j), c.clone())).collect(),
            cutoffs: self.cutoffs.iter().map(|(c, t)| (frac(&(c + q)), t + q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_point(other)?;
        let mut out = Self::zero(&self.field);
        for c1 in self.classes() {
            let v1 = self.class_floor(&c1);
            let t1 = self.cutoffs.get(&c1);
            for c2 in other.classes() {
                let v2 = other.class_floor(&c2);
                let t2 = other.cutoffs.get(&c2);
                let a = match (t1, &v2) {
                    (Some(t), Some(v)) => Some(t + v),
                    _ => None,
                };
                let b = match (&v1, t2) {
                    (Some(v), Some(t)) => Some(v + t),
                    _ => None,
                };
                if let Some(t) = min_opt(a, b) {
                    out.set_cutoff(&(&c1 + &c2), &t);
                }
            }
        }
        for ((m1, j1), a) in &self.terms {
            for ((m2, j2), b) in &other.terms {
                out.add_term(m1 + m2, j1 + j2, a.times(b));
            }
        }
        Ok(out)
    }

    /// `d/dz`, with `d/dz log(z) = 1/z`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(&self.field);
        let one = Rational::one();
        for (c, t) in &self.cutoffs {
            out.cutoffs.insert(c.clone(), t - &one);
        }
        for ((mu, j), c) in &self.terms {
            let e = mu - &one;
            if !mu.is_zero() {
                out.add_term(e.clone(), *j, c.times(&c.from_rational_like(mu)));
            }
            if *j > 0 {
                out.add_term(e, j - 1, c.times(&c.from_rational_like(&Rational::from_integer((*j).into()))));
            }
        }
        out
    }

    /// Keeps only exponents below `horizon`; every class becomes unknown
    /// from `horizon` on unless it is exact and already ends before it.
    pub fn truncate(&self, horizon: &Rational) -> Self {
        let mut out = self.clone();
        let classes: Vec<Rational> = self.classes().into_iter().collect();
        for c in classes {
            let exact_and_short = !self.cutoffs.contains_key(&c)
                && self.terms.keys().all(|(mu, _)| frac(mu) != c || mu < horizon);
            if !exact_and_short {
                out.set_cutoff(&c, horizon);
            }
        }
        out
    }

    /// Symbol for `x - alpha` in printed output.
    pub fn variable(&self) -> String {
        match self.field.as_rational() {
            Some(a) if a.is_zero() => "x".into(),
            Some(a) if a < Rational::zero() => format!("(x+{})", fmt_rational(&-a)),
            Some(a) => format!("(x-{})", fmt_rational(&a)),
            None => format!("(x-{})", self.field.name()),
        }
    }
}

/// Human-readable label of the expansion point.
pub fn point_label(field: &NumberField) -> String {
    match field.as_rational() {
        Some(a) => fmt_rational(&a),
        None => format!("RootOf({})", field.modulus().display(field.name())),
    }
}

fn fmt_power(var: &str, e: &Rational) -> String {
    if e.is_one() {
        var.to_string()
    } else if e.is_integer() {
        format!("{}^{}", var, e)
    } else {
        format!("{}^({})", var, fmt_rational(e))
    }
}

fn fmt_log(var: &str, j: u32) -> String {
    let log = match var.strip_prefix('(').and_then(|v| v.strip_suffix(')')) {
        Some(inner) => format!("log({})", inner),
        None => format!("log({})", var),
    };
    if j == 1 {
        log
    } else {
        format!("{}^{}", log, j)
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.variable();
        let mut parts: Vec<(bool, String)> = Vec::new();
        for ((mu, j), c) in &self.terms {
            let mut factors = Vec::new();
            if !mu.is_zero() {
                factors.push(fmt_power(&var, mu));
            }
            if *j > 0 {
                factors.push(fmt_log(&var, *j));
            }
            let (neg, coeff) = match c.as_rational() {
                Some(q) => (q < Rational::zero(), Some(q.abs())),
                None => (false, None),
            };
            let body = match coeff {
                Some(q) if q.is_one() && !factors.is_empty() => factors.join("*"),
                Some(q) if factors.is_empty() => fmt_rational(&q),
                Some(q) => format!("{}*{}", fmt_rational(&q), factors.join("*")),
                None if factors.is_empty() => c.to_string(),
                None => format!("{}*{}", c, factors.join("*")),
            };
            parts.push((neg, body));
        }
        let mut bounds: Vec<&Rational> = self.cutoffs.values().collect();
        bounds.sort();
        for t in bounds {
            parts.push((false, format!("O({})", if t.is_zero() { "1".to_string() } else { fmt_power(&var, t) })));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (neg, body)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{}", body)?,
                (0, false) => write!(f, "{}", body)?,
                (_, true) => write!(f, " - {}", body)?,
                (_, false) => write!(f, " + {}", body)?,
            }
        }
        Ok(())
    }
}

/// Image of a polynomial over Q in `K[z]` after `x = alpha + z`.
pub fn shift_to_point(p: &crate::exactmath::QPoly, field: &Arc<NumberField>) -> Poly<NfElem> {
    let lifted: Poly<NfElem> = p.map(|c| NfElem::from_rational(field, c.clone()));
    lifted.taylor_shift(&NfElem::generator(field))
}

/// Laurent expansion of `q` at the generator of `field` with `n` terms from
/// its valuation on; polynomials are expanded exactly.
pub fn rational_expansion(q: &RatFun, field: &Arc<NumberField>, n: usize) -> Result<LogSeries> {
    let mut out = LogSeries::zero(field);
    let num = shift_to_point(q.num(), field);
    let Some(vn) = num.valuation()? else {
        return Ok(out);
    };
    if q.den().is_constant() {
        let dinv = Rational::one() / q.den().coeffs()[0].clone();
        for (k, c) in num.coeffs().iter().enumerate() {
            out.add_term(Rational::from_integer(k.into()), 0, c.times(&c.from_rational_like(&dinv)));
        }
        return Ok(out);
    }
    let den = shift_to_point(q.den(), field);
    let vd = den.valuation()?.expect("nonzero denominator");
    let d: Vec<NfElem> = den.coeffs()[vd..].to_vec();
    let d0inv = d[0].inverse()?;
    let mut inv: Vec<NfElem> = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 {
            inv.push(d0inv.clone());
            continue;
        }
        let mut acc = NfElem::zero(field);
        for i in 1..=k.min(d.len() - 1) {
            acc = acc.plus(&d[i].times(&inv[k - i]));
        }
        inv.push(acc.times(&d0inv).negated());
    }
    // num = z^vn * (num[vn] + ...); product terms k < n contribute
    let ncoeffs = &num.coeffs()[vn..];
    let base = vn as i64 - vd as i64;
    for k in 0..n {
        let mut acc = NfElem::zero(field);
        for i in 0..=k.min(ncoeffs.len() - 1) {
            acc = acc.plus(&ncoeffs[i].times(&inv[k - i]));
        }
        out.add_term(Rational::from_integer((base + k as i64).into()), 0, acc);
    }
    out.set_cutoff(&Rational::zero(), &Rational::from_integer((base + n as i64).into()));
    Ok(out)
}
