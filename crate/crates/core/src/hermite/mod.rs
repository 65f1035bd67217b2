//! Hermite reduction of `a . omega / (u v^m)` over an integral basis
//! `omega` of `C(x)[D]/<L>`.

use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactmath::{ext_gcd, linsolve, poly_gcd, Matrix, NfElem, NumberField, QPoly, RatFun, Rational};
use crate::oreops::{BasisElement, OrePoly};

/// `D omega_i = sum_j m[i][j] omega_j` modulo `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeMatrix {
    pub operator: OrePoly,
    pub basis: Vec<BasisElement>,
    pub m: Vec<Vec<RatFun>>,
}

/// `(a_0 omega_0 + ... + a_{r-1} omega_{r-1}) / (u v^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub numerators: Vec<QPoly>,
    pub u: QPoly,
    pub v: QPoly,
    pub m: usize,
}

/// `f = D(g) + h`; `obstructed_at` is the exponent of `v` at which the
/// modular system had no solution, with `g` and `h` the partial result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub g: BasisVector,
    pub h: BasisVector,
    pub steps: Vec<Vec<QPoly>>,
    pub obstructed_at: Option<usize>,
}

impl Reduction {
    pub fn into_result(self) -> Result<Reduction> {
        match self.obstructed_at {
            Some(m) => Err(Error::ReductionObstruction { m }),
            None => Ok(self),
        }
    }
}

fn basis_matrix(basis: &[BasisElement]) -> Result<Matrix<RatFun>> {
    let r = basis.len();
    if r == 0 || basis.iter().any(|b| b.dim() != r) {
        return Err(Error::ShapeMismatch(format!("{} elements do not form a square system", r)));
    }
    Ok(Matrix::from_rows(basis.iter().map(|b| b.coeffs().to_vec()).collect()))
}

pub fn derivative_matrix(l: &OrePoly, basis: &[BasisElement]) -> Result<DerivativeMatrix> {
    let inv = basis_matrix(basis)?.inverse()?;
    let rows = basis
        .iter()
        .map(|b| Ok(b.d_times(&RatFun::one(), l)?.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(rows).mul(&inv)?.into_rows();
    Ok(DerivativeMatrix { operator: l.clone(), basis: basis.to_vec(), m })
}

impl BasisVector {
    pub fn new(numerators: Vec<QPoly>, u: QPoly, v: QPoly, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadDenominatorShape("the exponent m must be positive".into()));
        }
        if u.is_zero() || v.is_zero() {
            return Err(Error::BadDenominatorShape("zero denominator".into()));
        }
        if !poly_gcd(&v, &v.derivative()).is_constant() {
            return Err(Error::BadDenominatorShape(format!("v = {} is not squarefree", v.display("x"))));
        }
        if !poly_gcd(&u, &v).is_constant() {
            return Err(Error::BadDenominatorShape("u and v share a factor".into()));
        }
        Ok(BasisVector { numerators, u, v, m })
    }

    fn zero(r: usize, v: &QPoly, m: usize) -> Self {
        BasisVector { numerators: vec![QPoly::zero(); r], u: QPoly::one(), v: v.clone(), m }
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.iter().all(|a| a.is_zero())
    }

    /// Coefficients over `omega` as rational functions.
    pub fn coefficients(&self) -> Result<Vec<RatFun>> {
        let den = self.u.mul(&self.v.pow(self.m));
        self.numerators.iter().map(|a| RatFun::new(a.clone(), den.clone())).collect()
    }

    /// The element `sum_i c_i B_i` of the quotient.
    pub fn to_element(&self, basis: &[BasisElement]) -> Result<BasisElement> {
        let r = basis.len();
        let mut acc = BasisElement::new(Vec::new(), r)?;
        for (c, b) in self.coefficients()?.iter().zip(basis) {
            acc = acc.add(&b.scale(c));
        }
        Ok(acc)
    }
}

/// `D` applied to `sum_i c_i omega_i`, as coefficients over `omega`.
pub fn differentiate(dm: &DerivativeMatrix, c: &[RatFun]) -> Vec<RatFun> {
    let r = c.len();
    (0..r)
        .map(|j| {
            let mut acc = c[j].derivative();
            for (i, ci) in c.iter().enumerate() {
                acc = acc.add(&ci.mul(&dm.m[i][j]));
            }
            acc
        })
        .collect()
}

/// `f - D(g) - h == 0` over `Q(x)`.
pub fn verify_reduction(dm: &DerivativeMatrix, f: &BasisVector, red: &Reduction) -> Result<bool> {
    let fc = f.coefficients()?;
    let dg = differentiate(dm, &red.g.coefficients()?);
    let hc = red.h.coefficients()?;
    Ok((0..fc.len()).all(|i| fc[i].sub(&dg[i]).sub(&hc[i]).is_zero()))
}

fn reduce(p: &QPoly, v: &QPoly) -> QPoly {
    p.rem_q(v)
}

/// Reduces a rational function with denominator coprime to `v` modulo `v`.
fn reduce_ratfun(q: &RatFun, v: &QPoly) -> Result<QPoly> {
    let (g, s, _) = ext_gcd(q.den(), v);
    if !g.is_constant() {
        return Err(Error::BadDenominatorShape("the derivative matrix has a pole of order two at a root of v".into()));
    }
    let inv = s.scale(&(Rational::one() / g.lc().unwrap().clone()));
    Ok(reduce(&q.num().mul(&inv), v))
}

/// Solves `A b = a` over `Q[x]/<v>` for squarefree `v`, splitting `v`
/// when a zero divisor appears and recombining by CRT.
fn solve_mod(a: &[Vec<QPoly>], rhs: &[QPoly], v: &QPoly) -> Result<Option<Vec<QPoly>>> {
    let k: Arc<NumberField> = NumberField::new(v, "x")?;
    let lift = |p: &QPoly| NfElem::new(&k, p);
    let rows: Vec<Vec<NfElem>> = a.iter().map(|row| row.iter().map(lift).collect()).collect();
    let b: Vec<NfElem> = rhs.iter().map(lift).collect();
    let n = a.first().map_or(0, |r| r.len());
    match linsolve(&Matrix::from_rows_with(rows, n, &NfElem::zero(&k))?, &b) {
        Ok(sol) => Ok(sol.map(|s| s.iter().map(|e| e.rep().clone()).collect())),
        Err(Error::Split(ev)) => {
            let mut acc: Option<(QPoly, Vec<QPoly>)> = None;
            for f in &ev.factors {
                let af: Vec<Vec<QPoly>> = a.iter().map(|row| row.iter().map(|p| reduce(p, f)).collect()).collect();
                let bf: Vec<QPoly> = rhs.iter().map(|p| reduce(p, f)).collect();
                let Some(sf) = solve_mod(&af, &bf, f)? else {
                    return Ok(None);
                };
                acc = Some(match acc {
                    None => (f.clone(), sf),
                    Some((m, sm)) => {
                        let joined = sm.iter().zip(&sf).map(|(x1, x2)| crt(x1, &m, x2, f)).collect();
                        (m.mul(f), joined)
                    }
                });
            }
            Ok(acc.map(|(_, s)| s))
        }
        Err(e) => Err(e),
    }
}

/// The residue modulo `m1 * m2` of `x1 mod m1` and `x2 mod m2`.
fn crt(x1: &QPoly, m1: &QPoly, x2: &QPoly, m2: &QPoly) -> QPoly {
    let (g, s, _) = ext_gcd(m1, m2);
    let s = s.scale(&(Rational::one() / g.lc().unwrap().clone()));
    // x = x1 + m1 * s * (x2 - x1) with s m1 = 1 mod m2
    let t = s.mul(&x2.sub(x1)).rem_q(m2);
    x1.add(&m1.mul(&t)).rem_q(&m1.mul(m2))
}

/// Lowers the power of `v` step by step down to one.
pub fn hermite_reduce(dm: &DerivativeMatrix, f: &BasisVector) -> Result<Reduction> {
    let f = BasisVector::new(f.numerators.clone(), f.u.clone(), f.v.clone(), f.m)?;
    let r = dm.basis.len();
    if f.numerators.len() != r {
        return Err(Error::ShapeMismatch(format!("{} numerators for a basis of {} elements", f.numerators.len(), r)));
    }
    let v = &f.v;
    let dv = v.derivative();
    let vm: Vec<Vec<RatFun>> = dm.m.iter().map(|row| row.iter().map(|c| c.mul_poly(v)).collect()).collect();
    let mut g = BasisVector::zero(r, v, f.m - 1);
    let mut steps = Vec::new();
    let mut a = f.numerators.clone();
    let mut u = f.u.clone();
    let mut m = f.m;
    while m > 1 {
        let k = Rational::from_integer(((m - 1) as i64).into());
        // a_i = u sum_j (v M_ji - (m - 1) v' delta_ij) b_j  mod v
        let mut rows = Vec::with_capacity(r);
        for i in 0..r {
            let mut row = Vec::with_capacity(r);
            for j in 0..r {
                let mut e = reduce_ratfun(&vm[j][i], v)?;
                if i == j {
                    e = e.sub(&dv.scale(&k));
                }
                row.push(reduce(&u.mul(&e), v));
            }
            rows.push(row);
        }
        let rhs: Vec<QPoly> = a.iter().map(|p| reduce(p, v)).collect();
        let Some(b) = solve_mod(&rows, &rhs, v)? else {
            break;
        };
        // N = a - u (v b' + v M^T b - (m - 1) v' b), c = N / v
        let mut c = Vec::with_capacity(r);
        for i in 0..r {
            let mut t = RatFun::from_poly(v.mul(&b[i].derivative()).sub(&dv.mul(&b[i]).scale(&k)));
            for j in 0..r {
                t = t.add(&vm[j][i].mul_poly(&b[j]));
            }
            let n = RatFun::from_poly(a[i].clone()).sub(&t.mul_poly(&u));
            c.push(n.div(&RatFun::from_poly(v.clone()))?);
        }
        let mut den = QPoly::one();
        for ci in &c {
            den = den.mul(&ci.den().divrem_q(&poly_gcd(&den, ci.den())).0);
        }
        a = c.iter().map(|ci| ci.num().mul(&den.divrem_q(ci.den()).0)).collect();
        u = u.mul(&den);
        let shift = v.pow(f.m - m);
        for (gi, bi) in g.numerators.iter_mut().zip(&b) {
            *gi = gi.add(&bi.mul(&shift));
        }
        steps.push(b);
        m -= 1;
    }
    let h = BasisVector { numerators: a, u, v: v.clone(), m };
    let obstructed_at = if m > 1 { Some(m) } else { None };
    Ok(Reduction { g, h, steps, obstructed_at })
}
