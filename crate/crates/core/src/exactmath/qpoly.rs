use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, rint, Poly, Rational};
use crate::error::{Error, Result};

pub type QPoly = Poly<Rational>;

impl Poly<Rational> {
    /// The variable itself.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![rint(0), rint(1)])
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| rint(c)).collect())
    }

    pub fn from_rational(c: Rational) -> Self {
        Poly::constant(c)
    }

    pub fn one() -> Self {
        Poly::constant(rint(1))
    }

    /// `x - a`
    pub fn linear_root(a: &Rational) -> Self {
        Poly::from_coeffs(vec![-a.clone(), rint(1)])
    }

    pub fn monic_q(&self) -> Self {
        self.monic().expect("rational leading coefficients are invertible")
    }

    pub fn divrem_q(&self, d: &Self) -> (Self, Self) {
        self.divrem(d).expect("division by a nonzero rational polynomial")
    }

    pub fn rem_q(&self, d: &Self) -> Self {
        self.divrem_q(d).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem_q(self).is_zero()
    }

    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient; returns `(content, primitive)` with `self = content * primitive`.
    pub fn primitive_part(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (rint(0), Vec::new());
        }
        let l = self.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        (Rational::new(g, l), prim)
    }

    /// Multiplicity of `x - a` as a factor.
    pub fn root_multiplicity(&self, a: &Rational) -> usize {
        let lin = Self::linear_root(a);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (q, r) = p.divrem_q(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }

    pub fn display(&self, var: &str) -> PolyDisplay<'_> {
        PolyDisplay { poly: self, var: var.to_string() }
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs().iter().filter(|c| !c.is_zero()).count()
    }
}

/// Monic gcd over Q; `gcd(p, 0) = monic(p)`.
pub fn poly_gcd(p: &QPoly, q: &QPoly) -> QPoly {
    p.gcd(q).expect("gcd over Q never splits")
}

/// Extended Euclid: `(g, s, t)` with `s*a + t*b = g` and `g` monic.
pub fn ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
    let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem_q(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = s0.sub(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = t0.sub(&q.mul(&t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.lc().cloned() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = lc.recip();
            (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
        }
    }
}

/// Monic polynomial with the roots of `p`, each simple.
pub fn squarefree_part(p: &QPoly) -> Result<QPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(QPoly::one());
    }
    let g = poly_gcd(p, &p.derivative());
    Ok(p.divrem_q(&g).0.monic_q())
}

/// Yun's algorithm: monic squarefree, pairwise coprime `(factor, multiplicity)`
/// with `p = lc * prod factor^multiplicity`.
pub fn squarefree_decomposition(p: &QPoly) -> Result<Vec<(QPoly, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    let dp = p.derivative();
    let mut a = poly_gcd(p, &dp);
    if p.is_constant() {
        return Ok(out);
    }
    let mut b = p.divrem_q(&a).0;
    let mut c = dp.divrem_q(&a).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    loop {
        a = poly_gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.monic_q(), i));
        }
        b = b.divrem_q(&a).0;
        if b.is_constant() {
            break;
        }
        c = d.divrem_q(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    Ok(out)
}

fn small_factor_divisors(n: &BigInt) -> Vec<BigInt> {
    // trial division; a leftover cofactor above the search limit is treated
    // as prime
    let mut n = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(2_000_000u32);
    while &p * &p <= n && p < limit {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

/// All rational roots of `p` with their multiplicities, ascending.
pub fn rational_roots(p: &QPoly) -> Result<Vec<(Rational, usize)>> {
    let s = squarefree_part(p)?;
    let (_, ints) = s.primitive_part();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(rint(0));
    }
    let ints = &ints[low..];
    if ints.len() > 1 {
        let a0 = &ints[0];
        let an = ints.last().unwrap();
        // Cauchy bound
        let bound = ints[..ints.len() - 1]
            .iter()
            .map(|c| Rational::new(c.abs(), an.abs()))
            .max()
            .unwrap_or_else(|| rint(0))
            + rint(1);
        let reduced = QPoly::from_coeffs(ints.iter().map(|c| Rational::from_integer(c.clone())).collect());
        let num_divs = small_factor_divisors(a0);
        let den_divs = small_factor_divisors(an);
        for d in &num_divs {
            for e in &den_divs {
                if !d.gcd(e).is_one() {
                    continue;
                }
                let cand = Rational::new(d.clone(), e.clone());
                if cand > bound {
                    continue;
                }
                for c in [cand.clone(), -cand] {
                    if reduced.eval(&c).is_zero() {
                        roots.push(c);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots.into_iter().map(|r| {
        let m = p.root_multiplicity(&r);
        (r, m)
    }).collect())
}

pub struct PolyDisplay<'a> {
    poly: &'a QPoly,
    var: String,
}

/// Formats `c * var^k` with `c > 0` (the sign is printed by the caller).
pub(crate) fn fmt_monomial(c: &Rational, k: usize, var: &str) -> String {
    let pow = match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{}^{}", var, k),
    };
    if k == 0 {
        fmt_rational(c)
    } else if c.is_one() {
        pow
    } else {
        format!("{}*{}", fmt_rational(c), pow)
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let body = fmt_monomial(&c.abs(), k, &self.var);
            match (first, neg) {
                (true, false) => write!(f, "{}", body)?,
                (true, true) => write!(f, "-{}", body)?,
                (false, false) => write!(f, " + {}", body)?,
                (false, true) => write!(f, " - {}", body)?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use proptest::prelude::*;

    fn qp(cs: &[i64]) -> QPoly {
        QPoly::from_ints(cs)
    }

    #[test]
    fn squarefree_examples() {
        // x^2 -> x
        assert_eq!(squarefree_part(&qp(&[0, 0, 1])).unwrap(), qp(&[0, 1]));
        // (x-1)^2 (x+1) -> x^2 - 1
        let p = qp(&[-1, 1]).pow(2).mul(&qp(&[1, 1]));
        assert_eq!(squarefree_part(&p).unwrap(), qp(&[-1, 0, 1]));
        // 2(2x-1)x -> x(x - 1/2)
        let p = qp(&[0, 1]).mul(&qp(&[-1, 2])).scale(&rint(2));
        let expected = QPoly::from_coeffs(vec![rint(0), rat(-1, 2), rint(1)]);
        assert_eq!(squarefree_part(&p).unwrap(), expected);
        // gcd(p, p') division oracle
        let g = poly_gcd(&p, &p.derivative());
        assert_eq!(p.divrem_q(&g).0.monic_q(), expected);
        assert!(matches!(squarefree_part(&QPoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&qp(&[0, 0, 1]), &qp(&[0, 1])), qp(&[0, 1]));
        assert_eq!(poly_gcd(&qp(&[-1, 1]), &qp(&[1, 1])), qp(&[1]));
        assert_eq!(poly_gcd(&qp(&[0, -1, 0, 1]), &qp(&[-1, 0, 1])), qp(&[-1, 0, 1]));
        assert_eq!(poly_gcd(&qp(&[0, 2]), &QPoly::zero()), qp(&[0, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // x^3 (x-1)^2 (x+2)
        let p = qp(&[0, 1]).pow(3).mul(&qp(&[-1, 1]).pow(2)).mul(&qp(&[2, 1])).scale(&rint(5));
        let d = squarefree_decomposition(&p).unwrap();
        assert_eq!(d, vec![(qp(&[2, 1]), 1), (qp(&[-1, 1]), 2), (qp(&[0, 1]), 3)]);
    }

    #[test]
    fn roots_of_indicial_example() {
        // 24 v(v-1)(v-2) - 134 v(v-1) + 373 v - 450
        let v = QPoly::x();
        let ff = |k: i64| (0..k).fold(QPoly::one(), |acc, i| acc.mul(&v.sub(&QPoly::from_ints(&[i]))));
        let p = ff(3).scale(&rint(24)).sub(&ff(2).scale(&rint(134))).add(&ff(1).scale(&rint(373))).sub(&qp(&[450]));
        let roots = rational_roots(&p).unwrap();
        assert_eq!(roots, vec![(rat(3, 2), 1), (rat(10, 3), 1), (rat(15, 4), 1)]);
        let p = qp(&[-1, 1]).pow(3).mul(&qp(&[2, 0, 1]));
        assert_eq!(rational_roots(&p).unwrap(), vec![(rint(1), 3)]);
    }

    #[test]
    fn printing() {
        let p = QPoly::from_coeffs(vec![rat(1, 2), rint(-2), rint(4)]);
        assert_eq!(p.display("x").to_string(), "4*x^2 - 2*x + 1/2");
        assert_eq!(qp(&[1, -1]).display("x").to_string(), "-x + 1");
        assert_eq!(QPoly::from_coeffs(vec![rint(0), rat(1, 3)]).display("x").to_string(), "1/3*x");
    }

    proptest! {
        #[test]
        fn squarefree_divides_and_is_squarefree(cs in proptest::collection::vec(-5i64..6, 1..6), ks in proptest::collection::vec(1usize..4, 1..4)) {
            let mut p = qp(&cs);
            prop_assume!(!p.is_zero());
            for (i, k) in ks.iter().enumerate() {
                p = p.mul(&qp(&[i as i64 - 1, 1]).pow(*k));
            }
            let s = squarefree_part(&p).unwrap();
            prop_assert!(s.divides(&p));
            prop_assert!(poly_gcd(&s, &s.derivative()).is_constant());
        }
    }
}
