//! Local solutions at regular singular points: indicial data, truncated
//! fundamental systems, Wronskian valuations and truncation bounds.

mod frobenius;
mod shifted;

pub use frobenius::FrobeniusSystem;
pub use shifted::{norm_polynomial, polynomial_coefficients, PointKind, ShiftedOperator};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactmath::{frac, to_i64, NfElem, NumberField, Poly, Rational};
use crate::logseries::{first_violation, is_integral, point_label, IotaPolicy, LogSeries};
use crate::oreops::{apply_to_series, laurent_valuation, BasisElement, OrePoly};

/// Default cap on the number of series terms used for a Wronskian.
pub const DEFAULT_MAX_WRONSKIAN_TERMS: usize = 512;

/// Indicial polynomial of `L` at the point of `field`, in falling
/// factorial form expanded to the power basis.
pub fn indicial_polynomial(l: &OrePoly, field: &Arc<NumberField>) -> Result<Poly<NfElem>> {
    Ok(ShiftedOperator::new(l, field)?.indicial().clone())
}

pub fn classify_point(l: &OrePoly, field: &Arc<NumberField>) -> Result<PointKind> {
    ShiftedOperator::new(l, field)?.kind()
}

/// Local exponents with multiplicities at a regular singular or ordinary
/// point.
pub fn local_exponents(l: &OrePoly, field: &Arc<NumberField>) -> Result<Vec<(Rational, usize)>> {
    ShiftedOperator::new(l, field)?.exponents()
}

/// Fundamental system at the point with every term of exponent `< upto`.
pub fn fundamental_system(l: &OrePoly, field: &Arc<NumberField>, upto: &Rational) -> Result<Vec<LogSeries>> {
    let mut sys = FrobeniusSystem::new(ShiftedOperator::new(l, field)?)?;
    (0..sys.len()).map(|i| sys.solution(i, upto)).collect()
}

/// Determinant of a square matrix of series by Laplace expansion over
/// column subsets.
pub fn series_determinant(m: &[Vec<LogSeries>]) -> Result<LogSeries> {
    let n = m.len();
    let field = m.first().and_then(|row| row.first()).map(|s| s.field().clone());
    let Some(field) = field else {
        return Err(Error::ShapeMismatch("empty matrix".into()));
    };
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch("matrix is not square".into()));
    }
    let one = LogSeries::monomial(&field, Rational::from_integer(0.into()), 0, NfElem::one(&field));
    let mut dp: Vec<Option<LogSeries>> = vec![None; 1 << n];
    dp[0] = Some(one);
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = LogSeries::zero(&field);
        let mut pos = 0;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let minor = dp[mask ^ (1 << col)].as_ref().unwrap();
            let term = m[row][col].mul(minor)?;
            acc = if (row + pos).is_multiple_of(2) { acc.add(&term)? } else { acc.sub(&term)? };
            pos += 1;
        }
        dp[mask] = Some(acc);
    }
    let det = dp.pop().unwrap().unwrap();
    Ok(det)
}

/// `det(B_i . y_j)` for elements `B_i` of the quotient and the fundamental
/// system `y_j` known below `upto`.
pub fn generalized_wronskian(
    l: &OrePoly,
    field: &Arc<NumberField>,
    elems: &[BasisElement],
    upto: &Rational,
) -> Result<LogSeries> {
    let ys = fundamental_system(l, field, upto)?;
    if elems.len() != ys.len() {
        return Err(Error::ShapeMismatch(format!("{} elements for {} solutions", elems.len(), ys.len())));
    }
    let rows = elems
        .iter()
        .map(|b| ys.iter().map(|y| apply_to_series(b, y, upto)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    series_determinant(&rows)
}

fn lowest_known(w: &LogSeries, class: &Rational) -> Option<Rational> {
    let t = w.cutoff(class);
    w.iter()
        .find(|(mu, _, _)| frac(mu) == *class)
        .map(|(mu, _, _)| mu.clone())
        .filter(|mu| t.is_none_or(|t| mu < t))
}

/// Valuation of the Wronskian of the local fundamental system, from
/// series with `r` terms doubled up to `max_terms`.
pub fn wronskian_valuation(l: &OrePoly, field: &Arc<NumberField>, max_terms: usize) -> Result<Rational> {
    let op = ShiftedOperator::new(l, field)?;
    let r = op.order();
    let mut sys = FrobeniusSystem::new(op)?;
    let exps: Vec<Rational> = (0..r).map(|i| sys.exponent(i)).collect();
    let sum: Rational = exps.iter().sum();
    let class = frac(&sum);
    let top = exps.iter().max().unwrap().clone();
    let mut terms = r.max(1);
    loop {
        let upto = &top + Rational::from_integer(terms.into());
        let ys = (0..r).map(|i| sys.solution(i, &upto)).collect::<Result<Vec<_>>>()?;
        let mut rows = vec![ys.clone()];
        for k in 1..r {
            let prev: &Vec<LogSeries> = &rows[k - 1];
            rows.push(prev.iter().map(|y| y.derivative()).collect());
        }
        let w = series_determinant(&rows)?;
        if let Some(v) = lowest_known(&w, &class) {
            return Ok(v);
        }
        if terms >= max_terms {
            return Err(Error::CannotBoundWronskian { point: point_label(field), terms: max_terms });
        }
        terms = (terms * 2).min(max_terms);
    }
}

fn excess(l: &OrePoly, field: &Arc<NumberField>, val: &Rational) -> Result<i64> {
    let r = l.order()? as i64;
    let sum: Rational = local_exponents(l, field)?
        .into_iter()
        .map(|(nu, mult)| nu * Rational::from_integer(mult.into()))
        .sum();
    let m = val - sum + Rational::from_integer((r * (r - 1) / 2).into());
    Ok(to_i64(&m).expect("integral excess"))
}

/// `m = val W - sum(nu_i) + r(r-1)/2`, the excess of the Wronskian
/// valuation over its generic value.
pub fn wronskian_valuation_m(l: &OrePoly, field: &Arc<NumberField>, max_terms: usize) -> Result<i64> {
    excess(l, field, &wronskian_valuation(l, field, max_terms)?)
}

/// Everything needed to test local integrality with finitely many terms.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub field: Arc<NumberField>,
    pub kind: PointKind,
    pub exponents: Vec<Rational>,
    pub log_degrees: Vec<u32>,
    pub wronskian_valuation: Rational,
    pub m: i64,
    /// `N_i`: terms of `y_i` beyond `z^(nu_i + N_i)` never decide integrality.
    pub bounds: Vec<i64>,
    /// `y_i` with every exponent `<= nu_i + N_i` and unknown beyond.
    pub solutions: Vec<LogSeries>,
}

pub fn truncation_bounds(
    l: &OrePoly,
    field: &Arc<NumberField>,
    policy: &IotaPolicy,
    max_terms: usize,
) -> Result<LocalData> {
    truncation_bounds_scaled(l, field, policy, max_terms, 1)
}

/// As [`truncation_bounds`], keeping terms up to `nu_i + factor * N_i`.
pub fn truncation_bounds_scaled(
    l: &OrePoly,
    field: &Arc<NumberField>,
    policy: &IotaPolicy,
    max_terms: usize,
    factor: i64,
) -> Result<LocalData> {
    let op = ShiftedOperator::new(l, field)?;
    let kind = op.kind()?;
    let r = op.order();
    let mut sys = FrobeniusSystem::new(op)?;
    let wval = wronskian_valuation(l, field, max_terms)?;
    let m = excess(l, field, &wval)?;
    let exponents: Vec<Rational> = (0..r).map(|i| sys.exponent(i)).collect();
    let log_degrees: Vec<u32> = (0..r).map(|i| sys.log_degree(i)).collect();
    let mut bounds = Vec::with_capacity(r);
    let mut solutions = Vec::with_capacity(r);
    for i in 0..r {
        let mut worst = i64::MIN;
        for nu_j in &exponents {
            let diff = &exponents[i] - nu_j;
            for k in 0..log_degrees[i] + r as u32 {
                let gap = to_i64(&(policy.eval(&diff, k) - &diff)).expect("same class");
                worst = worst.max(gap);
            }
        }
        let n = m + worst;
        bounds.push(n);
        let upto = &exponents[i] + Rational::from_integer((factor * n + 1).into());
        solutions.push(sys.solution(i, &upto)?);
    }
    Ok(LocalData {
        field: field.clone(),
        kind,
        exponents,
        log_degrees,
        wronskian_valuation: wval,
        m,
        bounds,
        solutions,
    })
}

/// First non-integral term `(solution index, mu, j)` of `B . y` over the
/// local fundamental system, computed from scratch with enough terms.
pub fn local_violation(
    l: &OrePoly,
    field: &Arc<NumberField>,
    b: &BasisElement,
    policy: &IotaPolicy,
) -> Result<Option<(usize, Rational, u32)>> {
    let op = ShiftedOperator::new(l, field)?;
    let horizon = policy.max_value() + Rational::from_integer(1.into());
    let mut extra = 0i64;
    for (k, c) in b.coeffs().iter().enumerate() {
        if !c.is_zero() {
            extra = extra.max(k as i64 - laurent_valuation(c, field)?);
        }
    }
    let upto = &horizon + Rational::from_integer(extra.max(0).into());
    let mut sys = FrobeniusSystem::new(op)?;
    for i in 0..sys.len() {
        let y = sys.solution(i, &upto)?;
        let by = apply_to_series(b, &y, &horizon)?;
        if !is_integral(&by, policy)? {
            let (mu, j) = first_violation(&by, policy).expect("violation");
            return Ok(Some((i, mu, j)));
        }
    }
    Ok(None)
}

/// Whether `B . y` is integral at the point for every local solution `y`.
/// Irregular points are never integral.
pub fn is_locally_integral(
    l: &OrePoly,
    field: &Arc<NumberField>,
    b: &BasisElement,
    policy: &IotaPolicy,
) -> Result<bool> {
    if classify_point(l, field)? == PointKind::Irregular {
        return Ok(false);
    }
    Ok(local_violation(l, field, b, policy)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rint, QPoly, RatFun};
    use crate::logseries::rational_expansion;
    use crate::oreops::apply_operator;

    fn op(cs: &[&[i64]]) -> OrePoly {
        OrePoly::from_polys(cs.iter().map(|c| QPoly::from_ints(c)).collect())
    }

    fn at(a: i64) -> Arc<NumberField> {
        NumberField::rational_point(&rint(a))
    }

    fn two_point() -> OrePoly {
        op(&[&[2, -1], &[4, -4, 2], &[0, -4, 4]])
    }

    fn logarithmic() -> OrePoly {
        op(&[&[-1], &[0, 1], &[], &[0, 0, 0, 1]])
    }

    fn three_classes() -> OrePoly {
        op(&[&[-450], &[0, 373], &[0, 0, -134], &[0, 0, 0, 24]])
    }

    /// `-Res(l_{r-1} / l_r)` at the point.
    fn residue_oracle(l: &OrePoly, field: &Arc<NumberField>) -> Rational {
        let r = l.order().unwrap();
        let q = l.coeff(r - 1).div(&l.coeff(r)).unwrap();
        let s = rational_expansion(&q, field, 3).unwrap();
        -s.coeff(&rint(-1), 0).as_rational().unwrap()
    }

    #[test]
    fn wronskian_valuation_matches_residue() {
        for (l, a) in [(two_point(), 0), (two_point(), 1), (logarithmic(), 0), (three_classes(), 0), (two_point(), 3)] {
            let k = at(a);
            let v = wronskian_valuation(&l, &k, DEFAULT_MAX_WRONSKIAN_TERMS).unwrap();
            assert_eq!(v, residue_oracle(&l, &k), "{} at {}", l, a);
        }
        assert_eq!(wronskian_valuation_m(&three_classes(), &at(0), 512).unwrap(), 0);
        assert_eq!(wronskian_valuation_m(&logarithmic(), &at(0), 512).unwrap(), 0);
        assert_eq!(wronskian_valuation_m(&two_point(), &at(0), 512).unwrap(), 0);
    }

    #[test]
    fn apparent_singularity_has_positive_excess() {
        // x D^2 - 2 D kills 1 and x^3: exponents 0, 3 and val W = 2
        let l = op(&[&[], &[-2], &[0, 1]]);
        assert_eq!(wronskian_valuation(&l, &at(0), 512).unwrap(), rint(2));
        assert_eq!(wronskian_valuation_m(&l, &at(0), 512).unwrap(), 0);
        // x D^2 - D + x kills cos-like series with exponents 0, 2 and no log
        let l = op(&[&[0, 1], &[-1], &[0, 1]]);
        assert_eq!(wronskian_valuation_m(&l, &at(0), 512).unwrap(), 0);
    }

    #[test]
    fn wronskian_cap_reported() {
        assert!(matches!(
            wronskian_valuation(&three_classes(), &at(0), 2),
            Ok(_) | Err(Error::CannotBoundWronskian { .. })
        ));
    }

    #[test]
    fn wronskian_satisfies_first_order_equation() {
        // l_r W' + l_{r-1} W = 0
        let l = two_point();
        let k = at(1);
        let upto = rint(8);
        let elems: Vec<BasisElement> =
            (0..2).map(|i| BasisElement::monomial(RatFun::one(), i, 2)).collect();
        let w = generalized_wronskian(&l, &k, &elems, &upto).unwrap();
        let first = OrePoly::new(vec![l.coeff(1), l.coeff(2)]);
        let res = apply_operator(&first, &w, &rint(5)).unwrap();
        assert!(res.has_no_terms());
    }

    #[test]
    fn local_data_examples() {
        let p = IotaPolicy::default();
        let d = truncation_bounds(&logarithmic(), &at(0), &p, 512).unwrap();
        assert_eq!(d.kind, PointKind::RegularSingular);
        assert_eq!(d.exponents, vec![rint(1); 3]);
        assert_eq!(d.log_degrees, vec![0, 1, 2]);
        assert_eq!(d.m, 0);
        assert_eq!(d.bounds, vec![1, 1, 1]);
        assert_eq!(d.solutions[2].to_string(), "x*log(x)^2 + O(x^3)");
        let d = truncation_bounds(&op(&[&[1], &[-1]]), &at(0), &p, 512).unwrap();
        assert_eq!(d.kind, PointKind::Ordinary);
        assert_eq!(d.bounds, vec![0]);
        assert_eq!(d.solutions[0].to_string(), "1 + O(x)");
        let d = truncation_bounds(&two_point(), &at(1), &p, 512).unwrap();
        assert_eq!(d.exponents, vec![rint(0), rat(1, 2)]);
        assert_eq!(d.m, 0);
    }

    #[test]
    fn solutions_are_annihilated() {
        for (l, a) in [(two_point(), 0), (two_point(), 1), (logarithmic(), 0), (three_classes(), 0)] {
            let k = at(a);
            for y in fundamental_system(&l, &k, &rint(10)).unwrap() {
                let ly = apply_operator(&l, &y, &rint(7)).unwrap();
                assert!(ly.has_no_terms(), "{} at {}: {}", l, a, ly);
            }
        }
    }

    #[test]
    fn local_integrality() {
        let p = IotaPolicy::default();
        let l = two_point();
        let one = BasisElement::monomial(RatFun::one(), 0, 2);
        let d = BasisElement::monomial(RatFun::one(), 1, 2);
        assert!(is_locally_integral(&l, &at(1), &one, &p).unwrap());
        assert!(!is_locally_integral(&l, &at(1), &d, &p).unwrap());
        let xd = BasisElement::monomial(RatFun::from_poly(QPoly::from_ints(&[-1, 1])), 1, 2);
        assert!(is_locally_integral(&l, &at(1), &xd, &p).unwrap());
        let inv = BasisElement::monomial(RatFun::new(QPoly::one(), QPoly::x()).unwrap(), 0, 2);
        assert!(!is_locally_integral(&l, &at(0), &inv, &p).unwrap());
        let irregular_at_zero = op(&[&[-1, -2], &[0, 1, 2], &[0, 0, 0, 1, 1]]);
        let one = BasisElement::monomial(RatFun::one(), 0, 2);
        assert!(!is_locally_integral(&irregular_at_zero, &at(0), &one, &p).unwrap());
    }
}
