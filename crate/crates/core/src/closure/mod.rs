//! Integral bases of `C(x)[D]/<L>`: the starting element `B_0`, the
//! stage-wise refinement loop, integrality certificates and module
//! comparison.

mod handles;

pub use handles::{handle_poly, point_handles, singular_handles};

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result, SplitEvent};
use crate::exactmath::{
    det, frac, linsolve, poly_gcd, squarefree_part, to_i64, Field, Matrix, NfElem, NumberField, QPoly, RatFun,
    Rational,
};
use crate::localsolver::{
    local_violation, polynomial_coefficients, truncation_bounds_scaled, LocalData, DEFAULT_MAX_WRONSKIAN_TERMS,
};
use crate::logseries::{defect, point_label, IotaPolicy, LogSeries};
use crate::oreops::{apply_to_series, laurent_valuation, lift_to_x, BasisElement, OrePoly};

#[derive(Clone, Debug)]
pub struct BasisOptions {
    pub max_wronskian_terms: usize,
    /// Threads used to speculate on the points of a sweep.
    pub jobs: usize,
    /// Re-check every output element against fresh local solutions.
    pub verify: bool,
    /// Local solutions keep terms up to `nu_i + truncation_factor * N_i`.
    pub truncation_factor: i64,
}

impl Default for BasisOptions {
    fn default() -> Self {
        BasisOptions { max_wronskian_terms: DEFAULT_MAX_WRONSKIAN_TERMS, jobs: 1, verify: true, truncation_factor: 1 }
    }
}

/// One accepted division of `B_d` by a factor of the leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub stage: usize,
    pub point: String,
    pub metric_before: i64,
    pub metric_after: i64,
}

#[derive(Clone, Debug)]
pub struct IntegralBasis {
    pub operator: OrePoly,
    pub elements: Vec<BasisElement>,
    pub policy: IotaPolicy,
    pub trace: Vec<Refinement>,
}

/// A term of `B . y` that is not integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: String,
    pub solution: usize,
    pub exponent: Rational,
    pub logpow: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub integral: bool,
    pub witness: Option<Witness>,
}

fn normalized(l: &OrePoly) -> Result<OrePoly> {
    l.order()?;
    Ok(OrePoly::from_polys(polynomial_coefficients(l)))
}

fn leading_squarefree(l: &OrePoly) -> Result<QPoly> {
    let r = l.order()?;
    squarefree_part(l.coeff(r).num())
}

/// Runs `f` at the point of `field`, splitting into the factor fields and
/// retrying whenever a zero divisor shows up.
fn per_point<T>(
    field: &Arc<NumberField>,
    f: &mut impl FnMut(&Arc<NumberField>) -> Result<T>,
) -> Result<Vec<(Arc<NumberField>, T)>> {
    match f(field) {
        Ok(v) => Ok(vec![(field.clone(), v)]),
        Err(Error::Split(ev)) => {
            let mut out = Vec::new();
            for k in point_handles(&ev.factors)? {
                out.extend(per_point(&k, f)?);
            }
            Ok(out)
        }
        Err(e) => Err(e),
    }
}

/// Local data at one root of every factor handle of the leading
/// coefficient.
pub fn singular_local_data(l: &OrePoly, policy: &IotaPolicy, max_terms: usize) -> Result<Vec<LocalData>> {
    let l = normalized(l)?;
    let mut out = Vec::new();
    for h in singular_handles(&leading_squarefree(&l)?)? {
        for (_, d) in per_point(&h, &mut |k| truncation_bounds_scaled(&l, k, policy, max_terms, 1))? {
            out.push(d);
        }
    }
    Ok(out)
}

/// Runs `f` at some root of the modulus, moving to the first factor
/// whenever the modulus turns out to be reducible.
pub fn at_some_root<T>(field: &Arc<NumberField>, mut f: impl FnMut(&Arc<NumberField>) -> Result<T>) -> Result<T> {
    let mut k = field.clone();
    loop {
        match f(&k) {
            Err(Error::Split(ev)) => k = point_handles(&ev.factors)?.remove(0),
            other => return other,
        }
    }
}

/// `B_0 = prod p^(e_p)` with `e_p` the largest defect of a local solution
/// at a root of `p`.
pub fn compute_b0(l: &OrePoly, policy: &IotaPolicy) -> Result<BasisElement> {
    compute_b0_with(l, policy, &BasisOptions::default())
}

fn compute_b0_with(l: &OrePoly, policy: &IotaPolicy, opts: &BasisOptions) -> Result<BasisElement> {
    let l = normalized(l)?;
    let r = l.order()?;
    let mut b0 = RatFun::one();
    for h in singular_handles(&leading_squarefree(&l)?)? {
        let parts = per_point(&h, &mut |k| {
            let local = truncation_bounds_scaled(&l, k, policy, opts.max_wronskian_terms, opts.truncation_factor)?;
            max_defect(&local, policy)
        })?;
        for (k, e) in parts {
            b0 = b0.mul(&RatFun::from_poly(handle_poly(&k)).pow(e)?);
        }
    }
    Ok(BasisElement::monomial(b0, 0, r))
}

fn max_defect(local: &LocalData, policy: &IotaPolicy) -> Result<i64> {
    let mut e = i64::MIN;
    for t in &local.solutions {
        e = e.max(defect(t, policy)?);
    }
    Ok(e)
}

fn horizon(policy: &IotaPolicy) -> Rational {
    policy.max_value() + Rational::one()
}

/// `B . t_i` for every local solution, the `t_i` read as exact.
fn element_series(b: &BasisElement, local: &LocalData, policy: &IotaPolicy) -> Result<Vec<LogSeries>> {
    let h = horizon(policy);
    local.solutions.iter().map(|t| apply_to_series(b, &t.drop_cutoffs(), &h)).collect()
}

/// Linear conditions on `a_0, ..., a_{d-1}` making
/// `(a_0 B_0 + ... + a_{d-1} B_{d-1} + B_d) / (x - alpha)` integral:
/// every non-integral position of the quotient gets coefficient zero.
pub fn ansatz_system(
    lower: &[Vec<LogSeries>],
    top: &[LogSeries],
    policy: &IotaPolicy,
) -> (Vec<Vec<NfElem>>, Vec<NfElem>) {
    let d = lower.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, s) in top.iter().enumerate() {
        let mut positions: Vec<(Rational, u32)> = Vec::new();
        for series in lower.iter().map(|per| &per[i]).chain(std::iter::once(s)) {
            for (mu, j, _) in series.iter() {
                if *mu < policy.eval(mu, j) + Rational::one() && !positions.contains(&(mu.clone(), j)) {
                    positions.push((mu.clone(), j));
                }
            }
        }
        positions.sort();
        for (mu, j) in positions {
            rows.push((0..d).map(|k| lower[k][i].coeff(&mu, j)).collect());
            rhs.push(s.coeff(&mu, j).negated());
        }
    }
    (rows, rhs)
}

/// Solves the ansatz at one point: the polynomial lifts of `a_k`, or
/// `None` when no combination can be divided by the handle.
fn attempt(
    lower: &[Vec<LogSeries>],
    bd: &BasisElement,
    local: &LocalData,
    policy: &IotaPolicy,
) -> Result<Option<Vec<QPoly>>> {
    let top = element_series(bd, local, policy)?;
    let d = lower.len();
    let (rows, rhs) = ansatz_system(lower, &top, policy);
    if rows.is_empty() {
        return Ok(Some(vec![QPoly::zero(); d]));
    }
    let zero = NfElem::zero(&local.field);
    let a = Matrix::from_rows_with(rows, d, &zero)?;
    Ok(linsolve(&a, &rhs)?.map(|sol| sol.iter().map(lift_to_x).collect()))
}

struct PointState {
    field: Arc<NumberField>,
    local: LocalData,
    /// `B_k . t_i` for the finished elements, indexed `[k][i]`.
    lower: Vec<Vec<LogSeries>>,
}

struct Run<'a> {
    l: &'a OrePoly,
    r: usize,
    policy: &'a IotaPolicy,
    opts: &'a BasisOptions,
    points: Vec<PointState>,
}

impl Run<'_> {
    fn local(&self, field: &Arc<NumberField>) -> Result<LocalData> {
        truncation_bounds_scaled(self.l, field, self.policy, self.opts.max_wronskian_terms, self.opts.truncation_factor)
    }

    fn position(&self, field: &Arc<NumberField>) -> usize {
        self.points.iter().position(|p| Arc::ptr_eq(&p.field, field) || p.field == *field).expect("known point")
    }

    /// Replaces a point by the factors its modulus split into.
    fn split(&mut self, field: &Arc<NumberField>, ev: &SplitEvent, basis: &[BasisElement]) -> Result<Vec<Arc<NumberField>>> {
        let at = self.position(field);
        self.points.remove(at);
        let mut fresh = Vec::new();
        for k in point_handles(&ev.factors)? {
            fresh.extend(self.add_point(k, basis)?);
        }
        self.points.sort_by_key(|p| handles::handle_key(&p.field));
        fresh.sort_by_key(handles::handle_key);
        Ok(fresh)
    }

    fn add_point(&mut self, field: Arc<NumberField>, basis: &[BasisElement]) -> Result<Vec<Arc<NumberField>>> {
        match self.local(&field).and_then(|local| {
            let lower = basis.iter().map(|b| element_series(b, &local, self.policy)).collect::<Result<Vec<_>>>()?;
            Ok(PointState { field: field.clone(), local, lower })
        }) {
            Ok(p) => {
                self.points.push(p);
                Ok(vec![field])
            }
            Err(Error::Split(ev)) => {
                let mut out = Vec::new();
                for k in point_handles(&ev.factors)? {
                    out.extend(self.add_point(k, basis)?);
                }
                Ok(out)
            }
            Err(e) => Err(e),
        }
    }

    /// Records the newly finished `B_k` in every point's cache.
    fn finish_element(&mut self, b: &BasisElement, basis: &[BasisElement]) -> Result<()> {
        loop {
            let mut failed = None;
            for p in self.points.iter_mut() {
                if p.lower.len() == basis.len() {
                    continue;
                }
                match element_series(b, &p.local, self.policy) {
                    Ok(s) => p.lower.push(s),
                    Err(Error::Split(ev)) => {
                        failed = Some((p.field.clone(), ev));
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            match failed {
                None => return Ok(()),
                Some((k, ev)) => {
                    self.split(&k, &ev, basis)?;
                }
            }
        }
    }

    /// `n = sum_alpha m_alpha` for `B_0, ..., B_d` completed by
    /// `(sD)^k B_d`, weighted by handle degree.
    fn metric(&self, basis: &[BasisElement], bd: &BasisElement) -> Result<i64> {
        let d = basis.len();
        let tail = (self.r - 1 - d) as i64;
        let mut n = 0;
        for p in &self.points {
            let k = &p.field;
            let mut v = p.local.wronskian_valuation.clone();
            for b in basis {
                v += Rational::from_integer(laurent_valuation(b.lc().unwrap(), k)?.into());
            }
            let vd = laurent_valuation(bd.lc().unwrap(), k)?;
            v += Rational::from_integer(((1 + tail) * vd + tail * (tail + 1) / 2).into());
            let m = to_i64(&(&v - self.policy.eval(&frac(&v), 0))).expect("same class");
            n += m * k.degree() as i64;
        }
        Ok(n)
    }

    fn metric_retrying(&mut self, basis: &[BasisElement], bd: &BasisElement) -> Result<i64> {
        loop {
            match self.metric(basis, bd) {
                Err(Error::Split(ev)) => {
                    let k = self.points.iter().find(|p| ev.factors.iter().all(|f| f.divides(p.field.modulus()))).map(|p| p.field.clone());
                    match k {
                        Some(k) => {
                            self.split(&k, &ev, basis)?;
                        }
                        None => return Err(Error::Split(ev)),
                    }
                }
                other => return other,
            }
        }
    }

    fn speculate(&self, queue: &[Arc<NumberField>], bd: &BasisElement) -> Vec<Result<Option<Vec<QPoly>>>> {
        let work: Vec<&PointState> = queue.iter().map(|k| &self.points[self.position(k)]).collect();
        let jobs = self.opts.jobs.max(1);
        let chunk = work.len().div_ceil(jobs).max(1);
        let policy = self.policy;
        std::thread::scope(|scope| {
            let handles: Vec<_> = work
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter().map(|p| attempt(&p.lower, bd, &p.local, policy)).collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    }

    /// Divides `B_d` by handles of `lc(L)` until no handle admits a
    /// further division.
    fn refine_stage(&mut self, d: usize, basis: &[BasisElement], mut bd: BasisElement, trace: &mut Vec<Refinement>) -> Result<BasisElement> {
        let mut queue: Vec<Arc<NumberField>> = self.points.iter().map(|p| p.field.clone()).collect();
        while !queue.is_empty() {
            let sweep = queue.clone();
            let mut spec = if self.opts.jobs > 1 && sweep.len() > 1 {
                Some(self.speculate(&sweep, &bd))
            } else {
                None
            };
            let mut committed = false;
            for (idx, k) in sweep.iter().enumerate() {
                if !queue.contains(k) {
                    continue;
                }
                let guess = spec.as_mut().map(|s| std::mem::replace(&mut s[idx], Ok(None)));
                let outcome = match guess {
                    Some(Ok(None)) => Ok(None),
                    Some(g) if !committed => g,
                    _ => {
                        let p = &self.points[self.position(k)];
                        attempt(&p.lower, &bd, &p.local, self.policy)
                    }
                };
                match outcome {
                    Ok(Some(a)) => {
                        let p = handle_poly(k);
                        let mut next = bd.clone();
                        for (ak, bk) in a.iter().zip(basis) {
                            next = next.add(&bk.scale(&RatFun::from_poly(ak.clone())));
                        }
                        let next = next.scale(&RatFun::new(QPoly::one(), p)?);
                        let before = self.metric_retrying(basis, &bd)?;
                        let after = self.metric_retrying(basis, &next)?;
                        assert!(after < before, "termination metric did not decrease: {} -> {}", before, after);
                        assert!(after >= 0, "termination metric became negative");
                        trace.push(Refinement { stage: d, point: point_label(k), metric_before: before, metric_after: after });
                        bd = next;
                        committed = true;
                    }
                    Ok(None) => queue.retain(|q| q != k),
                    Err(Error::Split(ev)) => {
                        let fresh = self.split(k, &ev, basis)?;
                        let at = queue.iter().position(|q| q == k).unwrap();
                        queue.splice(at..at + 1, fresh);
                    }
                    Err(e) => return Err(e),
                }
            }
            queue.sort_by_key(handles::handle_key);
        }
        Ok(bd)
    }
}

/// Makes the numerator of the leading coefficient monic.
fn canonical(b: &BasisElement) -> BasisElement {
    match b.lc() {
        Some(c) => b.scale(&RatFun::constant(Rational::one() / c.num().lc().unwrap().clone())),
        None => b.clone(),
    }
}

pub fn integral_basis(l: &OrePoly, policy: &IotaPolicy) -> Result<IntegralBasis> {
    integral_basis_with(l, policy, &BasisOptions::default())
}

pub fn integral_basis_with(l: &OrePoly, policy: &IotaPolicy, opts: &BasisOptions) -> Result<IntegralBasis> {
    let l = normalized(l)?;
    let r = l.order()?;
    let s = leading_squarefree(&l)?;
    let b0 = compute_b0_with(&l, policy, opts)?;
    let mut run = Run { l: &l, r, policy, opts, points: Vec::new() };
    let mut basis: Vec<BasisElement> = Vec::new();
    if r > 1 {
        for h in singular_handles(&s)? {
            run.add_point(h, &basis)?;
        }
        run.points.sort_by_key(|p| handles::handle_key(&p.field));
    }
    let mut trace = Vec::new();
    let mut current = b0;
    for d in 1..r {
        basis.push(current.clone());
        run.finish_element(&current, &basis)?;
        let start = current.d_times(&RatFun::from_poly(s.clone()), &l)?;
        current = run.refine_stage(d, &basis, start, &mut trace)?;
    }
    basis.push(current);
    let elements: Vec<BasisElement> = basis.iter().map(canonical).collect();
    if opts.verify {
        for b in &elements {
            let report = check_integral(&l, b, policy)?;
            assert!(report.integral, "output element {} is not integral: {:?}", b, report.witness);
        }
    }
    Ok(IntegralBasis { operator: l, elements, policy: policy.clone(), trace })
}

/// Whether `B . y` is integral for every local solution `y` at every
/// finite point, with the first offending term otherwise.
pub fn check_integral(l: &OrePoly, b: &BasisElement, policy: &IotaPolicy) -> Result<IntegralityReport> {
    let l = normalized(l)?;
    let s = leading_squarefree(&l)?;
    let mut den = QPoly::one();
    for c in b.coeffs() {
        den = den.mul(&c.den().divrem_q(&poly_gcd(&den, c.den())).0);
    }
    let den = squarefree_part(&den)?;
    let extra = den.divrem_q(&poly_gcd(&den, &s)).0;
    let mut points = Vec::new();
    if extra.degree().unwrap_or(0) > 0 {
        points.extend(singular_handles(&extra)?);
    }
    points.extend(singular_handles(&s)?);
    for h in points {
        for (k, v) in per_point(&h, &mut |k| local_violation(&l, k, b, policy))? {
            if let Some((i, mu, j)) = v {
                let witness = Witness { point: point_label(&k), solution: i, exponent: mu, logpow: j };
                return Ok(IntegralityReport { integral: false, witness: Some(witness) });
            }
        }
    }
    Ok(IntegralityReport { integral: true, witness: None })
}

fn coefficient_matrix(b: &[BasisElement]) -> Result<Matrix<RatFun>> {
    let r = b.len();
    if r == 0 || b.iter().any(|e| e.dim() != r) {
        return Err(Error::ShapeMismatch(format!("{} elements do not form a square system", r)));
    }
    Ok(Matrix::from_rows(b.iter().map(|e| e.coeffs().to_vec()).collect()))
}

/// Whether two bases span the same `Q[x]`-module: `b2 = M b1` with `M`
/// polynomial and of constant nonzero determinant.
pub fn module_equal(b1: &[BasisElement], b2: &[BasisElement]) -> Result<bool> {
    if b1.len() != b2.len() {
        return Err(Error::ShapeMismatch(format!("{} versus {} elements", b1.len(), b2.len())));
    }
    let m1 = coefficient_matrix(b1)?;
    let m2 = coefficient_matrix(b2)?;
    if det(&m2)?.is_zero() {
        return Err(Error::NotABasis);
    }
    let m = m2.mul(&m1.inverse()?)?;
    if m.rows().iter().flatten().any(|c| !c.is_polynomial()) {
        return Ok(false);
    }
    Ok(det(&m)?.as_constant().is_some_and(|c| !c.is_zero()))
}
