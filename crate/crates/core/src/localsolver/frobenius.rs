use std::sync::Arc;

use num_traits::One;

use super::shifted::ShiftedOperator;
use crate::error::{Error, Result};
use crate::exactmath::{frac, nullspace, rref, Field, Matrix, NfElem, NumberField, Rational};
use crate::logseries::{point_label, LogSeries};

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    acc
}

/// Linear combination of the current parameters.
type Vector = Vec<NfElem>;

/// All solutions whose exponents lie in one class `base + Z`.
///
/// `levels[k][j]` holds the coefficient of `z^(base + k) log(z)^j` for
/// every solution of the class at once (one entry per solution).
#[derive(Clone, Debug)]
struct ClassSolutions {
    base: Rational,
    jcap: usize,
    levels: Vec<Vec<Vector>>,
    /// `(level, log power)` of the leading entry of each solution.
    pivots: Vec<(usize, usize)>,
}

/// Truncated fundamental system at one point, extensible on demand.
#[derive(Clone, Debug)]
pub struct FrobeniusSystem {
    op: ShiftedOperator,
    classes: Vec<ClassSolutions>,
    /// `(class index, index within class)` per solution, in output order.
    order: Vec<(usize, usize)>,
}

fn scale_vec(v: &Vector, c: &NfElem) -> Vector {
    v.iter().map(|a| a.times(c)).collect()
}

fn add_into(acc: &mut Vector, v: &Vector) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a.plus(b);
    }
}

impl ClassSolutions {
    /// Coefficient vectors of `E_{n,j}` contributed by levels below `n`.
    fn residual(&self, op: &ShiftedOperator, n: usize, width: usize) -> Vec<Vector> {
        let zero = NfElem::zero(op.field());
        let mut out = vec![vec![zero; width]; self.jcap + 1];
        let lo = n.saturating_sub(op.band());
        for k in lo..n {
            let nu = &self.base + Rational::from_integer(k.into());
            for s in 0..=self.jcap {
                let f = op.eval(n - k, s, &nu);
                if f.is_exact_zero() {
                    continue;
                }
                for j in 0..=self.jcap - s {
                    let jp = j + s;
                    let c = f.times(&f.from_rational_like(&binomial(jp, s)));
                    add_into(&mut out[j], &scale_vec(&self.levels[k][jp], &c));
                }
            }
        }
        out
    }

    /// Matrix of `c_n -> E_{n,.}` at level `n`: upper triangular with the
    /// indicial value on the diagonal.
    fn level_matrix(&self, op: &ShiftedOperator, n: usize) -> Vec<Vec<NfElem>> {
        let nu = &self.base + Rational::from_integer(n.into());
        let zero = NfElem::zero(op.field());
        let mut a = vec![vec![zero; self.jcap + 1]; self.jcap + 1];
        for s in 0..=self.jcap {
            let f = op.eval(0, s, &nu);
            for j in 0..=self.jcap - s {
                a[j][j + s] = f.times(&f.from_rational_like(&binomial(j + s, s)));
            }
        }
        a
    }

    /// Appends the next level at a non-root exponent by back substitution.
    fn push_regular_level(&mut self, op: &ShiftedOperator, width: usize) -> Result<()> {
        let n = self.levels.len();
        let mut rhs = self.residual(op, n, width);
        let a = self.level_matrix(op, n);
        let inv = a[0][0].inverse()?;
        let zero = NfElem::zero(op.field());
        let mut c = vec![vec![zero; width]; self.jcap + 1];
        for j in (0..=self.jcap).rev() {
            for jp in j + 1..=self.jcap {
                let t = scale_vec(&c[jp], &a[j][jp]);
                add_into(&mut rhs[j], &t);
            }
            c[j] = scale_vec(&rhs[j], &inv.negated());
        }
        self.levels.push(c);
        Ok(())
    }

    fn extend_to(&mut self, op: &ShiftedOperator, levels: usize) -> Result<()> {
        while self.levels.len() < levels {
            self.push_regular_level(op, self.pivots.len())?;
        }
        Ok(())
    }

    fn solve(op: &ShiftedOperator, base: Rational, roots: &[(usize, usize)]) -> Result<Self> {
        let jcap = roots.iter().map(|(_, m)| m).sum::<usize>() - 1;
        let top = roots.iter().map(|(n, _)| *n).max().unwrap();
        let field = op.field().clone();
        let zero = NfElem::zero(&field);
        let one = NfElem::one(&field);
        let mut cs = ClassSolutions { base, jcap, levels: Vec::new(), pivots: Vec::new() };
        let mut width = 0;
        for n in 0..=top {
            if !roots.iter().any(|(k, _)| *k == n) {
                cs.push_regular_level(op, width)?;
                continue;
            }
            let fresh = jcap + 1;
            let wide = width + fresh;
            for lvl in cs.levels.iter_mut() {
                for v in lvl.iter_mut() {
                    v.resize(wide, zero.clone());
                }
            }
            let mut rhs = cs.residual(op, n, width);
            for v in rhs.iter_mut() {
                v.resize(wide, zero.clone());
            }
            let a = cs.level_matrix(op, n);
            let mut rows = Vec::new();
            for j in 0..=jcap {
                let mut row = rhs[j].clone();
                for jp in j..=jcap {
                    row[width + jp] = row[width + jp].plus(&a[j][jp]);
                }
                rows.push(row);
            }
            let kernel = nullspace(&Matrix::from_rows(rows))?;
            let mut level: Vec<Vector> = (0..=jcap)
                .map(|jp| {
                    let mut v = vec![zero.clone(); wide];
                    v[width + jp] = one.clone();
                    v
                })
                .collect();
            let substitute = |v: &Vector| -> Vector {
                kernel
                    .iter()
                    .map(|b| v.iter().zip(b).fold(zero.clone(), |acc, (x, y)| acc.plus(&x.times(y))))
                    .collect()
            };
            for lvl in cs.levels.iter_mut() {
                for v in lvl.iter_mut() {
                    *v = substitute(v);
                }
            }
            for v in level.iter_mut() {
                *v = substitute(v);
            }
            cs.levels.push(level);
            width = kernel.len();
        }
        let expected: usize = roots.iter().map(|(_, m)| m).sum();
        if width != expected {
            return Err(Error::UnsupportedExponent {
                point: point_label(&field),
                detail: format!("found {} of {} solutions in class {}", width, expected, cs.base),
            });
        }
        // canonical echelon form over columns (level, log power)
        let cols = (top + 1) * (jcap + 1);
        let rows: Vec<Vec<NfElem>> = (0..width)
            .map(|p| {
                let mut row = Vec::with_capacity(cols);
                for lvl in &cs.levels {
                    for v in lvl {
                        row.push(v[p].clone());
                    }
                }
                row
            })
            .collect();
        let red = rref(&Matrix::from_rows(rows))?;
        if red.pivots.len() != width {
            return Err(Error::UnsupportedExponent {
                point: point_label(&field),
                detail: "dependent local solutions".into(),
            });
        }
        for (k, lvl) in cs.levels.iter_mut().enumerate() {
            for (j, v) in lvl.iter_mut().enumerate() {
                let col = k * (jcap + 1) + j;
                *v = (0..width).map(|p| red.matrix.get(p, col).clone()).collect();
            }
        }
        cs.pivots = red.pivots.iter().map(|c| (c / (jcap + 1), c % (jcap + 1))).collect();
        Ok(cs)
    }
}

impl FrobeniusSystem {
    pub fn new(op: ShiftedOperator) -> Result<Self> {
        let exps = op.exponents()?;
        let mut groups: Vec<(Rational, Vec<(Rational, usize)>)> = Vec::new();
        for (nu, m) in exps {
            let c = frac(&nu);
            match groups.iter_mut().find(|(k, _)| *k == c) {
                Some((_, g)) => g.push((nu, m)),
                None => groups.push((c, vec![(nu, m)])),
            }
        }
        let mut classes = Vec::new();
        for (_, g) in groups {
            let base = g.iter().map(|(nu, _)| nu.clone()).min().unwrap();
            let roots: Vec<(usize, usize)> = g
                .iter()
                .map(|(nu, m)| ((nu - &base).to_integer().try_into().expect("small exponent gap"), *m))
                .collect();
            classes.push(ClassSolutions::solve(&op, base, &roots)?);
        }
        let mut order: Vec<(usize, usize)> = Vec::new();
        for (ci, c) in classes.iter().enumerate() {
            for i in 0..c.pivots.len() {
                order.push((ci, i));
            }
        }
        order.sort_by(|a, b| {
            let ka = (&classes[a.0].base + Rational::from_integer(classes[a.0].pivots[a.1].0.into()), classes[a.0].pivots[a.1].1);
            let kb = (&classes[b.0].base + Rational::from_integer(classes[b.0].pivots[b.1].0.into()), classes[b.0].pivots[b.1].1);
            ka.cmp(&kb)
        });
        Ok(FrobeniusSystem { op, classes, order })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.op.field()
    }

    pub fn operator(&self) -> &ShiftedOperator {
        &self.op
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Leading exponent of solution `i`.
    pub fn exponent(&self, i: usize) -> Rational {
        let (c, p) = self.order[i];
        &self.classes[c].base + Rational::from_integer(self.classes[c].pivots[p].0.into())
    }

    /// Largest log power in solution `i` (it cannot grow past the last
    /// exponent where new solutions start).
    pub fn log_degree(&self, i: usize) -> u32 {
        let (c, p) = self.order[i];
        let cs = &self.classes[c];
        let mut d = 0;
        for lvl in &cs.levels {
            for (j, v) in lvl.iter().enumerate() {
                if !v[p].is_exact_zero() {
                    d = d.max(j as u32);
                }
            }
        }
        d
    }

    /// Solution `i` with all terms of exponent `< upto`, unknown beyond.
    pub fn solution(&mut self, i: usize, upto: &Rational) -> Result<LogSeries> {
        let (c, p) = self.order[i];
        let field = self.op.field().clone();
        let cs = &mut self.classes[c];
        let need = (upto - &cs.base).ceil().to_integer();
        let need: usize = need.try_into().unwrap_or(0);
        cs.extend_to(&self.op, need)?;
        let mut s = LogSeries::zero(&field);
        for (k, lvl) in cs.levels.iter().enumerate().take(need) {
            let mu = &cs.base + Rational::from_integer(k.into());
            for (j, v) in lvl.iter().enumerate() {
                s.add_term(mu.clone(), j as u32, v[p].clone());
            }
        }
        s.set_cutoff(&cs.base, upto);
        Ok(s)
    }
}
