use super::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix. Carries a zero element so that empty shapes
/// still know their field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: Vec<Vec<F>>,
    ncols: usize,
    zero: F,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(nrows: usize, ncols: usize, zero: &F) -> Self {
        let zero = zero.zero_like();
        Matrix { rows: vec![vec![zero.clone(); ncols]; nrows], ncols, zero }
    }

    pub fn identity(n: usize, sample: &F) -> Self {
        let mut m = Self::zeros(n, n, sample);
        for i in 0..n {
            m.rows[i][i] = sample.one_like();
        }
        m
    }

    /// Panics on ragged or empty input; use [`Matrix::zeros`] for empty shapes.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let ncols = rows.first().map(|r| r.len()).expect("at least one row");
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        let zero = rows.iter().flatten().next().expect("at least one entry").zero_like();
        Matrix { rows, ncols, zero }
    }

    pub fn from_rows_with(rows: Vec<Vec<F>>, ncols: usize, zero: &F) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged matrix".into()));
        }
        Ok(Matrix { rows, ncols, zero: zero.zero_like() })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<F>> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.rows[i][j] = v;
    }

    pub fn zero_elem(&self) -> &F {
        &self.zero
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows(), &self.zero);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.rows[j][i] = v.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let mut out = Self::zeros(self.nrows(), other.ncols, &self.zero);
        for i in 0..self.nrows() {
            for k in 0..self.ncols {
                let a = &self.rows[i][k];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    out.rows[i][j] = out.rows[i][j].plus(&a.times(&other.rows[k][j]));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.ncols {
            return Err(Error::ShapeMismatch("vector length".into()));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().zip(v).fold(self.zero.clone(), |acc, (a, b)| acc.plus(&a.times(b))))
            .collect())
    }

    /// Inverse of a square matrix; `NotABasis` when singular.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.nrows();
        if n != self.ncols {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let one = self.zero.one_like();
        let aug: Vec<Vec<F>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { one.clone() } else { self.zero.clone() }));
                r
            })
            .collect();
        let red = rref(&Matrix { rows: aug, ncols: 2 * n, zero: self.zero.clone() })?;
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return Err(Error::NotABasis);
        }
        let rows = red.matrix.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Matrix { rows, ncols: n, zero: self.zero.clone() })
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination with first-nonzero pivoting. Zero tests are
/// uniform over products of fields, so a zero-divisor pivot candidate
/// raises a split instead of being used or skipped.
pub fn rref<F: Field>(m: &Matrix<F>) -> Result<Rref<F>> {
    let mut rows = m.rows.clone();
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.ncols {
        if r == nrows {
            break;
        }
        let mut found = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if !row[c].decide_zero()? {
                found = Some(i);
                break;
            }
        }
        let Some(p) = found else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inverse()?;
        let pivot_row: Vec<F> = rows[r].iter().map(|v| v.times(&inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_exact_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                *v = v.minus(&f.times(pv));
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    Ok(Rref { matrix: Matrix { rows, ncols: m.ncols, zero: m.zero.clone() }, pivots })
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column
/// (that column set to one, other free columns zero).
pub fn nullspace<F: Field>(m: &Matrix<F>) -> Result<Vec<Vec<F>>> {
    let red = rref(m)?;
    let one = m.zero.one_like();
    let mut basis = Vec::new();
    for free in (0..m.ncols).filter(|c| !red.pivots.contains(c)) {
        let mut v = vec![m.zero.clone(); m.ncols];
        v[free] = one.clone();
        for (row, &pc) in red.pivots.iter().enumerate() {
            v[pc] = red.matrix.rows[row][free].negated();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// One exact solution of `a x = b` (free variables set to zero), or
/// `None` when the system is inconsistent.
pub fn linsolve<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<Option<Vec<F>>> {
    if b.len() != a.nrows() {
        return Err(Error::ShapeMismatch(format!("{} rows but {} right-hand sides", a.nrows(), b.len())));
    }
    let n = a.ncols;
    let aug: Vec<Vec<F>> = a
        .rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(&Matrix { rows: aug, ncols: n + 1, zero: a.zero.clone() })?;
    if red.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![a.zero.clone(); n];
    for (row, &pc) in red.pivots.iter().enumerate() {
        x[pc] = red.matrix.rows[row][n].clone();
    }
    Ok(Some(x))
}

/// Determinant by elimination.
pub fn det<F: Field>(m: &Matrix<F>) -> Result<F> {
    let n = m.nrows();
    if n != m.ncols {
        return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
    }
    let mut rows = m.rows.clone();
    let mut acc = m.zero.one_like();
    for c in 0..n {
        let mut found = None;
        for (i, row) in rows.iter().enumerate().skip(c) {
            if !row[c].decide_zero()? {
                found = Some(i);
                break;
            }
        }
        let Some(p) = found else { return Ok(m.zero.clone()) };
        if p != c {
            rows.swap(p, c);
            acc = acc.negated();
        }
        let inv = rows[c][c].inverse()?;
        acc = acc.times(&rows[c][c]);
        let pivot_row = rows[c].clone();
        for row in rows.iter_mut().skip(c + 1) {
            if row[c].is_exact_zero() {
                continue;
            }
            let f = row[c].times(&inv);
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                *v = v.minus(&f.times(pv));
            }
        }
    }
    Ok(acc)
}
