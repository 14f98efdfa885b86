//! Exact integer matrices: determinants and leading minors by fraction-free
//! elimination, Smith normal form with unimodular witnesses, and congruence
//! transforms `Pᵀ M P`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum IntFormError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("basis change is not unimodular (determinant {0})")]
    NotUnimodular(BigInt),
}

/// A square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged or not square.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend(row.iter().map(|&x| x.into()));
        }
        IntMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        self.entries[i * self.n + j] = value.into();
    }

    pub fn get_i64(&self, i: usize, j: usize) -> Option<i64> {
        i64::try_from(self.get(i, j)).ok()
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[BigInt]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.entries[j * self.n + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<Self, IntFormError> {
        if self.n != other.n {
            return Err(IntFormError::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.entries.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.n {
                self.entries.swap(i * self.n + a, i * self.n + b);
            }
        }
    }

    /// `row[dst] += factor * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.n {
            let x = self.get(src, j);
            if !x.is_zero() {
                let v = x * factor;
                self.entries[dst * self.n + j] += v;
            }
        }
    }

    /// `col[dst] += factor * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.n {
            let x = self.get(i, src);
            if !x.is_zero() {
                let v = x * factor;
                self.entries[i * self.n + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.n {
            let v = -self.get(r, j);
            self.entries[r * self.n + j] = v;
        }
    }

    /// Reorders rows and columns: entry `(i, j)` of the result is entry
    /// `(order[i], order[j])` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.n);
        let mut out = Self::zeros(self.n);
        for (i, &oi) in order.iter().enumerate() {
            for (j, &oj) in order.iter().enumerate() {
                out.entries[i * self.n + j] = self.get(oi, oj).clone();
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows().iter().map(|r| {
            r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        })).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:>width$}", cells[i * self.n + j]))
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

// JSON form is an array of rows of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(D::Error::custom("matrix must be square"));
            }
            for cell in row {
                entries.push(cell.parse::<BigInt>().map_err(D::Error::custom)?);
            }
        }
        Ok(IntMatrix { n, entries })
    }
}

/// Leading principal minors `minor_1, ..., minor_k` computed by Bareiss
/// elimination without pivoting. Stops early (returning the prefix up to
/// and including the first zero minor) when a pivot vanishes.
pub fn leading_minors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.dim();
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut minors = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = a.get(k, k).clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&pivot * a.get(i, j) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = pivot;
    }
    minors
}

/// Sylvester's criterion: `(-1)^k minor_k > 0` for every leading minor.
pub fn is_negative_definite(m: &IntMatrix) -> Result<bool, IntFormError> {
    if !m.is_symmetric() {
        return Err(IntFormError::NotSymmetric);
    }
    let minors = leading_minors(m);
    if minors.len() < m.dim() {
        return Ok(false);
    }
    Ok(minors.iter().enumerate().all(|(k, minor)| {
        if k % 2 == 0 {
            minor.is_negative()
        } else {
            minor.is_positive()
        }
    }))
}

/// Exact determinant by unimodular row reduction to upper triangular form.
/// Rows with a zero in the current column are never touched, so sparse
/// matrices stay cheap.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.dim();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    for k in 0..n {
        loop {
            let live: Vec<usize> = (k..n).filter(|&r| !a.get(r, k).is_zero()).collect();
            let Some(&p) = live.iter().min_by_key(|&&r| a.get(r, k).magnitude().clone()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(k, p);
                sign = -sign;
            }
            if live.len() == 1 {
                break;
            }
            let pivot = a.get(k, k).clone();
            for r in k + 1..n {
                if !a.get(r, k).is_zero() {
                    let q = a.get(r, k).div_floor(&pivot);
                    a.add_row_multiple(r, k, &-q);
                }
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * a.get(i, i))
}

/// Returns `pᵀ · m · p`, requiring `p` to be unimodular.
pub fn congruence_transform(m: &IntMatrix, p: &IntMatrix) -> Result<IntMatrix, IntFormError> {
    if m.dim() != p.dim() {
        return Err(IntFormError::DimensionMismatch(m.dim(), p.dim()));
    }
    let det = determinant(p);
    if det.abs() != BigInt::one() {
        return Err(IntFormError::NotUnimodular(det));
    }
    p.transpose().mul(m)?.mul(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    /// Invariant factors, nonnegative, each dividing the next.
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Checks `u · m · v = diag(d)` and that both witnesses are unimodular.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let n = m.dim();
        let Ok(prod) = self.u.mul(m).and_then(|um| um.mul(&self.v)) else {
            return false;
        };
        let mut diag = IntMatrix::zeros(n);
        for (i, d) in self.d.iter().enumerate() {
            diag.set(i, i, d.clone());
        }
        prod == diag
            && determinant(&self.u).abs().is_one()
            && determinant(&self.v).abs().is_one()
            && self.d.windows(2).all(|w| divides(&w[0], &w[1]))
            && self.d.iter().all(|x| !x.is_negative())
    }

    pub fn factors_i64(&self) -> Vec<i64> {
        self.d.iter().map(|x| i64::try_from(x).expect("factor fits in i64")).collect()
    }
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

/// Smith normal form by repeated minimal-pivot reduction.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let n = m.dim();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);

    for t in 0..n {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            'scan: for i in t..n {
                for j in t..n {
                    let x = a.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.magnitude() < a.get(bi, bj).magnitude()) {
                        best = Some((i, j));
                        if x.magnitude().is_one() {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..n {
                let q = a.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = a.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            if pivot.magnitude().is_one() {
                break;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let offender = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !divides(&pivot, a.get(i, j)));
            match offender {
                Some((i, _)) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let d = (0..n).map(|i| a.get(i, i).clone()).collect();
    SnfResult { d, u, v }
}
