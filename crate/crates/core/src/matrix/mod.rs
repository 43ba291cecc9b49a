//! Dense matrices over a supported ring and the Smith normal form.

mod snf;

use std::fmt;
use std::ops::Mul;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::AlgebraError;
use crate::ring::{Ring, RingElement};

pub(crate) use snf::diagonal_invariants;
pub use snf::{kernel, smith_normal_form, solve, solve_columns, SnfResult};

/// A row-major matrix whose entries all lie in one ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl ExactMatrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, entries: Vec<RingElement>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::Dimension(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|e| e.ring() != ring) {
            return Err(AlgebraError::RingMismatch(ring, bad.ring()));
        }
        Ok(ExactMatrix { ring, rows, cols, entries })
    }

    /// Builds a matrix from rows; `cols` is only consulted when `rows` is empty.
    pub fn from_rows(ring: Ring, rows: Vec<Vec<RingElement>>, cols: usize) -> Result<Self, AlgebraError> {
        let n = rows.len();
        let c = rows.first().map_or(cols, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(AlgebraError::Dimension("ragged rows".into()));
        }
        Self::new(ring, n, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(ring: Ring, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| ring.from_i64(x))).collect();
        Self::new(ring, rows.len(), cols, entries).expect("consistent literal")
    }

    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring, rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Rectangular diagonal matrix with the given diagonal.
    pub fn diagonal(ring: Ring, rows: usize, cols: usize, diag: &[RingElement]) -> Self {
        assert!(diag.len() <= rows.min(cols));
        let mut m = Self::zeros(ring, rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RingElement) {
        assert_eq!(value.ring(), self.ring);
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[RingElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RingElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Whether every off-diagonal entry vanishes.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn main_diagonal(&self) -> Vec<RingElement> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn checked_mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, AlgebraError> {
        if self.ring != rhs.ring {
            return Err(AlgebraError::RingMismatch(self.ring, rhs.ring));
        }
        if self.cols != rhs.rows {
            return Err(AlgebraError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(self.ring.zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    pub fn scaled(&self, c: &RingElement) -> Self {
        ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &ExactMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &ExactMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        ExactMatrix { ring: self.ring, rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn block_diag(&self, other: &ExactMatrix) -> Self {
        let mut out = Self::zeros(self.ring, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// `copies` copies of `self` along the diagonal.
    pub fn repeat_diag(&self, copies: usize) -> Self {
        (0..copies).fold(Self::zeros(self.ring, 0, 0), |acc, _| acc.block_diag(self))
    }

    /// Kronecker product `self ⊗ I_n`.
    pub fn kron_identity(&self, n: usize) -> Self {
        let mut out = Self::zeros(self.ring, self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..n {
                    out.set(i * n + k, j * n + k, a.clone());
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: std::ops::Range<usize>) -> Self {
        let entries = rows.clone().flat_map(|i| self.row(i).iter().cloned()).collect();
        ExactMatrix { ring: self.ring, rows: rows.len(), cols: self.cols, entries }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.ring, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn from_columns(ring: Ring, rows: usize, columns: &[Vec<RingElement>]) -> Self {
        let mut out = Self::zeros(ring, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, e) in c.iter().enumerate() {
                out.set(i, j, e.clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<RingElement, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m: Vec<Vec<RingElement>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = false;
        let mut prev = self.ring.one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = !sign;
                    }
                    None => return Ok(self.ring.zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = m[k][k].clone();
        }
        if n == 0 {
            return Ok(self.ring.one());
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if sign { -&det } else { det })
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Serialized as a list of rows of element strings.
impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        let z = Ring::Integers;
        let m = ExactMatrix::from_i64_rows(z, &[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant().unwrap(), z.from_i64(1));
        let m = ExactMatrix::from_i64_rows(z, &[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(m.determinant().unwrap(), z.from_i64(-2));
        assert_eq!(ExactMatrix::zeros(z, 0, 0).determinant().unwrap(), z.one());
    }

    #[test]
    fn kron_and_stack() {
        let z = Ring::Integers;
        let a = ExactMatrix::from_i64_rows(z, &[&[1, 2]]);
        let k = a.kron_identity(2);
        assert_eq!(k, ExactMatrix::from_i64_rows(z, &[&[1, 0, 2, 0], &[0, 1, 0, 2]]));
        assert_eq!(a.vstack(&a).rows(), 2);
        assert_eq!(a.hstack(&a).cols(), 4);
        assert_eq!(a.repeat_diag(3).rows(), 3);
    }
}
