//! Dense matrices over a [`Field`] and exact Gaussian elimination.
//!
//! Pivoting takes the first nonzero entry of the current column, scanning
//! rows top to bottom, so every result is a deterministic function of the
//! input.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::scalar::{Field, Scalar};
use super::LinalgError;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(bad) = data.iter().find(|x| x.field() != field) {
            return Err(LinalgError::MixedFields {
                expected: field,
                found: bad.field(),
            });
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_rows(field: Field, rows: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Ragged);
        }
        Self::new(field, r, c, rows.concat())
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::Ragged);
        }
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for c in columns {
                data.push(c[i].clone());
            }
        }
        Self::new(field, rows, cols, data)
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert_eq!(x.field(), field, "entry from a different field");
                data.push(x);
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert_eq!(x.field(), self.field);
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(rhs.field)?;
        if self.cols != rhs.rows {
            return Err(LinalgError::Dimension {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension {
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        if let Some(bad) = v.iter().find(|x| x.field() != self.field) {
            return Err(LinalgError::MixedFields {
                expected: self.field,
                found: bad.field(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    fn check_field(&self, other: Field) -> Result<(), LinalgError> {
        if self.field != other {
            Err(LinalgError::MixedFields {
                expected: self.field,
                found: other,
            })
        } else {
            Ok(())
        }
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols);
        Echelon { reduced: m, pivots }
    }

    /// Row-reduces using pivots only in the first `limit` columns.
    fn reduce_in_place(&mut self, limit: usize) -> Vec<usize> {
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.data[r * cols + c].inv().expect("pivot is nonzero");
            for j in c..cols {
                let idx = r * cols + j;
                if !self.data[idx].is_zero() {
                    self.data[idx] = &self.data[idx] * &inv;
                }
            }
            let support: Vec<usize> = (c..cols).filter(|&j| !self.data[r * cols + j].is_zero()).collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c].clone();
                if factor.is_zero() {
                    continue;
                }
                for &j in &support {
                    let t = &factor * &self.data[r * cols + j];
                    let idx = i * cols + j;
                    self.data[idx] = &self.data[idx] - &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Some `x` with `self · x = b`, or `None` if `b` is outside the column space.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension {
                left: (self.rows, self.cols),
                right: (b.len(), 1),
            });
        }
        if let Some(bad) = b.iter().find(|x| x.field() != self.field) {
            return Err(LinalgError::MixedFields {
                expected: self.field,
                found: bad.field(),
            });
        }
        let n = self.cols;
        let mut aug = Matrix::from_fn(self.field, self.rows, n + 1, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.reduce_in_place(n);
        // an inconsistent row reads 0 = nonzero below the pivot block
        if (pivots.len()..aug.rows).any(|i| !aug.get(i, n).is_zero()) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, n).clone();
        }
        Ok(Some(x))
    }

    /// Basis of the null space, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let Echelon { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    let x = reduced.get(r, f);
                    if !x.is_zero() {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let factor = m.get(i, c) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = &factor * m.get(c, j);
                    let idx = i * n + j;
                    m.data[idx] = &m.data[idx] - &t;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Option<Matrix>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                self.field.one()
            } else {
                self.field.zero()
            }
        });
        let pivots = aug.reduce_in_place(n);
        if pivots.len() < n {
            return Ok(None);
        }
        Ok(Some(Matrix::from_fn(self.field, n, n, |i, j| aug.get(i, n + j).clone())))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Incrementally maintained reduced echelon basis of a subspace of `field^dim`.
///
/// Used for quotient spaces: vectors are reduced against the stored basis, and
/// only vectors with a nonzero residue enlarge the span.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: Field, dim: usize) -> Self {
        RowSpace {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after eliminating every stored pivot.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    v[j] = &v[j] - &(&factor * x);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span; returns `true` if the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        // keep the basis fully reduced
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    row[j] = &row[j] - &(&factor * x);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    pub fn field(&self) -> Field {
        self.field
    }
}
