use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{Field, Matrix, Scalar};
use crate::quiver::{AlgebraElement, PathAlgebra};

/// A map `⊕_j P_{cols[j]} → ⊕_i P_{rows[i]}` of projectives.
///
/// Entry `(i, j)` lies in `e_{rows[i]} A e_{cols[j]}` and acts by left
/// multiplication; composition is the ordinary matrix product with path
/// multiplication.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathMatrix {
    rows: Vec<usize>,
    cols: Vec<usize>,
    entries: Vec<AlgebraElement>,
}

impl PathMatrix {
    pub fn zero(rows: &[usize], cols: &[usize]) -> Self {
        PathMatrix {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            entries: vec![AlgebraElement::zero(); rows.len() * cols.len()],
        }
    }

    pub fn identity(alg: &PathAlgebra, obj: &[usize]) -> Self {
        let mut m = Self::zero(obj, obj);
        for (i, &v) in obj.iter().enumerate() {
            m.set(i, i, alg.idempotent(v));
        }
        m
    }

    /// Builds a matrix from row-major entries without validation.
    pub fn from_entries(rows: &[usize], cols: &[usize], entries: Vec<AlgebraElement>) -> Self {
        assert_eq!(entries.len(), rows.len() * cols.len());
        PathMatrix {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            entries,
        }
    }

    /// Position of the first entry that is not in the right Hom space.
    pub fn first_misplaced(&self, alg: &PathAlgebra) -> Option<(usize, usize)> {
        for i in 0..self.rows.len() {
            for j in 0..self.cols.len() {
                if !alg.lies_in(self.get(i, j), self.rows[i], self.cols[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.cols.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: AlgebraElement) {
        let c = self.cols.len();
        self.entries[i * c + j] = x;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut AlgebraElement {
        let c = self.cols.len();
        &mut self.entries[i * c + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(AlgebraElement::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        let c = self.cols.len().max(1);
        self.entries.iter().position(|e| !e.is_zero()).map(|k| (k / c, k % c))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, alg: &PathAlgebra, rhs: &PathMatrix) -> PathMatrix {
        assert_eq!(self.cols, rhs.rows, "composing maps with mismatched middle objects");
        let mut out = PathMatrix::zero(&self.rows, &rhs.cols);
        let inner = self.cols.len();
        let rc = rhs.cols.len();
        for i in 0..self.rows.len() {
            for k in 0..inner {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rc {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = alg.multiply(a, b);
                    if !p.is_zero() {
                        let e = out.entry_mut(i, j);
                        *e = e.add(&p);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &PathMatrix) -> PathMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "adding maps of different shapes");
        PathMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &PathMatrix) -> PathMatrix {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> PathMatrix {
        PathMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(AlgebraElement::neg).collect(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> PathMatrix {
        PathMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(|e| e.scale(k)).collect(),
        }
    }

    /// Multiplies by `(-1)^k`.
    pub fn signed(&self, k: i32) -> PathMatrix {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Block matrix; `block(r, c)` returns `None` for a zero block.
    pub fn blocks(
        row_objs: &[&[usize]],
        col_objs: &[&[usize]],
        mut block: impl FnMut(usize, usize) -> Option<PathMatrix>,
    ) -> PathMatrix {
        let rows: Vec<usize> = row_objs.concat();
        let cols: Vec<usize> = col_objs.concat();
        let mut out = PathMatrix::zero(&rows, &cols);
        let mut r0 = 0;
        for (bi, ro) in row_objs.iter().enumerate() {
            let mut c0 = 0;
            for (bj, co) in col_objs.iter().enumerate() {
                if let Some(b) = block(bi, bj) {
                    assert!(b.rows == *ro && b.cols == *co, "block shape mismatch");
                    for i in 0..ro.len() {
                        for j in 0..co.len() {
                            out.set(r0 + i, c0 + j, b.get(i, j).clone());
                        }
                    }
                }
                c0 += co.len();
            }
            r0 += ro.len();
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PathMatrix {
        let rv: Vec<usize> = rows.iter().map(|&i| self.rows[i]).collect();
        let cv: Vec<usize> = cols.iter().map(|&j| self.cols[j]).collect();
        let mut out = PathMatrix::zero(&rv, &cv);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduction modulo the radical: the scalar matrix of `e_v` coefficients
    /// on entries whose row and column vertices agree.
    pub fn top(&self, field: Field) -> Matrix {
        Matrix::from_fn(field, self.rows.len(), self.cols.len(), |i, j| {
            if self.rows[i] == self.cols[j] {
                self.get(i, j).coefficient(self.rows[i]).cloned().unwrap_or_else(|| field.zero())
            } else {
                field.zero()
            }
        })
    }

    /// Embeds a scalar matrix as `λ e_v` on same-vertex positions.
    pub fn from_top(rows: &[usize], cols: &[usize], m: &Matrix) -> PathMatrix {
        let mut out = PathMatrix::zero(rows, cols);
        for i in 0..rows.len() {
            for j in 0..cols.len() {
                let x = m.get(i, j);
                if !x.is_zero() {
                    assert_eq!(rows[i], cols[j], "scalar entry between different vertices");
                    out.set(i, j, AlgebraElement::basis(rows[i], x.clone()));
                }
            }
        }
        out
    }
}
