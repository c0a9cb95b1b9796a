use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldEmbedding, FiniteField};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(field: &FiniteField, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from equal-length rows. Panics on ragged input or
    /// entries outside the field.
    pub fn from_rows<R: AsRef<[Elem]>>(field: &FiniteField, rows: impl IntoIterator<Item = R>) -> Self {
        let mut data = Vec::new();
        let mut n_rows = 0;
        let mut cols = None;
        for r in rows {
            let r = r.as_ref();
            match cols {
                None => cols = Some(r.len()),
                Some(c) => assert_eq!(c, r.len(), "ragged rows"),
            }
            assert!(r.iter().all(|&a| field.contains(a)), "entry outside {field}");
            data.extend_from_slice(r);
            n_rows += 1;
        }
        Matrix {
            field: field.clone(),
            rows: n_rows,
            cols: cols.unwrap_or(0),
            data,
        }
    }

    /// Like [`Self::from_rows`] but with an explicit column count, so that
    /// zero-row matrices keep their width.
    pub fn from_rows_with_cols<R: AsRef<[Elem]>>(
        field: &FiniteField,
        cols: usize,
        rows: impl IntoIterator<Item = R>,
    ) -> Self {
        let mut m = Matrix::zeros(field, 0, cols);
        for r in rows {
            m.push_row(r.as_ref());
        }
        m
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, a: Elem) {
        debug_assert!(i < self.rows && j < self.cols);
        debug_assert!(self.field.contains(a));
        self.data[i * self.cols + j] = a;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field.to_string(),
                found: other.field.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for (d, &b) in dst.iter_mut().zip(src) {
                    if b != 0 {
                        *d = f.add(*d, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Panicking product for callers that have already matched shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).expect("matrix product")
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} plus {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.try_add(other).expect("matrix sum")
    }

    pub fn scale(&self, a: Elem) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.mul(a, x)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// `self^k` for a square matrix.
    pub fn pow(&self, k: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows_with_cols(&self.field, self.cols, idx.iter().map(|&i| self.row(i)))
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut m = self.clone();
        m.data.extend_from_slice(&other.data);
        m.rows += other.rows;
        Ok(m)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.set(i, n + i, 1);
        }
        let (r, rank) = aug.rref();
        if rank < n || (0..n).any(|i| r.get(i, i) != 1) {
            return Err(Error::NotInvertible);
        }
        Ok(r.select(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Kronecker product `A (x) B`: block `(i, j)` is `A[i,j] * B`. Realizes
    /// the tensor product of the two linear maps.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        let f = &self.field;
        let (ra, ca) = self.shape();
        let (rb, cb) = other.shape();
        let mut out = Matrix::zeros(f, ra * rb, ca * cb);
        for i in 0..ra {
            for j in 0..ca {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        out.set(i * rb + k, j * cb + l, f.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Restriction of scalars along `e: F -> K`: every entry becomes its
    /// `[K:F] x [K:F]` regular-representation block.
    pub fn block_expand(&self, e: &FieldEmbedding) -> Result<Matrix> {
        if &self.field != e.target() {
            return Err(Error::FieldMismatch {
                expected: e.target().to_string(),
                found: self.field.to_string(),
            });
        }
        let r = e.degree();
        let mut out = Matrix::zeros(e.source(), self.rows * r, self.cols * r);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                let block = e.regular_representation(a);
                for s in 0..r {
                    for t in 0..r {
                        out.set(i * r + s, j * r + t, block.get(s, t));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Extension of scalars along `e: K -> L`: same shape, entries embedded.
    pub fn entry_embed(&self, e: &FieldEmbedding) -> Result<Matrix> {
        if &self.field != e.source() {
            return Err(Error::FieldMismatch {
                expected: e.source().to_string(),
                found: self.field.to_string(),
            });
        }
        Ok(Matrix {
            field: e.target().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| e.embed(a)).collect(),
        })
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
