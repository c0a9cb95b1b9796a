//! Gauss-Jordan elimination. Pivots are the leftmost nonzero entries; the
//! result is the unique reduced row-echelon form, so equal row spaces give
//! identical matrices. GF(2) inputs go through a bit-packed path.

use super::Matrix;
use crate::field::{Elem, FiniteField};

impl Matrix {
    /// Reduced row-echelon form (same shape, zero rows last) and rank.
    pub fn rref(&self) -> (Matrix, usize) {
        if self.field().is_gf2() {
            rref_gf2(self)
        } else {
            rref_generic(self)
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Pivot column of each nonzero row of an RREF matrix.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.rows())
            .filter_map(|i| self.row(i).iter().position(|&a| a != 0))
            .collect()
    }
}

fn rref_generic(m: &Matrix) -> (Matrix, usize) {
    let f = m.field().clone();
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| a.get(i, col) != 0) else {
            continue;
        };
        if piv != rank {
            for j in col..cols {
                let (x, y) = (a.get(piv, j), a.get(rank, j));
                a.set(piv, j, y);
                a.set(rank, j, x);
            }
        }
        let inv = f.inv(a.get(rank, col)).unwrap();
        if inv != 1 {
            for x in &mut a.row_mut(rank)[col..] {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row: Vec<Elem> = a.row(rank)[col..].to_vec();
        for i in 0..rows {
            if i == rank {
                continue;
            }
            let c = a.get(i, col);
            if c != 0 {
                axpy(&f, &mut a.row_mut(i)[col..], f.neg(c), &pivot_row);
            }
        }
        rank += 1;
    }
    (a, rank)
}

/// `dst += c * src`.
#[inline]
pub(crate) fn axpy(f: &FiniteField, dst: &mut [Elem], c: Elem, src: &[Elem]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = f.add(*d, f.mul(c, s));
        }
    }
}

pub(crate) fn pack_gf2(row: &[Elem]) -> Vec<u64> {
    let mut words = vec![0u64; row.len().div_ceil(64)];
    for (j, &a) in row.iter().enumerate() {
        if a != 0 {
            words[j / 64] |= 1 << (j % 64);
        }
    }
    words
}

#[inline]
pub(crate) fn bit(words: &[u64], j: usize) -> bool {
    words[j / 64] >> (j % 64) & 1 == 1
}

fn rref_gf2(m: &Matrix) -> (Matrix, usize) {
    let (rows, cols) = m.shape();
    let mut packed: Vec<Vec<u64>> = (0..rows).map(|i| pack_gf2(m.row(i))).collect();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| bit(&packed[i], col)) else {
            continue;
        };
        packed.swap(piv, rank);
        let (head, tail) = packed.split_at_mut(rank);
        let (pivot, tail) = tail.split_first_mut().unwrap();
        let w0 = col / 64;
        for r in head.iter_mut().chain(tail.iter_mut()) {
            if bit(r, col) {
                for (x, y) in r[w0..].iter_mut().zip(&pivot[w0..]) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    let mut out = Matrix::zeros(m.field(), rows, cols);
    for (i, r) in packed.iter().enumerate() {
        for j in 0..cols {
            if bit(r, j) {
                out.set(i, j, 1);
            }
        }
    }
    (out, rank)
}
