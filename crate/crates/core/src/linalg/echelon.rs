use super::rref::{axpy, bit, pack_gf2};
use crate::field::{Elem, FiniteField};

/// Row-echelon basis grown one vector at a time. Each stored row has a unit
/// pivot and zeros to the left of it; rows are indexed by pivot column.
pub struct EchelonBasis {
    field: FiniteField,
    width: usize,
    rank: usize,
    rows: Rows,
}

enum Rows {
    Bits(Vec<Option<Vec<u64>>>),
    Dense(Vec<Option<Vec<Elem>>>),
}

impl EchelonBasis {
    pub fn new(field: &FiniteField, width: usize) -> Self {
        let rows = if field.is_gf2() {
            Rows::Bits(vec![None; width])
        } else {
            Rows::Dense(vec![None; width])
        };
        EchelonBasis {
            field: field.clone(),
            width,
            rank: 0,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduces `v` against the basis. If it is independent, stores and
    /// returns the reduced vector (which differs from `v` by an element of
    /// the previous span); otherwise returns `None`.
    pub fn insert(&mut self, v: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(v.len(), self.width);
        let f = &self.field;
        match &mut self.rows {
            Rows::Bits(rows) => {
                let mut w = pack_gf2(v);
                let mut word = 0;
                while word < w.len() {
                    if w[word] == 0 {
                        word += 1;
                        continue;
                    }
                    let col = word * 64 + w[word].trailing_zeros() as usize;
                    match &rows[col] {
                        Some(r) => {
                            for (x, y) in w[word..].iter_mut().zip(&r[word..]) {
                                *x ^= y;
                            }
                        }
                        None => {
                            let out = (0..self.width).map(|j| bit(&w, j) as Elem).collect();
                            rows[col] = Some(w);
                            self.rank += 1;
                            return Some(out);
                        }
                    }
                }
                None
            }
            Rows::Dense(rows) => {
                let mut w = v.to_vec();
                let mut col = 0;
                while col < self.width {
                    let c = w[col];
                    if c == 0 {
                        col += 1;
                        continue;
                    }
                    match &rows[col] {
                        Some(r) => axpy(f, &mut w[col..], f.neg(c), &r[col..]),
                        None => {
                            let inv = f.inv(c).unwrap();
                            for x in &mut w[col..] {
                                *x = f.mul(*x, inv);
                            }
                            rows[col] = Some(w.clone());
                            self.rank += 1;
                            return Some(w);
                        }
                    }
                    col += 1;
                }
                None
            }
        }
    }
}
