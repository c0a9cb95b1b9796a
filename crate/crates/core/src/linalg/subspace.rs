use super::Matrix;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldEmbedding, FiniteField};

/// A subspace of `field^n`, stored as the nonzero rows of its reduced
/// row-echelon basis. Two subspaces are equal exactly when their stored bases
/// are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Row space of `rows`.
    pub fn span(rows: &Matrix) -> Subspace {
        let (r, rank) = rows.rref();
        Subspace {
            ambient: rows.cols(),
            basis: r.select_rows(&(0..rank).collect::<Vec<_>>()),
        }
    }

    pub fn zero(field: &FiniteField, n: usize) -> Subspace {
        Subspace {
            ambient: n,
            basis: Matrix::zeros(field, 0, n),
        }
    }

    pub fn full(field: &FiniteField, n: usize) -> Subspace {
        Subspace {
            ambient: n,
            basis: Matrix::identity(field, n),
        }
    }

    /// Coordinate subspace `{v : v_i = 0 for i in zeros}`.
    pub fn coordinate(field: &FiniteField, n: usize, zeros: &[usize]) -> Subspace {
        let rows = (0..n).filter(|i| !zeros.contains(i)).map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        });
        Subspace {
            ambient: n,
            basis: Matrix::from_rows_with_cols(field, n, rows),
        }
    }

    pub fn field(&self) -> &FiniteField {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// The canonical basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut m = self.basis.clone();
        m.push_row(v);
        m.rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Rows spanning the annihilator `{y : y . s = 0 for s in self}`, so that
    /// `self = {v : A v = 0}`.
    pub fn constraints(&self) -> Matrix {
        kernel(&self.basis).basis
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                expected: self.field().to_string(),
                found: other.field().to_string(),
            });
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(kernel(&self.constraints().vstack(&other.constraints())?))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Subspace::span(&self.basis.vstack(&other.basis)?))
    }

    /// `{v : m v in self}`.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace> {
        if m.rows() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "map has {} rows, subspace lives in dimension {}",
                m.rows(),
                self.ambient
            )));
        }
        Ok(kernel(&self.constraints().try_mul(m)?))
    }

    /// `dim self - dim inner`, after checking `inner` lies in `self`.
    pub fn codim_of(&self, inner: &Subspace) -> Result<usize> {
        self.check(inner)?;
        if !inner.is_subspace_of(self) {
            return Err(Error::NotContained);
        }
        Ok(self.dim() - inner.dim())
    }

    /// The subspace viewed over the smaller field of `e: F -> K`: each
    /// coordinate becomes a block of `[K:F]` source coordinates, and the
    /// `F`-span of `b_i * s` over basis vectors `s` and basis elements `b_i`
    /// replaces the `K`-span.
    pub fn restrict_scalars(&self, e: &FieldEmbedding) -> Result<Subspace> {
        if self.field() != e.target() {
            return Err(Error::FieldMismatch {
                expected: e.target().to_string(),
                found: self.field().to_string(),
            });
        }
        let k = e.target();
        let r = e.degree();
        let mut rows = Matrix::zeros(e.source(), 0, self.ambient * r);
        for s in 0..self.dim() {
            for &b in e.basis() {
                let row: Vec<Elem> = self.basis.row(s).iter().flat_map(|&x| e.coords(k.mul(b, x))).collect();
                rows.push_row(&row);
            }
        }
        Ok(Subspace::span(&rows))
    }

    /// The `L`-span of the subspace along `e: K -> L`.
    pub fn extend_scalars(&self, e: &FieldEmbedding) -> Result<Subspace> {
        Ok(Subspace::span(&self.basis.entry_embed(e)?))
    }
}

/// `{v : m v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let f = m.field();
    let n = m.cols();
    let (r, rank) = m.rref();
    let pivots = r.pivots();
    let mut out = Matrix::zeros(f, 0, n);
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; n];
        v[free] = 1;
        for (i, &p) in pivots.iter().enumerate().take(rank) {
            v[p] = f.neg(r.get(i, free));
        }
        out.push_row(&v);
    }
    Subspace::span(&out)
}

/// Column space of `m`, as a subspace of `field^{rows}`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(&m.transpose())
}

/// `{v : m v in s}`.
pub fn preimage(m: &Matrix, s: &Subspace) -> Result<Subspace> {
    s.preimage(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    fn sp(f: &FiniteField, rows: &[[Elem; 3]]) -> Subspace {
        Subspace::span(&Matrix::from_rows_with_cols(f, 3, rows))
    }

    #[test]
    fn kernel_examples() {
        let f = gf2();
        assert_eq!(kernel(&Matrix::identity(&f, 3)), Subspace::zero(&f, 3));
        assert_eq!(kernel(&Matrix::zeros(&f, 3, 3)), Subspace::full(&f, 3));
        let k = kernel(&Matrix::from_rows(&f, [[1, 1, 0]]));
        assert_eq!(k, sp(&f, &[[1, 1, 0], [0, 0, 1]]));
    }

    #[test]
    fn preimage_examples() {
        let f = gf2();
        let full = Subspace::full(&f, 3);
        let m = Matrix::from_rows(&f, [[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        assert_eq!(full.preimage(&m).unwrap(), full);
        let s = Subspace::coordinate(&f, 3, &[0]);
        assert_eq!(s.preimage(&Matrix::identity(&f, 3)).unwrap(), s);
        assert_eq!(s.preimage(&m).unwrap(), Subspace::coordinate(&f, 3, &[1]));
        assert!(matches!(
            s.preimage(&Matrix::identity(&f, 2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn intersect_examples() {
        let f = gf2();
        let s = sp(&f, &[[1, 0, 0], [0, 1, 0]]);
        let t = sp(&f, &[[0, 1, 0], [0, 0, 1]]);
        assert_eq!(s.intersect(&s).unwrap(), s);
        assert_eq!(s.intersect(&Subspace::full(&f, 3)).unwrap(), s);
        assert_eq!(s.intersect(&t).unwrap(), sp(&f, &[[0, 1, 0]]));
        assert!(s.intersect(&Subspace::full(&f, 4)).is_err());
    }

    #[test]
    fn codim_examples() {
        let f = gf2();
        let u = Subspace::coordinate(&f, 3, &[0]);
        assert_eq!(u.codim_of(&u).unwrap(), 0);
        assert_eq!(Subspace::full(&f, 3).codim_of(&Subspace::zero(&f, 3)).unwrap(), 3);
        assert_eq!(u.codim_of(&Subspace::coordinate(&f, 3, &[0, 1])).unwrap(), 1);
        assert_eq!(
            Subspace::coordinate(&f, 3, &[1]).codim_of(&Subspace::coordinate(&f, 3, &[0, 2])),
            Err(Error::NotContained)
        );
    }

    #[test]
    fn restriction_scales_dimension() {
        let f = gf2();
        let (gf4, e) = f.extend_by_degree(2).unwrap();
        let s = Subspace::span(&Matrix::from_rows(&gf4, [[1, 2, 3]]));
        let r = s.restrict_scalars(&e).unwrap();
        assert_eq!(r.ambient(), 6);
        assert_eq!(r.dim(), 2);
        // membership: coords of (a*s) for every a in GF(4)
        for a in gf4.elements() {
            let v: Vec<Elem> = s.basis().row(0).iter().flat_map(|&x| e.coords(gf4.mul(a, x))).collect();
            assert!(r.contains(&v));
        }
    }
}
