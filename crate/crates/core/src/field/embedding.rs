use super::{Elem, FiniteField};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// An inclusion `F -> K` of finite fields together with an `F`-basis of `K`.
///
/// Embeddings are only ever built along a tower (power bases from
/// [`FiniteField::extend`], identities, and composites), so the source is
/// always a member of the target's tower and elements embed without changing
/// their packed index. The basis is the product of the power bases of the
/// intermediate levels, ordered so that the coordinate of `x^i * y^j`
/// (`x` from the lower level) sits at index `j * [K':F] + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldEmbedding {
    source: FiniteField,
    target: FiniteField,
    degree: usize,
    generator_image: Elem,
    basis: Vec<Elem>,
}

impl FieldEmbedding {
    pub(super) fn power_basis(base: &FiniteField, ext: &FiniteField) -> Self {
        let y = base.order();
        let basis = (0..ext.degree() as u64).map(|j| ext.pow(y, j)).collect();
        FieldEmbedding {
            source: base.clone(),
            target: ext.clone(),
            degree: ext.degree(),
            generator_image: base.primitive_element(),
            basis,
        }
    }

    pub fn identity(field: &FiniteField) -> Self {
        FieldEmbedding {
            source: field.clone(),
            target: field.clone(),
            degree: 1,
            generator_image: field.primitive_element(),
            basis: vec![field.one()],
        }
    }

    /// Embedding between two members of one tower.
    pub fn between(source: &FiniteField, target: &FiniteField) -> Result<Self> {
        let tower = target.tower();
        let start = tower
            .iter()
            .position(|f| f == source)
            .ok_or_else(|| Error::Mismatch(format!("{source} is not in the tower of {target}")))?;
        let mut e = FieldEmbedding::identity(source);
        for w in tower[start..].windows(2) {
            e = e.compose(&FieldEmbedding::power_basis(&w[0], &w[1]))?;
        }
        Ok(e)
    }

    /// `self: F -> K` followed by `outer: K -> L`, giving `F -> L` of degree
    /// `[L:K][K:F]`.
    pub fn compose(&self, outer: &FieldEmbedding) -> Result<FieldEmbedding> {
        if self.target != outer.source {
            return Err(Error::Mismatch(format!(
                "inner target {} differs from outer source {}",
                self.target, outer.source
            )));
        }
        let l = &outer.target;
        let basis = outer
            .basis
            .iter()
            .flat_map(|&bj| self.basis.iter().map(move |&bi| l.mul(bj, bi)))
            .collect();
        Ok(FieldEmbedding {
            source: self.source.clone(),
            target: outer.target.clone(),
            degree: self.degree * outer.degree,
            generator_image: self.generator_image,
            basis,
        })
    }

    pub fn source(&self) -> &FiniteField {
        &self.source
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    /// `[K:F]`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Image of the least primitive element of the source.
    pub fn generator_image(&self) -> Elem {
        self.generator_image
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    #[inline]
    pub fn embed(&self, a: Elem) -> Elem {
        debug_assert!(self.source.contains(a));
        a
    }

    /// Source-field coordinates of `alpha` in [`Self::basis`].
    pub fn coords(&self, alpha: Elem) -> Vec<Elem> {
        let q = self.source.order();
        let mut a = alpha;
        (0..self.degree)
            .map(|_| {
                let d = a % q;
                a /= q;
                d
            })
            .collect()
    }

    /// `sum coords[i] * basis[i]`, evaluated with target arithmetic.
    pub fn from_coords(&self, coords: &[Elem]) -> Elem {
        let k = &self.target;
        coords
            .iter()
            .zip(&self.basis)
            .fold(k.zero(), |acc, (&c, &b)| k.add(acc, k.mul(self.embed(c), b)))
    }

    /// Matrix over the source of multiplication by `alpha` on the target:
    /// column `j` holds the coordinates of `alpha * basis[j]`.
    pub fn regular_representation(&self, alpha: Elem) -> Matrix {
        let k = &self.target;
        let mut m = Matrix::zeros(&self.source, self.degree, self.degree);
        for (j, &b) in self.basis.iter().enumerate() {
            for (i, c) in self.coords(k.mul(alpha, b)).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// Prime-field coordinates of the basis, one row per basis element.
    pub fn basis_prime_matrix(&self) -> Matrix {
        let prime = self.target.tower().remove(0);
        let rows = self
            .basis
            .iter()
            .flat_map(|&b| {
                let src = &self.source;
                let k = &self.target;
                // multiply by each prime-field basis element of the source
                (0..src.abs_degree() as u32).map(move |t| {
                    let e = src.characteristic().pow(t);
                    k.prime_coords(k.mul(b, e))
                })
            })
            .collect::<Vec<_>>();
        Matrix::from_rows(&prime, rows)
    }
}
