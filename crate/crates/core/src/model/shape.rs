use std::collections::BTreeSet;

use crate::field::FiniteField;
use crate::linalg::{Matrix, Subspace};

/// `V = V_c (+) V_d`: a finite-dimensional discrete part and, optionally, the
/// compact part `prod_{i in N} K`. The compact coordinates are only ever
/// materialized through finite windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceShape {
    pub field: FiniteField,
    pub discrete_dim: usize,
    pub compact: bool,
}

impl SpaceShape {
    pub fn compact(field: &FiniteField) -> Self {
        SpaceShape {
            field: field.clone(),
            discrete_dim: 0,
            compact: true,
        }
    }

    pub fn discrete(field: &FiniteField, dim: usize) -> Self {
        SpaceShape {
            field: field.clone(),
            discrete_dim: dim,
            compact: false,
        }
    }

    pub fn mixed(field: &FiniteField, discrete_dim: usize) -> Self {
        SpaceShape {
            field: field.clone(),
            discrete_dim,
            compact: true,
        }
    }

    /// Number of compact coordinates materialized by a window of size `w`.
    pub fn compact_width(&self, w: usize) -> usize {
        if self.compact {
            w
        } else {
            0
        }
    }

    /// Dimension of the truncated space `V_d (+) K^w`.
    pub fn window_dim(&self, w: usize) -> usize {
        self.discrete_dim + self.compact_width(w)
    }
}

/// A basic open subspace `prod A_i` of the compact part with `A_i = 0` on a
/// finite zero set and `A_i = K` elsewhere. The discrete part contributes 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoodSubspace {
    zeros: BTreeSet<usize>,
}

impl GoodSubspace {
    pub fn new(zeros: impl IntoIterator<Item = usize>) -> Self {
        GoodSubspace {
            zeros: zeros.into_iter().collect(),
        }
    }

    /// `U_m`, vanishing on coordinates `0..m`. The chain is cofinal among
    /// good subspaces: `U_m` lies in `U_S` once `m > max S`.
    pub fn chain(m: usize) -> Self {
        GoodSubspace::new(0..m)
    }

    /// `U_0`: the whole compact part.
    pub fn full() -> Self {
        GoodSubspace::chain(0)
    }

    pub fn zeros(&self) -> &BTreeSet<usize> {
        &self.zeros
    }

    /// `max S + 1`, or 0 for the full compact part.
    pub fn extent(&self) -> usize {
        self.zeros.iter().next_back().map_or(0, |&i| i + 1)
    }

    /// Inclusion of good subspaces: `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &GoodSubspace) -> bool {
        other.zeros.is_subset(&self.zeros)
    }

    /// Window coordinates that must vanish: every discrete coordinate and
    /// every zero-set coordinate inside the window.
    pub fn constrained_coords(&self, shape: &SpaceShape, w: usize) -> Vec<usize> {
        let d = shape.discrete_dim;
        let cw = shape.compact_width(w);
        (0..d)
            .chain(self.zeros.iter().filter(|&&i| i < cw).map(|&i| d + i))
            .collect()
    }

    /// The subspace cut out inside the window `V_d (+) K^w`.
    pub fn window_subspace(&self, shape: &SpaceShape, w: usize) -> Subspace {
        Subspace::coordinate(&shape.field, shape.window_dim(w), &self.constrained_coords(shape, w))
    }

    /// The coordinate projection onto the constrained coordinates, as a
    /// matrix whose kernel is [`Self::window_subspace`].
    pub fn constraint_matrix(&self, shape: &SpaceShape, w: usize) -> Matrix {
        let n = shape.window_dim(w);
        let rows = self.constrained_coords(shape, w).into_iter().map(|c| {
            let mut r = vec![0; n];
            r[c] = 1;
            r
        });
        Matrix::from_rows_with_cols(&shape.field, n, rows)
    }
}
