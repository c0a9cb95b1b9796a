//! Desk-scale locally linearly compact spaces `V_c (+) V_d` and their
//! row-finite endomorphisms.

mod flow;
mod shape;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use flow::{compose, BlockDecomposition, Coord, EndoSpec, Flow, SparseRow, Truncation};
pub use shape::{GoodSubspace, SpaceShape};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::linalg::Matrix;
use flow::assemble;

fn stencil_of(field: &FiniteField, entries: &[(i64, usize)]) -> BTreeMap<i64, Matrix> {
    entries.iter().map(|&(k, s)| (k, Matrix::identity(field, s))).collect()
}

/// Left Bernoulli shift on `prod (K^k)`, flattened: `(phi v)_i = v_{i + k}`.
pub fn make_bernoulli(field: &FiniteField, block_dim: usize) -> Flow {
    assert!(block_dim >= 1, "Bernoulli block dimension must be positive");
    let shape = SpaceShape::compact(field);
    let endo = EndoSpec::new(
        &shape,
        1,
        stencil_of(field, &[(block_dim as i64, 1)]),
        Matrix::zeros(field, 0, 0),
        Matrix::zeros(field, 0, 0),
        Matrix::zeros(field, 0, 0),
        Matrix::zeros(field, 0, 0),
    )
    .expect("well-formed shift");
    Flow::new(shape, endo, format!("bernoulli-{block_dim}")).expect("consistent shape")
}

pub fn make_identity(shape: &SpaceShape) -> Flow {
    let f = &shape.field;
    let d = shape.discrete_dim;
    let stencil = if shape.compact {
        stencil_of(f, &[(0, 1)])
    } else {
        BTreeMap::new()
    };
    let endo = EndoSpec::new(
        shape,
        1,
        stencil,
        Matrix::zeros(f, 0, 0),
        Matrix::identity(f, d),
        Matrix::zeros(f, d, 0),
        Matrix::zeros(f, 0, d),
    )
    .expect("well-formed identity");
    Flow::new(shape.clone(), endo, "identity").expect("consistent shape")
}

/// Block-diagonal flow on `V (+) W`. Discrete coordinates of `f` come first;
/// compact blocks of the two summands are interleaved, so the sum has block
/// size `block(f) + block(g)`.
pub fn direct_sum(f: &Flow, g: &Flow) -> Result<Flow> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch {
            expected: f.field().to_string(),
            found: g.field().to_string(),
        });
    }
    let field = f.field();
    let (df, dg) = (f.discrete_dim(), g.discrete_dim());
    let (cf, cg) = (f.shape().compact, g.shape().compact);
    let (sf, sg) = (f.endo().block(), g.endo().block());
    let s = match (cf, cg) {
        (true, true) => sf + sg,
        (true, false) => sf,
        (false, true) => sg,
        (false, false) => 1,
    };
    let shape = SpaceShape {
        field: field.clone(),
        discrete_dim: df + dg,
        compact: cf || cg,
    };

    let map_f = |c: Coord| match c {
        Coord::Disc(t) => Coord::Disc(t),
        Coord::Comp(i) if cg => Coord::Comp(i / sf * s + i % sf),
        Coord::Comp(i) => Coord::Comp(i),
    };
    let map_g = |c: Coord| match c {
        Coord::Disc(t) => Coord::Disc(df + t),
        Coord::Comp(i) if cf => Coord::Comp(i / sg * s + sf + i % sg),
        Coord::Comp(i) => Coord::Comp(i),
    };
    let owner = |i: usize| -> (bool, usize) {
        match (cf, cg) {
            (true, true) => {
                let (q, a) = (i / s, i % s);
                if a < sf {
                    (true, q * sf + a)
                } else {
                    (false, q * sg + a - sf)
                }
            }
            (true, false) => (true, i),
            _ => (false, i),
        }
    };

    let mut stencil = BTreeMap::new();
    let offsets: std::collections::BTreeSet<i64> = f
        .endo()
        .stencil()
        .keys()
        .filter(|_| cf)
        .chain(g.endo().stencil().keys().filter(|_| cg))
        .copied()
        .collect();
    for k in offsets {
        let mut m = Matrix::zeros(field, s, s);
        let parts = [(cf, f, 0usize, sf), (cg, g, if cf { sf } else { 0 }, sg)];
        for (present, flow, off, size) in parts {
            if let (true, Some(c)) = (present, flow.endo().stencil().get(&k)) {
                for a in 0..size {
                    for b in 0..size {
                        m.set(off + a, off + b, c.get(a, b));
                    }
                }
            }
        }
        stencil.insert(k, m);
    }

    let blocks = |rows_f: usize, rows_g: usize| match (cf, cg) {
        (true, true) => rows_f.div_ceil(sf).max(rows_g.div_ceil(sg)) * s,
        (true, false) => rows_f,
        _ => rows_g,
    };
    let prefix_rows = blocks(f.endo().prefix().rows(), g.endo().prefix().rows());
    let dc_rows = blocks(f.endo().dc().rows(), g.endo().dc().rows());

    let endo = assemble(
        &shape,
        s,
        stencil,
        prefix_rows,
        dc_rows,
        |i| match owner(i) {
            (true, loc) => f.compact_row(loc).into_iter().map(|(c, a)| (map_f(c), a)).collect(),
            (false, loc) => g.compact_row(loc).into_iter().map(|(c, a)| (map_g(c), a)).collect(),
        },
        |t| {
            if t < df {
                f.discrete_row(t).into_iter().map(|(c, a)| (map_f(c), a)).collect()
            } else {
                g.discrete_row(t - df).into_iter().map(|(c, a)| (map_g(c), a)).collect()
            }
        },
    )?;
    Flow::new(shape, endo, format!("{}+{}", f.label(), g.label()))
}

/// The flow acting as `a` on `V_d (+) K^w` and as the identity on the
/// remaining compact coordinates, where `a` is `(d + w) x (d + w)`. The
/// compact identity uses the given block size.
pub fn window_flow(shape: &SpaceShape, block: usize, a: &Matrix) -> Result<Flow> {
    let d = shape.discrete_dim;
    if a.rows() != a.cols() || a.rows() < d || (!shape.compact && a.rows() != d) {
        return Err(Error::DimensionMismatch(format!(
            "window matrix of shape {:?} for discrete dimension {d}",
            a.shape()
        )));
    }
    if a.field() != &shape.field {
        return Err(Error::FieldMismatch {
            expected: shape.field.to_string(),
            found: a.field().to_string(),
        });
    }
    let f = &shape.field;
    let w = a.rows() - d;
    let disc: Vec<usize> = (0..d).collect();
    let comp: Vec<usize> = (d..d + w).collect();
    let stencil = if shape.compact {
        stencil_of(f, &[(0, block)])
    } else {
        BTreeMap::new()
    };
    let endo = EndoSpec::new(
        shape,
        block,
        stencil,
        a.select(&comp, &comp),
        a.select(&disc, &disc),
        a.select(&disc, &comp),
        a.select(&comp, &disc),
    )?;
    Flow::new(shape.clone(), endo, "window")
}

/// Parameters for [`random_stencil_flow`].
#[derive(Clone, Debug)]
pub struct RandomFlowConfig {
    pub min_offset: i64,
    pub max_offset: i64,
    pub block: usize,
    pub max_prefix: usize,
    pub max_discrete: usize,
}

impl Default for RandomFlowConfig {
    fn default() -> Self {
        RandomFlowConfig {
            min_offset: -1,
            max_offset: 2,
            block: 1,
            max_prefix: 2,
            max_discrete: 1,
        }
    }
}

/// A seeded random flow: uniform stencil blocks on `min..=max` offsets, a
/// small random prefix, and an optional small
/// discrete part coupled both ways to the compact part.
pub fn random_stencil_flow(field: &FiniteField, seed: u64, cfg: &RandomFlowConfig) -> Flow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.order();
    let s = cfg.block;
    let rand_matrix = |rng: &mut ChaCha8Rng, r: usize, c: usize| {
        let mut m = Matrix::zeros(field, r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, rng.gen_range(0..q));
            }
        }
        m
    };
    let mut stencil = BTreeMap::new();
    for k in cfg.min_offset..=cfg.max_offset {
        stencil.insert(k, rand_matrix(&mut rng, s, s));
    }
    let pr = rng.gen_range(0..=cfg.max_prefix);
    let pc = if pr == 0 { 0 } else { pr + rng.gen_range(0..=1) };
    let prefix = rand_matrix(&mut rng, pr, pc);
    let d = rng.gen_range(0..=cfg.max_discrete);
    let shape = SpaceShape::mixed(field, d);
    let (cd_cols, dc_rows) = if d > 0 {
        (rng.gen_range(0..=2), rng.gen_range(0..=2))
    } else {
        (0, 0)
    };
    let dd = rand_matrix(&mut rng, d, d);
    let cd = rand_matrix(&mut rng, d, cd_cols);
    let dc = rand_matrix(&mut rng, dc_rows, d);
    let endo = EndoSpec::new(&shape, s, stencil, prefix, dd, cd, dc).expect("well-formed random flow");
    Flow::new(shape, endo, format!("random-{seed}")).expect("consistent shape")
}

/// A uniformly random invertible `n x n` matrix.
pub fn random_invertible(field: &FiniteField, n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, rng.gen_range(0..field.order()));
            }
        }
        if m.is_invertible() {
            return m;
        }
    }
}
