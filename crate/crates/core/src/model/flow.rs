use std::collections::BTreeMap;

use super::shape::{GoodSubspace, SpaceShape};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::Matrix;

/// A coordinate of `V_d (+) V_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Disc(usize),
    Comp(usize),
}

/// One coordinate function of an endomorphism: finitely many nonzero
/// coefficients.
pub type SparseRow = BTreeMap<Coord, Elem>;

/// A row-finite endomorphism of `V_d (+) prod K`.
///
/// Compact coordinates are grouped into blocks of `block` consecutive
/// coordinates. Compact row `i = q * block + a` at or beyond the prefix reads
/// `sum_k sum_b stencil[k][a][b] * v[(q + k) * block + b]`, dropping blocks
/// with negative index. Rows below `prefix.rows()` read `prefix` instead.
/// The discrete part feeds the first `dc.rows()` compact rows through `dc`,
/// and the discrete rows read `dd` on `V_d` and `cd` on the first
/// `cd.cols()` compact coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoSpec {
    block: usize,
    stencil: BTreeMap<i64, Matrix>,
    prefix: Matrix,
    dd: Matrix,
    cd: Matrix,
    dc: Matrix,
}

impl EndoSpec {
    /// Validates block shapes against `shape`. Zero stencil blocks are
    /// dropped.
    pub fn new(
        shape: &SpaceShape,
        block: usize,
        stencil: BTreeMap<i64, Matrix>,
        prefix: Matrix,
        dd: Matrix,
        cd: Matrix,
        dc: Matrix,
    ) -> Result<Self> {
        let f = &shape.field;
        let d = shape.discrete_dim;
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if block == 0 {
            return bad("block size must be positive".into());
        }
        for m in stencil.values().chain([&prefix, &dd, &cd, &dc]) {
            if m.field() != f {
                return Err(Error::FieldMismatch {
                    expected: f.to_string(),
                    found: m.field().to_string(),
                });
            }
        }
        if let Some((k, m)) = stencil.iter().find(|(_, m)| m.shape() != (block, block)) {
            return bad(format!(
                "stencil block at offset {k} has shape {:?}, expected {block}x{block}",
                m.shape()
            ));
        }
        if dd.shape() != (d, d) {
            return bad(format!("dd has shape {:?}, expected {d}x{d}", dd.shape()));
        }
        if cd.rows() != d {
            return bad(format!("cd has {} rows, expected {d}", cd.rows()));
        }
        if dc.cols() != d {
            return bad(format!("dc has {} columns, expected {d}", dc.cols()));
        }
        if !shape.compact
            && (!stencil.is_empty() || prefix.rows() + prefix.cols() > 0 || cd.cols() > 0 || dc.rows() > 0)
        {
            return bad("compact data given for a space without compact part".into());
        }
        let stencil = stencil.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        // without a discrete part the coupling blocks carry no data
        let (cd, dc) = if d == 0 {
            (Matrix::zeros(f, 0, 0), Matrix::zeros(f, 0, 0))
        } else {
            (cd, dc)
        };
        Ok(EndoSpec {
            block,
            stencil,
            prefix,
            dd,
            cd,
            dc,
        })
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn stencil(&self) -> &BTreeMap<i64, Matrix> {
        &self.stencil
    }

    pub fn prefix(&self) -> &Matrix {
        &self.prefix
    }

    pub fn dd(&self) -> &Matrix {
        &self.dd
    }

    pub fn cd(&self) -> &Matrix {
        &self.cd
    }

    pub fn dc(&self) -> &Matrix {
        &self.dc
    }

    /// Scalar reach of the nonzero stencil entries, `k * block + b - a`.
    fn reaches(&self) -> impl Iterator<Item = i64> + '_ {
        let s = self.block as i64;
        self.stencil.iter().flat_map(move |(&k, m)| {
            (0..self.block).flat_map(move |a| {
                (0..self.block)
                    .filter(move |&b| m.get(a, b) != 0)
                    .map(move |b| k * s + b as i64 - a as i64)
            })
        })
    }

    /// `max |k * block + b - a|` over nonzero stencil entries.
    pub fn bandwidth(&self) -> usize {
        self.reaches().map(|r| r.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// How far below its own index a stencil row may read.
    fn backward_reach(&self) -> usize {
        self.reaches().map(|r| (-r).max(0) as usize).max().unwrap_or(0)
    }

    fn min_block_offset(&self) -> i64 {
        self.stencil.keys().next().copied().unwrap_or(0).min(0)
    }

    /// Largest extent of the finite blocks: prefix rows and columns, `dc`
    /// rows, `cd` columns.
    pub fn prefix_extent(&self) -> usize {
        self.prefix
            .rows()
            .max(self.prefix.cols())
            .max(self.dc.rows())
            .max(self.cd.cols())
    }
}

/// A flow `(V, phi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    shape: SpaceShape,
    endo: EndoSpec,
    label: String,
}

/// Finite-window matrix of a flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    /// `(d + w) x (d + w)`, discrete coordinates first.
    pub matrix: Matrix,
    pub window: usize,
    /// Compact coordinates at or beyond the window that window rows read.
    pub spill: Vec<usize>,
}

/// The splitting of a window matrix along `V = U (+) V/U` for a good `U`.
/// `c` indexes the coordinates spanning `U`, `d` the complementary ones
/// (discrete coordinates and the zero set). `cd` maps `c` to `d`, `dc` maps
/// `d` to `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub c_coords: Vec<usize>,
    pub d_coords: Vec<usize>,
    pub cc: Matrix,
    pub cd: Matrix,
    pub dc: Matrix,
    pub dd: Matrix,
}

impl BlockDecomposition {
    pub fn reassemble(&self) -> Matrix {
        let n = self.c_coords.len() + self.d_coords.len();
        let mut m = Matrix::zeros(self.cc.field(), n, n);
        let parts = [
            (&self.cc, &self.c_coords, &self.c_coords),
            (&self.cd, &self.d_coords, &self.c_coords),
            (&self.dc, &self.c_coords, &self.d_coords),
            (&self.dd, &self.d_coords, &self.d_coords),
        ];
        for (block, rows, cols) in parts {
            for (a, &i) in rows.iter().enumerate() {
                for (b, &j) in cols.iter().enumerate() {
                    m.set(i, j, block.get(a, b));
                }
            }
        }
        m
    }
}

fn accumulate(f: &FiniteField, row: &mut SparseRow, c: Coord, a: Elem) {
    if a == 0 {
        return;
    }
    let e = row.entry(c).or_insert(0);
    *e = f.add(*e, a);
    if *e == 0 {
        row.remove(&c);
    }
}

impl Flow {
    /// Pairs a space with an endomorphism; fails if the endomorphism was
    /// built for a different shape.
    pub fn new(shape: SpaceShape, endo: EndoSpec, label: impl Into<String>) -> Result<Self> {
        let e = &endo;
        let checked = EndoSpec::new(
            &shape,
            e.block,
            e.stencil.clone(),
            e.prefix.clone(),
            e.dd.clone(),
            e.cd.clone(),
            e.dc.clone(),
        )?;
        Ok(Flow {
            shape,
            endo: checked,
            label: label.into(),
        })
    }

    pub fn shape(&self) -> &SpaceShape {
        &self.shape
    }

    pub fn endo(&self) -> &EndoSpec {
        &self.endo
    }

    pub fn field(&self) -> &FiniteField {
        &self.shape.field
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn discrete_dim(&self) -> usize {
        self.shape.discrete_dim
    }

    pub fn bandwidth(&self) -> usize {
        self.endo.bandwidth()
    }

    pub fn prefix_extent(&self) -> usize {
        self.endo.prefix_extent()
    }

    /// Smallest window at which cotrajectories `C_n(phi, U)` with
    /// `extent(U) <= m` are computed exactly: `m + n * b + prefix extent`.
    pub fn guarantee_bound(&self, m: usize, n: usize) -> usize {
        if !self.shape.compact {
            return 0;
        }
        m + n * self.bandwidth() + self.prefix_extent()
    }

    pub fn check_window(&self, window: usize, m: usize, n: usize) -> Result<()> {
        let required = self.guarantee_bound(m, n);
        if window < required {
            return Err(Error::WindowTooSmall { window, required, m, n });
        }
        Ok(())
    }

    /// Compact coordinate function `(phi v)_i`.
    pub fn compact_row(&self, i: usize) -> SparseRow {
        let f = self.field();
        let e = &self.endo;
        let mut row = SparseRow::new();
        if !self.shape.compact {
            return row;
        }
        if i < e.prefix.rows() {
            for j in 0..e.prefix.cols() {
                accumulate(f, &mut row, Coord::Comp(j), e.prefix.get(i, j));
            }
        } else {
            let s = e.block;
            let (q, a) = ((i / s) as i64, i % s);
            for (&k, m) in &e.stencil {
                let blk = q + k;
                if blk < 0 {
                    continue;
                }
                for b in 0..s {
                    accumulate(f, &mut row, Coord::Comp(blk as usize * s + b), m.get(a, b));
                }
            }
        }
        if i < e.dc.rows() {
            for t in 0..e.dc.cols() {
                accumulate(f, &mut row, Coord::Disc(t), e.dc.get(i, t));
            }
        }
        row
    }

    /// Discrete coordinate function `(phi v)_t`.
    pub fn discrete_row(&self, t: usize) -> SparseRow {
        let f = self.field();
        let e = &self.endo;
        let mut row = SparseRow::new();
        for u in 0..e.dd.cols() {
            accumulate(f, &mut row, Coord::Disc(u), e.dd.get(t, u));
        }
        for j in 0..e.cd.cols() {
            accumulate(f, &mut row, Coord::Comp(j), e.cd.get(t, j));
        }
        row
    }

    pub fn row(&self, c: Coord) -> SparseRow {
        match c {
            Coord::Disc(t) => self.discrete_row(t),
            Coord::Comp(i) => self.compact_row(i),
        }
    }

    /// Rows of the window matrix in sparse form, columns indexed as in
    /// [`Self::truncate`]; reads beyond the window are dropped.
    pub fn sparse_rows(&self, window: usize) -> Vec<Vec<(usize, Elem)>> {
        let d = self.discrete_dim();
        let w = self.shape.compact_width(window);
        let index = |c: Coord| match c {
            Coord::Disc(t) => Some(t),
            Coord::Comp(j) if j < w => Some(d + j),
            Coord::Comp(_) => None,
        };
        (0..d)
            .map(Coord::Disc)
            .chain((0..w).map(Coord::Comp))
            .map(|c| {
                self.row(c)
                    .into_iter()
                    .filter_map(|(col, a)| index(col).map(|j| (j, a)))
                    .collect()
            })
            .collect()
    }

    /// The `(d + w) x (d + w)` matrix of `phi` on `V_d (+) K^w`.
    pub fn truncate(&self, window: usize) -> Result<Truncation> {
        let extent = self.prefix_extent();
        if self.shape.compact && window < extent {
            return Err(Error::WindowTooSmall {
                window,
                required: extent,
                m: 0,
                n: 0,
            });
        }
        let d = self.discrete_dim();
        let w = self.shape.compact_width(window);
        let n = d + w;
        let mut matrix = Matrix::zeros(self.field(), n, n);
        let mut spill = std::collections::BTreeSet::new();
        let coords = (0..d).map(Coord::Disc).chain((0..w).map(Coord::Comp));
        for (r, c) in coords.enumerate() {
            for (col, a) in self.row(c) {
                match col {
                    Coord::Disc(t) => matrix.set(r, t, a),
                    Coord::Comp(j) if j < w => matrix.set(r, d + j, a),
                    Coord::Comp(j) => {
                        spill.insert(j);
                    }
                }
            }
        }
        Ok(Truncation {
            matrix,
            window: w,
            spill: spill.into_iter().collect(),
        })
    }

    /// Splits the window matrix along `U (+) V/U`.
    pub fn decompose(&self, u: &GoodSubspace, window: usize) -> Result<BlockDecomposition> {
        let t = self.truncate(window)?;
        let n = t.matrix.rows();
        let d_coords = u.constrained_coords(&self.shape, window);
        let c_coords: Vec<usize> = (0..n).filter(|i| !d_coords.contains(i)).collect();
        let m = &t.matrix;
        Ok(BlockDecomposition {
            cc: m.select(&c_coords, &c_coords),
            cd: m.select(&d_coords, &c_coords),
            dc: m.select(&c_coords, &d_coords),
            dd: m.select(&d_coords, &d_coords),
            c_coords,
            d_coords,
        })
    }
}

/// Builds an [`EndoSpec`] from a stencil valid for compact rows at or beyond
/// `prefix_rows` and row evaluators for everything else. Discrete parts of
/// compact rows are read for rows below `dc_rows` and must vanish beyond.
pub(crate) fn assemble(
    shape: &SpaceShape,
    block: usize,
    stencil: BTreeMap<i64, Matrix>,
    prefix_rows: usize,
    dc_rows: usize,
    compact_row: impl Fn(usize) -> SparseRow,
    discrete_row: impl Fn(usize) -> SparseRow,
) -> Result<EndoSpec> {
    let f = &shape.field;
    let d = shape.discrete_dim;
    let (prefix_rows, dc_rows) = if shape.compact { (prefix_rows, dc_rows) } else { (0, 0) };
    let max_comp = |rows: &[SparseRow]| {
        rows.iter()
            .flat_map(|r| r.keys())
            .filter_map(|c| match c {
                Coord::Comp(j) => Some(j + 1),
                Coord::Disc(_) => None,
            })
            .max()
            .unwrap_or(0)
    };

    let crow: Vec<SparseRow> = (0..prefix_rows.max(dc_rows)).map(&compact_row).collect();
    let pcols = max_comp(&crow[..prefix_rows]);
    let mut prefix = Matrix::zeros(f, prefix_rows, pcols);
    for (i, r) in crow[..prefix_rows].iter().enumerate() {
        for (&c, &a) in r {
            if let Coord::Comp(j) = c {
                prefix.set(i, j, a);
            }
        }
    }
    let disc_part = |r: &SparseRow| r.keys().any(|c| matches!(c, Coord::Disc(_)));
    let dc_used = crow.iter().rposition(disc_part).map_or(0, |i| i + 1);
    let mut dc = Matrix::zeros(f, dc_used, d);
    for (i, r) in crow[..dc_used].iter().enumerate() {
        for (&c, &a) in r {
            if let Coord::Disc(t) = c {
                dc.set(i, t, a);
            }
        }
    }

    let drow: Vec<SparseRow> = (0..d).map(&discrete_row).collect();
    let ccols = if shape.compact { max_comp(&drow) } else { 0 };
    let mut dd = Matrix::zeros(f, d, d);
    let mut cd = Matrix::zeros(f, d, ccols);
    for (t, r) in drow.iter().enumerate() {
        for (&c, &a) in r {
            match c {
                Coord::Disc(u) => dd.set(t, u, a),
                Coord::Comp(j) => cd.set(t, j, a),
            }
        }
    }
    let stencil = if shape.compact { stencil } else { BTreeMap::new() };
    EndoSpec::new(shape, block, stencil, prefix, dd, cd, dc)
}

/// `outer . inner`. Both flows must share field, shape, and block size.
pub fn compose(outer: &Flow, inner: &Flow) -> Result<Flow> {
    if outer.field() != inner.field() {
        return Err(Error::FieldMismatch {
            expected: outer.field().to_string(),
            found: inner.field().to_string(),
        });
    }
    if outer.shape != inner.shape {
        return Err(Error::DimensionMismatch("composing flows on different spaces".into()));
    }
    let (fo, fi) = (&outer.endo, &inner.endo);
    if fo.block != fi.block && outer.shape.compact {
        return Err(Error::DimensionMismatch(format!(
            "block sizes {} and {} differ",
            fo.block, fi.block
        )));
    }
    let field = outer.field();
    let s = fo.block;

    let mut stencil: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&k, a) in &fo.stencil {
        for (&l, b) in &fi.stencil {
            let prod = a.mul(b);
            stencil.entry(k + l).and_modify(|m| *m = m.add(&prod)).or_insert(prod);
        }
    }

    let back = fo.backward_reach();
    let prefix_rows = fo
        .prefix
        .rows()
        .max(s * (-fo.min_block_offset()) as usize)
        .max(fi.prefix.rows() + back)
        .max(fo.dc.rows());
    let dc_rows = fo.dc.rows().max(fo.prefix.rows()).max(fi.dc.rows() + back);

    let apply = |row: SparseRow| {
        let mut out = SparseRow::new();
        for (c, a) in row {
            for (c2, b) in inner.row(c) {
                accumulate(field, &mut out, c2, field.mul(a, b));
            }
        }
        out
    };
    let endo = assemble(
        &outer.shape,
        s,
        stencil,
        prefix_rows,
        dc_rows,
        |i| apply(outer.compact_row(i)),
        |t| apply(outer.discrete_row(t)),
    )?;
    Flow::new(outer.shape.clone(), endo, format!("{}*{}", outer.label, inner.label))
}
