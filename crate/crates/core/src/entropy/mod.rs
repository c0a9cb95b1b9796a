//! Cotrajectories, their codimension traces, and the entropy estimator.
//!
//! For a good subspace `U` cut out by coordinate functionals `P` (every
//! discrete coordinate plus the zero set), `C_n(phi, U)` is the common kernel
//! of `P phi^j` for `j < n` restricted to `U`, so
//! `c_n = dim span(P, P phi, ..., P phi^{n-1}) - |P|`. The span is grown
//! incrementally: if `N_j` holds the vectors that were new at step `j`, then
//! `S_{j+1} = S_j + N_j phi`, so only the newest vectors are pushed through
//! `phi` at each step. Every functional involved is supported inside the
//! window once the window meets the guarantee bound, which makes the
//! truncated computation exact.

mod oracle;
mod trace;

use rayon::prelude::*;
use serde::Serialize;

pub use oracle::{brute_force_codim, ORACLE_MAX_DIM};
pub use trace::CodimTrace;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{EchelonBasis, Matrix, Subspace};
use crate::model::{compose, window_flow, Flow, GoodSubspace};

/// Knobs for the estimator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyConfig {
    /// Trace length `N`.
    pub max_n: usize,
    /// Largest `m` in the chain `U_0, ..., U_m`.
    pub max_m: usize,
    /// Number of equal final differences needed to call a limit.
    pub streak: usize,
    /// Added to the guarantee bound when choosing a window.
    pub window_slack: usize,
    /// A fixed window; checked against the guarantee bound.
    pub window: Option<usize>,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig {
            max_n: 64,
            max_m: 8,
            streak: 5,
            window_slack: 4,
            window: None,
        }
    }
}

impl EntropyConfig {
    /// The window for cotrajectories up to `n` in `U`.
    pub fn window_for(&self, flow: &Flow, u: &GoodSubspace, n: usize) -> Result<usize> {
        match self.window {
            Some(w) => {
                flow.check_window(w, u.extent(), n)?;
                Ok(w)
            }
            None => Ok(flow.guarantee_bound(u.extent(), n) + self.window_slack),
        }
    }
}

/// `H*(phi, U)`, or what is known about it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HStar {
    Exact {
        value: usize,
    },
    /// The trace did not settle. `c_n / n` is the last ratio seen and
    /// `upper` the last first difference, which bounds the limit from
    /// above.
    Unresolved {
        codim: usize,
        n: usize,
        upper: usize,
    },
}

impl HStar {
    /// Reads the limit off a trace: exact when the last `streak` first
    /// differences agree and the trace has the structure every cotrajectory
    /// sequence has.
    pub fn from_trace(trace: &CodimTrace, streak: usize) -> HStar {
        let n = trace.len();
        let codim = trace.values.last().copied().unwrap_or(0);
        let d = trace.differences();
        let upper = d.last().copied().unwrap_or(0);
        let settled = streak >= 1 && trace.final_streak() >= streak;
        if settled && trace.violations().is_empty() {
            HStar::Exact { value: upper }
        } else {
            HStar::Unresolved { codim, n, upper }
        }
    }

    pub fn value(&self) -> Option<usize> {
        match *self {
            HStar::Exact { value } => Some(value),
            HStar::Unresolved { .. } => None,
        }
    }
}

/// `H*` of one subspace of the chain together with its trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainPoint {
    pub m: usize,
    pub h_star: HStar,
    pub trace: CodimTrace,
}

/// `ent*(V, phi)` estimated over `U_0, ..., U_M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntropyEstimate {
    /// `None` when unresolved.
    pub value: Option<usize>,
    /// Largest exact `H*` seen; `ent*` is at least this.
    pub lower_bound: usize,
    pub per_u: Vec<ChainPoint>,
    /// Shortest final difference streak across the chain.
    pub streak: usize,
    /// `|K|`.
    pub field_order: u32,
}

impl EntropyEstimate {
    pub fn is_resolved(&self) -> bool {
        self.value.is_some()
    }

    /// `h_top = ent* log|K|` as the exact pair `(ent*, |K|)`.
    pub fn h_top(&self) -> Option<(usize, u32)> {
        self.value.map(|v| (v, self.field_order))
    }

    /// `ent* ln|K|` to 12 decimal places, for display.
    pub fn h_top_decimal(&self) -> Option<String> {
        self.h_top()
            .map(|(v, q)| format!("{:.12}", v as f64 * f64::from(q).ln()))
    }
}

/// Dense `v * phi` through sparse window rows.
fn apply_dual(flow: &Flow, rows: &[Vec<(usize, Elem)>], v: &[Elem]) -> Vec<Elem> {
    let f = flow.field();
    let mut out = vec![0; v.len()];
    for (i, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for &(j, b) in &rows[i] {
            out[j] = f.add(out[j], f.mul(a, b));
        }
    }
    out
}

/// `c_1, ..., c_N` for `U`, all computed in the window chosen for `n = N`.
pub fn codim_sequence(flow: &Flow, u: &GoodSubspace, max_n: usize, cfg: &EntropyConfig) -> Result<CodimTrace> {
    assert!(max_n >= 1, "traces start at n = 1");
    let window = cfg.window_for(flow, u, max_n)?;
    let dim = flow.shape().window_dim(window);
    let rows = flow.sparse_rows(window);
    let constrained = u.constrained_coords(flow.shape(), window);
    let p = constrained.len();

    let mut basis = EchelonBasis::new(flow.field(), dim);
    let mut frontier: Vec<Vec<Elem>> = constrained
        .iter()
        .filter_map(|&c| {
            let mut e = vec![0; dim];
            e[c] = 1;
            basis.insert(&e)
        })
        .collect();
    let mut values = vec![basis.rank() - p];
    for _ in 1..max_n {
        frontier = frontier
            .iter()
            .filter_map(|v| basis.insert(&apply_dual(flow, &rows, v)))
            .collect();
        values.push(basis.rank() - p);
    }
    Ok(CodimTrace {
        u: u.clone(),
        values,
        windows: vec![window; max_n],
    })
}

/// `C_n(phi, U)` inside the window `V_d (+) K^w` chosen by the guarantee
/// bound plus the configured slack (or the pinned window).
pub fn cotrajectory(flow: &Flow, u: &GoodSubspace, n: usize, cfg: &EntropyConfig) -> Result<Subspace> {
    let window = cfg.window_for(flow, u, n)?;
    cotrajectory_in(flow, u, n, window)
}

/// `C_n(phi, U)` in a given window, by intersecting preimages of `U` under
/// powers of the window matrix.
pub fn cotrajectory_in(flow: &Flow, u: &GoodSubspace, n: usize, window: usize) -> Result<Subspace> {
    Ok(cotrajectories_in(flow, u, n, window)?.pop().expect("n >= 1"))
}

/// `C_1, ..., C_n` in one window.
pub fn cotrajectories_in(flow: &Flow, u: &GoodSubspace, n: usize, window: usize) -> Result<Vec<Subspace>> {
    assert!(n >= 1, "cotrajectories start at n = 1");
    flow.check_window(window, u.extent(), n)?;
    let phi = flow.truncate(window)?.matrix;
    let uw = u.window_subspace(flow.shape(), window);
    let mut out = vec![uw.clone()];
    let mut power = Matrix::identity(flow.field(), phi.rows());
    for _ in 1..n {
        power = phi.mul(&power);
        let next = out.last().unwrap().intersect(&uw.preimage(&power)?)?;
        out.push(next);
    }
    Ok(out)
}

/// `H*(phi, U)` from a trace of the configured length.
pub fn h_star(flow: &Flow, u: &GoodSubspace, cfg: &EntropyConfig) -> Result<HStar> {
    let trace = codim_sequence(flow, u, cfg.max_n, cfg)?;
    Ok(HStar::from_trace(&trace, cfg.streak))
}

/// `ent*(V, phi)` as the largest `H*(phi, U_m)` for `m <= M`. Unresolved
/// when some `H*` is unresolved or the chain is still climbing at `m = M`.
pub fn ent_star(flow: &Flow, cfg: &EntropyConfig) -> Result<EntropyEstimate> {
    let per_u = (0..=cfg.max_m)
        .into_par_iter()
        .map(|m| {
            let u = GoodSubspace::chain(m);
            let trace = codim_sequence(flow, &u, cfg.max_n, cfg)?;
            let h_star = HStar::from_trace(&trace, cfg.streak);
            Ok(ChainPoint { m, h_star, trace })
        })
        .collect::<Result<Vec<_>>>()?;

    let values: Vec<Option<usize>> = per_u.iter().map(|p| p.h_star.value()).collect();
    let lower_bound = values.iter().flatten().copied().max().unwrap_or(0);
    let climbing = match values[..] {
        [.., Some(a), Some(b)] => b > a,
        _ => false,
    };
    let value = (values.iter().all(Option::is_some) && !climbing).then_some(lower_bound);
    let streak = per_u.iter().map(|p| p.trace.final_streak()).min().unwrap_or(0);
    Ok(EntropyEstimate {
        value,
        lower_bound,
        per_u,
        streak,
        field_order: flow.field().order(),
    })
}

/// `phi^k` for `k >= 1`.
pub fn power_flow(flow: &Flow, k: usize) -> Result<Flow> {
    assert!(k >= 1, "powers start at 1");
    let mut out = flow.clone();
    for _ in 1..k {
        out = compose(flow, &out)?;
    }
    Ok(out.with_label(format!("{}^{k}", flow.label())))
}

/// `A phi A^{-1}`, where `A` acts on `V_d (+) K^w` and as the identity on
/// the rest of the compact part.
pub fn conjugate_flow(flow: &Flow, a: &Matrix) -> Result<Flow> {
    let inv = a.inverse().map_err(|_| Error::NotInvertible)?;
    let block = flow.endo().block();
    let fa = window_flow(flow.shape(), block, a)?;
    let fi = window_flow(flow.shape(), block, &inv)?;
    let out = compose(&fa, &compose(flow, &fi)?)?;
    Ok(out.with_label(format!("conj({})", flow.label())))
}
