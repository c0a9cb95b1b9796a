//! Restriction and extension of scalars for flows, finite levels of complete
//! tensor products, and the change-of-field check for entropy.

use serde::Serialize;

use crate::entropy::{cotrajectories_in, ent_star, EntropyConfig};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldEmbedding, FiniteField};
use crate::linalg::{kernel, Matrix};
use crate::model::{make_bernoulli, EndoSpec, Flow, GoodSubspace, SpaceShape};

fn expect_field(found: &FiniteField, expected: &FiniteField) -> Result<()> {
    if found != expected {
        return Err(Error::FieldMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(())
}

fn map_endo(flow: &Flow, shape: &SpaceShape, block: usize, f: impl Fn(&Matrix) -> Result<Matrix>) -> Result<EndoSpec> {
    let e = flow.endo();
    let stencil = e
        .stencil()
        .iter()
        .map(|(&k, m)| Ok((k, f(m)?)))
        .collect::<Result<_>>()?;
    EndoSpec::new(
        shape,
        block,
        stencil,
        f(e.prefix())?,
        f(e.dd())?,
        f(e.cd())?,
        f(e.dc())?,
    )
}

/// `Res_F^K` along `e: F -> K`. Each K-coordinate becomes `[K:F]`
/// consecutive F-coordinates in the order of `e.basis()`.
pub fn res_flow(e: &FieldEmbedding, flow: &Flow) -> Result<Flow> {
    expect_field(flow.field(), e.target())?;
    let r = e.degree();
    let shape = SpaceShape {
        field: e.source().clone(),
        discrete_dim: flow.discrete_dim() * r,
        compact: flow.shape().compact,
    };
    let endo = map_endo(flow, &shape, flow.endo().block() * r, |m| m.block_expand(e))?;
    Flow::new(shape, endo, format!("Res({})", flow.label()))
}

/// Zero set `S` becomes every F-coordinate inside the blocks over `S`.
pub fn res_good(e: &FieldEmbedding, u: &GoodSubspace) -> GoodSubspace {
    let r = e.degree();
    GoodSubspace::new(u.zeros().iter().flat_map(|&i| i * r..(i + 1) * r))
}

/// `Ind_K^L` along `e: K -> L`: same coordinates, entries embedded.
pub fn ind_flow(e: &FieldEmbedding, flow: &Flow) -> Result<Flow> {
    expect_field(flow.field(), e.source())?;
    let shape = SpaceShape {
        field: e.target().clone(),
        ..flow.shape().clone()
    };
    let endo = map_endo(flow, &shape, flow.endo().block(), |m| m.entry_embed(e))?;
    Flow::new(shape, endo, format!("Ind({})", flow.label()))
}

/// Good subspaces keep their zero set under induction.
pub fn ind_good(_e: &FieldEmbedding, u: &GoodSubspace) -> GoodSubspace {
    u.clone()
}

/// One level `V_i (x) W_j -> V_i' (x) W_j'` of the inverse system defining
/// a complete tensor product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorLevel {
    pub dim: usize,
    pub target_dim: usize,
    pub map: Matrix,
}

/// The level built from `f: K^a -> K^a'` and `g: K^b -> K^b'`.
pub fn complete_tensor_finite(a: usize, b: usize, f: &Matrix, g: &Matrix) -> Result<TensorLevel> {
    if f.cols() != a || g.cols() != b {
        return Err(Error::DimensionMismatch(format!(
            "maps with {} and {} columns on spaces of dimension {a} and {b}",
            f.cols(),
            g.cols()
        )));
    }
    Ok(TensorLevel {
        dim: a * b,
        target_dim: f.rows() * g.rows(),
        map: f.kronecker(g)?,
    })
}

/// Dimensions behind `Hom_L(Ind V, W) = Hom_K(V, Res W)` for
/// `V = K^a`, `W = L^b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionCheck {
    /// `dim_K` of the K-linear maps `Res Ind V -> Res W` commuting with `L`.
    pub lhs_dim_over_k: usize,
    /// `dim_K Hom_K(V, Res W)`.
    pub rhs_dim_over_k: usize,
    /// Rank of `X -> X . unit` from the left side to the right side.
    pub restriction_rank: usize,
    pub holds: bool,
}

/// Solves for `L`-linear maps as K-matrices commuting with multiplication
/// by a primitive element of `L`, then checks that composing with the unit
/// `V -> Res Ind V` is a bijection onto `Hom_K(V, Res W)`.
pub fn adjunction_dim_check(e: &FieldEmbedding, a: usize, b: usize) -> AdjunctionCheck {
    let (k, l, r) = (e.source(), e.target(), e.degree());
    let rho = |n: usize| {
        Matrix::identity(l, n)
            .scale(l.primitive_element())
            .block_expand(e)
            .expect("embedding target")
    };
    let (ra, rb) = (rho(a), rho(b));
    let (rows, cols) = (r * b, r * a);
    let unknowns = rows * cols;

    // column u of the system is the image of the u-th unit matrix
    let mut system = Matrix::zeros(k, unknowns, unknowns);
    for u in 0..unknowns {
        let mut x = Matrix::zeros(k, rows, cols);
        x.set(u / cols, u % cols, 1);
        let y = x.mul(&ra).add(&rb.mul(&x).scale(k.neg(1)));
        for (v, &c) in y.to_rows().concat().iter().enumerate() {
            system.set(v, u, c);
        }
    }
    let solutions = kernel(&system);

    let unit_coords = e.coords(l.one());
    let mut unit = Matrix::zeros(k, cols, a);
    for i in 0..a {
        for (t, &c) in unit_coords.iter().enumerate() {
            unit.set(i * r + t, i, c);
        }
    }
    let mut images = Matrix::zeros(k, 0, rows * a);
    for s in 0..solutions.dim() {
        let x = Matrix::from_rows_with_cols(k, cols, solutions.basis().row(s).chunks(cols.max(1)).take(rows));
        images.push_row(&x.mul(&unit).to_rows().concat());
    }
    let restriction_rank = images.rank();
    let lhs = solutions.dim();
    let rhs = a * r * b;
    AdjunctionCheck {
        lhs_dim_over_k: lhs,
        rhs_dim_over_k: rhs,
        restriction_rank,
        holds: lhs == r * a * b && restriction_rank == rhs,
    }
}

/// Change-of-field identities at one cell `(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub m: usize,
    pub n: usize,
    pub codim_f: usize,
    pub codim_k: usize,
    pub codim_l: usize,
    /// `Res C_n(phi, U) = C_n(Res phi, Res U)`.
    pub res_commutes: bool,
    /// `C_n(Ind phi, Ind U) = Ind C_n(phi, U)`.
    pub ind_commutes: bool,
}

impl IdentityCheck {
    pub fn holds(&self, degree_fk: usize) -> bool {
        self.res_commutes
            && self.ind_commutes
            && self.codim_f == degree_fk * self.codim_k
            && self.codim_l == self.codim_k
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Outcome of checking `ent_F(Res) = [K:F] ent_K` and `ent_L(Ind) = ent_K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub flow: String,
    pub tower: [FieldDescriptor; 3],
    pub ent_f: Option<usize>,
    pub ent_k: Option<usize>,
    pub ent_l: Option<usize>,
    pub degree_fk: usize,
    pub degree_kl: usize,
    pub identities: Vec<IdentityCheck>,
    pub failures: Vec<String>,
    pub verdict: Verdict,
}

/// Cells checked by [`verify_theorem`]: `n <= 8`, `m <= 3`, clipped to the
/// configuration.
pub const IDENTITY_MAX_N: usize = 8;
pub const IDENTITY_MAX_M: usize = 3;

/// Computes all three entropies and the per-cell change-of-field identities. Any
/// failed identity or disagreeing resolved value is a failure; otherwise any
/// unresolved value makes the verdict inconclusive.
pub fn verify_theorem(
    e_fk: &FieldEmbedding,
    e_kl: &FieldEmbedding,
    flow: &Flow,
    cfg: &EntropyConfig,
) -> Result<TheoremReport> {
    expect_field(flow.field(), e_fk.target())?;
    expect_field(flow.field(), e_kl.source())?;
    let r = e_fk.degree();
    let res = res_flow(e_fk, flow)?;
    let ind = ind_flow(e_kl, flow)?;

    let cfg_f = EntropyConfig {
        max_m: cfg.max_m * r,
        window: cfg.window.map(|w| w * r),
        ..cfg.clone()
    };
    let (ek, (ef, el)) = rayon::join(
        || ent_star(flow, cfg),
        || rayon::join(|| ent_star(&res, &cfg_f), || ent_star(&ind, cfg)),
    );
    let (ek, ef, el) = (ek?.value, ef?.value, el?.value);

    let max_n = IDENTITY_MAX_N.min(cfg.max_n);
    let mut identities = Vec::new();
    for m in 0..=IDENTITY_MAX_M.min(cfg.max_m) {
        let u = GoodSubspace::chain(m);
        let ur = res_good(e_fk, &u);
        let window = match cfg.window {
            Some(w) => w,
            None => {
                let need_f = res.guarantee_bound(ur.extent(), max_n).div_ceil(r);
                flow.guarantee_bound(m, max_n).max(need_f) + cfg.window_slack
            }
        };
        let ck = cotrajectories_in(flow, &u, max_n, window)?;
        let cf = cotrajectories_in(&res, &ur, max_n, window * r)?;
        let cl = cotrajectories_in(&ind, &ind_good(e_kl, &u), max_n, window)?;
        let uk = u.window_subspace(flow.shape(), window);
        let uf = ur.window_subspace(res.shape(), window * r);
        let ul = u.window_subspace(ind.shape(), window);
        for n in 1..=max_n {
            let (k, f, l) = (&ck[n - 1], &cf[n - 1], &cl[n - 1]);
            identities.push(IdentityCheck {
                m,
                n,
                codim_f: uf.codim_of(f)?,
                codim_k: uk.codim_of(k)?,
                codim_l: ul.codim_of(l)?,
                res_commutes: k.restrict_scalars(e_fk)? == *f,
                ind_commutes: k.extend_scalars(e_kl)? == *l,
            });
        }
    }

    let mut failures: Vec<String> = identities
        .iter()
        .filter(|c| !c.holds(r))
        .map(|c| format!("identity fails at m = {}, n = {}", c.m, c.n))
        .collect();
    if let (Some(f), Some(k)) = (ef, ek) {
        if f != r * k {
            failures.push(format!("ent_F = {f} but [K:F] ent_K = {}", r * k));
        }
    }
    if let (Some(l), Some(k)) = (el, ek) {
        if l != k {
            failures.push(format!("ent_L = {l} but ent_K = {k}"));
        }
    }
    let verdict = if !failures.is_empty() {
        Verdict::Fail
    } else if ek.is_none() || ef.is_none() || el.is_none() {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(TheoremReport {
        flow: flow.label().to_string(),
        tower: [
            e_fk.source().descriptor(),
            flow.field().descriptor(),
            e_kl.target().descriptor(),
        ],
        ent_f: ef,
        ent_k: ek,
        ent_l: el,
        degree_fk: r,
        degree_kl: e_kl.degree(),
        identities,
        failures,
        verdict,
    })
}

/// The `n`-dimensional Bernoulli shift over `K`, built as `Res Ind` of the
/// one-dimensional shift along a degree-`n` extension.
pub fn make_entropy_n(field: &FiniteField, n: usize) -> Result<Flow> {
    if n == 0 {
        return Err(Error::InvalidSpec("entropy-n needs n >= 1".into()));
    }
    let e = if n == 1 {
        FieldEmbedding::identity(field)
    } else {
        field.extend_by_degree(n)?.1
    };
    let flow = res_flow(&e, &ind_flow(&e, &make_bernoulli(field, 1))?)?;
    Ok(flow.with_label(format!("entropy-{n}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::codim_sequence;
    use crate::model::{compose, make_identity, random_stencil_flow, RandomFlowConfig};

    fn tower() -> (FiniteField, FiniteField, FiniteField, FieldEmbedding, FieldEmbedding) {
        let f = FiniteField::prime(2).unwrap();
        let (k, efk) = f.extend_by_degree(2).unwrap();
        let (l, ekl) = k.extend_by_degree(2).unwrap();
        (f, k, l, efk, ekl)
    }

    #[test]
    fn restricted_shift_is_a_block_shift() {
        let (f, k, _, efk, _) = tower();
        let res = res_flow(&efk, &make_bernoulli(&k, 1)).unwrap();
        assert_eq!(res.endo().block(), 2);
        assert_eq!(res.endo().stencil()[&1], Matrix::identity(&f, 2));
        assert!(res_flow(&efk, &make_bernoulli(&f, 1)).is_err());
    }

    #[test]
    fn restricted_identity_doubles_blocks() {
        let (f, k, _, efk, _) = tower();
        let res = res_flow(&efk, &make_identity(&SpaceShape::mixed(&k, 1))).unwrap();
        assert_eq!(res.discrete_dim(), 2);
        assert_eq!(res.truncate(6).unwrap().matrix, Matrix::identity(&f, 8));
    }

    #[test]
    fn restricted_prefix_uses_the_regular_representation() {
        let (f, k, _, efk, _) = tower();
        let shape = SpaceShape::compact(&k);
        let endo = EndoSpec::new(
            &shape,
            1,
            Default::default(),
            Matrix::from_rows(&k, [[2]]),
            Matrix::zeros(&k, 0, 0),
            Matrix::zeros(&k, 0, 0),
            Matrix::zeros(&k, 0, 0),
        )
        .unwrap();
        let res = res_flow(&efk, &Flow::new(shape, endo, "x").unwrap()).unwrap();
        assert_eq!(res.endo().prefix(), &Matrix::from_rows(&f, [[0, 1], [1, 1]]));
    }

    #[test]
    fn good_subspaces_under_change_of_field() {
        let (_, _, _, efk, ekl) = tower();
        assert_eq!(res_good(&efk, &GoodSubspace::chain(1)), GoodSubspace::new([0, 1]));
        assert_eq!(res_good(&efk, &GoodSubspace::full()), GoodSubspace::full());
        let (_, e3) = FiniteField::prime(2).unwrap().extend_by_degree(3).unwrap();
        assert_eq!(res_good(&e3, &GoodSubspace::new([2])), GoodSubspace::new([6, 7, 8]));
        assert_eq!(ind_good(&ekl, &GoodSubspace::chain(3)), GoodSubspace::chain(3));
    }

    #[test]
    fn induction_of_shift_and_identity() {
        let (f, _, _, efk, _) = tower();
        let ind = ind_flow(&efk, &make_bernoulli(&f, 1)).unwrap();
        assert_eq!(ind.endo(), make_bernoulli(efk.target(), 1).endo());
        let id = make_identity(&SpaceShape::mixed(&f, 2));
        assert_eq!(ind_flow(&FieldEmbedding::identity(&f), &id).unwrap().endo(), id.endo());
    }

    #[test]
    fn change_of_field_is_a_functor() {
        let (_, k, _, efk, ekl) = tower();
        let cfg = RandomFlowConfig {
            max_discrete: 0,
            ..RandomFlowConfig::default()
        };
        let a = random_stencil_flow(&k, 1, &cfg);
        let b = random_stencil_flow(&k, 2, &cfg);
        let ab = compose(&a, &b).unwrap();
        let w = 12;
        let lhs = res_flow(&efk, &ab).unwrap().truncate(2 * w).unwrap().matrix;
        let rhs = compose(&res_flow(&efk, &a).unwrap(), &res_flow(&efk, &b).unwrap())
            .unwrap()
            .truncate(2 * w)
            .unwrap()
            .matrix;
        assert_eq!(lhs, rhs);
        let lhs = ind_flow(&ekl, &ab).unwrap().truncate(w).unwrap().matrix;
        let rhs = compose(&ind_flow(&ekl, &a).unwrap(), &ind_flow(&ekl, &b).unwrap())
            .unwrap()
            .truncate(w)
            .unwrap()
            .matrix;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_levels() {
        let f = FiniteField::prime(2).unwrap();
        let g = Matrix::from_rows(&f, [[1, 0, 1], [0, 1, 1]]);
        let one = Matrix::identity(&f, 1);
        let t = complete_tensor_finite(1, 3, &one, &g).unwrap();
        assert_eq!(t.map, g);
        let t = complete_tensor_finite(2, 3, &Matrix::identity(&f, 2), &Matrix::identity(&f, 3)).unwrap();
        assert_eq!(t.dim, 6);
        assert!(complete_tensor_finite(3, 3, &one, &g).is_err());
    }

    #[test]
    fn adjunction_dimensions() {
        let (_, _, _, efk, ekl) = tower();
        for e in [&efk, &ekl] {
            for a in 0..=2 {
                for b in 0..=2 {
                    let c = adjunction_dim_check(e, a, b);
                    assert!(c.holds, "{c:?}");
                    assert_eq!(c.rhs_dim_over_k, a * b * e.degree());
                }
            }
        }
    }

    #[test]
    fn theorem_on_the_shift() {
        let (_, k, _, efk, ekl) = tower();
        let cfg = EntropyConfig {
            max_n: 24,
            ..EntropyConfig::default()
        };
        let rep = verify_theorem(&efk, &ekl, &make_bernoulli(&k, 1), &cfg).unwrap();
        assert_eq!((rep.ent_f, rep.ent_k, rep.ent_l), (Some(2), Some(1), Some(1)));
        assert_eq!(rep.verdict, Verdict::Pass);
        let rep = verify_theorem(&efk, &ekl, &make_identity(&SpaceShape::mixed(&k, 1)), &cfg).unwrap();
        assert_eq!((rep.ent_f, rep.ent_k, rep.ent_l), (Some(0), Some(0), Some(0)));
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn entropy_n_traces() {
        let f = FiniteField::prime(2).unwrap();
        for n in 1..=3 {
            let flow = make_entropy_n(&f, n).unwrap();
            assert_eq!(flow.endo().block(), n);
            let t = codim_sequence(&flow, &GoodSubspace::chain(n), 4, &EntropyConfig::default()).unwrap();
            assert_eq!(t.values, (0..4).map(|i| i * n).collect::<Vec<_>>());
        }
    }
}
