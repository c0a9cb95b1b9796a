//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use llc_entropy::cli::{self, oracle_cells, EXIT_INCONCLUSIVE, EXIT_OK};
use llc_entropy::entropy::{codim_sequence, conjugate_flow, ent_star, power_flow, EntropyConfig};
use llc_entropy::field::{FieldEmbedding, FiniteField};
use llc_entropy::functors::{adjunction_dim_check, ind_flow, make_entropy_n, res_flow};
use llc_entropy::io::{flow_to_json, parse_flow};
use llc_entropy::linalg::Matrix;
use llc_entropy::model::{
    direct_sum, make_bernoulli, make_identity, random_invertible, random_stencil_flow, EndoSpec, Flow, GoodSubspace,
    RandomFlowConfig, SpaceShape,
};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn gf2() -> FiniteField {
    FiniteField::prime(2).unwrap()
}

/// `GF(2) <= GF(4) <= GF(16)`.
fn tower() -> (FiniteField, FieldEmbedding, FieldEmbedding) {
    let (k, e_fk) = gf2().extend_by_degree(2).unwrap();
    let (_, e_kl) = k.extend_by_degree(2).unwrap();
    (k, e_fk, e_kl)
}

fn entropy(flow: &Flow) -> Option<usize> {
    ent_star(flow, &EntropyConfig::default()).unwrap().value
}

fn c1_bernoulli() -> Outcome {
    let start = Instant::now();
    let (k, _, _) = tower();
    let b = make_bernoulli(&k, 1);
    let est = ent_star(&b, &EntropyConfig::default()).map_err(|e| e.to_string())?;
    let trace = codim_sequence(&b, &GoodSubspace::chain(1), 6, &EntropyConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(est.value == Some(1), format!("ent* = {:?}", est.value))?;
    check(trace.values == [0, 1, 2, 3, 4, 5], format!("trace {:?}", trace.values))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "ent* = 1 over GF(4), U_1 trace {:?}, {elapsed:.2?}",
        trace.values
    ))
}

fn c2_restriction() -> Outcome {
    let start = Instant::now();
    let (k, e_fk, _) = tower();
    let res = res_flow(&e_fk, &make_bernoulli(&k, 1)).map_err(|e| e.to_string())?;
    let v = entropy(&res);
    let elapsed = start.elapsed();
    check(v == Some(2), format!("ent_F = {v:?}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("ent_GF(2)(Res) = 2 = 2 * 1, {elapsed:.2?}"))
}

fn c3_induction() -> Outcome {
    let start = Instant::now();
    let (k, _, e_kl) = tower();
    let ind = ind_flow(&e_kl, &make_bernoulli(&k, 1)).map_err(|e| e.to_string())?;
    let v = entropy(&ind);
    let elapsed = start.elapsed();
    check(v == Some(1), format!("ent_L = {v:?}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("ent_GF(16)(Ind) = 1, {elapsed:.2?}"))
}

fn c4_theorem_sweep(dir: &Path) -> Outcome {
    let (k, _, e_kl) = tower();
    let tower_path = dir.join("tower.json");
    std::fs::write(&tower_path, serde_json::to_string(&e_kl.target().descriptor()).unwrap()).unwrap();
    let start = Instant::now();
    let (mut pass, mut inconclusive, mut failed) = (0, 0, Vec::new());
    for seed in 0..25u64 {
        let flow = random_stencil_flow(&k, seed, &RandomFlowConfig::default());
        let spec = dir.join(format!("random-{seed}.json"));
        let out = dir.join(format!("verify-{seed}.json"));
        std::fs::write(&spec, flow_to_json(&flow)).unwrap();
        let code = cli::run([
            "llc-entropy".as_ref(),
            "verify".as_ref(),
            spec.as_os_str(),
            "--tower".as_ref(),
            tower_path.as_os_str(),
            "--quiet".as_ref(),
            "--out".as_ref(),
            out.as_os_str(),
        ]);
        let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap_or_default())
            .map_err(|e| format!("seed {seed}: unreadable report ({e})"))?;
        let cells_ok = rep["identities"].as_array().is_some_and(|c| {
            c.iter().any(|x| x["n"] == 8) && c.iter().all(|x| x["res_commutes"] == true && x["ind_commutes"] == true)
        });
        match code {
            EXIT_OK if cells_ok => pass += 1,
            EXIT_INCONCLUSIVE if cells_ok => inconclusive += 1,
            _ => failed.push(seed),
        }
    }
    let elapsed = start.elapsed();
    let rate = inconclusive as f64 / 25.0;
    check(failed.is_empty(), format!("failing seeds {failed:?}"))?;
    check(rate <= 0.2, format!("inconclusive rate {rate:.2}"))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{pass} pass, {inconclusive} inconclusive ({:.0}%), 0 fail over 25 GF(4) flows, {elapsed:.2?}",
        rate * 100.0
    ))
}

fn gf2_fixtures() -> Vec<Flow> {
    let f = gf2();
    let b = make_bernoulli(&f, 1);
    let right = {
        let shape = SpaceShape::compact(&f);
        let endo = EndoSpec::new(
            &shape,
            1,
            [(-1, Matrix::identity(&f, 1))].into(),
            Matrix::zeros(&f, 0, 0),
            Matrix::zeros(&f, 0, 0),
            Matrix::zeros(&f, 0, 0),
            Matrix::zeros(&f, 0, 0),
        )
        .unwrap();
        Flow::new(shape, endo, "right-shift").unwrap()
    };
    let mut out = vec![
        make_identity(&SpaceShape::compact(&f)),
        make_identity(&SpaceShape::mixed(&f, 2)),
        b.clone(),
        make_bernoulli(&f, 2),
        direct_sum(&b, &b).unwrap(),
        right,
    ];
    let narrow = RandomFlowConfig {
        min_offset: -1,
        max_offset: 1,
        ..RandomFlowConfig::default()
    };
    for seed in 0..8 {
        out.push(random_stencil_flow(&f, seed, &narrow));
        out.push(random_stencil_flow(&f, 100 + seed, &RandomFlowConfig::default()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [3, 5] {
        let mut dd = Matrix::zeros(&f, d, d);
        for i in 0..d {
            for j in 0..d {
                dd.set(i, j, rng.gen_range(0..2));
            }
        }
        let shape = SpaceShape::discrete(&f, d);
        let endo = EndoSpec::new(
            &shape,
            1,
            Default::default(),
            Matrix::zeros(&f, 0, 0),
            dd,
            Matrix::zeros(&f, d, 0),
            Matrix::zeros(&f, 0, d),
        )
        .unwrap();
        out.push(Flow::new(shape, endo, format!("discrete-{d}")).unwrap());
    }
    out
}

fn c5_oracle() -> Outcome {
    let start = Instant::now();
    let (mut compared, mut mismatched) = (0, Vec::new());
    for flow in gf2_fixtures() {
        let cells = oracle_cells(&flow, None, 6, 3).map_err(|e| e.to_string())?;
        for c in cells {
            if let Some(e) = c.enumerated {
                compared += 1;
                if e != c.structured {
                    mismatched.push(format!("{} m={} n={}", flow.label(), c.m, c.n));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(mismatched.is_empty(), format!("mismatches: {mismatched:?}"))?;
    check(compared >= 200, format!("only {compared} comparisons"))?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("{compared} comparisons, all equal, {elapsed:.2?}"))
}

fn c6_properties() -> Outcome {
    let start = Instant::now();
    let f = gf2();
    let (k, _, _) = tower();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // eP1
    let bases = [
        make_bernoulli(&f, 1),
        make_bernoulli(&k, 1),
        make_entropy_n(&f, 2).unwrap(),
        random_stencil_flow(&k, 5, &RandomFlowConfig::default()),
    ];
    for i in 0..20 {
        let flow = &bases[i % bases.len()];
        let w = 2 + i % 5;
        let a = random_invertible(flow.field(), flow.discrete_dim() + w, &mut rng);
        let conj = conjugate_flow(flow, &a).map_err(|e| e.to_string())?;
        let (x, y) = (entropy(flow), entropy(&conj));
        check(x.is_some() && x == y, format!("eP1 {}: {x:?} vs {y:?}", flow.label()))?;
    }

    // eP3; phi^3 of entropy-3 reads nine coordinates ahead, so the chain
    // only settles past U_9
    let long_chain = EntropyConfig {
        max_m: 16,
        ..EntropyConfig::default()
    };
    let powered = [
        make_bernoulli(&k, 1),
        make_entropy_n(&f, 2).unwrap(),
        make_entropy_n(&f, 3).unwrap(),
    ];
    for flow in &powered {
        let base = entropy(flow).ok_or("unresolved base")?;
        for j in 1..=3 {
            let phi = power_flow(flow, j).map_err(|e| e.to_string())?;
            let v = ent_star(&phi, &long_chain).unwrap().value;
            check(v == Some(j * base), format!("eP3 {} k={j}: {v:?}", flow.label()))?;
        }
    }

    // discrete flows
    for (seed, d) in [(1u64, 1), (2, 3), (3, 6)] {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let dd = random_invertible(&k, d, &mut r);
        let shape = SpaceShape::discrete(&k, d);
        let endo = EndoSpec::new(
            &shape,
            1,
            Default::default(),
            Matrix::zeros(&k, 0, 0),
            dd,
            Matrix::zeros(&k, d, 0),
            Matrix::zeros(&k, 0, d),
        )
        .unwrap();
        let v = entropy(&Flow::new(shape, endo, "discrete").unwrap());
        check(v == Some(0), format!("discrete d={d}: {v:?}"))?;
    }

    // eP2
    let parts = [
        make_bernoulli(&f, 1),
        make_bernoulli(&f, 2),
        make_identity(&SpaceShape::mixed(&f, 1)),
        random_stencil_flow(&f, 3, &RandomFlowConfig::default()),
    ];
    for g in &parts {
        for h in &parts {
            let s = direct_sum(g, h).map_err(|e| e.to_string())?;
            let (vg, vh, vs) = (entropy(g), entropy(h), entropy(&s));
            let ok = matches!((vg, vh, vs), (Some(a), Some(b), Some(c)) if c >= a.max(b));
            check(ok, format!("eP2 {}+{}: {vg:?} {vh:?} {vs:?}", g.label(), h.label()))?;
        }
    }
    let elapsed = start.elapsed();
    Ok(format!(
        "20 conjugations, 9 powers, 3 discrete flows, 16 direct sums, {elapsed:.2?}"
    ))
}

fn c7_entropy_n(dir: &Path) -> Outcome {
    let start = Instant::now();
    let mut got = Vec::new();
    for n in 1..=3usize {
        let out = dir.join(format!("entropy-{n}.json"));
        let n_arg = n.to_string();
        let code = cli::run([
            "llc-entropy".as_ref(),
            "example".as_ref(),
            "entropy-n".as_ref(),
            "--n".as_ref(),
            n_arg.as_ref(),
            "--field".as_ref(),
            "2".as_ref(),
            "--out".as_ref(),
            out.as_os_str(),
        ]);
        check(code == EXIT_OK, format!("example exited {code}"))?;
        let flow = parse_flow(&std::fs::read_to_string(&out).unwrap()).map_err(|e| e.to_string())?;
        let v = entropy(&flow);
        check(v == Some(n), format!("entropy-{n}: {v:?}"))?;
        got.push(n);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("ent* = {got:?}, {elapsed:.2?}"))
}

fn extensions() -> Vec<FieldEmbedding> {
    let mut out = Vec::new();
    for (p, degrees) in [
        (2u64, vec![2, 3, 4, 8]),
        (3, vec![2, 3, 5]),
        (5, vec![2, 3]),
        (7, vec![2]),
    ] {
        let prime = FiniteField::prime(p).unwrap();
        for d in degrees {
            out.push(prime.extend_by_degree(d).unwrap().1);
        }
    }
    let (k, _, e_kl) = tower();
    out.push(e_kl.clone());
    out.push(FieldEmbedding::between(&gf2(), e_kl.target()).unwrap());
    let (_, e) = k.extend_by_degree(4).unwrap();
    out.push(e);
    out
}

fn random_matrix(field: &FiniteField, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(field, r, c);
    for i in 0..r {
        for j in 0..c {
            m.set(i, j, rng.gen_range(0..field.order()));
        }
    }
    m
}

fn c8_algebra() -> Outcome {
    let start = Instant::now();
    let mut fields = 0;
    for e in extensions() {
        let l = e.target();
        if l.order() > 256 {
            continue;
        }
        fields += 1;
        let rho: Vec<Matrix> = l.elements().map(|a| e.regular_representation(a)).collect();
        check(
            rho[1] == Matrix::identity(e.source(), e.degree()),
            format!("rho(1) over {l}"),
        )?;
        for a in l.elements() {
            for b in l.elements() {
                let (ra, rb) = (&rho[a as usize], &rho[b as usize]);
                check(
                    rho[l.mul(a, b) as usize] == ra.mul(rb),
                    format!("rho(ab) in {l}: {a} {b}"),
                )?;
                check(
                    rho[l.add(a, b) as usize] == ra.add(rb),
                    format!("rho(a+b) in {l}: {a} {b}"),
                )?;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let exts = extensions();
    for i in 0..100 {
        let e = &exts[i % exts.len()];
        let (p, q, s) = (rng.gen_range(1..5), rng.gen_range(1..5), rng.gen_range(1..5));
        let a = random_matrix(e.target(), p, q, &mut rng);
        let b = random_matrix(e.target(), q, s, &mut rng);
        let lhs = a.mul(&b).block_expand(e).unwrap();
        let rhs = a.block_expand(e).unwrap().mul(&b.block_expand(e).unwrap());
        check(lhs == rhs, format!("block_expand pair {i}"))?;
    }

    for i in 0..100 {
        let field = exts[i % exts.len()].target();
        let low_rank = |rng: &mut ChaCha8Rng| {
            let (r, c, inner) = (rng.gen_range(1..5), rng.gen_range(1..5), rng.gen_range(1..4));
            random_matrix(field, r, inner, rng).mul(&random_matrix(field, inner, c, rng))
        };
        let (a, b) = (low_rank(&mut rng), low_rank(&mut rng));
        let kr = a.kronecker(&b).unwrap();
        check(kr.rank() == a.rank() * b.rank(), format!("kronecker pair {i}"))?;
    }

    let (k, e_fk, e_kl) = tower();
    let e4 = FieldEmbedding::between(&gf2(), e_kl.target()).unwrap();
    let (_, e_k4) = k.extend_by_degree(4).unwrap();
    let mut adj = 0;
    for e in [&e_fk, &e_kl, &e4, &e_k4] {
        for a in 0..=3 {
            for b in 0..=3 {
                let c = adjunction_dim_check(e, a, b);
                check(
                    c.holds,
                    format!("adjunction [{}:{}] a={a} b={b}: {c:?}", e.target(), e.source()),
                )?;
                adj += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Ok(format!(
        "rho exhaustive on {fields} extensions, 100 block_expand pairs, 100 Kronecker pairs, {adj} adjunction cases, {elapsed:.2?}"
    ))
}

fn c9_window_independence() -> Outcome {
    let start = Instant::now();
    let f = gf2();
    let (k, e_fk, e_kl) = tower();
    let mut flows = vec![
        make_bernoulli(&k, 1),
        make_entropy_n(&f, 3).unwrap(),
        direct_sum(&make_bernoulli(&f, 1), &make_identity(&SpaceShape::mixed(&f, 2))).unwrap(),
    ];
    for seed in 0..5 {
        let r = random_stencil_flow(&k, seed, &RandomFlowConfig::default());
        flows.push(res_flow(&e_fk, &r).unwrap());
        flows.push(ind_flow(&e_kl, &r).unwrap());
        flows.push(r);
    }
    let mut cells = 0;
    for flow in &flows {
        let traces: Vec<_> = [4, 6, 8, 12, 16]
            .iter()
            .map(|&slack| {
                let cfg = EntropyConfig {
                    window_slack: slack,
                    ..EntropyConfig::default()
                };
                ent_star(flow, &cfg).unwrap()
            })
            .collect();
        let reference = &traces[0];
        for t in &traces[1..] {
            check(t.value == reference.value, format!("{}: value differs", flow.label()))?;
            for (a, b) in t.per_u.iter().zip(&reference.per_u) {
                check(
                    a.trace.values == b.trace.values,
                    format!("{}: trace for m = {} differs", flow.label(), a.m),
                )?;
            }
        }
        cells += reference.per_u.iter().map(|p| p.trace.len()).sum::<usize>();
    }
    let elapsed = start.elapsed();
    Ok(format!(
        "{} flows, {cells} cells identical across 5 slacks, {elapsed:.2?}",
        flows.len()
    ))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 bernoulli baseline", Box::new(c1_bernoulli)),
        ("2 restriction formula", Box::new(c2_restriction)),
        ("3 induction formula", Box::new(c3_induction)),
        ("4 theorem sweep", Box::new(|| c4_theorem_sweep(dir.path()))),
        ("5 oracle equivalence", Box::new(c5_oracle)),
        ("6 entropy properties", Box::new(c6_properties)),
        ("7 entropy-n generator", Box::new(|| c7_entropy_n(dir.path()))),
        ("8 algebra layer", Box::new(c8_algebra)),
        ("9 window independence", Box::new(c9_window_independence)),
    ];
    let mut failures = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
