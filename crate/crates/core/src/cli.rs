//! The `llc-entropy` command line.
//!
//! Exit codes: 0 ok, 1 input error, 2 inconclusive, 3 violation (a failed
//! theorem check or an oracle mismatch).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::entropy::{brute_force_codim, codim_sequence, ent_star, EntropyConfig, ORACLE_MAX_DIM};
use crate::field::{FieldEmbedding, FiniteField};
use crate::functors::{make_entropy_n, verify_theorem, Verdict};
use crate::io::{flow_to_json, parse_field, parse_flow};
use crate::model::{
    direct_sum, make_bernoulli, make_identity, random_stencil_flow, Flow, GoodSubspace, RandomFlowConfig, SpaceShape,
};
use crate::report::{theorem_csv, to_json, EntropyReport, OracleCell, OracleReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "llc-entropy",
    version,
    about = "Exact topological entropy of linear flows over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate ent* of a flow spec.
    Compute(ComputeArgs),
    /// Check the change-of-field formulas along a tower F <= K <= L.
    Verify(VerifyArgs),
    /// Write a canonical flow spec.
    Example(ExampleArgs),
    /// Compare structured codimensions with exhaustive enumeration (GF(2)).
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    #[arg(long, default_value_t = 64)]
    pub max_n: usize,
    #[arg(long, default_value_t = 8)]
    pub max_m: usize,
    #[arg(long, default_value_t = 5)]
    pub streak: usize,
    #[arg(long, default_value_t = 4)]
    pub window_slack: usize,
    /// Pin the window instead of deriving it from the guarantee bound.
    #[arg(long)]
    pub window: Option<usize>,
}

impl EstimatorArgs {
    pub fn config(&self) -> anyhow::Result<EntropyConfig> {
        if self.max_n == 0 {
            bail!("--max-n must be positive");
        }
        Ok(EntropyConfig {
            max_n: self.max_n,
            max_m: self.max_m,
            streak: self.streak,
            window_slack: self.window_slack,
            window: self.window,
        })
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub spec: PathBuf,
    #[command(flatten)]
    pub est: EstimatorArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub spec: PathBuf,
    /// Field descriptor JSON for L; its tower must pass through the field of
    /// the flow.
    #[arg(long)]
    pub tower: PathBuf,
    /// Tower level of F (0 is the prime field).
    #[arg(long, default_value_t = 0)]
    pub f_level: usize,
    /// Skip the verdict line on stderr.
    #[arg(long)]
    pub quiet: bool,
    #[command(flatten)]
    pub est: EstimatorArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Bernoulli,
    Identity,
    EntropyN,
    DirectSum,
    Random,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    pub name: ExampleName,
    /// Characteristic.
    #[arg(long, default_value_t = 2)]
    pub field: u64,
    /// Degree of the field over its prime field.
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    /// Block dimension of a Bernoulli shift (first summand for direct-sum).
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Block dimension of the second summand for direct-sum.
    #[arg(long, default_value_t = 1)]
    pub dim2: usize,
    /// Target entropy for entropy-n.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Discrete dimension for identity.
    #[arg(long, default_value_t = 0)]
    pub discrete: usize,
    /// Identity on the discrete part only.
    #[arg(long)]
    pub no_compact: bool,
    /// Stencil block size for random.
    #[arg(long, default_value_t = 1)]
    pub block: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub spec: PathBuf,
    /// Enumeration window; defaults to the largest with `d + w <= 12`.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub max_n: usize,
    #[arg(long, default_value_t = 3)]
    pub max_m: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Example(a) => cmd_example(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}

fn read_flow(path: &Path) -> anyhow::Result<Flow> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_flow(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_compute(a: &ComputeArgs) -> anyhow::Result<i32> {
    let flow = read_flow(&a.spec)?;
    let cfg = a.est.config()?;
    let est = ent_star(&flow, &cfg)?;
    let rep = EntropyReport::new(&flow, &est, &cfg);
    let text = match a.output.format {
        Format::Json => to_json(&rep),
        Format::Csv => rep.to_csv(),
    };
    emit(&a.output.out, &text)?;
    Ok(if est.is_resolved() { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

/// Embeddings `F -> K -> L` from the tower of `L`.
pub fn tower_embeddings(
    k: &FiniteField,
    l: &FiniteField,
    f_level: usize,
) -> anyhow::Result<(FieldEmbedding, FieldEmbedding)> {
    let tower = l.tower();
    let k_level = tower
        .iter()
        .position(|x| x == k)
        .with_context(|| format!("the tower of {l} does not pass through {k}"))?;
    if f_level > k_level {
        bail!("--f-level {f_level} lies above the field of the flow (level {k_level})");
    }
    let e_fk = FieldEmbedding::between(&tower[f_level], k)?;
    let e_kl = FieldEmbedding::between(k, l)?;
    Ok((e_fk, e_kl))
}

pub fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<i32> {
    let flow = read_flow(&a.spec)?;
    let text = fs::read_to_string(&a.tower).with_context(|| format!("reading {}", a.tower.display()))?;
    let l = parse_field(&text).with_context(|| format!("parsing {}", a.tower.display()))?;
    let (e_fk, e_kl) = tower_embeddings(flow.field(), &l, a.f_level)?;
    let rep = verify_theorem(&e_fk, &e_kl, &flow, &a.est.config()?)?;
    let text = match a.output.format {
        Format::Json => to_json(&rep),
        Format::Csv => theorem_csv(&rep),
    };
    emit(&a.output.out, &text)?;
    let show = |v: Option<usize>| v.map_or("?".to_string(), |x| x.to_string());
    if !a.quiet {
        eprintln!(
            "{}: ent_F = {}, ent_K = {}, ent_L = {}",
            rep.verdict,
            show(rep.ent_f),
            show(rep.ent_k),
            show(rep.ent_l)
        );
    }
    Ok(match rep.verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        Verdict::Fail => EXIT_VIOLATION,
    })
}

/// The flow `example` writes.
pub fn example_flow(a: &ExampleArgs) -> anyhow::Result<Flow> {
    let prime = FiniteField::prime(a.field)?;
    let field = if a.degree > 1 {
        prime.extend_by_degree(a.degree)?.0
    } else {
        prime
    };
    if matches!(a.name, ExampleName::Bernoulli | ExampleName::DirectSum) && (a.dim == 0 || a.dim2 == 0) {
        bail!("--dim and --dim2 must be positive");
    }
    let flow = match a.name {
        ExampleName::Bernoulli => make_bernoulli(&field, a.dim),
        ExampleName::Identity => {
            let shape = if a.no_compact {
                SpaceShape::discrete(&field, a.discrete)
            } else {
                SpaceShape::mixed(&field, a.discrete)
            };
            make_identity(&shape)
        }
        ExampleName::EntropyN => make_entropy_n(&field, a.n)?,
        ExampleName::DirectSum => direct_sum(&make_bernoulli(&field, a.dim), &make_bernoulli(&field, a.dim2))?,
        ExampleName::Random => {
            if a.block == 0 {
                bail!("--block must be positive");
            }
            let cfg = RandomFlowConfig {
                block: a.block,
                ..RandomFlowConfig::default()
            };
            random_stencil_flow(&field, a.seed, &cfg)
        }
    };
    Ok(flow)
}

pub fn cmd_example(a: &ExampleArgs) -> anyhow::Result<i32> {
    emit(&a.out, &flow_to_json(&example_flow(a)?))?;
    Ok(EXIT_OK)
}

/// Structured against enumerated codimensions for `m <= max_m`,
/// `n <= max_n`. Cells whose guarantee bound exceeds the window are listed
/// without an enumerated value.
pub fn oracle_cells(flow: &Flow, window: Option<usize>, max_n: usize, max_m: usize) -> anyhow::Result<Vec<OracleCell>> {
    if max_n == 0 {
        bail!("--max-n must be positive");
    }
    let d = flow.discrete_dim();
    let window = match window {
        Some(w) => w,
        None if flow.shape().compact => ORACLE_MAX_DIM.saturating_sub(d),
        None => 0,
    };
    let cfg = EntropyConfig::default();
    let mut cells = Vec::new();
    for m in 0..=max_m {
        let u = GoodSubspace::chain(m);
        let trace = codim_sequence(flow, &u, max_n, &cfg)?;
        for n in 1..=max_n {
            let enumerated = if window >= flow.guarantee_bound(m, n) {
                Some(brute_force_codim(flow, &u, n, window)?)
            } else {
                None
            };
            cells.push(OracleCell {
                m,
                n,
                window,
                structured: trace.codim(n),
                enumerated,
            });
        }
    }
    Ok(cells)
}

pub fn cmd_oracle(a: &OracleArgs) -> anyhow::Result<i32> {
    let flow = read_flow(&a.spec)?;
    let rep = OracleReport::new(&flow, oracle_cells(&flow, a.window, a.max_n, a.max_m)?);
    let text = match a.output.format {
        Format::Json => to_json(&rep),
        Format::Csv => rep.to_csv(),
    };
    emit(&a.output.out, &text)?;
    Ok(if rep.mismatches == 0 { EXIT_OK } else { EXIT_VIOLATION })
}
