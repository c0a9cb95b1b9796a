//! Flow-spec JSON.
//!
//! ```json
//! {
//!   "label": "bernoulli-1",
//!   "field": {"p": 2, "tower": [[1, 1, 1]]},
//!   "discrete_dim": 0,
//!   "compact": true,
//!   "block": 1,
//!   "stencil": {"1": [1, 0]},
//!   "prefix": [], "dd": [], "cd": [], "dc": []
//! }
//! ```
//!
//! With `block = 1` a stencil entry is one element; otherwise it is a
//! `block x block` matrix. Elements are prime-coordinate lists (least
//! significant first) or bare integers from the prime field. An empty matrix
//! stands for the zero matrix of the shape the space requires.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldDescriptor, FiniteField};
use crate::linalg::Matrix;
use crate::model::{EndoSpec, Flow, SpaceShape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StencilEntry {
    Scalar(Coeff),
    Matrix(Vec<Vec<Coeff>>),
}

fn yes() -> bool {
    true
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    #[serde(default)]
    pub label: String,
    pub field: FieldDescriptor,
    #[serde(default)]
    pub discrete_dim: usize,
    #[serde(default = "yes")]
    pub compact: bool,
    #[serde(default = "one")]
    pub block: usize,
    #[serde(default)]
    pub stencil: BTreeMap<i64, StencilEntry>,
    #[serde(default)]
    pub prefix: Vec<Vec<Coeff>>,
    #[serde(default)]
    pub dd: Vec<Vec<Coeff>>,
    #[serde(default)]
    pub cd: Vec<Vec<Coeff>>,
    #[serde(default)]
    pub dc: Vec<Vec<Coeff>>,
}

fn matrix_from(field: &FiniteField, rows: &[Vec<Coeff>], empty: (usize, usize), what: &str) -> Result<Matrix> {
    if rows.is_empty() {
        return Ok(Matrix::zeros(field, empty.0, empty.1));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidSpec(format!("{what} has ragged rows")));
    }
    let mut m = Matrix::zeros(field, rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            m.set(i, j, c.to_elem(field)?);
        }
    }
    Ok(m)
}

fn matrix_to(m: &Matrix) -> Vec<Vec<Coeff>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&a| Coeff::from_elem(m.field(), a)).collect())
        .collect()
}

impl FlowSpec {
    pub fn to_flow(&self) -> Result<Flow> {
        let field = FiniteField::from_descriptor(&self.field)?;
        let d = self.discrete_dim;
        let s = self.block;
        let shape = SpaceShape {
            field: field.clone(),
            discrete_dim: d,
            compact: self.compact,
        };
        let stencil = self
            .stencil
            .iter()
            .map(|(&k, entry)| {
                let m = match entry {
                    StencilEntry::Scalar(c) if s == 1 => Matrix::from_rows(&field, [[c.to_elem(&field)?]]),
                    StencilEntry::Scalar(_) => {
                        return Err(Error::InvalidSpec(format!("stencil offset {k} needs a {s}x{s} matrix")))
                    }
                    StencilEntry::Matrix(rows) => matrix_from(&field, rows, (0, 0), "stencil")?,
                };
                Ok((k, m))
            })
            .collect::<Result<_>>()?;
        let endo = EndoSpec::new(
            &shape,
            s,
            stencil,
            matrix_from(&field, &self.prefix, (0, 0), "prefix")?,
            matrix_from(&field, &self.dd, (d, d), "dd")?,
            matrix_from(&field, &self.cd, (d, 0), "cd")?,
            matrix_from(&field, &self.dc, (0, d), "dc")?,
        )?;
        Flow::new(shape, endo, self.label.clone())
    }

    pub fn from_flow(flow: &Flow) -> FlowSpec {
        let e = flow.endo();
        let field = flow.field();
        let stencil = e
            .stencil()
            .iter()
            .map(|(&k, m)| {
                let entry = if e.block() == 1 {
                    StencilEntry::Scalar(Coeff::from_elem(field, m.get(0, 0)))
                } else {
                    StencilEntry::Matrix(matrix_to(m))
                };
                (k, entry)
            })
            .collect();
        FlowSpec {
            label: flow.label().to_string(),
            field: field.descriptor(),
            discrete_dim: flow.discrete_dim(),
            compact: flow.shape().compact,
            block: e.block(),
            stencil,
            prefix: matrix_to(e.prefix()),
            dd: matrix_to(e.dd()),
            cd: matrix_to(e.cd()),
            dc: matrix_to(e.dc()),
        }
    }
}

pub fn parse_flow(json: &str) -> Result<Flow> {
    let spec: FlowSpec = serde_json::from_str(json).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    spec.to_flow()
}

/// Pretty JSON with a trailing newline.
pub fn flow_to_json(flow: &Flow) -> String {
    let mut s = serde_json::to_string_pretty(&FlowSpec::from_flow(flow)).expect("spec serializes");
    s.push('\n');
    s
}

pub fn parse_field(json: &str) -> Result<FiniteField> {
    let desc: FieldDescriptor = serde_json::from_str(json).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    FiniteField::from_descriptor(&desc)
}
