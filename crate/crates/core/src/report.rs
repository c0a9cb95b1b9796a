//! JSON and CSV renderings of entropy, theorem, and oracle results.

use serde::Serialize;

use crate::entropy::{EntropyConfig, EntropyEstimate, HStar};
use crate::field::FieldDescriptor;
use crate::functors::TheoremReport;
use crate::model::Flow;

#[derive(Clone, Debug, Serialize)]
pub struct HTop {
    pub ent: usize,
    pub field_order: u32,
    /// `ent * ln|K|`, display only.
    pub decimal: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainRow {
    pub m: usize,
    pub zeros: Vec<usize>,
    pub h_star: HStar,
    pub codims: Vec<usize>,
    pub windows: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigRow {
    pub max_n: usize,
    pub max_m: usize,
    pub streak: usize,
    pub window_slack: usize,
    pub window: Option<usize>,
}

impl From<&EntropyConfig> for ConfigRow {
    fn from(c: &EntropyConfig) -> Self {
        ConfigRow {
            max_n: c.max_n,
            max_m: c.max_m,
            streak: c.streak,
            window_slack: c.window_slack,
            window: c.window,
        }
    }
}

/// Everything `compute` prints.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub flow: String,
    pub field: FieldDescriptor,
    pub field_name: String,
    pub resolved: bool,
    pub value: Option<usize>,
    pub lower_bound: usize,
    pub streak: usize,
    pub h_top: Option<HTop>,
    pub config: ConfigRow,
    pub per_u: Vec<ChainRow>,
}

impl EntropyReport {
    pub fn new(flow: &Flow, est: &EntropyEstimate, cfg: &EntropyConfig) -> Self {
        EntropyReport {
            flow: flow.label().to_string(),
            field: flow.field().descriptor(),
            field_name: flow.field().to_string(),
            resolved: est.is_resolved(),
            value: est.value,
            lower_bound: est.lower_bound,
            streak: est.streak,
            h_top: est.h_top().map(|(ent, field_order)| HTop {
                ent,
                field_order,
                decimal: est.h_top_decimal().expect("resolved"),
            }),
            config: cfg.into(),
            per_u: est
                .per_u
                .iter()
                .map(|p| ChainRow {
                    m: p.m,
                    zeros: p.trace.u.zeros().iter().copied().collect(),
                    h_star: p.h_star,
                    codims: p.trace.values.clone(),
                    windows: p.trace.windows.clone(),
                })
                .collect(),
        }
    }

    /// `flow,field,m,n,codim,window`, one row per cell.
    pub fn to_csv(&self) -> String {
        let mut w = csv_writer();
        w.write_record(["flow", "field", "m", "n", "codim", "window"])
            .expect("in-memory write");
        for row in &self.per_u {
            for (i, (c, win)) in row.codims.iter().zip(&row.windows).enumerate() {
                w.write_record([
                    self.flow.clone(),
                    self.field_name.clone(),
                    row.m.to_string(),
                    (i + 1).to_string(),
                    c.to_string(),
                    win.to_string(),
                ])
                .expect("in-memory write");
            }
        }
        finish(w)
    }
}

/// One compared cell of `oracle`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCell {
    pub m: usize,
    pub n: usize,
    pub window: usize,
    pub structured: usize,
    /// `None` when the window is below the guarantee bound for this cell.
    pub enumerated: Option<usize>,
}

impl OracleCell {
    pub fn agrees(&self) -> bool {
        self.enumerated.is_none_or(|e| e == self.structured)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub flow: String,
    pub field_name: String,
    pub compared: usize,
    pub skipped: usize,
    pub mismatches: usize,
    pub cells: Vec<OracleCell>,
}

impl OracleReport {
    pub fn new(flow: &Flow, cells: Vec<OracleCell>) -> Self {
        OracleReport {
            flow: flow.label().to_string(),
            field_name: flow.field().to_string(),
            compared: cells.iter().filter(|c| c.enumerated.is_some()).count(),
            skipped: cells.iter().filter(|c| c.enumerated.is_none()).count(),
            mismatches: cells.iter().filter(|c| !c.agrees()).count(),
            cells,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv_writer();
        w.write_record(["flow", "field", "m", "n", "window", "structured", "enumerated"])
            .expect("in-memory write");
        for c in &self.cells {
            w.write_record([
                self.flow.clone(),
                self.field_name.clone(),
                c.m.to_string(),
                c.n.to_string(),
                c.window.to_string(),
                c.structured.to_string(),
                c.enumerated.map_or(String::new(), |e| e.to_string()),
            ])
            .expect("in-memory write");
        }
        finish(w)
    }
}

/// `flow,m,n,codim_f,codim_k,codim_l,res_commutes,ind_commutes`.
pub fn theorem_csv(rep: &TheoremReport) -> String {
    let mut w = csv_writer();
    w.write_record([
        "flow",
        "m",
        "n",
        "codim_f",
        "codim_k",
        "codim_l",
        "res_commutes",
        "ind_commutes",
    ])
    .expect("in-memory write");
    for c in &rep.identities {
        w.write_record([
            rep.flow.clone(),
            c.m.to_string(),
            c.n.to_string(),
            c.codim_f.to_string(),
            c.codim_k.to_string(),
            c.codim_l.to_string(),
            c.res_commutes.to_string(),
            c.ind_commutes.to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
