//! The table of connected graphs on at most six vertices whose co-rank over
//! the rationals exceeds `mz`, recomputed and compared with golden data.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_graph;
use crate::critical::{gamma, SearchConfig};
use crate::error::{Error, Result};
use crate::generators::enumerate_connected_graphs;
use crate::graph::Graph;
use crate::poly::DomainTag;
use crate::zero_forcing::mz;

const GOLDEN: &str = include_str!("../data/appendix.csv");

/// Number of connected graphs on 1..=6 vertices up to isomorphism.
pub const CONNECTED_UP_TO_SIX: usize = 143;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub row: usize,
    pub table: usize,
    pub column: usize,
    pub graph: Graph,
    pub canonical: String,
    pub mz: usize,
    pub gamma_z: usize,
    pub gamma_q: usize,
}

/// The embedded golden rows.
pub fn golden_rows() -> Result<Vec<GoldenRow>> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (k, raw) in GOLDEN.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let err = |message: String| Error::Parse {
            line: k + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(err(format!("expected 8 fields, found {}", fields.len())));
        }
        let num = |i: usize| -> Result<usize> {
            fields[i]
                .trim()
                .parse()
                .map_err(|_| err(format!("field {} is not a count: {:?}", i + 1, fields[i])))
        };
        let n = num(3)?;
        let mut edges = Vec::new();
        for pair in fields[4].split_whitespace() {
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| err(format!("bad edge {pair:?}")))?;
            let a = a.parse().map_err(|_| err(format!("bad edge {pair:?}")))?;
            let b = b.parse().map_err(|_| err(format!("bad edge {pair:?}")))?;
            edges.push((a, b));
        }
        let graph = Graph::from_edges(n, &edges)?;
        rows.push(GoldenRow {
            row: num(0)?,
            table: num(1)?,
            column: num(2)?,
            canonical: canonical_graph(&graph)?.encoding,
            graph,
            mz: num(5)?,
            gamma_z: num(6)?,
            gamma_q: num(7)?,
        });
    }
    Ok(rows)
}

/// Computed values for one graph of the enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputedRow {
    pub canonical: String,
    pub n: usize,
    pub edges: usize,
    pub mz: usize,
    pub gamma_z: Option<usize>,
    pub gamma_q: Option<usize>,
    /// Golden row number when the graph appears in the golden table.
    pub golden_row: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixRun {
    pub graphs: usize,
    /// Graphs with `mz < γ_Q`, by order, edge count and canonical text.
    pub rows: Vec<ComputedRow>,
    /// Graphs whose co-rank stayed undecided.
    pub undecided: Vec<String>,
    pub diffs: Vec<String>,
}

impl AppendixRun {
    pub fn matches(&self) -> bool {
        self.diffs.is_empty()
    }
}

fn compute(g: &Graph, cfg: &SearchConfig) -> Result<ComputedRow> {
    let gz = gamma(g, DomainTag::Integers, cfg)?;
    let gq = gamma(g, DomainTag::Rationals, cfg)?;
    Ok(ComputedRow {
        canonical: canonical_graph(g)?.encoding,
        n: g.n(),
        edges: g.edge_count(),
        mz: mz(g),
        gamma_z: gz.value,
        gamma_q: gq.value,
        golden_row: None,
    })
}

/// Enumerates, computes `(mz, γ_Z, γ_Q)` for every connected graph on at
/// most six vertices, and diffs the `mz < γ_Q` rows against the golden
/// table. Results are independent of the thread count.
pub fn reproduce_appendix(cfg: &SearchConfig) -> Result<AppendixRun> {
    let graphs = enumerate_connected_graphs(6)?;
    let computed: Vec<ComputedRow> = graphs
        .par_iter()
        .map(|g| compute(g, cfg))
        .collect::<Result<Vec<_>>>()?;
    let golden = golden_rows()?;
    let mut diffs = Vec::new();
    if graphs.len() != CONNECTED_UP_TO_SIX {
        diffs.push(format!(
            "enumeration has {} graphs, expected {CONNECTED_UP_TO_SIX}",
            graphs.len()
        ));
    }
    let undecided: Vec<String> = computed
        .iter()
        .filter(|r| r.gamma_z.is_none() || r.gamma_q.is_none())
        .map(|r| r.canonical.clone())
        .collect();
    for u in &undecided {
        diffs.push(format!("{u}: co-rank undecided"));
    }
    let mut rows: Vec<ComputedRow> = computed
        .into_iter()
        .filter(|r| r.gamma_q.is_some_and(|q| r.mz < q))
        .collect();
    rows.sort_by(|a, b| (a.n, a.edges, &a.canonical).cmp(&(b.n, b.edges, &b.canonical)));
    for r in rows.iter_mut() {
        match golden.iter().find(|g| g.canonical == r.canonical) {
            Some(g) => {
                r.golden_row = Some(g.row);
                let got = (r.mz, r.gamma_z, r.gamma_q);
                let want = (g.mz, Some(g.gamma_z), Some(g.gamma_q));
                if got != want {
                    diffs.push(format!(
                        "row {} ({}): computed (mz, gamma_Z, gamma_Q) = {:?}, table has ({}, {}, {})",
                        g.row, r.canonical, got, g.mz, g.gamma_z, g.gamma_q
                    ));
                }
            }
            None => diffs.push(format!(
                "{}: mz {} < gamma_Q {:?} but the graph is not in the table",
                r.canonical, r.mz, r.gamma_q
            )),
        }
    }
    for g in &golden {
        if !rows.iter().any(|r| r.canonical == g.canonical) {
            diffs.push(format!(
                "row {} ({}): in the table but not computed with mz < gamma_Q",
                g.row, g.canonical
            ));
        }
    }
    Ok(AppendixRun {
        graphs: graphs.len(),
        rows,
        undecided,
        diffs,
    })
}
