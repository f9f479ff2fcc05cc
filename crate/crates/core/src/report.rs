//! Per-graph parameter reports and run configuration.

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_digraph, canonical_graph};
use crate::classify::{classify_rank1_graph, is_lambda};
use crate::critical::{gamma_with_cache, DecisionCache, Evidence, GammaResult, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::AnyGraph;
use crate::minrank::{mr_small, mrcr_bounds, MinRank, MrcrBounds};
use crate::poly::DomainTag;
use crate::zero_forcing::{zero_forcing_number_with_cap, ForceRecord};

/// Everything that can change a computed value; echoed into every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub search: SearchConfig,
    /// Box radius used for trees.
    pub tree_box_radius: i64,
    /// Largest order for exact zero forcing.
    pub zero_forcing_cap: usize,
    /// Largest order of the graph enumeration.
    pub max_graph_order: usize,
    /// Largest order of the digraph enumeration.
    pub max_digraph_order: usize,
    /// Domains reported by `params`.
    pub domains: Vec<DomainTag>,
    /// Seed for every randomized sample.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            search: SearchConfig::default(),
            tree_box_radius: 1,
            zero_forcing_cap: crate::zero_forcing::EXACT_ORDER_CAP,
            max_graph_order: 6,
            max_digraph_order: 4,
            domains: vec![DomainTag::Integers, DomainTag::Rationals],
            seed: 0x5eed,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.search;
        if s.box_radius < 0
            || s.max_points == 0
            || s.budget.max_pairs == 0
            || s.budget.max_degree == 0
        {
            return Err(Error::Range {
                what: "search budget",
                value: 0,
                range: "positive values",
            });
        }
        if s.primes
            .iter()
            .any(|&p| !crate::poly::domain::is_prime_u64(p))
        {
            return Err(Error::Range {
                what: "prime budget entry",
                value: s
                    .primes
                    .iter()
                    .copied()
                    .find(|&p| !crate::poly::domain::is_prime_u64(p))
                    .unwrap_or(0) as usize,
                range: "primes",
            });
        }
        Ok(())
    }
}

/// γ over one domain: a value or an interval, with the evidence per index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSummary {
    pub domain: DomainTag,
    pub value: Option<usize>,
    pub lower: usize,
    pub upper: usize,
    pub groebner_runs: usize,
    /// One line per index `1..=n`.
    pub provenance: Vec<String>,
}

impl From<&GammaResult> for GammaSummary {
    fn from(r: &GammaResult) -> Self {
        GammaSummary {
            domain: r.domain,
            value: r.value,
            lower: r.lower,
            upper: r.upper,
            groebner_runs: r.groebner_runs,
            provenance: r
                .decisions
                .iter()
                .map(|d| {
                    let state = match d.trivial {
                        Some(true) => "trivial",
                        Some(false) => "proper",
                        None => "undecided",
                    };
                    format!("I{}: {state} by {}", d.index, describe(&d.evidence))
                })
                .collect(),
        }
    }
}

/// One-line description of a piece of evidence.
pub fn describe(e: &Evidence) -> String {
    match e {
        Evidence::ForcingMinor { rows, cols } => {
            format!("forcing minor rows {rows:?} cols {cols:?}")
        }
        Evidence::ConstantMinor(c) => format!(
            "constant minor {} at rows {:?} cols {:?}",
            c.value, c.rows, c.cols
        ),
        Evidence::EvaluationPoint { point, prime, rank } => match prime {
            Some(p) => format!("point {point:?} mod {p} of rank {rank}"),
            None => format!("point {point:?} of rank {rank}"),
        },
        Evidence::Determinant => "determinant".into(),
        Evidence::Groebner {
            summary,
            pairs_reduced,
        } => format!("basis computation ({summary}; {pairs_reduced} pairs)"),
        Evidence::Nesting { from } => format!("nesting from I{from}"),
        Evidence::Undecided { reason } => format!("undecided ({reason})"),
    }
}

/// The full parameter record of one graph or digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterReport {
    pub graph_id: String,
    pub directed: bool,
    pub n: usize,
    pub edges: usize,
    pub z: usize,
    pub mz: usize,
    pub z_exact: bool,
    pub forcing: ForceRecord,
    pub gamma: Vec<GammaSummary>,
    /// Minimum rank over the reals (graphs only).
    pub mr: Option<MinRank>,
    pub mrcr: Vec<MrcrBounds>,
    /// Complete graph / Λ digraph: the co-rank at most one class.
    pub corank_at_most_one: Option<bool>,
    pub config: RunConfig,
}

/// Largest order identified by a canonical encoding.
pub const CANONICAL_ID_ORDER: usize = 64;

/// Canonical graph6 or digraph6 text for inputs up to
/// [`CANONICAL_ID_ORDER`] vertices. Larger inputs, whose dense encodings
/// grow quadratically, get `g<n>e<arcs>#<digest>` (`d` for digraphs) with an
/// FNV-1a digest of the labeled arc list, so equal ids mean equal labeled
/// inputs but isomorphic relabelings differ.
pub fn graph_id(g: &AnyGraph) -> Result<String> {
    let adj = g.as_adjacency();
    let n = adj.order();
    if n > CANONICAL_ID_ORDER {
        let key = crate::critical::labeled_key(adj);
        let digest = key.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
        });
        let arcs: usize = (0..n).map(|v| adj.out_neighbors(v).len()).sum();
        let (tag, count) = if adj.is_directed() {
            ('d', arcs)
        } else {
            ('g', arcs / 2)
        };
        return Ok(format!("{tag}{n}e{count}#{digest:016x}"));
    }
    Ok(match g {
        AnyGraph::Undirected(g) => canonical_graph(g)?.encoding,
        AnyGraph::Directed(d) => canonical_digraph(d)?.encoding,
    })
}

pub fn parameter_report(
    g: &AnyGraph,
    cfg: &RunConfig,
    cache: Option<&DecisionCache>,
) -> Result<ParameterReport> {
    cfg.validate()?;
    let adj = g.as_adjacency();
    let n = adj.order();
    let graph_id = graph_id(g)?;
    let zf = zero_forcing_number_with_cap(adj, cfg.zero_forcing_cap);
    let mut gamma = Vec::new();
    for &d in &cfg.domains {
        let r = gamma_with_cache(adj, d, &cfg.search, cache)?;
        gamma.push(GammaSummary::from(&r));
    }
    let values = crate::critical::symmetric_box(cfg.search.box_radius);
    let mut mrcr = Vec::new();
    for &d in &cfg.domains {
        mrcr.push(mrcr_bounds(adj, d, &values, &cfg.search)?);
    }
    let (mr, corank_at_most_one, edges) = match g {
        AnyGraph::Undirected(u) => {
            let class = if u.is_connected() && n > 0 {
                classify_rank1_graph(u, &cfg.search)?.verdict()
            } else {
                None
            };
            (Some(mr_small(u, &cfg.search)), class, u.edge_count())
        }
        AnyGraph::Directed(d) => (None, Some(is_lambda(d).is_some()), d.arc_count()),
    };
    Ok(ParameterReport {
        graph_id,
        directed: adj.is_directed(),
        n,
        edges,
        z: zf.z,
        mz: n - zf.z,
        z_exact: zf.exact,
        forcing: zf.witness,
        gamma,
        mr,
        mrcr,
        corank_at_most_one,
        config: cfg.clone(),
    })
}

/// `value` or `[lower, upper]`.
pub fn interval(value: Option<usize>, lower: usize, upper: usize) -> String {
    match value {
        Some(v) => v.to_string(),
        None => format!("[{lower},{upper}]"),
    }
}

impl ParameterReport {
    fn gamma_cell(&self, d: DomainTag) -> String {
        self.gamma
            .iter()
            .find(|g| g.domain == d)
            .map_or_else(|| "-".into(), |g| interval(g.value, g.lower, g.upper))
    }

    fn mrcr_cell(&self, d: DomainTag) -> String {
        self.mrcr
            .iter()
            .find(|m| m.domain == d)
            .map_or_else(|| "-".into(), |m| interval(m.value(), m.lower, m.upper))
    }

    /// Column headers matching [`ParameterReport::row`].
    pub fn header(domains: &[DomainTag]) -> Vec<String> {
        let mut h: Vec<String> = ["graph", "n", "edges", "Z", "mz", "mr"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for d in domains {
            h.push(format!("gamma_{d}"));
        }
        for d in domains {
            h.push(format!("mrcr_{d}"));
        }
        h.push("corank<=1".into());
        h
    }

    pub fn row(&self) -> Vec<String> {
        let mut r = vec![
            self.graph_id.clone(),
            self.n.to_string(),
            self.edges.to_string(),
            self.z.to_string(),
            self.mz.to_string(),
            self.mr
                .as_ref()
                .map_or_else(|| "-".into(), |m| interval(m.value(), m.lower, m.upper)),
        ];
        for d in &self.config.domains {
            r.push(self.gamma_cell(*d));
        }
        for d in &self.config.domains {
            r.push(self.mrcr_cell(*d));
        }
        r.push(
            self.corank_at_most_one
                .map_or_else(|| "-".into(), |b| b.to_string()),
        );
        r
    }
}

/// Output format of tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Md,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "md" | "markdown" => Ok(OutputFormat::Md),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown format {other:?}; expected json, csv or md"),
            }),
        }
    }
}

/// Renders a table as CSV (quoting fields that need it) or as an aligned
/// markdown table.
pub fn render_table(header: &[String], rows: &[Vec<String>], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let quote = |f: &String| {
                if f.contains([',', '"', '\n']) {
                    format!("\"{}\"", f.replace('"', "\"\""))
                } else {
                    f.clone()
                }
            };
            let mut out = String::new();
            for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
                out.push_str(&r.iter().map(quote).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out
        }
        OutputFormat::Md | OutputFormat::Json => {
            let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for r in rows {
                for (w, f) in width.iter_mut().zip(r) {
                    *w = (*w).max(f.chars().count());
                }
            }
            let line = |r: &[String]| {
                let cells: Vec<String> = r
                    .iter()
                    .zip(&width)
                    .map(|(f, &w)| format!("{f}{}", " ".repeat(w - f.chars().count())))
                    .collect();
                format!("| {} |\n", cells.join(" | "))
            };
            let mut out = line(header);
            let rule: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
            out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
            for r in rows {
                out.push_str(&line(r));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bull, octahedron};
    use crate::graph::Graph;

    #[test]
    fn bull_report() {
        let r =
            parameter_report(&AnyGraph::Undirected(bull()), &RunConfig::default(), None).unwrap();
        assert_eq!((r.z, r.mz), (2, 3));
        let q = r
            .gamma
            .iter()
            .find(|g| g.domain == DomainTag::Rationals)
            .unwrap();
        assert!(q.lower >= 3);
        assert_eq!(r.corank_at_most_one, Some(false));
    }

    #[test]
    fn octahedron_report() {
        let r = parameter_report(
            &AnyGraph::Undirected(octahedron()),
            &RunConfig::default(),
            None,
        )
        .unwrap();
        assert_eq!(r.mz, 2);
        assert_eq!(r.mr.as_ref().unwrap().value(), Some(2));
        let cell = |d| r.gamma.iter().find(|g| g.domain == d).unwrap().value;
        assert_eq!(cell(DomainTag::Integers), Some(2));
        assert_eq!(cell(DomainTag::Rationals), Some(3));
    }

    #[test]
    fn single_vertex_report() {
        let r = parameter_report(
            &AnyGraph::Undirected(Graph::new(1)),
            &RunConfig::default(),
            None,
        )
        .unwrap();
        assert_eq!((r.z, r.mz), (1, 0));
        assert!(r.gamma.iter().all(|g| g.value == Some(0)));
    }

    #[test]
    fn tables_render() {
        let h = vec!["a".to_string(), "bb".to_string()];
        let rows = vec![vec!["1".to_string(), "x,y".to_string()]];
        assert_eq!(
            render_table(&h, &rows, OutputFormat::Csv),
            "a,bb\n1,\"x,y\"\n"
        );
        let md = render_table(&h, &rows, OutputFormat::Md);
        assert!(md.starts_with("| a | bb  |\n|---|-----|\n"));
    }
}
