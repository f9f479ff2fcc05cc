use std::io::Read;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use corank_core::appendix::reproduce_appendix;
use corank_core::classify::{check_mr2_corollary, classify_digraph1, classify_rank1_graph};
use corank_core::critical::{
    critical_ideal_equals, critical_ideal_equals_over_z, gamma_with_cache,
    groebner_basis_of_critical_ideal, DecisionCache,
};
use corank_core::formats::parse_any;
use corank_core::generators::by_name;
use corank_core::laplacian::SymbolicMatrix;
use corank_core::minrank::{mrcr_bounds, tree_counts, tree_suite, TREE_SUITE_ORDER};
use corank_core::poly::DomainTag;
use corank_core::report::{
    graph_id, interval, parameter_report, render_table, OutputFormat, ParameterReport, RunConfig,
};
use corank_core::sweep::{run_sweep, Sweep};
use corank_core::zero_forcing::zero_forcing_number_with_cap;
use corank_core::{AnyGraph, Error};

/// Exact zero forcing, critical ideal co-rank and minimum rank bounds.
#[derive(Parser)]
#[command(name = "corank", version)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Input file of graph6/digraph6 records or an edge/arc list; `-` reads stdin.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Domain: z, q (r is served by q) or fp:P. Defaults to both z and q.
    #[arg(long, global = true)]
    domain: Option<DomainTag>,
    /// Radius of the integer box for evaluation points.
    #[arg(long = "box", global = true)]
    box_radius: Option<i64>,
    #[arg(long, global = true, default_value = "json")]
    format: OutputFormat,
    /// Directory holding the decision cache.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest number of pairs reduced per basis computation.
    #[arg(long, global = true)]
    budget_spairs: Option<usize>,
    /// Largest total degree allowed during basis computations.
    #[arg(long, global = true)]
    budget_degree: Option<u32>,
    /// Exit with status 3 when some value stays undecided.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full parameter report per graph.
    Params(Graphs),
    /// Co-rank with per-index evidence.
    Gamma(Graphs),
    /// Zero forcing number with a chronological list.
    Zf(Graphs),
    /// Bounds on the critical minimum rank.
    Mrcr(Graphs),
    /// Tree parameters: the full cross-check up to 12 vertices, P, Delta and nu2 at any order.
    Trees(Graphs),
    /// Co-rank at most one classification.
    Classify(Graphs),
    /// Reduced basis of one critical ideal.
    Gb {
        /// Minor size.
        #[arg(long)]
        index: usize,
        /// File of generators (one per line) to compare with.
        #[arg(long)]
        compare: Option<PathBuf>,
        #[command(flatten)]
        graphs: Graphs,
    },
    /// Run a named sweep, or `all`.
    Sweep { name: String },
    /// Recompute the table of graphs with mz below the rational co-rank.
    ReproduceAppendix,
}

#[derive(Args)]
struct Graphs {
    /// Inline graph6/digraph6 records or named graphs (petersen, bull, k5, c6, ...).
    graphs: Vec<String>,
}

/// Exit statuses.
const FAILURE: u8 = 1;
const INPUT: u8 = 2;
const UNDECIDED: u8 = 3;

struct Outcome {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    failed: bool,
    undecided: bool,
}

impl Outcome {
    fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Outcome {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            failed: false,
            undecided: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.opts.format {
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&out.json).expect("values serialize") + "\n"
                }
                f => render_table(&out.header, &out.rows, f),
            };
            // a closed pipe (e.g. `| head`) is not an error worth a panic
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("{}", json!({ "error": e.to_string() }));
                    return ExitCode::from(FAILURE);
                }
            }
            if out.failed {
                ExitCode::from(FAILURE)
            } else if out.undecided && cli.opts.strict {
                ExitCode::from(UNDECIDED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let payload = json!({ "error": e.to_string() });
            eprintln!("{payload}");
            ExitCode::from(match e {
                Error::Format { .. }
                | Error::Parse { .. }
                | Error::VertexOutOfRange { .. }
                | Error::Loop(_)
                | Error::Range { .. }
                | Error::NotATree(_)
                | Error::Disconnected
                | Error::Io(_) => INPUT,
                Error::Budget(_) => UNDECIDED,
                _ => FAILURE,
            })
        }
    }
}

fn config(opts: &Options) -> corank_core::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(r) = opts.box_radius {
        cfg.search.box_radius = r;
    }
    if let Some(p) = opts.budget_spairs {
        cfg.search.budget.max_pairs = p;
    }
    if let Some(d) = opts.budget_degree {
        cfg.search.budget.max_degree = d;
    }
    if let Some(d) = opts.domain {
        cfg.domains = vec![d];
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_graphs(opts: &Options, graphs: &Graphs) -> corank_core::Result<Vec<AnyGraph>> {
    let mut out = Vec::new();
    if let Some(src) = &opts.input {
        let text = if src == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Io(e.to_string()))?;
            s
        } else {
            std::fs::read_to_string(src).map_err(|e| Error::Io(format!("{src}: {e}")))?
        };
        out.extend(parse_any(&text)?);
    }
    for g in &graphs.graphs {
        match by_name(g) {
            Some(named) => out.push(AnyGraph::Undirected(named)),
            None => out.extend(parse_any(g)?),
        }
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no input graphs; pass records inline or use --input FILE|-".into(),
        });
    }
    Ok(out)
}

fn cache_file(dir: &Path) -> PathBuf {
    dir.join("decisions.json")
}

fn load_cache(opts: &Options) -> corank_core::Result<Option<DecisionCache>> {
    opts.cache
        .as_deref()
        .map(|dir| DecisionCache::load(&cache_file(dir)))
        .transpose()
}

fn save_cache(opts: &Options, cache: &Option<DecisionCache>) -> corank_core::Result<()> {
    if let (Some(dir), Some(c)) = (&opts.cache, cache) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        c.save(&cache_file(dir))?;
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn envelope(command: &str, cfg: &RunConfig, results: Value) -> Value {
    json!({ "command": command, "config": to_json(cfg), "results": results })
}

fn run(cli: &Cli) -> corank_core::Result<Outcome> {
    let opts = &cli.opts;
    if let Some(j) = opts.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    let cfg = config(opts)?;
    match &cli.command {
        Command::Params(g) => params(opts, &cfg, &load_graphs(opts, g)?),
        Command::Gamma(g) => gamma_cmd(opts, &cfg, &load_graphs(opts, g)?),
        Command::Zf(g) => zf(&cfg, &load_graphs(opts, g)?),
        Command::Mrcr(g) => mrcr(&cfg, &load_graphs(opts, g)?),
        Command::Trees(g) => trees(&cfg, &load_graphs(opts, g)?),
        Command::Classify(g) => classify(&cfg, &load_graphs(opts, g)?),
        Command::Gb {
            index,
            compare,
            graphs,
        } => gb(
            opts,
            &cfg,
            *index,
            compare.as_deref(),
            &load_graphs(opts, graphs)?,
        ),
        Command::Sweep { name } => sweep(&cfg, name),
        Command::ReproduceAppendix => appendix(&cfg),
    }
}

fn params(opts: &Options, cfg: &RunConfig, graphs: &[AnyGraph]) -> corank_core::Result<Outcome> {
    let cache = load_cache(opts)?;
    let reports: Vec<ParameterReport> = graphs
        .par_iter()
        .map(|g| parameter_report(g, cfg, cache.as_ref()))
        .collect::<corank_core::Result<_>>()?;
    save_cache(opts, &cache)?;
    let undecided = reports
        .iter()
        .any(|r| r.gamma.iter().any(|g| g.value.is_none()));
    let mut out = Outcome::new(
        envelope("params", cfg, to_json(&reports)),
        &[],
        reports.iter().map(ParameterReport::row).collect(),
    );
    out.header = ParameterReport::header(&cfg.domains);
    out.undecided = undecided;
    Ok(out)
}

fn gamma_cmd(opts: &Options, cfg: &RunConfig, graphs: &[AnyGraph]) -> corank_core::Result<Outcome> {
    let cache = load_cache(opts)?;
    let results: Vec<(String, Vec<corank_core::report::GammaSummary>)> = graphs
        .par_iter()
        .map(|g| {
            let id = graph_id(g)?;
            let summaries = cfg
                .domains
                .iter()
                .map(|&d| {
                    let r = gamma_with_cache(g.as_adjacency(), d, &cfg.search, cache.as_ref())?;
                    Ok(corank_core::report::GammaSummary::from(&r))
                })
                .collect::<corank_core::Result<Vec<_>>>()?;
            Ok((id, summaries))
        })
        .collect::<corank_core::Result<_>>()?;
    save_cache(opts, &cache)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut undecided = false;
    for (id, summaries) in &results {
        for s in summaries {
            undecided |= s.value.is_none();
            rows.push(vec![
                id.clone(),
                s.domain.to_string(),
                interval(s.value, s.lower, s.upper),
                s.groebner_runs.to_string(),
            ]);
        }
        items.push(json!({ "graph": id, "gamma": to_json(summaries) }));
    }
    let mut out = Outcome::new(
        envelope("gamma", cfg, Value::Array(items)),
        &["graph", "domain", "gamma", "basis runs"],
        rows,
    );
    out.undecided = undecided;
    Ok(out)
}

fn zf(cfg: &RunConfig, graphs: &[AnyGraph]) -> corank_core::Result<Outcome> {
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for g in graphs {
        let id = graph_id(g)?;
        let z = zero_forcing_number_with_cap(g.as_adjacency(), cfg.zero_forcing_cap);
        let n = g.n();
        rows.push(vec![
            id.clone(),
            n.to_string(),
            z.z.to_string(),
            (n - z.z).to_string(),
            z.exact.to_string(),
            format!("{:?}", z.witness.initial_set),
            z.witness
                .forces
                .iter()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect::<Vec<_>>()
                .join(" "),
        ]);
        items.push(json!({ "graph": id, "n": n, "z": z.z, "mz": n - z.z, "exact": z.exact, "witness": to_json(&z.witness) }));
    }
    Ok(Outcome::new(
        envelope("zf", cfg, Value::Array(items)),
        &["graph", "n", "Z", "mz", "exact", "initial set", "forces"],
        rows,
    ))
}

fn mrcr(cfg: &RunConfig, graphs: &[AnyGraph]) -> corank_core::Result<Outcome> {
    let values = corank_core::critical::symmetric_box(cfg.search.box_radius);
    let results: Vec<(String, Vec<corank_core::minrank::MrcrBounds>)> = graphs
        .par_iter()
        .map(|g| {
            let bounds = cfg
                .domains
                .iter()
                .map(|&d| mrcr_bounds(g.as_adjacency(), d, &values, &cfg.search))
                .collect::<corank_core::Result<Vec<_>>>()?;
            Ok((graph_id(g)?, bounds))
        })
        .collect::<corank_core::Result<_>>()?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut undecided = false;
    for (id, bounds) in &results {
        for b in bounds {
            undecided |= b.value().is_none();
            rows.push(vec![
                id.clone(),
                b.domain.to_string(),
                interval(b.value(), b.lower, b.upper),
                b.witness
                    .as_ref()
                    .map_or_else(|| "-".into(), |w| format!("{w:?}")),
            ]);
        }
        items.push(json!({ "graph": id, "mrcr": to_json(bounds) }));
    }
    let mut out = Outcome::new(
        envelope("mrcr", cfg, Value::Array(items)),
        &["graph", "domain", "mrcr", "witness"],
        rows,
    );
    out.undecided = undecided;
    Ok(out)
}

fn trees(cfg: &RunConfig, graphs: &[AnyGraph]) -> corank_core::Result<Outcome> {
    let mut search = cfg.search.clone();
    search.box_radius = cfg.tree_box_radius;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for g in graphs {
        let AnyGraph::Undirected(t) = g else {
            return Err(Error::NotATree("digraph input".into()));
        };
        let id = graph_id(g)?;
        if t.n() > TREE_SUITE_ORDER {
            // only the linear-time parameters scale; the rest stay blank
            let c = tree_counts(t)?;
            let mut row = vec![id.clone(), c.n.to_string()];
            row.extend(["-"; 4].map(String::from));
            row.extend([
                c.path_cover.count.to_string(),
                c.delta.delta.to_string(),
                c.two_matching.size.to_string(),
                "-".into(),
            ]);
            rows.push(row);
            items.push(json!({ "graph": id, "counts": to_json(&c) }));
            continue;
        }
        let p = tree_suite(t, &search)?;
        rows.push(vec![
            id.clone(),
            p.n.to_string(),
            p.mz.to_string(),
            p.gamma_z.to_string(),
            p.gamma_q.to_string(),
            p.mr.to_string(),
            p.path_cover.count.to_string(),
            p.delta.delta.to_string(),
            p.two_matching.size.to_string(),
            format!("{:?}", p.diagonal),
        ]);
        items.push(json!({ "graph": id, "params": to_json(&p) }));
    }
    Ok(Outcome::new(
        envelope("trees", cfg, Value::Array(items)),
        &[
            "graph", "n", "mz", "gamma_Z", "gamma_Q", "mr", "P", "Delta", "nu2", "d",
        ],
        rows,
    ))
}

fn classify(cfg: &RunConfig, graphs: &[AnyGraph]) -> corank_core::Result<Outcome> {
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut failed = false;
    for g in graphs {
        let id = graph_id(g)?;
        let (report, extra) = match g {
            AnyGraph::Undirected(u) => (
                classify_rank1_graph(u, &cfg.search)?,
                to_json(&check_mr2_corollary(u, &cfg.search)?),
            ),
            AnyGraph::Directed(d) => (classify_digraph1(d, &cfg.search)?, Value::Null),
        };
        failed |= !report.agree;
        let mut row = vec![id.clone()];
        row.extend(
            report
                .conditions
                .iter()
                .map(|c| format!("{}={}", c.name, c.holds)),
        );
        row.push(report.agree.to_string());
        rows.push(row);
        items.push(json!({ "graph": id, "report": to_json(&report), "mr2": extra }));
    }
    let width = rows.iter().map(Vec::len).max().unwrap_or(2);
    let mut header = vec!["graph".to_string()];
    header.extend((1..width - 1).map(|k| format!("condition {k}")));
    header.push("agree".into());
    for r in rows.iter_mut() {
        let last = r.pop().expect("agree column");
        r.resize(width - 1, String::new());
        r.push(last);
    }
    let mut out = Outcome::new(envelope("classify", cfg, Value::Array(items)), &[], rows);
    out.header = header;
    out.failed = failed;
    Ok(out)
}

fn read_generators(path: &Path) -> corank_core::Result<Vec<String>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .flat_map(|l| l.split(','))
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn gb(
    opts: &Options,
    cfg: &RunConfig,
    index: usize,
    compare: Option<&Path>,
    graphs: &[AnyGraph],
) -> corank_core::Result<Outcome> {
    let domain = opts.domain.unwrap_or(DomainTag::Rationals);
    let claimed = compare.map(read_generators).transpose()?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let (mut failed, mut undecided) = (false, false);
    for g in graphs {
        let id = graph_id(g)?;
        let m = SymbolicMatrix::checked(g.as_adjacency())?;
        if index == 0 || index > m.n() {
            return Err(Error::Range {
                what: "minor size",
                value: index,
                range: "1..=n",
            });
        }
        // integer ideals are shown through their rational basis; equality
        // over Z is decided separately
        let shown = if domain == DomainTag::Integers {
            DomainTag::Rationals
        } else {
            domain
        };
        let basis = match groebner_basis_of_critical_ideal(&m, index, shown, &cfg.search) {
            Ok(b) => Some(b),
            Err(Error::Budget(_)) => None,
            Err(e) => return Err(e),
        };
        undecided |= basis.is_none();
        let equal = match &claimed {
            None => None,
            Some(c) => {
                let texts: Vec<&str> = c.iter().map(String::as_str).collect();
                let verdict = match domain {
                    DomainTag::Integers => {
                        critical_ideal_equals_over_z(&m, index, &texts, &cfg.search)
                    }
                    d => critical_ideal_equals(&m, index, d, &texts, &cfg.search).map(Some),
                };
                match verdict {
                    Ok(v) => Some(v),
                    Err(Error::Budget(_)) => Some(None),
                    Err(e) => return Err(e),
                }
            }
        };
        match equal {
            Some(Some(false)) => failed = true,
            Some(None) => undecided = true,
            _ => {}
        }
        let generators = basis.as_ref().map(|b| b.generators.clone());
        rows.push(vec![
            id.clone(),
            index.to_string(),
            domain.to_string(),
            generators
                .as_ref()
                .map_or_else(|| "budget exceeded".into(), |g| g.join(", ")),
            match equal {
                None => "-".into(),
                Some(None) => "undecided".into(),
                Some(Some(b)) => b.to_string(),
            },
        ]);
        items.push(json!({
            "graph": id,
            "index": index,
            "domain": domain,
            "basis_domain": shown,
            "basis": generators,
            "equal": equal.map(|e| e.map_or(Value::String("undecided".into()), Value::Bool)),
        }));
    }
    let mut out = Outcome::new(
        envelope("gb", cfg, Value::Array(items)),
        &["graph", "index", "domain", "basis", "equal"],
        rows,
    );
    out.failed = failed;
    out.undecided = undecided;
    Ok(out)
}

fn sweep(cfg: &RunConfig, name: &str) -> corank_core::Result<Outcome> {
    let which: Vec<Sweep> = if name == "all" {
        Sweep::ALL.to_vec()
    } else {
        vec![name.parse()?]
    };
    let summaries = which
        .into_iter()
        .map(|w| run_sweep(w, cfg))
        .collect::<corank_core::Result<Vec<_>>>()?;
    let rows = summaries
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                s.checked.to_string(),
                if s.pass() { "pass" } else { "fail" }.to_string(),
                s.failures.len().to_string(),
                s.failures
                    .first()
                    .map_or_else(String::new, |c| format!("{}: {}", c.instance, c.detail)),
            ]
        })
        .collect();
    let mut out = Outcome::new(
        envelope("sweep", cfg, to_json(&summaries)),
        &[
            "sweep",
            "checked",
            "status",
            "failures",
            "first counterexample",
        ],
        rows,
    );
    out.failed = summaries.iter().any(|s| !s.pass());
    Ok(out)
}

fn appendix(cfg: &RunConfig) -> corank_core::Result<Outcome> {
    let run = reproduce_appendix(&cfg.search)?;
    let opt = |v: Option<usize>| v.map_or_else(|| "?".into(), |v| v.to_string());
    let rows = run
        .rows
        .iter()
        .map(|r| {
            vec![
                r.golden_row.map_or_else(|| "-".into(), |k| k.to_string()),
                r.canonical.clone(),
                r.n.to_string(),
                r.edges.to_string(),
                r.mz.to_string(),
                opt(r.gamma_z),
                opt(r.gamma_q),
            ]
        })
        .collect();
    for d in &run.diffs {
        eprintln!("{}", json!({ "diff": d }));
    }
    let mut out = Outcome::new(
        envelope("reproduce-appendix", cfg, to_json(&run)),
        &["row", "graph", "n", "edges", "mz", "gamma_Z", "gamma_Q"],
        rows,
    );
    out.failed = !run.matches();
    out.undecided = !run.undecided.is_empty();
    Ok(out)
}
