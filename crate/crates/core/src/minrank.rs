//! Minimum rank bounds, critical minimum rank by box search, and the tree
//! parameters: path cover number, the deletion parameter Δ and the
//! 2-matching number, each with a linear dynamic program and an
//! exhaustive oracle.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::critical::{gamma, scan_box, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph};
use crate::laplacian::SymbolicMatrix;
use crate::poly::DomainTag;
use crate::zero_forcing::{mz, EXACT_ORDER_CAP};

/// Orders up to which minimum rank equals `mz`.
pub const EXACT_MR_ORDER: usize = 7;

/// Minimum rank over the reals: exact for small orders, an interval beyond.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinRank {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub provenance: String,
}

impl MinRank {
    pub fn value(&self) -> Option<usize> {
        self.exact.then_some(self.lower)
    }
}

/// `mr(G)`: equal to `mz(G)` for graphs on at most seven vertices; larger
/// graphs get `[mz, best box rank]`.
pub fn mr_small(g: &Graph, cfg: &SearchConfig) -> MinRank {
    let lower = mz(g);
    if g.n() <= EXACT_MR_ORDER {
        return MinRank {
            lower,
            upper: lower,
            exact: true,
            provenance: format!("mr = mz for graphs on at most {EXACT_MR_ORDER} vertices"),
        };
    }
    let Ok(m) = SymbolicMatrix::checked(g) else {
        return MinRank {
            lower,
            upper: g.n(),
            exact: false,
            provenance: "bounds only: order too large for evaluation points".into(),
        };
    };
    let scan = scan_box(
        &m,
        &crate::critical::symmetric_box(cfg.box_radius),
        None,
        lower,
        cfg.max_points,
    );
    let upper = scan.hit.or(scan.best).map_or(g.n(), |(_, r)| r);
    MinRank {
        lower,
        upper,
        exact: lower == upper,
        provenance: if lower == upper {
            "zero forcing lower bound met by an evaluation point".into()
        } else {
            "bounds only: zero forcing below, best evaluation point above".into()
        },
    }
}

/// Bounds on the critical minimum rank, the least rank of `L(G, d)` with
/// `d` over the domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MrcrBounds {
    pub domain: DomainTag,
    pub lower: usize,
    pub upper: usize,
    /// Point achieving `upper`.
    pub witness: Option<Vec<i64>>,
    /// The scan covered every point of the box.
    pub complete: bool,
    pub points: usize,
}

impl MrcrBounds {
    pub fn value(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

/// Lower bound from γ (itself at least `mz`), upper bound from the least
/// rank over `values^n`, computed over `Q` for `Z` and `Q`, mod `p` for
/// `F_p`.
pub fn mrcr_bounds<A: Adjacency + ?Sized>(
    g: &A,
    domain: DomainTag,
    values: &[i64],
    cfg: &SearchConfig,
) -> Result<MrcrBounds> {
    let m = SymbolicMatrix::checked(g)?;
    let gam = gamma(g, domain, cfg)?;
    let lower = gam.lower.max(mz(g));
    let prime = match domain {
        DomainTag::PrimeField(p) => Some(p),
        _ => None,
    };
    let scan = scan_box(&m, values, prime, lower, cfg.max_points);
    let (witness, upper) = match scan.hit.or(scan.best) {
        Some((point, rank)) => (Some(point), rank),
        None => (None, g.order()),
    };
    Ok(MrcrBounds {
        domain,
        lower,
        upper,
        witness,
        complete: scan.complete,
        points: scan.points,
    })
}

/// A tree rooted at vertex 0: a BFS order (parents first) and children.
struct Rooted {
    order: Vec<usize>,
    children: Vec<Vec<usize>>,
}

const NONE: usize = usize::MAX;

fn rooted(t: &Graph) -> Result<Rooted> {
    if !t.is_tree() {
        return Err(Error::NotATree(format!(
            "{} vertices, {} edges",
            t.n(),
            t.edge_count()
        )));
    }
    let n = t.n();
    let mut order = Vec::with_capacity(n);
    let mut children = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in t.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                children[u].push(v);
                queue.push_back(v);
            }
        }
    }
    Ok(Rooted { order, children })
}

/// Maximum 2-matching: an edge set with every vertex on at most two of its
/// edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoMatching {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Tree DP: `best[v][k]` is the largest 2-matching inside the subtree of
/// `v` using exactly `k ≤ 2` edges from `v` to its children.
pub fn two_matching_number_tree(t: &Graph) -> Result<TwoMatching> {
    let r = rooted(t)?;
    let n = t.n();
    const NEG: i64 = i64::MIN / 4;
    let mut best = vec![[NEG; 3]; n];
    for &v in r.order.iter().rev() {
        let mut base = 0i64;
        let mut gains = Vec::with_capacity(r.children[v].len());
        for &c in &r.children[v] {
            let free = *best[c].iter().max().expect("three states");
            let linked = best[c][0].max(best[c][1]) + 1;
            base += free;
            gains.push(linked - free);
        }
        gains.sort_unstable_by(|a, b| b.cmp(a));
        best[v][0] = base;
        if !gains.is_empty() {
            best[v][1] = base + gains[0];
        }
        if gains.len() >= 2 {
            best[v][2] = base + gains[0] + gains[1];
        }
    }
    // reconstruct top-down; `want[v]` is the state chosen for v
    let mut want = vec![0usize; n];
    let root = r.order[0];
    want[root] = (0..3)
        .max_by_key(|&k| (best[root][k], std::cmp::Reverse(k)))
        .expect("three states");
    let mut edges = Vec::new();
    for &v in &r.order {
        let mut ranked: Vec<(i64, usize)> = r.children[v]
            .iter()
            .map(|&c| {
                let free = *best[c].iter().max().expect("three states");
                (best[c][0].max(best[c][1]) + 1 - free, c)
            })
            .collect();
        ranked.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let linked: Vec<usize> = ranked.iter().take(want[v]).map(|&(_, c)| c).collect();
        for &c in &r.children[v] {
            if linked.contains(&c) {
                edges.push((v.min(c), v.max(c)));
                want[c] = if best[c][0] >= best[c][1] { 0 } else { 1 };
            } else {
                want[c] = (0..3)
                    .max_by_key(|&k| (best[c][k], std::cmp::Reverse(k)))
                    .expect("three states");
            }
        }
    }
    edges.sort_unstable();
    let size = best[root][want[root]] as usize;
    debug_assert_eq!(size, edges.len());
    Ok(TwoMatching { size, edges })
}

/// Exhaustive 2-matching over edge subsets, for any graph with at most 24
/// edges.
pub fn two_matching_number_brute(g: &Graph) -> Result<TwoMatching> {
    let edges = g.edges();
    if edges.len() > 24 {
        return Err(Error::Range {
            what: "edge count for exhaustive 2-matching",
            value: edges.len(),
            range: "0..=24",
        });
    }
    let mut best: (usize, u32) = (0, 0);
    for mask in 0u32..(1u32 << edges.len()) {
        let size = mask.count_ones() as usize;
        if size <= best.0 {
            continue;
        }
        let mut deg = vec![0u8; g.n()];
        let ok = edges.iter().enumerate().all(|(k, &(u, v))| {
            if mask >> k & 1 == 0 {
                return true;
            }
            deg[u] += 1;
            deg[v] += 1;
            deg[u] <= 2 && deg[v] <= 2
        });
        if ok {
            best = (size, mask);
        }
    }
    Ok(TwoMatching {
        size: best.0,
        edges: edges
            .iter()
            .enumerate()
            .filter(|(k, _)| best.1 >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect(),
    })
}

/// ν₂: tree DP for trees, exhaustive search otherwise.
pub fn two_matching_number(g: &Graph) -> Result<TwoMatching> {
    if g.is_tree() {
        two_matching_number_tree(g)
    } else {
        two_matching_number_brute(g)
    }
}

/// A cover of the vertices by vertex-disjoint induced paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCover {
    pub count: usize,
    /// Each path as its vertex sequence.
    pub paths: Vec<Vec<usize>>,
}

/// `P(T) = n − ν₂(T)`; the cover is read off a maximum 2-matching, whose
/// components in a tree are induced paths.
pub fn path_cover_number(t: &Graph) -> Result<PathCover> {
    let m = two_matching_number_tree(t)?;
    let n = t.n();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &m.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut paths = Vec::new();
    for s in 0..n {
        if seen[s] || adj[s].len() == 2 {
            continue;
        }
        // walk from an endpoint
        let mut path = vec![s];
        seen[s] = true;
        let mut prev = NONE;
        let mut cur = s;
        while let Some(&next) = adj[cur].iter().find(|&&w| w != prev && !seen[w]) {
            seen[next] = true;
            path.push(next);
            prev = cur;
            cur = next;
        }
        paths.push(path);
    }
    if seen.iter().any(|&b| !b) {
        return Err(Error::IdentityViolation(
            "2-matching of a tree contains a cycle".into(),
        ));
    }
    Ok(PathCover {
        count: paths.len(),
        paths,
    })
}

/// Whether the vertex set induces a path in `g` (a single vertex counts).
fn induces_path(g: &Graph, block: &[usize]) -> bool {
    let k = block.len();
    let inside = |v: usize| block.contains(&v);
    let mut edges = 0;
    for &u in block {
        let d = g.neighbors(u).iter().filter(|&&w| inside(w)).count();
        if d > 2 {
            return false;
        }
        edges += d;
    }
    edges / 2 + 1 == k && g.induced_subgraph(block).is_connected()
}

/// Exhaustive path cover number over set partitions (any graph, n ≤ 10).
pub fn path_cover_number_brute(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > 10 {
        return Err(Error::Range {
            what: "order for exhaustive path covers",
            value: n,
            range: "0..=10",
        });
    }
    fn go(g: &Graph, v: usize, blocks: &mut Vec<Vec<usize>>, best: &mut usize) {
        if blocks.len() >= *best {
            return;
        }
        if v == g.n() {
            if blocks.iter().all(|b| induces_path(g, b)) {
                *best = blocks.len();
            }
            return;
        }
        for k in 0..blocks.len() {
            blocks[k].push(v);
            // a partial block must stay a disjoint union of paths
            let ok = blocks[k].iter().all(|&u| {
                g.neighbors(u)
                    .iter()
                    .filter(|w| blocks[k].contains(w))
                    .count()
                    <= 2
            });
            if ok {
                go(g, v + 1, blocks, best);
            }
            blocks[k].pop();
        }
        blocks.push(vec![v]);
        go(g, v + 1, blocks, best);
        blocks.pop();
    }
    let mut best = n + 1;
    go(g, 0, &mut Vec::new(), &mut best);
    Ok(best.min(n))
}

/// Δ(T): the maximum of `p − q` over deletions of `q` vertices leaving a
/// disjoint union of `p` paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaWitness {
    pub delta: i64,
    pub deleted: Vec<usize>,
    pub paths: usize,
}

/// Linear tree DP. For a kept vertex the state is the number of kept
/// children (0, 1, 2); with a kept parent only 0 or 1 are allowed. The
/// objective counts kept vertices minus kept edges (= components) minus
/// deleted vertices.
pub fn delta_parameter(t: &Graph) -> Result<DeltaWitness> {
    let r = rooted(t)?;
    let n = t.n();
    // work in BFS positions: the children of each vertex form a contiguous
    // range of later positions, so the passes below stream through memory
    let mut first_child = Vec::with_capacity(n + 1);
    let mut next = 1;
    for &v in &r.order {
        first_child.push(next);
        next += r.children[v].len();
    }
    first_child.push(next);
    let kids = |i: usize| first_child[i]..first_child[i + 1];
    const NEG: i64 = i64::MIN / 4;
    // states: 0 deleted, 1..=3 kept with 0..=2 kept children
    let mut f = vec![[NEG; 4]; n];
    let gain = |s: &[i64; 4]| s[1].max(s[2]) - 1 - s[0];
    for i in (0..n).rev() {
        let mut del = -1i64;
        let mut base = 1i64;
        let (mut g1, mut g2) = (None::<i64>, None::<i64>);
        for c in kids(i) {
            del += *f[c].iter().max().expect("four states");
            base += f[c][0];
            let g = gain(&f[c]);
            if g1.is_none_or(|x| g > x) {
                g2 = g1;
                g1 = Some(g);
            } else if g2.is_none_or(|x| g > x) {
                g2 = Some(g);
            }
        }
        f[i][0] = del;
        f[i][1] = base;
        if let Some(a) = g1 {
            f[i][2] = base + a;
            if let Some(b) = g2 {
                f[i][3] = base + a + b;
            }
        }
    }
    // ties go to the state keeping the most children, so witnesses delete little
    let pick = |s: &[i64; 4], allowed: &[usize]| -> usize {
        *allowed
            .iter()
            .max_by_key(|&&k| (s[k], k))
            .expect("nonempty")
    };
    let mut st = vec![0usize; n];
    let mut kept_edges = 0;
    st[0] = pick(&f[0], &[0, 1, 2, 3]);
    for i in 0..n {
        let s = st[i];
        if s == 0 {
            for c in kids(i) {
                st[c] = pick(&f[c], &[0, 1, 2, 3]);
            }
            continue;
        }
        // the s - 1 best children by gain, smaller label first among ties
        let better = |a: usize, b: usize| {
            let (ga, gb) = (gain(&f[a]), gain(&f[b]));
            ga > gb || (ga == gb && r.order[a] < r.order[b])
        };
        let (mut k1, mut k2) = (None::<usize>, None::<usize>);
        for c in kids(i) {
            if k1.is_none_or(|x| better(c, x)) {
                k2 = k1;
                k1 = Some(c);
            } else if k2.is_none_or(|x| better(c, x)) {
                k2 = Some(c);
            }
        }
        let kept = [k1, k2];
        for c in kids(i) {
            st[c] = if kept[..s - 1].contains(&Some(c)) {
                pick(&f[c], &[1, 2])
            } else {
                0
            };
            if st[c] != 0 {
                kept_edges += 1;
            }
        }
    }
    let mut deleted: Vec<usize> = (0..n).filter(|&i| st[i] == 0).map(|i| r.order[i]).collect();
    deleted.sort_unstable();
    let paths = n - deleted.len() - kept_edges;
    let delta = paths as i64 - deleted.len() as i64;
    if delta != f[0][st[0]] {
        return Err(Error::IdentityViolation(format!(
            "deletion witness gives {delta}, table gives {}",
            f[0][st[0]]
        )));
    }
    Ok(DeltaWitness {
        delta,
        deleted,
        paths,
    })
}

/// Exhaustive Δ over all deletion sets (n ≤ 20).
pub fn delta_parameter_brute(t: &Graph) -> Result<DeltaWitness> {
    let n = t.n();
    if n > 20 {
        return Err(Error::Range {
            what: "order for exhaustive deletions",
            value: n,
            range: "0..=20",
        });
    }
    let mut best: Option<DeltaWitness> = None;
    for mask in 0u32..(1u32 << n) {
        let kept: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 0).collect();
        let rest = t.induced_subgraph(&kept);
        if (0..rest.n()).any(|v| rest.degree(v) > 2) {
            continue;
        }
        let comps = components(&rest);
        if comps.iter().any(|c| !induces_path(&rest, c)) {
            continue;
        }
        let q = n - kept.len();
        let delta = comps.len() as i64 - q as i64;
        if best.as_ref().is_none_or(|b| delta > b.delta) {
            best = Some(DeltaWitness {
                delta,
                deleted: (0..n).filter(|&v| mask >> v & 1 == 1).collect(),
                paths: comps.len(),
            });
        }
    }
    Ok(best.expect("deleting nothing or everything is always allowed"))
}

fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            k += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Largest order for [`tree_suite`]: the cross-check needs an exact zero
/// forcing number.
pub const TREE_SUITE_ORDER: usize = EXACT_ORDER_CAP;

/// The linear-time tree parameters, at any order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCounts {
    pub n: usize,
    pub path_cover: PathCover,
    pub delta: DeltaWitness,
    pub two_matching: TwoMatching,
}

/// Computes `P`, `Δ` and `ν₂` and checks `n − P = n − Δ = ν₂`.
pub fn tree_counts(t: &Graph) -> Result<TreeCounts> {
    let n = t.n();
    let path_cover = path_cover_number(t)?;
    let delta = delta_parameter(t)?;
    let two_matching = two_matching_number_tree(t)?;
    let values = [
        (n - path_cover.count) as i64,
        n as i64 - delta.delta,
        two_matching.size as i64,
    ];
    if values.iter().any(|&v| v != values[0]) {
        return Err(Error::IdentityViolation(format!(
            "n - P, n - Delta and nu2 disagree: {values:?}"
        )));
    }
    Ok(TreeCounts {
        n,
        path_cover,
        delta,
        two_matching,
    })
}

/// Every tree parameter with its witness, after checking the equalities
/// `mz = γ_Z = γ_Q = mr = n − P = n − Δ = ν₂` and that some
/// `d ∈ {−1, 0}^n` gives `rank L(T, d) = mz`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub n: usize,
    pub mz: usize,
    pub gamma_z: usize,
    pub gamma_q: usize,
    pub mr: usize,
    /// Maximum nullity `n − mr`.
    pub max_nullity: usize,
    pub path_cover: PathCover,
    pub delta: DeltaWitness,
    pub two_matching: TwoMatching,
    pub diagonal: Vec<i64>,
}

pub fn tree_suite(t: &Graph, cfg: &SearchConfig) -> Result<TreeParams> {
    let n = t.n();
    if n > TREE_SUITE_ORDER {
        return Err(Error::Range {
            what: "tree order for the full cross-check",
            value: n,
            range: "1..=12",
        });
    }
    let TreeCounts {
        path_cover,
        delta,
        two_matching,
        ..
    } = tree_counts(t)?;
    let z = mz(t);
    let mut tree_cfg = cfg.clone();
    tree_cfg.box_radius = cfg.box_radius.min(1);
    let gz = gamma(t, DomainTag::Integers, &tree_cfg)?;
    let gq = gamma(t, DomainTag::Rationals, &tree_cfg)?;
    let (Some(gamma_z), Some(gamma_q)) = (gz.value, gq.value) else {
        return Err(Error::IdentityViolation(format!(
            "co-rank of a tree left open: Z [{}, {}], Q [{}, {}]",
            gz.lower, gz.upper, gq.lower, gq.upper
        )));
    };
    let m = SymbolicMatrix::of(t);
    let scan = scan_box(&m, &[-1, 0], None, z, cfg.max_points);
    let Some((diagonal, rank)) = scan.hit else {
        return Err(Error::IdentityViolation(format!(
            "no d in {{-1,0}}^{n} with rank {z}"
        )));
    };
    let mr = mr_small(t, cfg);
    let mr = if mr.exact { mr.lower } else { rank };
    let values = [
        ("mz", z as i64),
        ("gamma_Z", gamma_z as i64),
        ("gamma_Q", gamma_q as i64),
        ("mr", mr as i64),
        ("n - P", (n - path_cover.count) as i64),
        ("n - Delta", n as i64 - delta.delta),
        ("nu2", two_matching.size as i64),
        ("rank L(T, d)", rank as i64),
    ];
    if values.iter().any(|&(_, v)| v != z as i64) {
        return Err(Error::IdentityViolation(format!(
            "tree parameters disagree: {values:?}"
        )));
    }
    Ok(TreeParams {
        n,
        mz: z,
        gamma_z,
        gamma_q,
        mr,
        max_nullity: n - mr,
        path_cover,
        delta,
        two_matching,
        diagonal,
    })
}
