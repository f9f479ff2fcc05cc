//! Named graphs and digraphs, plus exhaustive small enumerations.
//!
//! Figures that number vertices from 1 are shifted down by one; where a
//! drawing's node names and printed labels differ, the edge list as written
//! is followed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::canon::{canonical_digraph, canonical_graph};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, pairs).expect("generator edges are valid")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    from_pairs(n, &edges)
}

/// Cycle `0 - 1 - ... - (n-1) - 0`; for `n < 3` this is a path.
pub fn cycle(n: usize) -> Graph {
    let mut g = path(n);
    if n >= 3 {
        g.add_edge(0, n - 1).expect("valid");
    }
    g
}

pub fn complete(n: usize) -> Graph {
    complete_multipartite(&vec![1; n])
}

pub fn empty(n: usize) -> Graph {
    Graph::new(n)
}

/// Parts are consecutive vertex blocks in the given order.
pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let n = parts.iter().sum();
    let mut block = Vec::with_capacity(n);
    for (i, &p) in parts.iter().enumerate() {
        block.extend(std::iter::repeat_n(i, p));
    }
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if block[u] != block[v] {
                g.add_edge(u, v).expect("valid");
            }
        }
    }
    g
}

/// `K_{1,k}` with center 0.
pub fn star(k: usize) -> Graph {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    from_pairs(k + 1, &edges)
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i - (i+5)`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    from_pairs(10, &edges)
}

/// Triangle `0 1 2` with pendant vertices `3` (on 0) and `4` (on 1).
///
/// Figure labels 1..5 map to 0..4, so the blue pair {4, 5} is {3, 4} here.
pub fn bull() -> Graph {
    from_pairs(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)])
}

/// Perfect matching `{0,3}, {1,5}, {2,4}` on six vertices.
pub fn three_k2() -> Graph {
    from_pairs(6, &[(0, 3), (1, 5), (2, 4)])
}

/// Complement of [`three_k2`], i.e. `K_{2,2,2}`.
pub fn octahedron() -> Graph {
    three_k2().complement()
}

pub fn g_a() -> Graph {
    from_pairs(
        6,
        &[
            (0, 1),
            (0, 2),
            (0, 4),
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 5),
            (3, 4),
            (3, 5),
            (4, 5),
        ],
    )
}

pub fn g_b() -> Graph {
    from_pairs(
        6,
        &[
            (0, 1),
            (0, 2),
            (0, 4),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 5),
            (3, 5),
            (4, 5),
        ],
    )
}

/// The 5-wheel: hub 0, rim `1 - 2 - 3 - 4 - 5 - 1`.
pub fn g_c() -> Graph {
    from_pairs(
        6,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 5),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
        ],
    )
}

/// Spider with `legs` legs of `length` vertices each around center 0.
pub fn spider(legs: usize, length: usize) -> Graph {
    let n = 1 + legs * length;
    let mut edges = Vec::with_capacity(n - 1);
    for l in 0..legs {
        let base = 1 + l * length;
        edges.push((0, base));
        for k in 1..length {
            edges.push((base + k - 1, base + k));
        }
    }
    from_pairs(n, &edges)
}

/// `T` is `0..n1`, `K` is `n1..n1+n2`, `T'` is the rest.
pub fn lambda_digraph(n1: usize, n2: usize, n3: usize) -> Digraph {
    let t = 0..n1;
    let k = n1..n1 + n2;
    let t2 = n1 + n2..n1 + n2 + n3;
    let mut d = Digraph::new(n1 + n2 + n3);
    for a in k.clone() {
        for b in k.clone() {
            if a != b {
                d.add_arc(a, b).expect("valid");
            }
        }
    }
    for a in t.clone() {
        for b in k.clone().chain(t2.clone()) {
            d.add_arc(a, b).expect("valid");
        }
    }
    for a in k {
        for b in t2.clone() {
            d.add_arc(a, b).expect("valid");
        }
    }
    d
}

/// The seventeen forbidden digraphs in drawing order, `v1..v4` as `0..3`.
///
/// Two drawings carry the same printed label; they are kept apart as
/// `F3,6a` and `F3,6b`.
pub fn forbidden_family() -> Vec<(&'static str, Digraph)> {
    type Row = (&'static str, usize, &'static [(usize, usize)]);
    let table: [Row; 17] = [
        ("F3,1", 3, &[(0, 2), (2, 1)]),
        ("F3,2", 3, &[(0, 2), (1, 2), (2, 0)]),
        ("F3,3", 3, &[(0, 2), (2, 0), (2, 1)]),
        ("F3,4", 3, &[(0, 2), (1, 2), (2, 0), (2, 1)]),
        ("F3,5", 3, &[(0, 1), (1, 2), (2, 0)]),
        ("F3,6a", 3, &[(0, 1), (0, 2), (1, 0), (2, 1)]),
        ("F3,6b", 3, &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0)]),
        ("F4,1", 4, &[(0, 2), (0, 3), (1, 3)]),
        ("F4,2", 4, &[(0, 2), (0, 3), (1, 3), (2, 3)]),
        ("F4,3", 4, &[(0, 2), (3, 0), (3, 1), (3, 2)]),
        ("F4,4", 4, &[(0, 2), (0, 3), (1, 3), (2, 0), (2, 3)]),
        ("F4,5", 4, &[(0, 2), (2, 0), (3, 0), (3, 1), (3, 2)]),
        ("F4,6", 4, &[(0, 2), (1, 2), (3, 0), (3, 1), (3, 2)]),
        ("F4,7", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        (
            "F4,8",
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 0), (1, 2), (1, 3), (2, 3)],
        ),
        (
            "F4,9",
            4,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 0),
                (1, 2),
                (1, 3),
                (2, 3),
                (3, 2),
            ],
        ),
        (
            "F4,10",
            4,
            &[(0, 1), (1, 0), (2, 0), (2, 1), (2, 3), (3, 0), (3, 1)],
        ),
    ];
    table
        .iter()
        .map(|&(name, n, arcs)| (name, Digraph::from_arcs(n, arcs).expect("valid")))
        .collect()
}

/// Every named construction, for lookups by name from the command line.
pub fn by_name(name: &str) -> Option<Graph> {
    let lower = name.to_ascii_lowercase();
    let numbered = |prefix: &str| -> Option<usize> { lower.strip_prefix(prefix)?.parse().ok() };
    Some(match lower.as_str() {
        "petersen" => petersen(),
        "bull" => bull(),
        "octahedron" | "3k2bar" | "co-3k2" => octahedron(),
        "ga" | "g_a" => g_a(),
        "gb" | "g_b" => g_b(),
        "gc" | "g_c" => g_c(),
        _ => {
            if let Some(n) = numbered("path").or_else(|| numbered("p")) {
                path(n)
            } else if let Some(n) = numbered("cycle").or_else(|| numbered("c")) {
                cycle(n)
            } else if let Some(n) = numbered("complete") {
                complete(n)
            } else if let Some(k) = numbered("star") {
                star(k)
            } else {
                let rest = lower.strip_prefix("k")?;
                // `k5` is complete, `k3,3,3` complete multipartite
                let parts: Vec<usize> = rest
                    .split(',')
                    .map(|p| p.parse().ok())
                    .collect::<Option<_>>()?;
                match parts[..] {
                    [n] => complete(n),
                    _ => complete_multipartite(&parts),
                }
            }
        }
    })
}

/// Rooted AHU code of the subtree at `root` (iterative, so deep paths are fine).
fn rooted_code(t: &Graph, root: usize) -> String {
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &v in t.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                stack.push(v);
            }
        }
    }
    let mut codes: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut done = vec![String::new(); n];
    for &u in order.iter().rev() {
        let mut kids = std::mem::take(&mut codes[u]);
        kids.sort_unstable();
        let code = format!("({})", kids.concat());
        if u != root {
            codes[parent[u]].push(code);
        } else {
            done[u] = code;
        }
    }
    std::mem::take(&mut done[root])
}

/// The one or two centers of a tree.
pub fn tree_centers(t: &Graph) -> Vec<usize> {
    let n = t.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg = t.degrees();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            deg[leaf] = 0;
        }
        for &leaf in &leaves {
            for &w in t.neighbors(leaf) {
                if deg[w] > 0 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    leaves.sort_unstable();
    leaves
}

/// Complete isomorphism invariant for trees.
pub fn tree_code(t: &Graph) -> String {
    tree_centers(t)
        .into_iter()
        .map(|c| rooted_code(t, c))
        .min()
        .unwrap_or_default()
}

/// One representative per isomorphism class of trees on `n` vertices,
/// ordered by canonical code.
pub fn all_trees(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 16 {
        return Err(Error::Range {
            what: "tree order",
            value: n,
            range: "1..=16",
        });
    }
    let mut level: BTreeMap<String, Graph> = BTreeMap::new();
    let k1 = Graph::new(1);
    level.insert(tree_code(&k1), k1);
    for m in 2..=n {
        let mut next = BTreeMap::new();
        for t in level.values() {
            for v in 0..m - 1 {
                let mut grown = Graph::new(m);
                for (a, b) in t.edges() {
                    grown.add_edge(a, b).expect("valid");
                }
                grown.add_edge(v, m - 1).expect("valid");
                next.entry(tree_code(&grown)).or_insert(grown);
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}

/// One representative per isomorphism class of connected graphs with
/// `1 <= n <= max_n`, ordered by `n` and then canonical graph6 text. The
/// representatives are the canonical relabelings themselves.
pub fn enumerate_connected_graphs(max_n: usize) -> Result<Vec<Graph>> {
    if max_n > 7 {
        return Err(Error::Range {
            what: "max_n",
            value: max_n,
            range: "0..=7",
        });
    }
    let mut all = Vec::new();
    if max_n == 0 {
        return Ok(all);
    }
    let mut level: BTreeMap<String, Graph> = BTreeMap::new();
    level.insert("@".to_string(), Graph::new(1));
    all.extend(level.values().cloned());
    for m in 2..=max_n {
        let mut next: BTreeMap<String, Graph> = BTreeMap::new();
        for g in level.values() {
            for mask in 1u32..(1 << (m - 1)) {
                let mut grown = Graph::new(m);
                for (a, b) in g.edges() {
                    grown.add_edge(a, b).expect("valid");
                }
                for v in 0..m - 1 {
                    if mask >> v & 1 == 1 {
                        grown.add_edge(v, m - 1).expect("valid");
                    }
                }
                let c = canonical_graph(&grown)?;
                next.entry(c.encoding)
                    .or_insert_with(|| grown.relabel(&c.perm));
            }
        }
        all.extend(next.values().cloned());
        level = next;
    }
    Ok(all)
}

/// One representative per isomorphism class of digraphs on `1..=max_n`
/// vertices (connected or not), ordered by `n` and canonical digraph6 text.
pub fn enumerate_digraphs(max_n: usize) -> Result<Vec<Digraph>> {
    if max_n > 4 {
        return Err(Error::Range {
            what: "max_n",
            value: max_n,
            range: "0..=4",
        });
    }
    let mut all = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let mut seen: BTreeMap<String, Digraph> = BTreeMap::new();
        for code in 0..4usize.pow(pairs.len() as u32) {
            let mut d = Digraph::new(n);
            let mut c = code;
            for &(u, v) in &pairs {
                let state = c % 4;
                c /= 4;
                if state & 1 == 1 {
                    d.add_arc(u, v).expect("valid");
                }
                if state & 2 == 2 {
                    d.add_arc(v, u).expect("valid");
                }
            }
            let canon = canonical_digraph(&d)?;
            seen.entry(canon.encoding)
                .or_insert_with(|| d.relabel(&canon.perm));
        }
        all.extend(seen.into_values());
    }
    Ok(all)
}

/// Uniform labeled tree from a random Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    if n <= 1 {
        return Graph::new(n);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf exists");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(std::cmp::Reverse(c));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    from_pairs(n, &edges)
}

/// A random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = random_tree(n, rng);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("valid pair");
            }
        }
    }
    g
}

/// Each ordered pair becomes an arc with probability `p`.
pub fn random_digraph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                d.add_arc(u, v).expect("valid pair");
            }
        }
    }
    d
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// Vertex sets of all `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}
