//! Canonical labeling by individualization and refinement.
//!
//! Vertex colors are refined to the coarsest equitable partition. While a
//! cell holds several vertices, each vertex of the first such cell is
//! individualized in turn and the colors refined again. Every discrete
//! partition reached is a candidate labeling; the one whose adjacency bit
//! string is lexicographically smallest wins. Two leaves with equal strings
//! reveal an automorphism, and automorphisms fixing the current branch point
//! prune candidates in the orbit of one already explored. Refinement and cell
//! choice depend only on the isomorphism class, so the result is exact for
//! every order; the search is meant for graphs of modest size.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formats::{write_digraph6, write_graph6};
use crate::graph::{Adjacency, Digraph, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// graph6 (or digraph6) text of the canonically relabeled input.
    pub encoding: String,
    /// `perm[v]` is the canonical position of input vertex `v`.
    pub perm: Vec<usize>,
}

struct Shape<'a, A: Adjacency + ?Sized> {
    g: &'a A,
    directed: bool,
    /// in-neighbors, only filled for digraphs
    ins: Vec<Vec<usize>>,
}

impl<'a, A: Adjacency + ?Sized> Shape<'a, A> {
    fn new(g: &'a A) -> Self {
        let n = g.order();
        let directed = g.is_directed();
        let mut ins = vec![Vec::new(); if directed { n } else { 0 }];
        if directed {
            for u in 0..n {
                for &v in g.out_neighbors(u) {
                    ins[v].push(u);
                }
            }
        }
        Shape { g, directed, ins }
    }

    /// Splits color classes (ranks `0..k`) by the multiset of neighbor
    /// colors until the partition is equitable. New ranks keep the order of
    /// the old ones, so refinement commutes with relabeling.
    fn refine(&self, colors: &mut [usize]) {
        let n = colors.len();
        let mut cells = colors.iter().max().map_or(0, |&c| c + 1);
        loop {
            let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
                .map(|v| {
                    let mut out: Vec<usize> =
                        self.g.out_neighbors(v).iter().map(|&u| colors[u]).collect();
                    out.sort_unstable();
                    let mut inn: Vec<usize> = if self.directed {
                        self.ins[v].iter().map(|&u| colors[u]).collect()
                    } else {
                        Vec::new()
                    };
                    inn.sort_unstable();
                    (colors[v], out, inn)
                })
                .collect();
            let mut distinct = keys.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() == cells {
                return;
            }
            cells = distinct.len();
            for (v, key) in keys.iter().enumerate() {
                colors[v] = distinct.binary_search(key).expect("key present");
            }
        }
    }

    /// Adjacency bits of the labeling `order` (position -> vertex).
    fn bits(&self, order: &[usize]) -> Vec<bool> {
        let n = order.len();
        let mut bits = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..j {
                bits.push(self.g.has_arc(order[i], order[j]));
                if self.directed {
                    bits.push(self.g.has_arc(order[j], order[i]));
                }
            }
        }
        bits
    }
}

/// Gives `v` its own color just below the rest of its cell.
fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    let c = colors[v];
    colors
        .iter()
        .enumerate()
        .map(|(w, &d)| {
            if d > c || (d == c && w != v) {
                d + 1
            } else {
                d
            }
        })
        .collect()
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// A discrete partition reached by the search, with the individualized
/// vertices leading to it.
struct Leaf {
    bits: Vec<bool>,
    colors: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a, A: Adjacency + ?Sized> {
    shape: Shape<'a, A>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

impl<A: Adjacency + ?Sized> Search<'_, A> {
    /// Records a leaf. When it equals an earlier one, returns the depth at
    /// which their paths diverge: the automorphism between them maps the
    /// earlier, fully explored branch onto the current one, so the search
    /// can return to that depth.
    fn leaf(&mut self, colors: Vec<usize>, path: &[usize]) -> Option<usize> {
        let order = inverse(&colors);
        let bits = self.shape.bits(&order);
        for earlier in [&self.first, &self.best].into_iter().flatten() {
            if earlier.bits == bits {
                // the vertex at each position of the earlier leaf maps to
                // the vertex at the same position here
                let gamma: Vec<usize> = earlier.colors.iter().map(|&pos| order[pos]).collect();
                let depth = earlier
                    .path
                    .iter()
                    .zip(path)
                    .take_while(|(a, b)| a == b)
                    .count();
                self.automorphisms.push(gamma);
                return Some(depth);
            }
        }
        let leaf = Leaf {
            bits,
            colors,
            path: path.to_vec(),
        };
        if self.first.is_none() {
            self.first = Some(Leaf {
                bits: leaf.bits.clone(),
                colors: leaf.colors.clone(),
                path: leaf.path.clone(),
            });
        }
        if self.best.as_ref().is_none_or(|b| leaf.bits < b.bits) {
            self.best = Some(leaf);
        }
        None
    }

    /// Whether `v` lies in the orbit of a tried vertex under the known
    /// automorphisms that fix every vertex of `path`.
    fn pruned(&self, v: usize, tried: &[usize], path: &[usize]) -> bool {
        let n = self.shape.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        for gamma in &self.automorphisms {
            if path.iter().all(|&p| gamma[p] == p) {
                for (a, &b) in gamma.iter().enumerate() {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                    }
                }
            }
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }

    /// Explores the node reached by `path`; a returned depth asks every
    /// deeper node to stop.
    fn go(&mut self, colors: Vec<usize>, path: &mut Vec<usize>) -> Option<usize> {
        let n = colors.len();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let Some(target) = sizes.iter().position(|&s| s > 1) else {
            return self.leaf(colors, path);
        };
        let depth = path.len();
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut tried = Vec::new();
        for v in cell {
            if self.pruned(v, &tried, path) {
                continue;
            }
            tried.push(v);
            let mut child = individualize(&colors, v);
            self.shape.refine(&mut child);
            path.push(v);
            let jump = self.go(child, path);
            path.pop();
            if let Some(d) = jump {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }
}

/// `order[k]` is the input vertex placed at canonical position `k`.
fn canonical_order<A: Adjacency + ?Sized>(g: &A) -> Vec<usize> {
    let n = g.order();
    let shape = Shape::new(g);
    let mut colors = vec![0; n];
    shape.refine(&mut colors);
    let mut search = Search {
        shape,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    search.go(colors, &mut Vec::new());
    search.best.map_or_else(Vec::new, |b| inverse(&b.colors))
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    perm
}

pub fn canonical_graph(g: &Graph) -> Result<CanonicalForm> {
    let perm = inverse(&canonical_order(g));
    let encoding = write_graph6(&g.relabel(&perm))?;
    Ok(CanonicalForm { encoding, perm })
}

pub fn canonical_digraph(d: &Digraph) -> Result<CanonicalForm> {
    let perm = inverse(&canonical_order(d));
    let encoding = write_digraph6(&d.relabel(&perm))?;
    Ok(CanonicalForm { encoding, perm })
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n()
        && a.edge_count() == b.edge_count()
        && canonical_graph(a).ok().map(|c| c.encoding)
            == canonical_graph(b).ok().map(|c| c.encoding)
}

pub fn are_isomorphic_digraphs(a: &Digraph, b: &Digraph) -> bool {
    a.n() == b.n()
        && a.arc_count() == b.arc_count()
        && canonical_digraph(a).ok().map(|c| c.encoding)
            == canonical_digraph(b).ok().map(|c| c.encoding)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn cycle_three_is_triangle() {
        let c3 = generators::cycle(3);
        let k3 = generators::complete(3);
        assert_eq!(
            canonical_graph(&c3).unwrap().encoding,
            canonical_graph(&k3).unwrap().encoding
        );
    }

    #[test]
    fn path_and_star_differ() {
        assert!(!are_isomorphic(&generators::path(4), &generators::star(3)));
    }

    #[test]
    fn permutation_is_a_witness() {
        let bull = generators::bull();
        let c = canonical_graph(&bull).unwrap();
        assert_eq!(write_graph6(&bull.relabel(&c.perm)).unwrap(), c.encoding);
        let relabeled = bull.relabel(&[4, 2, 0, 3, 1]);
        assert_eq!(canonical_graph(&relabeled).unwrap().encoding, c.encoding);
    }

    #[test]
    fn digraph_direction_matters() {
        let a = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let b = Digraph::from_arcs(3, &[(0, 1), (2, 1)]).unwrap();
        let c = Digraph::from_arcs(3, &[(2, 0), (1, 2)]).unwrap();
        assert!(!are_isomorphic_digraphs(&a, &b));
        assert!(are_isomorphic_digraphs(&a, &c));
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_permutations(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn agrees_with_brute_force_isomorphism() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let perms = all_permutations(6);
        for _ in 0..60 {
            let a = generators::random_connected_graph(6, rng.gen_range(0.2..0.8), &mut rng);
            let b = generators::random_connected_graph(6, rng.gen_range(0.2..0.8), &mut rng);
            let brute = perms.iter().any(|p| a.relabel(p) == b);
            assert_eq!(
                are_isomorphic(&a, &b),
                brute,
                "{:?} vs {:?}",
                a.edges(),
                b.edges()
            );
            let p = &perms[rng.gen_range(0..perms.len())];
            assert!(are_isomorphic(&a, &a.relabel(p)));
            let da = generators::random_digraph(5, 0.4, &mut rng);
            let db = generators::random_digraph(5, 0.4, &mut rng);
            let brute = all_permutations(5).iter().any(|p| da.relabel(p) == db);
            assert_eq!(are_isomorphic_digraphs(&da, &db), brute);
        }
    }

    #[test]
    fn symmetric_graphs_are_fast() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        for g in [
            generators::complete(40),
            generators::cycle(60),
            generators::petersen(),
            generators::complete_multipartite(&[5, 5, 5, 5]),
            generators::octahedron(),
        ] {
            let c = canonical_graph(&g).unwrap();
            assert_eq!(write_graph6(&g.relabel(&c.perm)).unwrap(), c.encoding);
            let perm = generators::random_permutation(g.n(), &mut rng);
            assert_eq!(
                canonical_graph(&g.relabel(&perm)).unwrap().encoding,
                c.encoding
            );
        }
        let k = generators::complete(30).to_digraph();
        let c = canonical_digraph(&k).unwrap();
        assert_eq!(write_digraph6(&k.relabel(&c.perm)).unwrap(), c.encoding);
    }
}
