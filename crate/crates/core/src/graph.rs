//! Simple graphs and digraphs on the dense vertex set `0..n`.
//!
//! Both types keep sorted adjacency lists, so they scale to the large trees
//! used in the linear-time tree checks while still answering `has_arc` in
//! logarithmic time for the small exhaustive computations.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Read-only view shared by [`Graph`] and [`Digraph`].
///
/// For an undirected graph an edge `{u, v}` is reported as both arcs
/// `u -> v` and `v -> u`.
pub trait Adjacency {
    fn order(&self) -> usize;
    fn has_arc(&self, u: usize, v: usize) -> bool;
    fn out_neighbors(&self, v: usize) -> &[usize];
    fn is_directed(&self) -> bool;

    /// Number of arcs from `u` to `v` (0 or 1 for simple inputs).
    fn multiplicity(&self, u: usize, v: usize) -> i64 {
        i64::from(self.has_arc(u, v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`; returns `false` when the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edge_count() + 1 == self.n && self.is_connected()
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|a| a.len() + 1 == self.n)
    }

    /// Subgraph induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut h = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    h.add_edge(i, j).expect("indices are in range");
                }
            }
        }
        h
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut h = Graph::new(self.n);
        for (u, v) in self.edges() {
            h.add_edge(perm[u], perm[v])
                .expect("permutation is in range");
        }
        h
    }

    pub fn complement(&self) -> Graph {
        let mut h = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    h.add_edge(u, v).expect("in range");
                }
            }
        }
        h
    }

    /// Line graph; output vertex `i` is the `i`-th edge of [`Graph::edges`].
    pub fn line_graph(&self) -> Graph {
        let edges = self.edges();
        let mut h = Graph::new(edges.len());
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || a == d || b == c || b == d {
                    h.add_edge(i, j).expect("in range");
                }
            }
        }
        h
    }

    pub fn to_digraph(&self) -> Digraph {
        let mut d = Digraph::new(self.n);
        for (u, v) in self.edges() {
            d.add_arc(u, v).expect("in range");
            d.add_arc(v, u).expect("in range");
        }
        d
    }
}

impl Adjacency for Graph {
    fn order(&self) -> usize {
        self.n
    }
    fn has_arc(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v)
    }
    fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }
    fn is_directed(&self) -> bool {
        false
    }
}

/// Loopless digraph; anti-parallel pairs (double arcs) are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut d = Digraph::new(n);
        for &(u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<bool> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    order: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        match self.out[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.out[u].insert(pos, v);
                let pos = self.inn[v].binary_search(&u).unwrap_err();
                self.inn[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Arcs sorted lexicographically.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.out[u].iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_weakly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.out[u].iter().chain(&self.inn[u]) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> Digraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut h = Digraph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.out[v] {
                let j = index[w];
                if j != usize::MAX {
                    h.add_arc(i, j).expect("in range");
                }
            }
        }
        h
    }

    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        let mut h = Digraph::new(self.n);
        for (u, v) in self.arcs() {
            h.add_arc(perm[u], perm[v]).expect("in range");
        }
        h
    }
}

impl Adjacency for Digraph {
    fn order(&self) -> usize {
        self.n
    }
    fn has_arc(&self, u: usize, v: usize) -> bool {
        Digraph::has_arc(self, u, v)
    }
    fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }
    fn is_directed(&self) -> bool {
        true
    }
}

/// Either kind of input, as produced by format autodetection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnyGraph {
    Undirected(Graph),
    Directed(Digraph),
}

impl AnyGraph {
    pub fn as_adjacency(&self) -> &dyn Adjacency {
        match self {
            AnyGraph::Undirected(g) => g,
            AnyGraph::Directed(d) => d,
        }
    }

    pub fn n(&self) -> usize {
        self.as_adjacency().order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_out_of_range() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(Error::Loop(1)));
        assert!(matches!(
            g.add_edge(0, 3),
            Err(Error::VertexOutOfRange { vertex: 3, .. })
        ));
        assert_eq!(g.add_edge(0, 1), Ok(true));
        assert_eq!(g.add_edge(1, 0), Ok(false));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn complement_of_complete_is_empty() {
        let mut k4 = Graph::new(4);
        for u in 0..4 {
            for v in u + 1..4 {
                k4.add_edge(u, v).unwrap();
            }
        }
        assert_eq!(k4.complement().edge_count(), 0);
        assert_eq!(k4.complement().complement(), k4);
    }

    #[test]
    fn line_graph_of_path_is_shorter_path() {
        for n in 3..=8 {
            let p =
                Graph::from_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap();
            let l = p.line_graph();
            let expected =
                Graph::from_edges(n - 1, &(0..n - 2).map(|i| (i, i + 1)).collect::<Vec<_>>())
                    .unwrap();
            assert_eq!(l, expected);
        }
    }

    #[test]
    fn digraph_weak_connectivity() {
        let d = Digraph::from_arcs(3, &[(0, 1), (2, 1)]).unwrap();
        assert!(d.is_weakly_connected());
        let d = Digraph::from_arcs(3, &[(0, 1)]).unwrap();
        assert!(!d.is_weakly_connected());
        assert_eq!(d.in_neighbors(1), &[0]);
    }
}
