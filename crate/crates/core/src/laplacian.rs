//! The generalized Laplacian: variable `x_u` on the diagonal, `-m_uv` off it.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Adjacency;

/// Largest order for which the dense generalized Laplacian is built.
pub const MATRIX_ORDER_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Entry {
    Var(usize),
    Const(i64),
}

impl std::fmt::Display for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Entry::Var(u) => write!(f, "x{u}"),
            Entry::Const(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicMatrix {
    n: usize,
    /// Row-major off-diagonal constants; diagonal slots hold 0 and are
    /// never read as constants.
    off: Vec<i64>,
}

impl SymbolicMatrix {
    pub fn of<A: Adjacency + ?Sized>(g: &A) -> Self {
        let n = g.order();
        let mut off = vec![0; n * n];
        for u in 0..n {
            for &v in g.out_neighbors(u) {
                off[u * n + v] = -g.multiplicity(u, v);
            }
        }
        SymbolicMatrix { n, off }
    }

    /// As [`SymbolicMatrix::of`], refusing orders above [`MATRIX_ORDER_CAP`].
    pub fn checked<A: Adjacency + ?Sized>(g: &A) -> Result<Self> {
        if g.order() > MATRIX_ORDER_CAP {
            return Err(Error::Range {
                what: "order for the generalized Laplacian",
                value: g.order(),
                range: "0..=64",
            });
        }
        Ok(Self::of(g))
    }

    /// General form with arbitrary non-positive off-diagonal integers.
    pub fn from_off_diagonal(n: usize, off: Vec<i64>) -> Self {
        assert_eq!(off.len(), n * n);
        SymbolicMatrix { n, off }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, u: usize, v: usize) -> Entry {
        if u == v {
            Entry::Var(u)
        } else {
            Entry::Const(self.off[u * self.n + v])
        }
    }

    pub fn off_diagonal(&self, u: usize, v: usize) -> i64 {
        if u == v {
            0
        } else {
            self.off[u * self.n + v]
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (0..u).all(|v| self.off_diagonal(u, v) == self.off_diagonal(v, u)))
    }

    /// `L(G, a)` with the diagonal replaced by `point`.
    pub fn evaluate(&self, point: &[i64]) -> Vec<Vec<i64>> {
        assert_eq!(point.len(), self.n);
        (0..self.n)
            .map(|u| {
                (0..self.n)
                    .map(|v| {
                        if u == v {
                            point[u]
                        } else {
                            self.off[u * self.n + v]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn evaluate_big(&self, point: &[BigInt]) -> Vec<Vec<BigInt>> {
        assert_eq!(point.len(), self.n);
        (0..self.n)
            .map(|u| {
                (0..self.n)
                    .map(|v| {
                        if u == v {
                            point[u].clone()
                        } else {
                            BigInt::from(self.off[u * self.n + v])
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Pretty matrix text, one row per line.
    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.n)
            .map(|u| (0..self.n).map(|v| self.entry(u, v).to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| format!("{c:>width$}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bull, octahedron};
    use crate::graph::{Digraph, Graph};

    #[test]
    fn single_vertex() {
        let m = SymbolicMatrix::of(&Graph::new(1));
        assert_eq!(m.entry(0, 0), Entry::Var(0));
        assert_eq!(m.render(), "x0");
    }

    #[test]
    fn bull_matrix_entries() {
        // rows for vertices labeled 1..5, shifted to 0..4
        let expected = [
            [None, Some(-1), Some(-1), Some(-1), Some(0)],
            [Some(-1), None, Some(-1), Some(0), Some(-1)],
            [Some(-1), Some(-1), None, Some(0), Some(0)],
            [Some(-1), Some(0), Some(0), None, Some(0)],
            [Some(0), Some(-1), Some(0), Some(0), None],
        ];
        let m = SymbolicMatrix::of(&bull());
        for u in 0..5 {
            for v in 0..5 {
                let want = match expected[u][v] {
                    None => Entry::Var(u),
                    Some(c) => Entry::Const(c),
                };
                assert_eq!(m.entry(u, v), want);
            }
        }
        assert!(m.is_symmetric());
    }

    #[test]
    fn octahedron_zeros_sit_on_the_matching() {
        let m = SymbolicMatrix::of(&octahedron());
        for (u, v) in [(0, 3), (1, 5), (2, 4)] {
            assert_eq!(m.entry(u, v), Entry::Const(0));
            assert_eq!(m.entry(v, u), Entry::Const(0));
        }
        let zeros = (0..6)
            .flat_map(|u| (0..6).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && m.off_diagonal(u, v) == 0)
            .count();
        assert_eq!(zeros, 6);
    }

    #[test]
    fn digraph_rows_follow_out_arcs() {
        let d = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        let m = SymbolicMatrix::of(&d);
        assert_eq!(m.entry(0, 1), Entry::Const(-1));
        assert_eq!(m.entry(1, 0), Entry::Const(0));
        assert!(!m.is_symmetric());
    }
}
