//! The color change game on graphs and digraphs.
//!
//! A blue vertex whose (out-)neighborhood contains exactly one white vertex
//! forces that vertex blue. For undirected graphs the neighborhood is the
//! usual one; for digraphs only out-neighbors count.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Adjacency;
use crate::laplacian::Entry;

/// Largest order for which [`zero_forcing_number`] runs the exact search.
pub const EXACT_ORDER_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorState {
    pub blue: Vec<bool>,
    pub forces: Vec<(usize, usize)>,
}

impl ColorState {
    pub fn blue_count(&self) -> usize {
        self.blue.iter().filter(|&&b| b).count()
    }

    pub fn blue_vertices(&self) -> Vec<usize> {
        (0..self.blue.len()).filter(|&v| self.blue[v]).collect()
    }
}

/// A chronological list: the initial blue set and the forces in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForceRecord {
    pub initial_set: Vec<usize>,
    pub forces: Vec<(usize, usize)>,
}

fn unique_white<A: Adjacency + ?Sized>(g: &A, blue: &[bool], x: usize) -> Option<usize> {
    let mut found = None;
    for &y in g.out_neighbors(x) {
        if !blue[y] {
            if found.is_some() {
                return None;
            }
            found = Some(y);
        }
    }
    found
}

/// All forces legal in the current coloring, sorted by (forcer, forced).
pub fn legal_forces<A: Adjacency + ?Sized>(g: &A, blue: &[bool]) -> Vec<(usize, usize)> {
    (0..g.order())
        .filter(|&x| blue[x])
        .filter_map(|x| unique_white(g, blue, x).map(|y| (x, y)))
        .collect()
}

/// Incremental color change rule. A blue vertex is a legal forcer while it
/// has exactly one white out-neighbor; candidates wait in a min-heap and are
/// revalidated when popped, so the smallest legal forcer always acts first.
struct Forcing<'a, A: Adjacency + ?Sized> {
    g: &'a A,
    ins: Vec<Vec<usize>>,
    blue: Vec<bool>,
    /// white out-neighbors per vertex
    white: Vec<usize>,
    ready: BinaryHeap<Reverse<usize>>,
    forces: Vec<(usize, usize)>,
    /// blue vertices with at least two white out-neighbors, by that count
    stuck: Option<BTreeSet<(usize, usize)>>,
}

impl<'a, A: Adjacency + ?Sized> Forcing<'a, A> {
    fn new(g: &'a A, track_stuck: bool) -> Self {
        let n = g.order();
        let mut ins = vec![Vec::new(); n];
        for u in 0..n {
            for &v in g.out_neighbors(u) {
                ins[v].push(u);
            }
        }
        Forcing {
            g,
            ins,
            blue: vec![false; n],
            white: (0..n).map(|v| g.out_neighbors(v).len()).collect(),
            ready: BinaryHeap::new(),
            forces: Vec::new(),
            stuck: track_stuck.then(BTreeSet::new),
        }
    }

    fn set_white_count(&mut self, u: usize, count: usize) {
        if let Some(stuck) = &mut self.stuck {
            if self.blue[u] && self.white[u] >= 2 {
                stuck.remove(&(self.white[u], u));
            }
            if self.blue[u] && count >= 2 {
                stuck.insert((count, u));
            }
        }
        self.white[u] = count;
        if self.blue[u] && count == 1 {
            self.ready.push(Reverse(u));
        }
    }

    fn color(&mut self, v: usize) {
        if self.blue[v] {
            return;
        }
        self.blue[v] = true;
        let own = self.white[v];
        self.set_white_count(v, own);
        for k in 0..self.ins[v].len() {
            let u = self.ins[v][k];
            let count = self.white[u] - 1;
            self.set_white_count(u, count);
        }
    }

    fn run(&mut self) {
        while let Some(Reverse(x)) = self.ready.pop() {
            if self.white[x] != 1 {
                continue;
            }
            let g = self.g;
            let y = *g
                .out_neighbors(x)
                .iter()
                .find(|&&y| !self.blue[y])
                .expect("one white neighbor");
            self.forces.push((x, y));
            self.color(y);
        }
    }
}

/// Applies the color change rule until nothing changes, always performing the
/// smallest legal `(forcer, forced)` pair first.
pub fn closure<A: Adjacency + ?Sized>(g: &A, b: &[usize]) -> ColorState {
    let mut f = Forcing::new(g, false);
    for &v in b {
        f.color(v);
    }
    f.run();
    ColorState {
        blue: f.blue,
        forces: f.forces,
    }
}

pub fn is_zero_forcing_set<A: Adjacency + ?Sized>(g: &A, b: &[usize]) -> bool {
    closure(g, b).blue_count() == g.order()
}

/// Bitmask closure for the subset search (orders up to 64).
fn closure_mask(out: &[u64], mut blue: u64, full: u64) -> u64 {
    loop {
        let mut changed = false;
        let mut rest = blue;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let white = out[x] & !blue;
            if white != 0 && white & (white - 1) == 0 {
                blue |= white;
                changed = true;
            }
        }
        if !changed || blue == full {
            return blue;
        }
    }
}

fn out_masks<A: Adjacency + ?Sized>(g: &A) -> Vec<u64> {
    (0..g.order())
        .map(|v| g.out_neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroForcing {
    pub z: usize,
    pub witness: ForceRecord,
    /// `false` when the order exceeded the exact cap and `z` is only an
    /// upper bound from the greedy heuristic.
    pub exact: bool,
}

fn record_for<A: Adjacency + ?Sized>(g: &A, set: Vec<usize>) -> ForceRecord {
    let state = closure(g, &set);
    ForceRecord {
        initial_set: set,
        forces: state.forces,
    }
}

/// `Z(g)` with the lexicographically least minimum zero forcing set as the
/// witness. Orders above `cap` (or above 64) fall back to a greedy upper bound.
pub fn zero_forcing_number_with_cap<A: Adjacency + ?Sized>(g: &A, cap: usize) -> ZeroForcing {
    let n = g.order();
    if n == 0 {
        return ZeroForcing {
            z: 0,
            witness: ForceRecord {
                initial_set: vec![],
                forces: vec![],
            },
            exact: true,
        };
    }
    if n > cap.min(64) {
        return greedy(g);
    }
    let out = out_masks(g);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for k in 0..=n {
        let mut set: Vec<usize> = (0..k).collect();
        loop {
            let mask = set.iter().fold(0u64, |m, &v| m | 1 << v);
            if closure_mask(&out, mask, full) == full {
                return ZeroForcing {
                    z: k,
                    witness: record_for(g, set),
                    exact: true,
                };
            }
            if !next_combination(&mut set, n) {
                break;
            }
        }
    }
    unreachable!("the full vertex set is always zero forcing")
}

pub fn zero_forcing_number<A: Adjacency + ?Sized>(g: &A) -> ZeroForcing {
    zero_forcing_number_with_cap(g, EXACT_ORDER_CAP)
}

/// Advances `set` to the next k-subset of `0..n` in lexicographic order.
pub fn next_combination(set: &mut [usize], n: usize) -> bool {
    let k = set.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if set[i] < n - k + i {
            set[i] += 1;
            for j in i + 1..k {
                set[j] = set[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Largest order for the gain-maximizing greedy; larger inputs use the
/// incremental heuristic.
const FULL_GREEDY_ORDER: usize = 64;

fn greedy<A: Adjacency + ?Sized>(g: &A) -> ZeroForcing {
    let n = g.order();
    let mut set = if n <= FULL_GREEDY_ORDER {
        gain_greedy(g)
    } else {
        incremental_greedy(g)
    };
    set.sort_unstable();
    ZeroForcing {
        z: set.len(),
        witness: record_for(g, set),
        exact: false,
    }
}

/// Repeatedly adds the white vertex whose addition blues the most vertices.
fn gain_greedy<A: Adjacency + ?Sized>(g: &A) -> Vec<usize> {
    let n = g.order();
    let mut set = Vec::new();
    let mut state = closure(g, &set);
    while state.blue_count() < n {
        let best = (0..n)
            .filter(|&v| !state.blue[v])
            .max_by_key(|&v| {
                let mut trial = set.clone();
                trial.push(v);
                (closure(g, &trial).blue_count(), std::cmp::Reverse(v))
            })
            .expect("some vertex is white");
        set.push(best);
        state = closure(g, &set);
    }
    set
}

/// Near-linear heuristic: unblock the blue vertex closest to forcing by
/// coloring one of its white out-neighbors; when no blue vertex has white
/// out-neighbors, start from a white vertex of least out-degree.
fn incremental_greedy<A: Adjacency + ?Sized>(g: &A) -> Vec<usize> {
    let n = g.order();
    let mut f = Forcing::new(g, true);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (g.out_neighbors(v).len(), v));
    let mut next_start = 0;
    let mut set = Vec::new();
    let mut blue = 0;
    while blue < n {
        let stuck = f.stuck.as_ref().and_then(|s| s.first().copied());
        let v = match stuck {
            Some((_, u)) => *g
                .out_neighbors(u)
                .iter()
                .filter(|&&w| !f.blue[w])
                .min()
                .expect("white neighbor"),
            None => {
                while f.blue[by_degree[next_start]] {
                    next_start += 1;
                }
                by_degree[next_start]
            }
        };
        set.push(v);
        f.color(v);
        f.run();
        blue = set.len() + f.forces.len();
    }
    set
}

/// `n - Z(g)`.
pub fn mz<A: Adjacency + ?Sized>(g: &A) -> usize {
    g.order() - zero_forcing_number(g).z
}

/// Replays a record, checking each force against the rule.
pub fn replay<A: Adjacency + ?Sized>(g: &A, record: &ForceRecord) -> Result<()> {
    let n = g.order();
    let mut blue = vec![false; n];
    for &v in &record.initial_set {
        if v >= n || blue[v] {
            return Err(Error::Certificate(format!("bad initial vertex {v}")));
        }
        blue[v] = true;
    }
    for (t, &(a, b)) in record.forces.iter().enumerate() {
        if a >= n || b >= n || !blue[a] {
            return Err(Error::Certificate(format!("force {t}: {a} is not blue")));
        }
        if unique_white(g, &blue, a) != Some(b) {
            return Err(Error::Certificate(format!(
                "force {t}: {b} is not the unique white neighbor of {a}"
            )));
        }
        blue[b] = true;
    }
    if blue.iter().any(|&b| !b) {
        return Err(Error::Certificate(
            "record does not color every vertex".into(),
        ));
    }
    Ok(())
}

/// Rows `a_1..a_k` by columns `b_1..b_k` of the generalized Laplacian.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateMinor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<Entry>>,
    /// Product of the diagonal, i.e. `(-1)^k`.
    pub determinant: i64,
}

/// Builds the submatrix on forcers by forced vertices in chronological order
/// and checks that it is lower triangular with `-1` on the diagonal. Entries
/// below the diagonal may be diagonal variables of the Laplacian; they do not
/// affect the determinant.
pub fn certificate_minor<A: Adjacency + ?Sized>(
    g: &A,
    record: &ForceRecord,
) -> Result<CertificateMinor> {
    replay(g, record)?;
    let entry = |a: usize, b: usize| {
        if a == b {
            Entry::Var(a)
        } else {
            Entry::Const(-g.multiplicity(a, b))
        }
    };
    let rows: Vec<usize> = record.forces.iter().map(|&(a, _)| a).collect();
    let cols: Vec<usize> = record.forces.iter().map(|&(_, b)| b).collect();
    let k = rows.len();
    let entries: Vec<Vec<Entry>> = rows
        .iter()
        .map(|&a| cols.iter().map(|&b| entry(a, b)).collect())
        .collect();
    for i in 0..k {
        if entries[i][i] != Entry::Const(-1) {
            return Err(Error::Certificate(format!(
                "diagonal entry {i} is {} instead of -1",
                entries[i][i]
            )));
        }
        for j in i + 1..k {
            if entries[i][j] != Entry::Const(0) {
                return Err(Error::Certificate(format!(
                    "entry ({i}, {j}) above the diagonal is {}",
                    entries[i][j]
                )));
            }
        }
    }
    Ok(CertificateMinor {
        rows,
        cols,
        entries,
        determinant: if k.is_multiple_of(2) { 1 } else { -1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bull, complete, cycle, octahedron, path};
    use crate::graph::{Digraph, Graph};

    #[test]
    fn bull_closure_from_pendants() {
        let g = bull();
        let state = closure(&g, &[3, 4]);
        assert_eq!(state.blue_count(), 5);
        assert_eq!(state.forces, vec![(3, 0), (4, 1), (0, 2)]);
        // the figure's list 4 -> 1, 5 -> 2, 2 -> 3 is another valid order
        let figure = ForceRecord {
            initial_set: vec![3, 4],
            forces: vec![(3, 0), (4, 1), (1, 2)],
        };
        assert!(replay(&g, &figure).is_ok());
        assert!(is_zero_forcing_set(&g, &[3, 4]));
    }

    #[test]
    fn trivial_closures() {
        let k3 = complete(3);
        assert_eq!(closure(&k3, &[0]).blue_vertices(), vec![0]);
        let full = closure(&k3, &[0, 1, 2]);
        assert!(full.forces.is_empty());
        assert!(is_zero_forcing_set(&path(6), &[0]));
        assert!(!is_zero_forcing_set(&complete(4), &[2]));
    }

    #[test]
    fn known_zero_forcing_numbers() {
        assert_eq!(zero_forcing_number(&bull()).z, 2);
        assert_eq!(mz(&bull()), 3);
        assert_eq!(zero_forcing_number(&octahedron()).z, 4);
        assert_eq!(zero_forcing_number(&cycle(7)).z, 2);
        for n in 3..=10 {
            assert_eq!(zero_forcing_number(&path(n)).z, 1);
            assert_eq!(zero_forcing_number(&cycle(n)).z, 2);
            assert_eq!(zero_forcing_number(&complete(n)).z, n - 1);
        }
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let zf = zero_forcing_number(&path(5));
        assert_eq!(zf.witness.initial_set, vec![0]);
        assert!(zf.exact);
    }

    #[test]
    fn digraph_rule_uses_out_neighbors_only() {
        // 0 -> 1 <- 2: blue 0 forces 1; 2 is never forced
        let d = Digraph::from_arcs(3, &[(0, 1), (2, 1)]).unwrap();
        assert_eq!(closure(&d, &[0]).blue_vertices(), vec![0, 1]);
        assert_eq!(zero_forcing_number(&d).z, 2);
    }

    #[test]
    fn bull_certificate_matches_printed_minor() {
        let g = bull();
        let record = ForceRecord {
            initial_set: vec![3, 4],
            forces: vec![(3, 0), (4, 1), (1, 2)],
        };
        let c = certificate_minor(&g, &record).unwrap();
        assert_eq!(c.rows, vec![3, 4, 1]);
        assert_eq!(c.cols, vec![0, 1, 2]);
        use Entry::*;
        assert_eq!(
            c.entries,
            vec![
                vec![Const(-1), Const(0), Const(0)],
                vec![Const(0), Const(-1), Const(0)],
                vec![Const(-1), Var(1), Const(-1)],
            ]
        );
        assert_eq!(c.determinant, -1);
    }

    #[test]
    fn k2_certificate() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let record = ForceRecord {
            initial_set: vec![0],
            forces: vec![(0, 1)],
        };
        let c = certificate_minor(&g, &record).unwrap();
        assert_eq!(c.entries, vec![vec![Entry::Const(-1)]]);
        assert_eq!(c.determinant, -1);
    }

    #[test]
    fn rejects_bad_records() {
        let g = path(3);
        let bad = ForceRecord {
            initial_set: vec![1],
            forces: vec![(1, 0), (1, 2)],
        };
        assert!(matches!(
            certificate_minor(&g, &bad),
            Err(Error::Certificate(_))
        ));
        let incomplete = ForceRecord {
            initial_set: vec![0],
            forces: vec![(0, 1)],
        };
        assert!(replay(&g, &incomplete).is_err());
    }

    #[test]
    fn greedy_tier_is_flagged() {
        let zf = zero_forcing_number_with_cap(&path(20), 12);
        assert!(!zf.exact);
        assert!(zf.z >= 1);
        assert!(replay(&path(20), &zf.witness).is_ok());
    }

    /// The color change rule applied literally: rescan for the smallest
    /// legal forcer after every force.
    fn rescanning_closure<A: Adjacency + ?Sized>(g: &A, b: &[usize]) -> ColorState {
        let mut blue = vec![false; g.order()];
        for &v in b {
            blue[v] = true;
        }
        let mut forces = Vec::new();
        while let Some(&(x, y)) = legal_forces(g, &blue).first() {
            blue[y] = true;
            forces.push((x, y));
        }
        ColorState { blue, forces }
    }

    #[test]
    fn closure_matches_rescanning_rule() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        for _ in 0..300 {
            let n = rng.gen_range(1..=14);
            let seeds: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let g = crate::generators::random_connected_graph(n, rng.gen_range(0.1..0.6), &mut rng);
            assert_eq!(closure(&g, &seeds), rescanning_closure(&g, &seeds));
            let d = crate::generators::random_digraph(n, 0.3, &mut rng);
            assert_eq!(closure(&d, &seeds), rescanning_closure(&d, &seeds));
        }
    }

    #[test]
    fn large_orders_get_valid_forcing_sets() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(10);
        let p = path(50_000);
        let zf = zero_forcing_number(&p);
        assert_eq!((zf.z, zf.exact), (1, false));
        let t = crate::generators::random_tree(20_000, &mut rng);
        let zf = zero_forcing_number(&t);
        assert!(is_zero_forcing_set(&t, &zf.witness.initial_set));
        let c = cycle(200);
        assert_eq!(zero_forcing_number(&c).z, 2);
        let d = crate::generators::random_digraph(300, 0.02, &mut rng);
        let zf = zero_forcing_number(&d);
        assert!(replay(&d, &zf.witness).is_ok());
        assert!(is_zero_forcing_set(&d, &zf.witness.initial_set));
    }
}
