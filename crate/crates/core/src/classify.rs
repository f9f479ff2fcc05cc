//! Characterizations of co-rank at most one: complete graphs among graphs,
//! and the Λ digraphs (equivalently, digraphs avoiding seventeen induced
//! patterns) among digraphs.

use serde::{Deserialize, Serialize};

use crate::critical::{gamma, SearchConfig};
use crate::error::{Error, Result};
use crate::generators::{forbidden_family, lambda_digraph, path};
use crate::graph::{Adjacency, Digraph, Graph};
use crate::induced::{contains_induced, first_induced};
use crate::laplacian::SymbolicMatrix;
use crate::linalg::rank_i64;
use crate::minrank::{mr_small, EXACT_MR_ORDER};
use crate::poly::DomainTag;
use crate::zero_forcing::zero_forcing_number;

/// One condition of an equivalence with its evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub conditions: Vec<Condition>,
    /// All conditions have the same truth value.
    pub agree: bool,
}

impl EquivalenceReport {
    fn new(conditions: Vec<Condition>) -> Self {
        let agree = conditions.windows(2).all(|w| w[0].holds == w[1].holds);
        EquivalenceReport { conditions, agree }
    }

    pub fn holds(&self, name: &str) -> Option<bool> {
        self.conditions
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.holds)
    }

    /// The common truth value when the conditions agree.
    pub fn verdict(&self) -> Option<bool> {
        self.agree
            .then(|| self.conditions.first().is_none_or(|c| c.holds))
    }
}

fn condition(name: &str, holds: bool, witness: impl Into<String>) -> Condition {
    Condition {
        name: name.into(),
        holds,
        witness: witness.into(),
    }
}

/// `γ ≤ 1` over one domain, with the deciding evidence.
fn corank_at_most_one<A: Adjacency + ?Sized>(
    g: &A,
    domain: DomainTag,
    cfg: &SearchConfig,
) -> Result<(bool, String)> {
    let r = gamma(g, domain, cfg)?;
    match r.value {
        Some(v) => {
            let why = r.decisions.get(1).map_or_else(
                || "order at most 1".to_string(),
                |d| format!("{:?}", d.evidence),
            );
            Ok((v <= 1, format!("gamma_{domain} = {v}; index 2: {why}")))
        }
        None if r.lower >= 2 => Ok((false, format!("gamma_{domain} >= {}", r.lower))),
        None if r.upper <= 1 => Ok((true, format!("gamma_{domain} <= {}", r.upper))),
        None => Err(Error::Budget(format!(
            "gamma_{domain} undecided in [{}, {}]",
            r.lower, r.upper
        ))),
    }
}

/// The five equivalent conditions for a connected graph: complete,
/// `P3`-free, `mz ≤ 1`, `γ ≤ 1` (over `Q` and `Z`), `mr ≤ 1`.
pub fn classify_rank1_graph(g: &Graph, cfg: &SearchConfig) -> Result<EquivalenceReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let complete = condition(
        "complete",
        g.is_complete(),
        format!(
            "{} of {} edges",
            g.edge_count(),
            n * n.saturating_sub(1) / 2
        ),
    );
    let p3 = contains_induced(g, &path(3));
    let p3_free = condition(
        "P3-free",
        p3.is_none(),
        p3.map_or_else(
            || "no induced P3".to_string(),
            |m| format!("induced P3 on {m:?}"),
        ),
    );
    let zf = zero_forcing_number(g);
    let mz = n - zf.z;
    let mz_cond = condition(
        "mz <= 1",
        mz <= 1,
        format!("mz = {mz}, forcing set {:?}", zf.witness.initial_set),
    );
    let (gq, wq) = corank_at_most_one(g, DomainTag::Rationals, cfg)?;
    let (gz, wz) = corank_at_most_one(g, DomainTag::Integers, cfg)?;
    let gamma_cond = condition("gamma <= 1", gq && gz, format!("{wq}; {wz}"));
    // L(G, -1) = -J exactly when G is complete
    let l = SymbolicMatrix::checked(g)?.evaluate(&vec![-1; n]);
    let rank = rank_i64(&l).rank;
    let mr = if rank <= 1 {
        condition("mr <= 1", true, format!("rank L(G, -1) = {rank}"))
    } else if n <= EXACT_MR_ORDER {
        let m = mr_small(g, cfg);
        condition("mr <= 1", m.lower <= 1, format!("mr = {}", m.lower))
    } else {
        condition("mr <= 1", mz <= 1, format!("mr >= mz = {mz}"))
    };
    Ok(EquivalenceReport::new(vec![
        complete, p3_free, mz_cond, gamma_cond, mr,
    ]))
}

/// Outcome of checking `mr ≤ γ_Q` for graphs of minimum rank at most two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mr2Check {
    NotApplicable { mr: usize },
    Holds { mr: usize, gamma_q: usize },
    Violated { mr: usize, gamma_q: usize },
}

pub fn check_mr2_corollary(g: &Graph, cfg: &SearchConfig) -> Result<Mr2Check> {
    if g.n() > EXACT_MR_ORDER {
        return Err(Error::Range {
            what: "order for exact minimum rank",
            value: g.n(),
            range: "0..=7",
        });
    }
    let mr = mr_small(g, cfg).lower;
    if mr > 2 {
        return Ok(Mr2Check::NotApplicable { mr });
    }
    let r = gamma(g, DomainTag::Rationals, cfg)?;
    // a lower bound already at or above mr settles it
    if mr <= r.lower {
        return Ok(Mr2Check::Holds {
            mr,
            gamma_q: r.value.unwrap_or(r.lower),
        });
    }
    match r.value {
        Some(v) => Ok(Mr2Check::Violated { mr, gamma_q: v }),
        None => Err(Error::Budget(format!(
            "gamma_Q undecided in [{}, {}]",
            r.lower, r.upper
        ))),
    }
}

/// A Λ shape `(n1, n2, n3)` with the parts `T`, `K`, `T'` as vertex lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaPartition {
    pub sizes: (usize, usize, usize),
    pub t: Vec<usize>,
    pub k: Vec<usize>,
    pub t_prime: Vec<usize>,
}

/// The lexicographically least `(n1, n2, n3)` with `d ≅ Λ_{n1,n2,n3}`, and
/// the parts under one isomorphism.
///
/// A digraph whose arcs are `R × C` off the diagonal is determined up to
/// isomorphism by the sizes of `R \ C`, `R ∩ C`, `C \ R` and the rest, so
/// the test compares these four sizes with those of each candidate shape.
pub fn is_lambda(d: &Digraph) -> Option<LambdaPartition> {
    let n = d.n();
    let (rows, cols) = rank_one_pattern(d)?;
    let groups = |rows: &[usize], cols: &[usize], n: usize| -> [Vec<usize>; 4] {
        let mut g: [Vec<usize>; 4] = Default::default();
        for v in 0..n {
            let k = match (rows.contains(&v), cols.contains(&v)) {
                (true, false) => 0,
                (true, true) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            g[k].push(v);
        }
        g
    };
    let ours = groups(&rows, &cols, n);
    for n1 in 0..=n {
        for n2 in 0..=n - n1 {
            let n3 = n - n1 - n2;
            let lam = lambda_digraph(n1, n2, n3);
            let (lr, lc) = rank_one_pattern(&lam).expect("Λ digraphs have rank-one patterns");
            let theirs = groups(&lr, &lc, n);
            if (0..4).any(|k| theirs[k].len() != ours[k].len()) {
                continue;
            }
            // matching groups in increasing order is an isomorphism Λ → d
            let mut map = vec![0; n];
            for k in 0..4 {
                for (&a, &b) in theirs[k].iter().zip(&ours[k]) {
                    map[a] = b;
                }
            }
            let part = |range: std::ops::Range<usize>| {
                let mut v: Vec<usize> = range.map(|a| map[a]).collect();
                v.sort_unstable();
                v
            };
            return Some(LambdaPartition {
                sizes: (n1, n2, n3),
                t: part(0..n1),
                k: part(n1..n1 + n2),
                t_prime: part(n1 + n2..n),
            });
        }
    }
    None
}

/// Row and column supports `(R, C)` with arcs exactly `R × C` off the
/// diagonal, when they exist: then `1_R 1_Cᵀ` is a rank-one matrix with the
/// arc pattern (the diagonal is free).
pub fn rank_one_pattern(d: &Digraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = d.n();
    let rows: Vec<usize> = (0..n).filter(|&v| !d.out_neighbors(v).is_empty()).collect();
    let cols: Vec<usize> = (0..n).filter(|&v| !d.in_neighbors(v).is_empty()).collect();
    let expected: usize = rows
        .iter()
        .map(|&r| cols.iter().filter(|&&c| c != r).count())
        .sum();
    let all_present = rows
        .iter()
        .all(|&r| cols.iter().all(|&c| c == r || d.has_arc(r, c)));
    (all_present && expected == d.arc_count()).then_some((rows, cols))
}

/// `1_R 1_Cᵀ` as an integer matrix.
pub fn rank_one_matrix(n: usize, rows: &[usize], cols: &[usize]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for &r in rows {
        for &c in cols {
            m[r][c] = 1;
        }
    }
    m
}

/// The block matrix `[[O, J, J], [O, J, J], [O, O, O]]` in the `T, K, T'`
/// order of a Λ partition, placed back on the original labels.
pub fn lambda_block_matrix(n: usize, p: &LambdaPartition) -> Vec<Vec<i64>> {
    let rows: Vec<usize> = p.t.iter().chain(&p.k).copied().collect();
    let cols: Vec<usize> = p.k.iter().chain(&p.t_prime).copied().collect();
    rank_one_matrix(n, &rows, &cols)
}

/// Off-diagonal nonzero pattern equals the arc set.
pub fn pattern_matches(d: &Digraph, m: &[Vec<i64>]) -> bool {
    let n = d.n();
    (0..n).all(|u| (0..n).all(|v| u == v || (m[u][v] != 0) == d.has_arc(u, v)))
}

/// The five conditions for a digraph: no induced member of the forbidden
/// family, isomorphic to a Λ digraph, `mr ≤ 1`, `mz ≤ 1`, `γ ≤ 1` over `Z`
/// and `Q`.
pub fn classify_digraph1(d: &Digraph, cfg: &SearchConfig) -> Result<EquivalenceReport> {
    let family = forbidden_family();
    let hit = first_induced(d, &family);
    let free = condition(
        "forbidden-free",
        hit.is_none(),
        hit.map_or_else(
            || "no forbidden pattern".to_string(),
            |(name, m)| format!("{name} on {m:?}"),
        ),
    );
    let lambda = is_lambda(d);
    let lambda_cond = match &lambda {
        Some(p) => {
            let m = lambda_block_matrix(d.n(), p);
            let ok = pattern_matches(d, &m) && rank_i64(&m).rank <= 1;
            if !ok {
                return Err(Error::IdentityViolation(format!(
                    "block matrix of partition {:?} does not realize the digraph",
                    p.sizes
                )));
            }
            condition(
                "lambda",
                true,
                format!("parts T {:?}, K {:?}, T' {:?}", p.t, p.k, p.t_prime),
            )
        }
        None => condition("lambda", false, "no isomorphic Λ shape"),
    };
    let mr = match rank_one_pattern(d) {
        Some((rows, cols)) => {
            let m = rank_one_matrix(d.n(), &rows, &cols);
            debug_assert!(pattern_matches(d, &m));
            condition(
                "mr <= 1",
                true,
                format!("1_R 1_C^T with R {rows:?}, C {cols:?}"),
            )
        }
        None => condition("mr <= 1", false, "arcs are not R x C off the diagonal"),
    };
    let zf = zero_forcing_number(d);
    let mz = d.n() - zf.z;
    let mz_cond = condition(
        "mz <= 1",
        mz <= 1,
        format!("mz = {mz}, forcing set {:?}", zf.witness.initial_set),
    );
    let (gq, wq) = corank_at_most_one(d, DomainTag::Rationals, cfg)?;
    let (gz, wz) = corank_at_most_one(d, DomainTag::Integers, cfg)?;
    if gq != gz {
        return Err(Error::IdentityViolation(format!(
            "co-rank at most one differs: {wq}; {wz}"
        )));
    }
    let gamma_cond = condition("gamma <= 1", gq, format!("{wq}; {wz}"));
    Ok(EquivalenceReport::new(vec![
        free,
        lambda_cond,
        mr,
        mz_cond,
        gamma_cond,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bull, complete, cycle, octahedron};

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn complete_graph_satisfies_everything() {
        let r = classify_rank1_graph(&complete(5), &cfg()).unwrap();
        assert!(r.agree);
        assert_eq!(r.verdict(), Some(true));
    }

    #[test]
    fn path_and_bull_fail_everything() {
        for g in [path(3), bull()] {
            let r = classify_rank1_graph(&g, &cfg()).unwrap();
            assert_eq!(r.verdict(), Some(false), "{r:?}");
        }
    }

    #[test]
    fn disconnected_graphs_are_rejected() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            classify_rank1_graph(&g, &cfg()),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn mr2_corollary_cases() {
        assert_eq!(
            check_mr2_corollary(&octahedron(), &cfg()).unwrap(),
            Mr2Check::Holds { mr: 2, gamma_q: 3 }
        );
        assert!(matches!(
            check_mr2_corollary(&complete(4), &cfg()).unwrap(),
            Mr2Check::Holds { mr: 1, .. }
        ));
        assert_eq!(
            check_mr2_corollary(&cycle(5), &cfg()).unwrap(),
            Mr2Check::NotApplicable { mr: 3 }
        );
    }

    #[test]
    fn lambda_recognition() {
        let p = is_lambda(&lambda_digraph(2, 1, 2)).unwrap();
        assert_eq!(p.sizes, (2, 1, 2));
        let family = forbidden_family();
        let f47 = &family.iter().find(|(n, _)| *n == "F4,7").unwrap().1;
        assert!(is_lambda(f47).is_none());
        assert_eq!(is_lambda(&Digraph::new(1)).unwrap().sizes, (0, 0, 1));
        // the complete digraph is Λ with only the middle part
        let k3 = complete(3).to_digraph();
        assert_eq!(is_lambda(&k3).unwrap().sizes, (0, 3, 0));
        // one source into m sinks is both Λ(1,0,m) and Λ(0,1,m)
        assert_eq!(
            is_lambda(&lambda_digraph(1, 0, 3)).unwrap().sizes,
            (0, 1, 3)
        );
        // recognition agrees with isomorphism after relabeling
        let d = lambda_digraph(2, 2, 1).relabel(&[4, 0, 3, 1, 2]);
        let p = is_lambda(&d).unwrap();
        assert_eq!(p.sizes, (2, 2, 1));
        assert!(crate::canon::are_isomorphic_digraphs(
            &d,
            &lambda_digraph(2, 2, 1)
        ));
        assert!(pattern_matches(&d, &lambda_block_matrix(5, &p)));
    }

    #[test]
    fn digraph_examples() {
        let r = classify_digraph1(&lambda_digraph(1, 2, 1), &cfg()).unwrap();
        assert_eq!(r.verdict(), Some(true), "{r:?}");
        let family = forbidden_family();
        let r = classify_digraph1(&family[0].1, &cfg()).unwrap();
        assert_eq!(r.verdict(), Some(false), "{r:?}");
        let r = classify_digraph1(&complete(3).to_digraph(), &cfg()).unwrap();
        assert_eq!(r.verdict(), Some(true), "{r:?}");
    }

    #[test]
    fn block_matrix_realizes_lambda() {
        for (a, b, c) in [(1, 1, 1), (2, 3, 1), (0, 2, 2), (3, 0, 2)] {
            let d = lambda_digraph(a, b, c);
            let p = is_lambda(&d).unwrap();
            let m = lambda_block_matrix(d.n(), &p);
            assert!(pattern_matches(&d, &m));
            assert_eq!(rank_i64(&m).rank, 1);
        }
    }
}
