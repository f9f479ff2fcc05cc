//! Seeded engine checks shared by the acceptance and property targets.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use corank_core::critical::{gamma, ideal_trivial, minor_generators, SearchConfig};
use corank_core::formats::{parse_digraph6, parse_graph6, write_digraph6, write_graph6};
use corank_core::generators::{
    enumerate_connected_graphs, enumerate_digraphs, random_connected_graph, random_digraph,
    random_permutation,
};
use corank_core::laplacian::SymbolicMatrix;
use corank_core::poly::groebner::{divide, expand_combination, is_groebner, is_trivial_over_field};
use corank_core::poly::integer::verify_unit_combination;
use corank_core::poly::polynomial::RationalEmbedding;
use corank_core::poly::{
    buchberger, is_trivial_over_z, Budget, DomainTag, Field, Integers, MonomialOrder, PolyRing,
    PrimeField, Rationals, ZCertificate,
};
use corank_core::zero_forcing::{closure, legal_forces};
use corank_core::{Adjacency, Digraph, Graph};

/// Failures found by one family of checks, with the number of instances.
pub struct Tally {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Random polynomial text in `nvars` variables with small coefficients.
pub fn random_poly_text<R: Rng>(rng: &mut R, nvars: usize, terms: usize, max_exp: u32) -> String {
    let mut parts = Vec::new();
    for _ in 0..terms {
        let c: i64 = rng.gen_range(-4..=4);
        if c == 0 {
            continue;
        }
        let mut t = c.to_string();
        for v in 0..nvars {
            let e = rng.gen_range(0..=max_exp);
            if e > 0 {
                t.push_str(&format!("*x{v}^{e}"));
            }
        }
        parts.push(t);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn field_checks<F: Field + RationalEmbedding>(
    ring: &PolyRing<F>,
    rng: &mut StdRng,
    rounds: usize,
    bases: &mut Tally,
    cofactors: &mut Tally,
) {
    for _ in 0..rounds {
        let k = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..k)
            .map(|_| {
                let terms = rng.gen_range(1..=3);
                let text = random_poly_text(rng, ring.nvars(), terms, 2);
                ring.parse(&text).expect("generated text parses")
            })
            .collect();
        let Ok(basis) = buchberger(ring, &gens, Budget::default(), true) else {
            continue;
        };
        bases.check(is_groebner(ring, &basis.generators), || {
            format!("not a basis: {gens:?}")
        });
        if let Some(c) = &basis.cofactors {
            for (g, h) in basis.generators.iter().zip(c) {
                cofactors.check(expand_combination(ring, h, &gens) == *g, || {
                    format!("cofactors do not rebuild {}", ring.render(g))
                });
            }
        }
        let f = ring
            .parse(&random_poly_text(rng, ring.nvars(), 4, 3))
            .expect("generated text parses");
        let d = divide(ring, &f, &gens);
        let rebuilt = ring.add(&expand_combination(ring, &d.quotients, &gens), &d.remainder);
        cofactors.check(rebuilt == f, || {
            format!("division identity fails for {}", ring.render(&f))
        });
    }
}

/// Every basis passes the S-pair test and every cofactor identity expands
/// exactly: random ideals over `Q` and `F_p`, and the critical ideals of
/// all connected graphs on at most four vertices.
pub fn algebra_checks(seed: u64) -> (Tally, Tally) {
    let mut bases = Tally::new("S-pairs of every output basis reduce to zero");
    let mut cofactors = Tally::new("cofactor and division identities are exact");
    let mut rng = StdRng::seed_from_u64(seed);
    for order in [MonomialOrder::DegRevLex, MonomialOrder::Lex] {
        let q = PolyRing::new(Rationals, 3, order).expect("ring");
        field_checks(&q, &mut rng, 40, &mut bases, &mut cofactors);
        let f = PolyRing::new(PrimeField::new(7).expect("prime"), 3, order).expect("ring");
        field_checks(&f, &mut rng, 40, &mut bases, &mut cofactors);
    }
    let cfg = SearchConfig::default();
    for g in enumerate_connected_graphs(4).expect("enumeration") {
        let m = SymbolicMatrix::of(&g);
        let zring = PolyRing::new(Integers, g.n(), cfg.order).expect("ring");
        let q = PolyRing::new(Rationals, g.n(), cfg.order).expect("ring");
        for i in 1..=g.n() {
            let minors = minor_generators(&m, i, cfg.order).expect("minors");
            let qg: Vec<_> = minors
                .generators
                .iter()
                .map(|p| {
                    zring.map_into(p, &q, |c| {
                        num_rational::BigRational::from_integer(c.clone())
                    })
                })
                .collect();
            let t = is_trivial_over_field(&q, &qg, cfg.budget, true).expect("small ideal");
            bases.check(is_groebner(&q, &t.basis.generators), || {
                format!("I{i} basis of {:?}", g.edges())
            });
            if let Some(h) = &t.cofactors_for_one {
                cofactors.check(expand_combination(&q, h, &qg) == q.one(), || {
                    format!("I{i} unit combination of {:?}", g.edges())
                });
            }
            let z = is_trivial_over_z(&zring, &minors.generators, cfg.budget).expect("small ideal");
            if let ZCertificate::Unit { cofactors: h, .. } = &z.certificate {
                cofactors.check(
                    verify_unit_combination(&zring, h, &minors.generators),
                    || format!("integer unit combination of I{i} for {:?}", g.edges()),
                );
            }
        }
    }
    (bases, cofactors)
}

/// Applies legal forces in a random order until none is left.
pub fn random_order_closure<A: Adjacency + ?Sized, R: Rng>(
    g: &A,
    initial: &[usize],
    rng: &mut R,
) -> Vec<bool> {
    let mut blue = vec![false; g.order()];
    for &v in initial {
        blue[v] = true;
    }
    loop {
        let forces = legal_forces(g, &blue);
        let Some(&(_, y)) = forces.choose(rng) else {
            break;
        };
        blue[y] = true;
    }
    blue
}

/// The final coloring does not depend on the order of the forces.
pub fn confluence_checks(seed: u64, orders: usize) -> Tally {
    let mut t = Tally::new("closure is independent of force order");
    let mut rng = StdRng::seed_from_u64(seed);
    for k in 0..orders {
        let n = rng.gen_range(1..=9);
        let initial: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        if k % 2 == 0 {
            let g = random_connected_graph(n, 0.35, &mut rng);
            let got = random_order_closure(&g, &initial, &mut rng);
            t.check(got == closure(&g, &initial).blue, || {
                format!("{:?} from {initial:?}", g.edges())
            });
        } else {
            let d = random_digraph(n, 0.3, &mut rng);
            let got = random_order_closure(&d, &initial, &mut rng);
            t.check(got == closure(&d, &initial).blue, || {
                format!("{:?} from {initial:?}", d.arcs())
            });
        }
    }
    t
}

/// Text encodings decode to the same (di)graph, including orders that need
/// the long size prefix.
pub fn round_trip_checks(seed: u64) -> Tally {
    let mut t = Tally::new("graph6 and digraph6 round-trip");
    let mut rng = StdRng::seed_from_u64(seed);
    let mut graphs: Vec<Graph> = enumerate_connected_graphs(6).expect("enumeration");
    graphs.extend((0..40).map(|_| {
        let n = rng.gen_range(1..=80);
        random_connected_graph(n, 0.1, &mut rng)
    }));
    graphs.push(Graph::new(0));
    for g in &graphs {
        let text = write_graph6(g).expect("encodable");
        t.check(parse_graph6(&text).as_ref() == Ok(g), || text.clone());
    }
    let mut digraphs: Vec<Digraph> = enumerate_digraphs(3).expect("enumeration");
    digraphs.extend((0..40).map(|_| {
        let n = rng.gen_range(1..=70);
        random_digraph(n, 0.05, &mut rng)
    }));
    for d in &digraphs {
        let text = write_digraph6(d).expect("encodable");
        t.check(parse_digraph6(&text).as_ref() == Ok(d), || text.clone());
    }
    t
}

/// Co-rank values and bounds are unchanged by relabeling.
pub fn relabeling_checks(seed: u64, relabelings: usize) -> Tally {
    let mut t = Tally::new("co-rank is invariant under relabeling");
    let mut rng = StdRng::seed_from_u64(seed);
    let cfg = SearchConfig::default();
    for _ in 0..relabelings {
        let n = rng.gen_range(1..=6);
        let g = random_connected_graph(n, 0.5, &mut rng);
        let h = g.relabel(&random_permutation(n, &mut rng));
        for domain in [DomainTag::Integers, DomainTag::Rationals] {
            let a = gamma(&g, domain, &cfg).expect("small graph");
            let b = gamma(&h, domain, &cfg).expect("small graph");
            t.check(a.value == b.value && a.value.is_some(), || {
                format!(
                    "{:?} gives {:?} and {:?} over {domain}",
                    g.edges(),
                    a.value,
                    b.value
                )
            });
        }
    }
    t
}

/// Independently decided indices respect `I_1 ⊇ I_2 ⊇ …`: once an index is
/// proper, every larger one is too.
pub fn nesting_checks(max_n: usize) -> Tally {
    let mut t = Tally::new("triviality decisions are monotone in the index");
    let cfg = SearchConfig::default();
    let mut instances: Vec<SymbolicMatrix> = enumerate_connected_graphs(max_n)
        .expect("enumeration")
        .iter()
        .map(SymbolicMatrix::of)
        .collect();
    instances.extend(
        enumerate_digraphs(3)
            .expect("enumeration")
            .iter()
            .map(SymbolicMatrix::of),
    );
    for m in &instances {
        for domain in [
            DomainTag::Integers,
            DomainTag::Rationals,
            DomainTag::PrimeField(2),
        ] {
            let decided: Vec<Option<bool>> = (1..=m.n())
                .map(|i| ideal_trivial(m, i, domain, &cfg).expect("decision").trivial)
                .collect();
            let known: Vec<(usize, bool)> = decided
                .iter()
                .enumerate()
                .filter_map(|(i, d)| d.map(|b| (i + 1, b)))
                .collect();
            let monotone = known.windows(2).all(|w| w[0].1 || !w[1].1);
            t.check(monotone, || {
                format!("{domain} decisions {decided:?} for\n{}", m.render())
            });
        }
    }
    t
}
