mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use corank_core::canon::{are_isomorphic_digraphs, canonical_graph};
use corank_core::classify::{is_lambda, lambda_block_matrix, pattern_matches};
use corank_core::critical::{gamma, SearchConfig};
use corank_core::formats::{parse_digraph6, parse_graph6, write_digraph6, write_graph6};
use corank_core::generators::{lambda_digraph, random_tree};
use corank_core::laplacian::SymbolicMatrix;
use corank_core::linalg::{determinant, rank_by_minors, rank_i64, to_big};
use corank_core::minrank::{
    delta_parameter, delta_parameter_brute, path_cover_number, path_cover_number_brute,
    two_matching_number_brute, two_matching_number_tree,
};
use corank_core::poly::groebner::{divide, expand_combination, is_groebner};
use corank_core::poly::{
    buchberger, Budget, DomainTag, MonomialOrder, PolyRing, PrimeField, Rationals,
};
use corank_core::zero_forcing::{closure, mz};
use corank_core::{Digraph, Graph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v).expect("in range");
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn digraph_strategy(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut d = Digraph::new(n);
            for u in 0..n {
                for v in 0..n {
                    if u != v && bits[u * n + v] {
                        d.add_arc(u, v).expect("in range");
                    }
                }
            }
            d
        })
    })
}

fn connected_graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    graph_strategy(max_n).prop_filter("connected", Graph::is_connected)
}

fn with_permutation(g: Graph) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    let n = g.n();
    (Just(g), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
}

fn poly_texts() -> impl Strategy<Value = (Vec<String>, String)> {
    (any::<u64>(), 1..=3usize).prop_map(|(seed, k)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let gens = (0..k)
            .map(|_| common::random_poly_text(&mut rng, 3, 3, 2))
            .collect();
        (gens, common::random_poly_text(&mut rng, 3, 4, 3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_round_trips(g in graph_strategy(70)) {
        let text = write_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn digraph6_round_trips(d in digraph_strategy(66)) {
        let text = write_digraph6(&d).unwrap();
        prop_assert_eq!(parse_digraph6(&text).unwrap(), d);
    }

    #[test]
    fn closure_ignores_force_order(g in graph_strategy(9), d in digraph_strategy(7), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let initial: Vec<usize> = (0..g.n()).filter(|v| seed >> (v % 64) & 1 == 1).collect();
        let first = closure(&g, &initial);
        prop_assert_eq!(&common::random_order_closure(&g, &initial, &mut rng), &first.blue);
        // closure is idempotent and only grows the blue set
        let again = closure(&g, &first.blue_vertices());
        prop_assert_eq!(&again.blue, &first.blue);
        prop_assert!(initial.iter().all(|&v| first.blue[v]));
        let seeds: Vec<usize> = (0..d.n()).filter(|v| seed >> (63 - v % 64) & 1 == 1).collect();
        prop_assert_eq!(common::random_order_closure(&d, &seeds, &mut rng), closure(&d, &seeds).blue);
    }

    #[test]
    fn divisions_rebuild_the_dividend((gens, f) in poly_texts()) {
        for order in [MonomialOrder::DegRevLex, MonomialOrder::Lex] {
            let q = PolyRing::new(Rationals, 3, order).unwrap();
            let gs: Vec<_> = gens.iter().map(|t| q.parse(t).unwrap()).collect();
            let f = q.parse(&f).unwrap();
            let d = divide(&q, &f, &gs);
            prop_assert_eq!(q.add(&expand_combination(&q, &d.quotients, &gs), &d.remainder), f);
        }
    }

    #[test]
    fn bases_pass_the_pair_test((gens, _) in poly_texts(), p in prop::sample::select(vec![2u64, 3, 7, 101])) {
        let q = PolyRing::new(Rationals, 3, MonomialOrder::DegRevLex).unwrap();
        let gs: Vec<_> = gens.iter().map(|t| q.parse(t).unwrap()).collect();
        if let Ok(b) = buchberger(&q, &gs, Budget::default(), true) {
            prop_assert!(is_groebner(&q, &b.generators));
            let c = b.cofactors.unwrap();
            for (g, h) in b.generators.iter().zip(&c) {
                prop_assert_eq!(&expand_combination(&q, h, &gs), g);
            }
        }
        let f = PolyRing::new(PrimeField::new(p).unwrap(), 3, MonomialOrder::Lex).unwrap();
        let gs: Vec<_> = gens.iter().map(|t| f.parse(t).unwrap()).collect();
        if let Ok(b) = buchberger(&f, &gs, Budget::default(), false) {
            prop_assert!(is_groebner(&f, &b.generators));
        }
    }

    #[test]
    fn rank_agrees_with_minor_oracle(rows in 1..=4usize, cols in 1..=4usize, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = StdRng::seed_from_u64(seed);
        let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        prop_assert_eq!(rank_i64(&m).rank, rank_by_minors(&m));
    }

    #[test]
    fn laplacian_at_degrees_is_singular(g in graph_strategy(8)) {
        let degrees: Vec<i64> = g.degrees().iter().map(|&d| d as i64).collect();
        let l = SymbolicMatrix::of(&g).evaluate(&degrees);
        prop_assert_eq!(determinant(&to_big(&l)), 0.into());
    }

    #[test]
    fn tree_tables_match_exhaustive_search(n in 1..=14usize, seed in any::<u64>()) {
        let t = random_tree(n, &mut StdRng::seed_from_u64(seed));
        let delta = delta_parameter(&t).unwrap();
        prop_assert_eq!(delta.delta, delta_parameter_brute(&t).unwrap().delta);
        // the witness deletion leaves a disjoint union of paths
        let kept: Vec<usize> = (0..n).filter(|v| !delta.deleted.contains(v)).collect();
        let rest = t.induced_subgraph(&kept);
        prop_assert!((0..rest.n()).all(|v| rest.degree(v) <= 2));
        prop_assert_eq!(two_matching_number_tree(&t).unwrap().size, two_matching_number_brute(&t).unwrap().size);
        if n <= 10 {
            prop_assert_eq!(path_cover_number(&t).unwrap().count, path_cover_number_brute(&t).unwrap());
        }
    }

    #[test]
    fn lambda_recognition_survives_relabeling(n1 in 0..=3usize, n2 in 0..=3usize, n3 in 0..=3usize, seed in any::<u64>()) {
        let n = n1 + n2 + n3;
        prop_assume!(n > 0);
        let lam = lambda_digraph(n1, n2, n3);
        let perm = corank_core::generators::random_permutation(n, &mut StdRng::seed_from_u64(seed));
        let d = lam.relabel(&perm);
        let a = is_lambda(&lam).unwrap();
        let b = is_lambda(&d).unwrap();
        prop_assert_eq!(a.sizes, b.sizes);
        let (s1, s2, s3) = b.sizes;
        prop_assert!(are_isomorphic_digraphs(&d, &lambda_digraph(s1, s2, s3)));
        let m = lambda_block_matrix(n, &b);
        prop_assert!(pattern_matches(&d, &m));
        prop_assert!(rank_i64(&m).rank <= 1);
        prop_assert!(mz(&d) <= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn corank_is_invariant_under_relabeling((g, perm) in connected_graph_strategy(6).prop_flat_map(with_permutation)) {
        let cfg = SearchConfig::default();
        let h = g.relabel(&perm);
        prop_assert_eq!(canonical_graph(&g).unwrap().encoding, canonical_graph(&h).unwrap().encoding);
        for domain in [DomainTag::Integers, DomainTag::Rationals] {
            prop_assert_eq!(gamma(&g, domain, &cfg).unwrap().value, gamma(&h, domain, &cfg).unwrap().value);
        }
    }

    #[test]
    fn corank_bounds_are_ordered(g in graph_strategy(6), d in digraph_strategy(4)) {
        let cfg = SearchConfig::default();
        let gz = gamma(&g, DomainTag::Integers, &cfg).unwrap();
        let gq = gamma(&g, DomainTag::Rationals, &cfg).unwrap();
        prop_assert!(mz(&g) <= gz.lower && gz.lower <= gz.upper);
        prop_assert!(gz.lower <= gq.upper);
        if let (Some(z), Some(q)) = (gz.value, gq.value) {
            prop_assert!(z <= q);
        }
        let f2 = gamma(&g, DomainTag::PrimeField(2), &cfg).unwrap();
        if let (Some(z), Some(p)) = (gz.value, f2.value) {
            prop_assert!(z <= p);
        }
        let dz = gamma(&d, DomainTag::Integers, &cfg).unwrap();
        prop_assert!(mz(&d) <= dz.lower && dz.lower <= dz.upper);
    }

    #[test]
    fn induced_subgraphs_have_smaller_corank(g in connected_graph_strategy(6), mask in any::<u8>()) {
        let cfg = SearchConfig::default();
        let keep: Vec<usize> = (0..g.n()).filter(|v| mask >> v & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let h = g.induced_subgraph(&keep);
        for domain in [DomainTag::Integers, DomainTag::Rationals] {
            let big = gamma(&g, domain, &cfg).unwrap();
            let small = gamma(&h, domain, &cfg).unwrap();
            prop_assert!(small.lower <= big.upper);
            if let (Some(a), Some(b)) = (small.value, big.value) {
                prop_assert!(a <= b);
            }
        }
    }
}
