use std::collections::HashSet;

use kgraph::constructions::{pullback, MonoidMap};
use kgraph::dynamics::{
    aperiodicity, aperiodicity_check, cofinality_check, condition_l, eval_path, is_period, path_pullback,
    pure_infiniteness_hypothesis, same_path, PathDescriptor, Status, Witness,
};
use kgraph::{fixtures, Degree, EdgeId, KGraph, Skeleton, SquareSet, VertexId};
use proptest::prelude::*;

fn one_graph(n: usize, edges: &[(usize, usize)]) -> KGraph {
    let mut sk = Skeleton::new(1).unwrap();
    for v in 0..n {
        sk.add_vertex(&format!("v{v}")).unwrap();
    }
    for (i, &(r, s)) in edges.iter().enumerate() {
        sk.add_edge_ids(0, &format!("e{i}"), VertexId(r as u32), VertexId(s as u32)).unwrap();
    }
    KGraph::validate(sk, SquareSet::new()).unwrap()
}

fn reachable(g: &KGraph, v: VertexId) -> HashSet<VertexId> {
    let mut seen = HashSet::from([v]);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &e in g.edges_into(u, 0) {
            if seen.insert(g.edge(e).source) {
                stack.push(g.edge(e).source);
            }
        }
    }
    seen
}

/// Counts closed walks at `w` of length at most `limit` that do not pass `w` in between.
fn first_returns(g: &KGraph, w: VertexId, at: VertexId, left: usize, walk: &mut Vec<EdgeId>, found: &mut usize) {
    if left == 0 || *found >= 2 {
        return;
    }
    for &e in g.edges_into(at, 0) {
        let next = g.edge(e).source;
        walk.push(e);
        if next == w {
            *found += 1;
        } else {
            first_returns(g, w, next, left - 1, walk, found);
        }
        walk.pop();
    }
}

fn emits_aperiodic_path(g: &KGraph, v: VertexId) -> bool {
    reachable(g, v).into_iter().any(|w| {
        let mut found = 0;
        first_returns(g, w, w, 2 * g.vertex_count(), &mut Vec::new(), &mut found);
        found >= 2
    })
}

fn small_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=4).prop_flat_map(|n| {
        let extra = proptest::collection::vec((0..n, 0..n), 0..=3);
        let base = proptest::collection::vec(0..n, n);
        (Just(n), base, extra).prop_map(|(n, sources, extra)| {
            let mut edges: Vec<(usize, usize)> = sources.into_iter().enumerate().collect();
            edges.extend(extra);
            (n, edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_one_aperiodicity_matches_cycle_enumeration((n, edges) in small_graph()) {
        let g = one_graph(n, &edges);
        for v in g.vertices() {
            let verdict = aperiodicity_check(&g, v, 2, 4).unwrap();
            prop_assert_ne!(verdict.status, Status::Unknown);
            prop_assert_eq!(verdict.status == Status::Holds, emits_aperiodic_path(&g, v));
        }
        let whole = aperiodicity(&g, 2, 4).unwrap().status;
        prop_assert_eq!(whole, condition_l(&g).unwrap().status);
    }

    #[test]
    fn cofinality_matches_reachability_of_cycles((n, edges) in small_graph()) {
        let g = one_graph(n, &edges);
        let verdict = cofinality_check(&g).unwrap();
        let cofinal = g.vertices().all(|v| {
            let r = reachable(&g, v);
            g.vertices().filter(|&u| on_cycle(&g, u)).all(|u| r.contains(&u))
        });
        prop_assert_eq!(verdict.status == Status::Holds, cofinal);
        match (&verdict.status, &verdict.witness) {
            (Status::Holds, _) => {}
            (Status::Fails, Witness::Avoiding { vertex, path }) => {
                let r = reachable(&g, *vertex);
                let cycle = path.cycle();
                prop_assert!(!r.contains(&cycle.range()));
                prop_assert!(cycle.word().iter().all(|&e| !r.contains(&g.edge(e).source)));
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }
}

fn on_cycle(g: &KGraph, u: VertexId) -> bool {
    g.edges_into(u, 0).iter().any(|&e| reachable(g, g.edge(e).source).contains(&u))
}

#[test]
fn periods_of_product_paths() {
    let g = fixtures::flip();
    let cycle = g.parse_word("e.f'", None).unwrap();
    let x = PathDescriptor::periodic(&g, cycle.clone()).unwrap();
    let horizon = Degree::new(vec![4, 4]);
    assert_eq!(is_period(&g, &x, &[1, -1], &horizon).unwrap().status, Status::Holds);
    let y = PathDescriptor::new(g.parse_word("f", None).unwrap(), cycle).unwrap();
    let verdict = is_period(&g, &y, &[1, -1], &horizon).unwrap();
    assert_eq!(verdict.status, Status::Fails);
    let Witness::Rectangle { m, n, shifted, original } = verdict.witness else {
        panic!("expected a rectangle")
    };
    assert_ne!(shifted, original);
    assert_eq!(eval_path(&g, &y, &m, &n).unwrap(), original);
}

#[test]
fn two_loop_graphs_are_decided_exactly() {
    let g = fixtures::two_loops();
    let verdict = aperiodicity(&g, 3, 6).unwrap();
    assert_eq!(verdict.status, Status::Fails);
    let Witness::PerVertex(list) = verdict.witness else { panic!("per-vertex verdict") };
    assert!(list.iter().all(|(_, v)| matches!(v.witness, Witness::PeriodicTrap(_))));
}

#[test]
fn loop_with_exit_orientation_matters_for_cofinality() {
    for g in [fixtures::loop_with_exit(), fixtures::loop_with_exit_reversed()] {
        assert_eq!(cofinality_check(&g).unwrap().status, Status::Fails);
    }
    assert_eq!(cofinality_check(&fixtures::mixed()).unwrap().status, Status::Holds);
}

#[test]
fn pure_infiniteness_needs_loops() {
    for g in [fixtures::o2(), fixtures::single_loop(), fixtures::t(2), fixtures::twisted()] {
        let verdict = pure_infiniteness_hypothesis(&g).unwrap();
        assert_eq!(verdict.status, Status::Holds);
        let Witness::Loops(loops) = verdict.witness else { panic!("loops") };
        for (v, lambda, mu) in loops {
            assert_eq!(lambda.range(), v);
            assert_eq!(lambda.source(), mu.range());
            assert_eq!(mu.range(), mu.source());
            assert!(!mu.degree().is_zero());
        }
    }
}

#[test]
fn pulled_back_paths_agree_with_their_tables() {
    let base = fixtures::o2();
    let pb = pullback(&MonoidMap::sum(2), &base).unwrap();
    let x = PathDescriptor::new(base.parse_word("f", None).unwrap(), base.parse_word("e.f", None).unwrap()).unwrap();
    let pulled = path_pullback(&base, &pb, &x, &Degree::new(vec![2, 2])).unwrap();
    let y = pulled.descriptor.expect("the sum map has cofinal image");
    for (m, n, lambda) in &pulled.table {
        assert_eq!(&pb.project(&base, &eval_path(&pb.graph, &y, m, n).unwrap()).unwrap(), lambda);
    }
    let again = PathDescriptor::new(y.prefix().clone(), pb.graph.compose(y.cycle(), y.cycle()).unwrap()).unwrap();
    assert!(same_path(&pb.graph, &y, &again).unwrap());
}
