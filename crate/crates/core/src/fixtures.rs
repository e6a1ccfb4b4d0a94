//! Small standard graphs used throughout the tests and by the command line.

use crate::constructions::{assemble_2graph, pullback, EdgePairing, MonoidMap};
use crate::graph::KGraph;
use crate::group::{Cocycle, GroupAction, GroupElem, GroupSpec, Permutation};
use crate::skeleton::{Skeleton, SquareSet};

fn one_graph(vertices: &[&str], edges: &[(&str, &str, &str)]) -> KGraph {
    let mut sk = Skeleton::new(1).expect("rank 1");
    for v in vertices {
        sk.add_vertex(v).expect("fixture vertex");
    }
    for (name, r, s) in edges {
        sk.add_edge(0, name, r, s).expect("fixture edge");
    }
    KGraph::validate(sk, SquareSet::new()).expect("fixture is a 1-graph")
}

/// One vertex, `n` loops named `e1 … en`.
pub fn bouquet(n: usize) -> KGraph {
    let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    let edges: Vec<(&str, &str, &str)> = names.iter().map(|x| (x.as_str(), "v", "v")).collect();
    one_graph(&["v"], &edges)
}

/// The 1-graph of one vertex `v` with two loops `e`, `f`.
pub fn o2() -> KGraph {
    one_graph(&["v"], &[("e", "v", "v"), ("f", "v", "v")])
}

pub fn single_loop() -> KGraph {
    one_graph(&["v"], &[("e", "v", "v")])
}

/// `u ⇄ v`: `x` has range `u` and source `v`, `y` the reverse.
pub fn two_cycle() -> KGraph {
    one_graph(&["u", "v"], &[("x", "u", "v"), ("y", "v", "u")])
}

/// Two disjoint copies of [`o2`]: loops `a1`, `a2` at `u` and `b1`, `b2` at `v`.
pub fn two_component() -> KGraph {
    one_graph(
        &["u", "v"],
        &[("a1", "u", "u"), ("a2", "u", "u"), ("b1", "v", "v"), ("b2", "v", "v")],
    )
}

/// Two disjoint single loops, `a` at `u` and `b` at `v`.
pub fn two_loops() -> KGraph {
    one_graph(&["u", "v"], &[("a", "u", "u"), ("b", "v", "v")])
}

/// A loop `a` at `u`, an edge `b` with range `u` and source `v`, a loop `c` at `v`.
pub fn loop_with_exit() -> KGraph {
    one_graph(&["u", "v"], &[("a", "u", "u"), ("b", "u", "v"), ("c", "v", "v")])
}

/// [`loop_with_exit`] with the connecting edge reversed.
pub fn loop_with_exit_reversed() -> KGraph {
    one_graph(&["u", "v"], &[("a", "u", "u"), ("b", "v", "u"), ("c", "v", "v")])
}

/// `u` with a loop `a` and an edge `b` from `v`, `v` with loops `c`, `d`
/// and an edge `g` from `u`: strongly connected with exits everywhere.
pub fn mixed() -> KGraph {
    one_graph(
        &["u", "v"],
        &[("a", "u", "u"), ("b", "u", "v"), ("c", "v", "v"), ("d", "v", "v"), ("g", "v", "u")],
    )
}

/// The k-graph `T_k`: one vertex, one edge `a1 … ak` per color.
pub fn t(k: usize) -> KGraph {
    let mut sk = Skeleton::new(k).expect("positive rank");
    sk.add_vertex("v").expect("vertex");
    let edges: Vec<_> = (0..k)
        .map(|c| sk.add_edge(c, &format!("a{}", c + 1), "v", "v").expect("edge"))
        .collect();
    let mut squares = SquareSet::new();
    for i in 0..k {
        for j in i + 1..k {
            squares.insert(edges[i], edges[j], edges[j], edges[i]);
        }
    }
    KGraph::build(sk, squares, None).expect("T_k is a k-graph")
}

/// `O₂ ∗_flip O₂`, edges `e, f` (color 1) and `e', f'` (color 2).
pub fn flip() -> KGraph {
    let a = o2();
    assemble_2graph(&a, &a, &EdgePairing::flip(&a)).expect("flip is a valid θ")
}

/// `O₂ ∗_ι O₂`, edges `e, f` (color 1) and `e', f'` (color 2).
pub fn iota() -> KGraph {
    let a = o2();
    assemble_2graph(&a, &a, &EdgePairing::identity(&a)).expect("ι is a valid θ")
}

/// A rank-2 graph on `u`, `v` whose squares interchange the two color-2
/// loops: color 1 is the 2-cycle `x`, `y`; color 2 has loops `a1`, `a2`
/// at `u` and `b1`, `b2` at `v`.
pub fn twisted() -> KGraph {
    let mut sk = Skeleton::new(2).expect("rank 2");
    sk.add_vertex("u").expect("vertex");
    sk.add_vertex("v").expect("vertex");
    let x = sk.add_edge(0, "x", "u", "v").expect("edge");
    let y = sk.add_edge(0, "y", "v", "u").expect("edge");
    let a1 = sk.add_edge(1, "a1", "u", "u").expect("edge");
    let a2 = sk.add_edge(1, "a2", "u", "u").expect("edge");
    let b1 = sk.add_edge(1, "b1", "v", "v").expect("edge");
    let b2 = sk.add_edge(1, "b2", "v", "v").expect("edge");
    let mut squares = SquareSet::new();
    squares.insert(x, b1, a2, x);
    squares.insert(x, b2, a1, x);
    squares.insert(y, a1, b1, y);
    squares.insert(y, a2, b2, y);
    KGraph::validate(sk, squares).expect("twisted fixture is a 2-graph")
}

/// `f*(O₂)` for `f(m₁, m₂) = m₁ + m₂`.
pub fn sum_pullback() -> KGraph {
    pullback(&MonoidMap::sum(2), &o2()).expect("pullback of O₂").graph
}

/// The window `{m ∈ ℕᵏ : m ≤ (w, …, w)}` of `Ω_k`. Vertex `m` is named
/// `[m1,…,mk]`; its color-`i` edge to `m + e_i` is named `e{i}[m]`.
/// Vertices with `m + 2·(1, …, 1)` still in the window are interior.
pub fn omega_window(k: usize, w: u32) -> KGraph {
    let mut sk = Skeleton::new(k).expect("positive rank");
    let points = crate::degree::Degree::diagonal(k, w).box_below();
    let name = |m: &crate::degree::Degree| {
        let parts: Vec<String> = m.entries().iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(","))
    };
    let ids: std::collections::HashMap<_, _> = points
        .iter()
        .map(|m| (m.clone(), sk.add_vertex(&name(m)).expect("vertex")))
        .collect();
    let mut edge_ids = std::collections::HashMap::new();
    for m in &points {
        for i in 0..k {
            let next = m + &crate::degree::Degree::unit(k, i);
            if let Some(&s) = ids.get(&next) {
                let id = sk
                    .add_edge_ids(i, &format!("e{}{}", i + 1, name(m)), ids[m], s)
                    .expect("edge");
                edge_ids.insert((m.clone(), i), id);
            }
        }
    }
    let mut squares = SquareSet::new();
    for m in &points {
        for i in 0..k {
            for j in i + 1..k {
                let mi = m + &crate::degree::Degree::unit(k, i);
                let mj = m + &crate::degree::Degree::unit(k, j);
                let parts = (
                    edge_ids.get(&(m.clone(), i)),
                    edge_ids.get(&(mi, j)),
                    edge_ids.get(&(m.clone(), j)),
                    edge_ids.get(&(mj, i)),
                );
                if let (Some(&a), Some(&b), Some(&b2), Some(&a2)) = parts {
                    squares.insert(a, b, b2, a2);
                }
            }
        }
    }
    let interior = points.iter().map(|m| m.entries().iter().all(|&x| x + 2 <= w)).collect();
    KGraph::build(sk, squares, Some(interior)).expect("Ω window")
}

/// The ℤ₂-valued cocycle on [`o2`] with `c(e) = 0`, `c(f) = 1`.
pub fn o2_parity(g: &KGraph) -> Cocycle {
    Cocycle::new(g, GroupSpec::cyclic(2), vec![GroupElem(vec![0]), GroupElem(vec![1])]).expect("functorial")
}

/// The ℤ₂-action on [`two_cycle`] exchanging `u` with `v` and `x` with `y`.
pub fn two_cycle_swap(g: &KGraph) -> GroupAction {
    let (u, v) = (g.vertex("u").expect("u"), g.vertex("v").expect("v"));
    let (x, y) = (g.edge_by_name("x").expect("x"), g.edge_by_name("y").expect("y"));
    let mut vertices = vec![u; 2];
    vertices[u.index()] = v;
    vertices[v.index()] = u;
    let mut edges = vec![x; 2];
    edges[x.index()] = y;
    edges[y.index()] = x;
    GroupAction::new(g, GroupSpec::cyclic(2), vec![Permutation { vertices, edges }]).expect("swap action")
}
