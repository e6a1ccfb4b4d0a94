//! Exhaustive isomorphism search between finite k-graphs.
//!
//! A degree-preserving functor between θ-presented graphs is determined by
//! its action on vertices and edges, and it is a functor exactly when it
//! carries squares to squares. The search enumerates color-preserving edge
//! bijections with backtracking, pruning on endpoint consistency and on
//! every square as soon as its four edges are assigned.

use std::fmt;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::skeleton::{EdgeId, VertexId};

/// A vertex map and an edge map from one graph to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Isomorphism),
    /// The search space was exhausted; `explored` counts search nodes.
    NoneExists { explored: u64 },
}

pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// Checks that the maps commute with colors, endpoints and squares.
pub fn check_functor(a: &KGraph, b: &KGraph, vertices: &[VertexId], edges: &[EdgeId]) -> std::result::Result<(), String> {
    if vertices.len() != a.vertex_count() || edges.len() != a.skeleton().edge_count() {
        return Err("map has the wrong size".into());
    }
    for e in a.edge_ids() {
        let (x, y) = (a.edge(e), b.edge(edges[e.index()]));
        if x.color != y.color || vertices[x.range.index()] != y.range || vertices[x.source.index()] != y.source {
            return Err(format!("edge {} is not mapped compatibly", x.name));
        }
    }
    for sq in a.squares().squares() {
        let img = b.square_forward(edges[sq.lo.index()], edges[sq.hi.index()]);
        if img != Some((edges[sq.hi2.index()], edges[sq.lo2.index()])) {
            return Err(format!("square {} {} is not preserved", a.edge_name(sq.lo), a.edge_name(sq.hi)));
        }
    }
    Ok(())
}

impl Isomorphism {
    pub fn identity(g: &KGraph) -> Self {
        Isomorphism {
            vertices: g.vertices().collect(),
            edges: g.edge_ids().collect(),
        }
    }

    /// Verifies the maps are bijective, functorial, and that they carry
    /// every morphism of degree ≤ `bound` to a normal-form morphism
    /// (checked by recomposing the image word in the target).
    pub fn verify(&self, a: &KGraph, b: &KGraph, bound: &Degree) -> std::result::Result<(), String> {
        check_functor(a, b, &self.vertices, &self.edges)?;
        if !is_bijection(self.vertices.iter().map(|v| v.index()), b.vertex_count())
            || !is_bijection(self.edges.iter().map(|e| e.index()), b.skeleton().edge_count())
        {
            return Err("maps are not bijections".into());
        }
        for n in bound.box_below() {
            for m in a.morphisms_of_degree(&n).map_err(|e| e.to_string())? {
                let word: Vec<EdgeId> = m.word().iter().map(|e| self.edges[e.index()]).collect();
                let image = b
                    .from_edges(self.vertices[m.range().index()], &word)
                    .map_err(|e| e.to_string())?;
                if image.word() != word.as_slice() {
                    return Err(format!("image of {} is not in normal form", a.word_string(&m)));
                }
            }
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, a: &'a KGraph, b: &'a KGraph) -> DisplayIso<'a> {
        DisplayIso { iso: self, a, b }
    }
}

fn is_bijection(images: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut count = 0;
    for i in images {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return false;
        }
        count += 1;
    }
    count == n
}

pub struct DisplayIso<'a> {
    iso: &'a Isomorphism,
    a: &'a KGraph,
    b: &'a KGraph,
}

impl fmt::Display for DisplayIso<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.a.vertices() {
            writeln!(f, "vertex {} -> {}", self.a.vertex_name(v), self.b.vertex_name(self.iso.vertices[v.index()]))?;
        }
        for e in self.a.edge_ids() {
            writeln!(f, "edge {} -> {}", self.a.edge_name(e), self.b.edge_name(self.iso.edges[e.index()]))?;
        }
        Ok(())
    }
}

struct Search<'a> {
    a: &'a KGraph,
    b: &'a KGraph,
    order: Vec<EdgeId>,
    /// Squares of `a` indexed by the search position at which their last edge is assigned.
    checks: Vec<Vec<usize>>,
    vmap: Vec<Option<VertexId>>,
    vused: Vec<bool>,
    emap: Vec<Option<EdgeId>>,
    eused: Vec<bool>,
    explored: u64,
    budget: u64,
}

impl Search<'_> {
    fn bind_vertex(&mut self, v: VertexId, w: VertexId, bound: &mut Vec<VertexId>) -> bool {
        match self.vmap[v.index()] {
            Some(x) => x == w,
            None => {
                if self.vused[w.index()] {
                    return false;
                }
                self.vmap[v.index()] = Some(w);
                self.vused[w.index()] = true;
                bound.push(v);
                true
            }
        }
    }

    fn squares_hold(&self, pos: usize) -> bool {
        let map = |e: EdgeId| self.emap[e.index()].expect("assigned");
        self.checks[pos].iter().all(|&i| {
            let sq = self.a.squares().squares()[i];
            self.b.square_forward(map(sq.lo), map(sq.hi)) == Some((map(sq.hi2), map(sq.lo2)))
        })
    }

    fn run(&mut self, pos: usize) -> Result<bool> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(Error::SearchBudgetExceeded {
                explored: self.explored,
                budget: self.budget,
            });
        }
        if pos == self.order.len() {
            return Ok(true);
        }
        let e = self.order[pos];
        let edge = self.a.edge(e).clone();
        let candidates: Vec<EdgeId> = self.b.edge_ids().filter(|&x| self.b.edge(x).color == edge.color).collect();
        for x in candidates {
            if self.eused[x.index()] {
                continue;
            }
            let target = self.b.edge(x).clone();
            let mut bound = Vec::new();
            let ok = self.bind_vertex(edge.range, target.range, &mut bound)
                && self.bind_vertex(edge.source, target.source, &mut bound);
            if ok {
                self.emap[e.index()] = Some(x);
                self.eused[x.index()] = true;
                if self.squares_hold(pos) && self.run(pos + 1)? {
                    return Ok(true);
                }
                self.emap[e.index()] = None;
                self.eused[x.index()] = false;
            }
            for v in bound {
                let w = self.vmap[v.index()].take().expect("bound");
                self.vused[w.index()] = false;
            }
        }
        Ok(false)
    }
}

/// Searches for a degree-preserving isomorphism `a → b`, then verifies the
/// result on every morphism of degree ≤ `max_degree`.
pub fn isomorphism_search(a: &KGraph, b: &KGraph, max_degree: &Degree, budget: u64) -> Result<SearchOutcome> {
    if a.rank() != b.rank() {
        return Ok(SearchOutcome::NoneExists { explored: 0 });
    }
    if max_degree.rank() != a.rank() {
        return Err(Error::RankMismatch {
            expected: a.rank(),
            found: max_degree.to_string(),
        });
    }
    let color_counts = |g: &KGraph| {
        let mut c = vec![0usize; g.rank()];
        for e in g.skeleton().edges() {
            c[e.color] += 1;
        }
        c
    };
    if a.vertex_count() != b.vertex_count()
        || color_counts(a) != color_counts(b)
        || a.squares().len() != b.squares().len()
    {
        return Ok(SearchOutcome::NoneExists { explored: 0 });
    }

    // Visit edges so that each new edge shares an endpoint with an earlier one when possible.
    let mut order = Vec::new();
    let mut placed = vec![false; a.skeleton().edge_count()];
    let mut seen_v = vec![false; a.vertex_count()];
    while order.len() < placed.len() {
        let next = a
            .edge_ids()
            .find(|&e| !placed[e.index()] && (seen_v[a.edge(e).range.index()] || seen_v[a.edge(e).source.index()]))
            .or_else(|| a.edge_ids().find(|&e| !placed[e.index()]))
            .expect("an unplaced edge remains");
        placed[next.index()] = true;
        seen_v[a.edge(next).range.index()] = true;
        seen_v[a.edge(next).source.index()] = true;
        order.push(next);
    }
    let mut position = vec![0; placed.len()];
    for (i, e) in order.iter().enumerate() {
        position[e.index()] = i;
    }
    let mut checks = vec![Vec::new(); order.len()];
    for (i, sq) in a.squares().squares().iter().enumerate() {
        let last = [sq.lo, sq.hi, sq.hi2, sq.lo2].iter().map(|e| position[e.index()]).max().expect("four edges");
        checks[last].push(i);
    }

    let mut search = Search {
        a,
        b,
        order,
        checks,
        vmap: vec![None; a.vertex_count()],
        vused: vec![false; b.vertex_count()],
        emap: vec![None; a.skeleton().edge_count()],
        eused: vec![false; b.skeleton().edge_count()],
        explored: 0,
        budget,
    };
    if !search.run(0)? {
        return Ok(SearchOutcome::NoneExists {
            explored: search.explored,
        });
    }
    // Vertices without edges (possible only at window boundaries) are paired in order.
    let mut free_targets = b.vertices().filter(|w| !search.vused[w.index()]);
    let vertices: Vec<VertexId> = search
        .vmap
        .iter()
        .map(|m| m.unwrap_or_else(|| free_targets.next().expect("vertex counts agree")))
        .collect();
    let iso = Isomorphism {
        vertices,
        edges: search.emap.iter().map(|m| m.expect("all edges assigned")).collect(),
    };
    iso.verify(a, b, max_degree)
        .map_err(|m| Error::FactorizationError(format!("isomorphism failed verification: {m}")))?;
    Ok(SearchOutcome::Found(iso))
}
