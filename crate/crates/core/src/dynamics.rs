//! Infinite paths and the structural analyses built on them: periods,
//! aperiodicity, cofinality, and the hypotheses of the simplicity and pure
//! infiniteness criteria.
//!
//! Infinite paths are represented by eventually periodic descriptors
//! `x = ρ γ γ γ ⋯`. For such a path every shift `σᵐx` with `m ≥ d(ρ)` is
//! again periodic with period `d(γ)`, so equality of two descriptors reduces
//! to finitely many evaluations.

use std::collections::VecDeque;
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::constructions::Pullback;
use crate::degree::{format_grade, split_grade, Degree};
use crate::error::{Error, Result};
use crate::graph::{KGraph, Morphism};
use crate::skeleton::{EdgeId, VertexId};

/// The eventually periodic path `ρ γ γ γ ⋯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDescriptor {
    prefix: Morphism,
    cycle: Morphism,
}

impl PathDescriptor {
    pub fn new(prefix: Morphism, cycle: Morphism) -> Result<Self> {
        if !cycle.degree().is_positive() {
            return Err(Error::InvalidPath(format!(
                "cycle degree {} is not positive in every coordinate",
                cycle.degree()
            )));
        }
        if cycle.range() != cycle.source() || cycle.range() != prefix.source() {
            return Err(Error::InvalidPath("cycle must be a loop at the source of the prefix".into()));
        }
        Ok(PathDescriptor { prefix, cycle })
    }

    /// `γ γ γ ⋯`.
    pub fn periodic(g: &KGraph, cycle: Morphism) -> Result<Self> {
        Self::new(g.identity(cycle.range()), cycle)
    }

    pub fn prefix(&self) -> &Morphism {
        &self.prefix
    }

    pub fn cycle(&self) -> &Morphism {
        &self.cycle
    }

    /// `x(0)`.
    pub fn start(&self) -> VertexId {
        self.prefix.range()
    }

    pub fn display(&self, g: &KGraph) -> String {
        format!("{} ({})^∞", g.display_morphism(&self.prefix), g.word_string(&self.cycle))
    }
}

fn power(g: &KGraph, m: &Morphism, j: u32) -> Result<Morphism> {
    let mut acc = g.identity(m.range());
    for _ in 0..j {
        acc = g.compose(&acc, m)?;
    }
    Ok(acc)
}

/// `ρ γʲ` for the least `j` with `d(ρ) + j·d(γ) ≥ n`.
fn unroll(g: &KGraph, x: &PathDescriptor, n: &Degree) -> Result<Morphism> {
    let p = x.cycle.degree();
    let d = x.prefix.degree();
    let j = (0..n.rank())
        .map(|i| n.get(i).saturating_sub(d.get(i)).div_ceil(p.get(i)))
        .max()
        .unwrap_or(0);
    g.compose(&x.prefix, &power(g, &x.cycle, j)?)
}

/// `x(m, n)` for `m ≤ n`.
pub fn eval_path(g: &KGraph, x: &PathDescriptor, m: &Degree, n: &Degree) -> Result<Morphism> {
    if !m.le(n) {
        return Err(Error::DegreeOrderViolation {
            m: m.to_string(),
            n: n.to_string(),
        });
    }
    let long = unroll(g, x, n)?;
    g.segment(&long, m, n)
}

/// `σᵖ(x)`.
pub fn shift(g: &KGraph, x: &PathDescriptor, p: &Degree) -> Result<PathDescriptor> {
    let d = x.prefix.degree();
    if p.le(d) {
        let prefix = g.segment(&x.prefix, p, d)?;
        return Ok(PathDescriptor {
            prefix,
            cycle: x.cycle.clone(),
        });
    }
    let long = unroll(g, x, p)?;
    let prefix = g.segment(&long, p, long.degree())?;
    Ok(PathDescriptor {
        prefix,
        cycle: x.cycle.clone(),
    })
}

/// `λx`, the unique `y` with `y(0, d(λ)) = λ` and `σ^{d(λ)} y = x`.
pub fn prepend(g: &KGraph, lambda: &Morphism, x: &PathDescriptor) -> Result<PathDescriptor> {
    Ok(PathDescriptor {
        prefix: g.compose(lambda, &x.prefix)?,
        cycle: x.cycle.clone(),
    })
}

/// Whether two descriptors define the same infinite path.
pub fn same_path(g: &KGraph, x: &PathDescriptor, y: &PathDescriptor) -> Result<bool> {
    let n = x.prefix.degree().join(y.prefix.degree());
    let zero = Degree::zero(g.rank());
    if eval_path(g, x, &zero, &n)? != eval_path(g, y, &zero, &n)? {
        return Ok(false);
    }
    let (p, q) = (x.cycle.degree().clone(), y.cycle.degree().clone());
    // σⁿx = β^∞ and σⁿy = β′^∞; β^∞ = β′^∞ iff β^∞ has period q and starts with β′.
    let beta = eval_path(g, x, &n, &(&n + &p))?;
    let beta2 = eval_path(g, y, &n, &(&n + &q))?;
    let u = PathDescriptor::periodic(g, beta.clone())?;
    Ok(eval_path(g, &u, &q, &(&q + &p))? == beta && eval_path(g, &u, &zero, &q)? == beta2)
}

/// Checks that `{λμ : μ ∈ Λⁿ(s(λ))}` lists every degree-`(d(λ) + n)`
/// morphism extending `λ` exactly once.
pub fn cylinder_partition_check(g: &KGraph, lambda: &Morphism, n: &Degree) -> Result<bool> {
    let mut extensions = Vec::new();
    for mu in g.morphisms(lambda.source(), n)? {
        extensions.push(g.compose(lambda, &mu)?);
    }
    let total = lambda.degree() + n;
    let mut expected = Vec::new();
    for nu in g.morphisms(lambda.range(), &total)? {
        let (head, _) = g.factor(&nu, lambda.degree(), n)?;
        if &head == lambda {
            expected.push(nu);
        }
    }
    let count = extensions.len();
    extensions.sort();
    extensions.dedup();
    expected.sort();
    Ok(extensions.len() == count && extensions == expected)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// The verdict is a decision, not a bounded search.
    Exact,
    Search { period_bound: u32, horizon: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Certified without a finite counterexample, e.g. by exhaustion.
    Certificate(String),
    /// `x(m + p, n + p) ≠ x(m, n)`.
    Rectangle {
        m: Degree,
        n: Degree,
        shifted: Morphism,
        original: Morphism,
    },
    /// `λ` reaches a vertex with two distinct first-return cycles, which
    /// generate a free monoid and hence aperiodic paths.
    TwoCycles {
        path: Morphism,
        first: Morphism,
        second: Morphism,
    },
    /// Every path from the vertex is eventually periodic; this one runs into
    /// a cycle without an exit.
    PeriodicTrap(PathDescriptor),
    /// A cycle with no exit.
    LoopWithoutExit(Morphism),
    /// Each shift pair `(m, n)` with a path of the horizon degree that
    /// tells `σᵐ` and `σⁿ` apart.
    Distinguished(Vec<(Degree, Degree, Morphism)>),
    /// No path up to the horizon tells `σᵐ` and `σⁿ` apart.
    Indistinguishable { m: Degree, n: Degree },
    /// An infinite path from which `vertex` is unreachable.
    Avoiding { vertex: VertexId, path: PathDescriptor },
    /// `r(λ) = v`, `s(λ) = r(μ) = s(μ)`, `d(μ) ≠ 0`, one entry per vertex.
    Loops(Vec<(VertexId, Morphism, Morphism)>),
    /// A vertex with no reachable loop.
    NoLoop(VertexId),
    PerVertex(Vec<(VertexId, Verdict)>),
    Parts(Vec<(String, Verdict)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Witness,
    pub bound: Bound,
}

impl Verdict {
    fn new(status: Status, witness: Witness, bound: Bound) -> Self {
        Verdict { status, witness, bound }
    }

    pub fn render(&self, g: &KGraph) -> String {
        let mut out = String::new();
        self.render_into(g, 0, &mut out);
        out
    }

    fn render_into(&self, g: &KGraph, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let bound = match self.bound {
            Bound::Exact => "exact".to_string(),
            Bound::Search { period_bound, horizon } => format!("period bound {period_bound}, horizon {horizon}"),
        };
        let m = |x: &Morphism| g.display_morphism(x).to_string();
        let line = match &self.witness {
            Witness::Certificate(text) => text.clone(),
            Witness::Rectangle { m: a, n: b, shifted, original } => {
                format!("x{a}..{b} = {} but the shifted segment is {}", m(original), m(shifted))
            }
            Witness::TwoCycles { path, first, second } => format!(
                "via {} reach {} with distinct cycles {} and {}",
                m(path),
                g.vertex_name(path.source()),
                m(first),
                m(second)
            ),
            Witness::PeriodicTrap(x) => format!("every path is eventually periodic, e.g. {}", x.display(g)),
            Witness::LoopWithoutExit(c) => format!("loop {} at {} has no exit", m(c), g.vertex_name(c.range())),
            Witness::Distinguished(pairs) => format!("{} shift pairs distinguished", pairs.len()),
            Witness::Indistinguishable { m: a, n: b } => format!("shifts {a} and {b} are never distinguished"),
            Witness::Avoiding { vertex, path } => format!(
                "{} never reaches the path {}",
                g.vertex_name(*vertex),
                path.display(g)
            ),
            Witness::Loops(_) => "every vertex reaches a loop".to_string(),
            Witness::NoLoop(v) => format!("{} reaches no loop", g.vertex_name(*v)),
            Witness::PerVertex(_) | Witness::Parts(_) => String::new(),
        };
        if line.is_empty() {
            let _ = writeln!(out, "{pad}{} [{bound}]", self.status);
        } else {
            let _ = writeln!(out, "{pad}{} [{bound}] {line}", self.status);
        }
        match &self.witness {
            Witness::PerVertex(list) => {
                for (v, sub) in list {
                    let _ = write!(out, "{pad}  {}: ", g.vertex_name(*v));
                    let mut inner = String::new();
                    sub.render_into(g, depth + 1, &mut inner);
                    out.push_str(inner.trim_start());
                }
            }
            Witness::Parts(list) => {
                for (name, sub) in list {
                    let _ = write!(out, "{pad}  {name}: ");
                    let mut inner = String::new();
                    sub.render_into(g, depth + 1, &mut inner);
                    out.push_str(inner.trim_start());
                }
            }
            Witness::Loops(list) => {
                for (v, lambda, mu) in list {
                    let _ = writeln!(out, "{pad}  {}: λ = {}, μ = {}", g.vertex_name(*v), m(lambda), m(mu));
                }
            }
            Witness::Distinguished(pairs) => {
                for (a, b, lambda) in pairs {
                    let _ = writeln!(out, "{pad}  {a} vs {b}: {}", m(lambda));
                }
            }
            _ => {}
        }
    }
}

/// `p` is a period of `x` iff `σ^{p⁺}x = σ^{p⁻}x`; decided exactly. A
/// failing rectangle is searched for in order of increasing offset.
pub fn is_period(g: &KGraph, x: &PathDescriptor, p: &[i64], horizon: &Degree) -> Result<Verdict> {
    if p.len() != g.rank() || horizon.rank() != g.rank() {
        return Err(Error::RankMismatch {
            expected: g.rank(),
            found: format_grade(p),
        });
    }
    let (plus, minus) = split_grade(p);
    let a = shift(g, x, &plus)?;
    let b = shift(g, x, &minus)?;
    if same_path(g, &a, &b)? {
        return Ok(Verdict::new(
            Status::Holds,
            Witness::Certificate(format!("σ^{plus} x = σ^{minus} x, so {} is a period", format_grade(p))),
            Bound::Exact,
        ));
    }
    let reach = |d: &Degree| d.entries().iter().copied().max().unwrap_or(0);
    let limit = reach(horizon)
        + 2 * (reach(a.prefix.degree()) + reach(b.prefix.degree()) + reach(a.cycle.degree()) + reach(b.cycle.degree()))
        + 1;
    let k = g.rank();
    for r in 0..=limit {
        for t in Degree::diagonal(k, r).box_below() {
            if t.entries().iter().copied().max().unwrap_or(0) != r {
                continue;
            }
            for i in 0..k {
                let e = Degree::unit(k, i);
                let (m, n) = (&minus + &t, &(&minus + &t) + &e);
                let original = eval_path(g, x, &m, &n)?;
                let shifted = eval_path(g, x, &(&plus + &t), &(&(&plus + &t) + &e))?;
                if original != shifted {
                    return Ok(Verdict::new(
                        Status::Fails,
                        Witness::Rectangle {
                            m,
                            n,
                            shifted,
                            original,
                        },
                        Bound::Exact,
                    ));
                }
            }
        }
    }
    Ok(Verdict::new(
        Status::Unknown,
        Witness::Certificate("paths differ but no rectangle was found in the search range".into()),
        Bound::Exact,
    ))
}

fn digraph(g: &KGraph, edges: impl Iterator<Item = (VertexId, VertexId)>) -> DiGraph<(), ()> {
    let mut d = DiGraph::new();
    for _ in g.vertices() {
        d.add_node(());
    }
    for (r, s) in edges {
        d.add_edge(NodeIndex::new(r.index()), NodeIndex::new(s.index()), ());
    }
    d
}

fn edge_digraph(g: &KGraph) -> DiGraph<(), ()> {
    digraph(g, g.skeleton().edges().iter().map(|e| (e.range, e.source)))
}

/// `reach[v][w]`: some morphism has range `v` and source `w`.
fn reach_sets(g: &KGraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    g.vertices()
        .map(|v| {
            let mut seen = vec![false; n];
            seen[v.index()] = true;
            let mut queue = VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                for c in 0..g.rank() {
                    for &e in g.edges_into(u, c) {
                        let s = g.edge(e).source;
                        if !std::mem::replace(&mut seen[s.index()], true) {
                            queue.push_back(s);
                        }
                    }
                }
            }
            seen
        })
        .collect()
}

/// Shortest edge word from `from` to `to` (possibly empty) inside `allowed`,
/// following edges from range to source.
fn edge_path(g: &KGraph, from: VertexId, to: VertexId, allowed: &dyn Fn(EdgeId) -> bool) -> Option<Vec<EdgeId>> {
    let mut prev: Vec<Option<EdgeId>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from.index()] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut word = Vec::new();
            let mut at = to;
            while at != from {
                let e = prev[at.index()].expect("predecessor recorded");
                word.push(e);
                at = g.edge(e).range;
            }
            word.reverse();
            return Some(word);
        }
        for e in g.edge_ids().filter(|&e| g.edge(e).range == u && allowed(e)) {
            let s = g.edge(e).source;
            if !std::mem::replace(&mut seen[s.index()], true) {
                prev[s.index()] = Some(e);
                queue.push_back(s);
            }
        }
    }
    None
}

/// A cycle at `w` starting with `first`, returning to `w` inside `allowed`.
fn cycle_through(g: &KGraph, w: VertexId, first: EdgeId, allowed: &dyn Fn(EdgeId) -> bool) -> Option<Morphism> {
    let back = edge_path(g, g.edge(first).source, w, allowed)?;
    let mut word = vec![first];
    word.extend(back);
    g.from_edges(w, &word).ok()
}

struct Components {
    /// Component index of each vertex.
    of: Vec<usize>,
    members: Vec<Vec<VertexId>>,
}

fn components(d: &DiGraph<(), ()>) -> Components {
    let sccs = tarjan_scc(d);
    let mut of = vec![0; d.node_count()];
    let members: Vec<Vec<VertexId>> = sccs
        .iter()
        .map(|c| c.iter().map(|n| VertexId(n.index() as u32)).collect())
        .collect();
    for (i, c) in members.iter().enumerate() {
        for v in c {
            of[v.index()] = i;
        }
    }
    Components { of, members }
}

/// Exact rank-1 aperiodicity at `v`: some aperiodic path starts at `v` iff
/// `v` reaches a strongly connected component carrying more edges than
/// vertices, i.e. one that is not a single cycle.
fn aperiodicity_rank_one(g: &KGraph, v: VertexId, reach: &[bool], comps: &Components) -> Result<Verdict> {
    let inside = |e: EdgeId| comps.of[g.edge(e).range.index()] == comps.of[g.edge(e).source.index()];
    for w in g.vertices().filter(|w| reach[w.index()]) {
        let c = comps.of[w.index()];
        let internal: Vec<EdgeId> = g.edges_into(w, 0).iter().copied().filter(|&e| inside(e)).collect();
        let component_edges = g.edge_ids().filter(|&e| inside(e) && comps.of[g.edge(e).range.index()] == c).count();
        if internal.len() >= 2 && component_edges > comps.members[c].len() {
            let same = |e: EdgeId| inside(e) && comps.of[g.edge(e).range.index()] == c;
            let first = cycle_through(g, w, internal[0], &same).expect("strongly connected");
            let second = cycle_through(g, w, internal[1], &same).expect("strongly connected");
            let path = g.from_edges(v, &edge_path(g, v, w, &|_| true).expect("reachable"))?;
            return Ok(Verdict::new(Status::Holds, Witness::TwoCycles { path, first, second }, Bound::Exact));
        }
    }
    // Every reachable nontrivial component is a single cycle; follow one.
    for w in g.vertices().filter(|w| reach[w.index()]) {
        let c = comps.of[w.index()];
        if let Some(&e) = g.edges_into(w, 0).iter().find(|&&e| inside(e)) {
            let same = |x: EdgeId| inside(x) && comps.of[g.edge(x).range.index()] == c;
            let cycle = cycle_through(g, w, e, &same).expect("strongly connected");
            let prefix = g.from_edges(v, &edge_path(g, v, w, &|_| true).expect("reachable"))?;
            return Ok(Verdict::new(
                Status::Fails,
                Witness::PeriodicTrap(PathDescriptor::new(prefix, cycle)?),
                Bound::Exact,
            ));
        }
    }
    Err(Error::SourceViolation {
        vertex: g.vertex_name(v).to_string(),
        color: 1,
    })
}

/// Condition (L) for 1-graphs: every cycle has an exit.
pub fn condition_l(g: &KGraph) -> Result<Verdict> {
    if g.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: format!("a rank-{} graph", g.rank()),
        });
    }
    let comps = components(&edge_digraph(g));
    for (c, members) in comps.members.iter().enumerate() {
        let inside = |e: EdgeId| comps.of[g.edge(e).range.index()] == c && comps.of[g.edge(e).source.index()] == c;
        let internal = g.edge_ids().filter(|&e| inside(e)).count();
        if internal == 0 || internal > members.len() {
            continue;
        }
        let exits = members.iter().map(|&w| g.edges_into(w, 0).len()).sum::<usize>() > internal;
        if !exits {
            let w = members[0];
            let e = *g.edges_into(w, 0).first().expect("cycle edge");
            let cycle = cycle_through(g, w, e, &inside).expect("strongly connected");
            return Ok(Verdict::new(Status::Fails, Witness::LoopWithoutExit(cycle), Bound::Exact));
        }
    }
    Ok(Verdict::new(
        Status::Holds,
        Witness::Certificate("every cycle has an exit".into()),
        Bound::Exact,
    ))
}

/// The bounded pairwise search: for every pair `m ≠ n ≤ (P, …, P)` look for
/// a morphism `λ ∈ Λᴴ(v)`, `H = (h, …, h)`, with `λ(m, m + t) ≠ λ(n, n + t)`
/// for `t = H − (m ∨ n)`.
pub fn aperiodicity_search(g: &KGraph, v: VertexId, period_bound: u32, horizon: u32) -> Result<Verdict> {
    let k = g.rank();
    let bound = Bound::Search { period_bound, horizon };
    let shifts = Degree::diagonal(k, period_bound).box_below();
    let mut pending: Vec<(Degree, Degree)> = Vec::new();
    for (i, m) in shifts.iter().enumerate() {
        for n in &shifts[i + 1..] {
            pending.push((m.clone(), n.clone()));
        }
    }
    let h = Degree::diagonal(k, horizon.max(period_bound));
    let mut found = Vec::new();
    let mut failure = None;
    g.visit_morphisms(v, &h, &mut |lambda| {
        pending.retain(|(m, n)| {
            let t = h.checked_sub(&m.join(n)).expect("shifts lie below the horizon");
            let differ = (|| -> Result<bool> {
                Ok(g.segment(lambda, m, &(m + &t))? != g.segment(lambda, n, &(n + &t))?)
            })();
            match differ {
                Ok(true) => {
                    found.push((m.clone(), n.clone(), lambda.clone()));
                    false
                }
                Ok(false) => true,
                Err(e) => {
                    failure.get_or_insert(e);
                    true
                }
            }
        });
        !pending.is_empty() && failure.is_none()
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if let Some((m, n)) = pending.into_iter().next() {
        return Ok(Verdict::new(Status::Unknown, Witness::Indistinguishable { m, n }, bound));
    }
    found.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Ok(Verdict::new(Status::Holds, Witness::Distinguished(found), bound))
}

/// Aperiodicity at `v`: exact for 1-graphs, a bounded semi-decision otherwise.
pub fn aperiodicity_check(g: &KGraph, v: VertexId, period_bound: u32, horizon: u32) -> Result<Verdict> {
    if g.rank() == 1 {
        let reach = reach_sets(g);
        let comps = components(&edge_digraph(g));
        aperiodicity_rank_one(g, v, &reach[v.index()], &comps)
    } else {
        aperiodicity_search(g, v, period_bound, horizon)
    }
}

fn aggregate(list: Vec<(VertexId, Verdict)>, bound: Bound) -> Verdict {
    let status = if list.iter().any(|(_, x)| x.status == Status::Fails) {
        Status::Fails
    } else if list.iter().all(|(_, x)| x.status == Status::Holds) {
        Status::Holds
    } else {
        Status::Unknown
    };
    Verdict::new(status, Witness::PerVertex(list), bound)
}

/// Condition (A): every vertex emits an aperiodic path.
pub fn aperiodicity(g: &KGraph, period_bound: u32, horizon: u32) -> Result<Verdict> {
    let list = g
        .vertices()
        .map(|v| Ok((v, aperiodicity_check(g, v, period_bound, horizon)?)))
        .collect::<Result<Vec<_>>>()?;
    let bound = if g.rank() == 1 {
        Bound::Exact
    } else {
        Bound::Search { period_bound, horizon }
    };
    Ok(aggregate(list, bound))
}

/// Cofinality, decided exactly. An infinite path `x` avoids the vertices
/// reachable from `v` iff its diagonal `x(t·(1, …, 1))` does, because every
/// `x(n)` reaches a later diagonal vertex. Diagonal paths are the infinite
/// paths of the 1-graph of degree-`(1, …, 1)` morphisms, so failure is
/// witnessed by a diagonal cycle outside the reach set of some `v`.
pub fn cofinality_check(g: &KGraph) -> Result<Verdict> {
    let reach = reach_sets(g);
    if reach.iter().all(|r| r.iter().all(|&x| x)) {
        return Ok(Verdict::new(
            Status::Holds,
            Witness::Certificate("every vertex reaches every vertex".into()),
            Bound::Exact,
        ));
    }
    let diagonal = g.morphisms_of_degree(&Degree::diagonal(g.rank(), 1))?;
    for v in g.vertices() {
        let outside = |w: VertexId| !reach[v.index()][w.index()];
        let steps: Vec<&Morphism> = diagonal
            .iter()
            .filter(|m| outside(m.range()) && outside(m.source()))
            .collect();
        let d = digraph(g, steps.iter().map(|m| (m.range(), m.source())));
        for comp in tarjan_scc(&d) {
            let w = VertexId(comp[0].index() as u32);
            let looped = comp.len() > 1 || steps.iter().any(|m| m.range() == w && m.source() == w);
            if !looped {
                continue;
            }
            let in_comp = |u: VertexId| comp.iter().any(|n| n.index() == u.index());
            let cycle = diagonal_cycle(g, w, &steps, &in_comp)?;
            return Ok(Verdict::new(
                Status::Fails,
                Witness::Avoiding {
                    vertex: v,
                    path: PathDescriptor::periodic(g, cycle)?,
                },
                Bound::Exact,
            ));
        }
    }
    Ok(Verdict::new(
        Status::Holds,
        Witness::Certificate("no diagonal cycle avoids the reach set of any vertex".into()),
        Bound::Exact,
    ))
}

/// Composes diagonal steps along a cycle at `w` inside one strongly connected piece.
fn diagonal_cycle(g: &KGraph, w: VertexId, steps: &[&Morphism], in_comp: &dyn Fn(VertexId) -> bool) -> Result<Morphism> {
    let n = g.vertex_count();
    let local: Vec<&Morphism> = steps.iter().copied().filter(|m| in_comp(m.range()) && in_comp(m.source())).collect();
    let first = local.iter().find(|m| m.range() == w).expect("component has an outgoing step");
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let start = first.source();
    seen[start.index()] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if u == w {
            break;
        }
        for (i, m) in local.iter().enumerate() {
            if m.range() == u && !seen[m.source().index()] {
                seen[m.source().index()] = true;
                prev[m.source().index()] = Some(i);
                queue.push_back(m.source());
            }
        }
    }
    let mut chain = Vec::new();
    let mut at = w;
    while at != start {
        let i = prev[at.index()].expect("component is strongly connected");
        chain.push(local[i]);
        at = local[i].range();
    }
    chain.reverse();
    let mut acc = (*first).clone();
    for m in chain {
        acc = g.compose(&acc, m)?;
    }
    Ok(acc)
}

/// For every `v`, a morphism `λ` from `v` to a vertex carrying a loop `μ`
/// of nonzero degree.
pub fn pure_infiniteness_hypothesis(g: &KGraph) -> Result<Verdict> {
    let reach = reach_sets(g);
    let comps = components(&edge_digraph(g));
    let inside = |e: EdgeId| comps.of[g.edge(e).range.index()] == comps.of[g.edge(e).source.index()];
    let mut loops = Vec::new();
    for v in g.vertices() {
        let target = g.vertices().filter(|w| reach[v.index()][w.index()]).find_map(|w| {
            g.edge_ids()
                .find(|&e| g.edge(e).range == w && inside(e))
                .map(|e| (w, e))
        });
        let Some((w, e)) = target else {
            return Ok(Verdict::new(Status::Fails, Witness::NoLoop(v), Bound::Exact));
        };
        let c = comps.of[w.index()];
        let same = |x: EdgeId| inside(x) && comps.of[g.edge(x).range.index()] == c;
        let mu = cycle_through(g, w, e, &same).expect("strongly connected");
        let lambda = g.from_edges(v, &edge_path(g, v, w, &|_| true).expect("reachable"))?;
        loops.push((v, lambda, mu));
    }
    Ok(Verdict::new(Status::Holds, Witness::Loops(loops), Bound::Exact))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub period_bound: u32,
    pub horizon: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            period_bound: 3,
            horizon: 6,
        }
    }
}

/// Under condition (A), `C*(Λ)` is simple iff `Λ` is cofinal. The verdict
/// is HOLDS or FAILS only when (A) holds; otherwise the criterion does not
/// apply and the verdict is UNKNOWN with both sub-verdicts attached.
pub fn simplicity_verdict(g: &KGraph, bounds: Bounds) -> Result<Verdict> {
    let a = aperiodicity(g, bounds.period_bound, bounds.horizon)?;
    let c = cofinality_check(g)?;
    let status = match (a.status, c.status) {
        (Status::Holds, s) => s,
        _ => Status::Unknown,
    };
    let bound = a.bound;
    Ok(Verdict::new(
        status,
        Witness::Parts(vec![("aperiodicity".into(), a), ("cofinality".into(), c)]),
        bound,
    ))
}

/// `f*(x)(m, n) = (x(f(m), f(n)), n − m)` on a window, and when `f` has
/// cofinal image also a descriptor of `f*(x)` over `f*(Λ)`.
#[derive(Clone, Debug)]
pub struct PulledPath {
    /// `(m, n, x(f(m), f(n)))` for all `m ≤ n ≤ window`.
    pub table: Vec<(Degree, Degree, Morphism)>,
    pub descriptor: Option<PathDescriptor>,
}

pub fn path_pullback(base: &KGraph, pb: &Pullback, x: &PathDescriptor, window: &Degree) -> Result<PulledPath> {
    let f = &pb.map;
    let mut table = Vec::new();
    for n in window.box_below() {
        for m in n.box_below() {
            table.push((m.clone(), n.clone(), eval_path(base, x, &f.apply(&m), &f.apply(&n))?));
        }
    }
    let descriptor = if f.has_cofinal_image() {
        Some(pulled_descriptor(base, pb, x)?)
    } else {
        None
    };
    Ok(PulledPath { table, descriptor })
}

/// Along `D = (1, …, 1)` the shifts `σ^{t·f(D)} x` are eventually periodic
/// in `t`: once `t·f(D) ≥ d(ρ)` each is `β_t^∞` with `β_t ∈ Λ^{d(γ)}`, and
/// `β_{t+1}` is determined by `β_t`.
fn pulled_descriptor(base: &KGraph, pb: &Pullback, x: &PathDescriptor) -> Result<PathDescriptor> {
    let l = pb.map.domain_rank();
    let step = pb.map.apply(&Degree::diagonal(l, 1));
    let p = x.cycle.degree().clone();
    let mut t0 = 0;
    while !x.prefix.degree().le(&step.scale(t0)) {
        t0 += 1;
    }
    let beta_at = |t: u32| -> Result<Morphism> {
        let at = step.scale(t);
        eval_path(base, x, &at, &(&at + &p))
    };
    let mut history = vec![beta_at(t0)?];
    let (start, period) = loop {
        let next = beta_at(t0 + history.len() as u32)?;
        if let Some(i) = history.iter().position(|b| b == &next) {
            break (t0 + i as u32, history.len() as u32 - i as u32);
        }
        history.push(next);
    };
    let from = step.scale(start);
    let to = step.scale(start + period);
    let zero = Degree::zero(base.rank());
    let head = eval_path(base, x, &zero, &from)?;
    let loop_part = eval_path(base, x, &from, &to)?;
    let prefix = pb.lift(base, &head, &Degree::diagonal(l, start))?;
    let cycle = pb.lift(base, &loop_part, &Degree::diagonal(l, period))?;
    PathDescriptor::new(prefix, cycle)
}
