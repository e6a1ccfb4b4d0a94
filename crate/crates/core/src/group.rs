//! Finitely generated abelian groups, cocycles and group actions.
//!
//! Groups are products of cyclic factors `Zn` and copies of `Z`. A `Z`
//! factor can carry a window radius; only windowed groups can be
//! materialized as a finite carrier (for skew products).

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{KGraph, Morphism};
use crate::skeleton::{EdgeId, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Cyclic(u32),
    Integers { radius: Option<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<Factor>,
}

/// A group element, one coordinate per factor, reduced modulo cyclic orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem(pub Vec<i64>);

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl GroupSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("a group needs at least one factor".into()));
        }
        if factors.iter().any(|f| matches!(f, Factor::Cyclic(0))) {
            return Err(Error::InvalidGroup("cyclic order must be positive".into()));
        }
        Ok(GroupSpec { factors })
    }

    pub fn cyclic(n: u32) -> Self {
        GroupSpec {
            factors: vec![Factor::Cyclic(n)],
        }
    }

    /// ℤʳ without a window; suitable for gradings, not for materialization.
    pub fn integers(rank: usize) -> Self {
        GroupSpec {
            factors: vec![Factor::Integers { radius: None }; rank],
        }
    }

    pub fn integer_window(rank: usize, radius: u32) -> Self {
        GroupSpec {
            factors: vec![Factor::Integers { radius: Some(radius) }; rank],
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|f| matches!(f, Factor::Cyclic(_)))
    }

    pub fn is_windowed(&self) -> bool {
        self.factors
            .iter()
            .any(|f| matches!(f, Factor::Integers { radius: Some(_) }))
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem(vec![0; self.rank()])
    }

    fn reduce(&self, mut g: Vec<i64>) -> GroupElem {
        for (x, f) in g.iter_mut().zip(&self.factors) {
            if let Factor::Cyclic(n) = f {
                *x = x.rem_euclid(i64::from(*n));
            }
        }
        GroupElem(g)
    }

    pub fn op(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn inverse(&self, a: &GroupElem) -> GroupElem {
        self.reduce(a.0.iter().map(|x| -x).collect())
    }

    /// Whether `g` lies in the materialized window (always true for cyclic factors).
    pub fn in_window(&self, g: &GroupElem) -> bool {
        g.0.iter().zip(&self.factors).all(|(x, f)| match f {
            Factor::Integers { radius: Some(r) } => x.unsigned_abs() <= u64::from(*r),
            _ => true,
        })
    }

    /// Generator of factor `i`.
    pub fn generator(&self, i: usize) -> GroupElem {
        let mut g = vec![0; self.rank()];
        g[i] = 1;
        self.reduce(g)
    }

    /// The materialized carrier in lexicographic order.
    pub fn elements(&self) -> Result<Vec<GroupElem>> {
        let mut out: Vec<Vec<i64>> = vec![Vec::new()];
        for f in &self.factors {
            let range: Vec<i64> = match f {
                Factor::Cyclic(n) => (0..i64::from(*n)).collect(),
                Factor::Integers { radius: Some(r) } => (-i64::from(*r)..=i64::from(*r)).collect(),
                Factor::Integers { radius: None } => {
                    return Err(Error::InvalidGroup("Z needs a window radius to be materialized".into()))
                }
            };
            out = out
                .into_iter()
                .flat_map(|p| {
                    range.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(GroupElem).collect())
    }

    /// Parses `"1"`, `"1;3"` or `"1,3"`.
    pub fn parse_elem(&self, text: &str) -> Result<GroupElem> {
        let parts: Vec<&str> = text.split([';', ',']).map(str::trim).collect();
        if parts.len() != self.rank() {
            return Err(Error::InvalidGroup(format!("element {text} does not match group {self}")));
        }
        let raw = parts
            .iter()
            .map(|p| p.parse::<i64>().map_err(|_| Error::InvalidGroup(format!("bad group element {text}"))))
            .collect::<Result<Vec<_>>>()?;
        for (x, f) in raw.iter().zip(&self.factors) {
            if let Factor::Cyclic(n) = f {
                if *x < 0 || *x >= i64::from(*n) {
                    return Err(Error::InvalidGroup(format!("{x} is not a residue modulo {n}")));
                }
            }
        }
        Ok(GroupElem(raw))
    }

    /// Parses `"Z2"`, `"Z 3"` (ℤ with window radius 3) or `"Z2 x Z4"`.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let mut factors = Vec::new();
        for part in text.split(" x ") {
            let tokens: Vec<&str> = part.split_whitespace().collect();
            let factor = match tokens.as_slice() {
                ["Z"] => Factor::Integers { radius: None },
                ["Z", r] => Factor::Integers {
                    radius: Some(r.parse().map_err(|_| Error::InvalidGroup(format!("bad radius {r}")))?),
                },
                [t] if t.starts_with('Z') => Factor::Cyclic(
                    t[1..]
                        .parse()
                        .map_err(|_| Error::InvalidGroup(format!("bad factor {t}")))?,
                ),
                _ => return Err(Error::InvalidGroup(format!("cannot parse group {text:?}"))),
            };
            factors.push(factor);
        }
        GroupSpec::new(factors)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x {
                Factor::Cyclic(n) => format!("Z{n}"),
                Factor::Integers { radius: None } => "Z".to_string(),
                Factor::Integers { radius: Some(r) } => format!("Z {r}"),
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A functor `c: Λ → G`, given on edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    group: GroupSpec,
    values: Vec<GroupElem>,
}

impl Cocycle {
    /// Checks `c(a)c(b) = c(b′)c(a′)` on every square.
    pub fn new(graph: &KGraph, group: GroupSpec, values: Vec<GroupElem>) -> Result<Cocycle> {
        if values.len() != graph.skeleton().edge_count() {
            return Err(Error::InvalidGroup(format!(
                "cocycle has {} values for {} edges",
                values.len(),
                graph.skeleton().edge_count()
            )));
        }
        let c = Cocycle { group, values };
        for sq in graph.squares().squares() {
            let left = c.group.op(c.edge_value(sq.lo), c.edge_value(sq.hi));
            let right = c.group.op(c.edge_value(sq.hi2), c.edge_value(sq.lo2));
            if left != right {
                return Err(Error::NonFunctorialCocycle(format!(
                    "{} {} = {} {}",
                    graph.edge_name(sq.lo),
                    graph.edge_name(sq.hi),
                    graph.edge_name(sq.hi2),
                    graph.edge_name(sq.lo2)
                )));
            }
        }
        Ok(c)
    }

    /// The degree functor `d: Λ → ℤᵏ`.
    pub fn degree(graph: &KGraph) -> Cocycle {
        let k = graph.rank();
        let values = graph
            .skeleton()
            .edges()
            .iter()
            .map(|e| {
                let mut g = vec![0; k];
                g[e.color] = 1;
                GroupElem(g)
            })
            .collect();
        Cocycle {
            group: GroupSpec::integers(k),
            values,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn edge_value(&self, e: EdgeId) -> &GroupElem {
        &self.values[e.index()]
    }

    pub fn values(&self) -> &[GroupElem] {
        &self.values
    }

    /// `c(λ)` as the product over the edge word.
    pub fn value(&self, m: &Morphism) -> GroupElem {
        m.word()
            .iter()
            .fold(self.group.identity(), |acc, &e| self.group.op(&acc, self.edge_value(e)))
    }
}

/// A permutation of vertices and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Permutation {
    pub fn identity(graph: &KGraph) -> Self {
        Permutation {
            vertices: graph.vertices().collect(),
            edges: graph.edge_ids().collect(),
        }
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            vertices: self.vertices.iter().map(|v| other.vertices[v.index()]).collect(),
            edges: self.edges.iter().map(|e| other.edges[e.index()]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.iter().enumerate().all(|(i, v)| v.index() == i)
            && self.edges.iter().enumerate().all(|(i, e)| e.index() == i)
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vertices[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> EdgeId {
        self.edges[e.index()]
    }
}

/// A homomorphism `G → Aut Λ` for a finite abelian `G`, given by the images
/// of the factor generators.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: GroupSpec,
    elements: Vec<(GroupElem, Permutation)>,
}

impl GroupAction {
    pub fn new(graph: &KGraph, group: GroupSpec, generators: Vec<Permutation>) -> Result<GroupAction> {
        if !group.is_finite() {
            return Err(Error::InvalidGroup("actions require a finite group".into()));
        }
        if generators.len() != group.rank() {
            return Err(Error::InvalidGroup(format!(
                "{} generators given for a group with {} factors",
                generators.len(),
                group.rank()
            )));
        }
        for (i, p) in generators.iter().enumerate() {
            check_automorphism(graph, p).map_err(|m| Error::IncompatibleAction(format!("generator {}: {m}", i + 1)))?;
        }
        for (i, p) in generators.iter().enumerate() {
            let Factor::Cyclic(order) = group.factors()[i] else { unreachable!() };
            let mut acc = Permutation::identity(graph);
            for _ in 0..order {
                acc = acc.then(p);
            }
            if !acc.is_identity() {
                return Err(Error::IncompatibleAction(format!(
                    "generator {} does not have order dividing {order}",
                    i + 1
                )));
            }
            for q in &generators[i + 1..] {
                if p.then(q) != q.then(p) {
                    return Err(Error::IncompatibleAction("generators do not commute".into()));
                }
            }
        }
        let mut elements = Vec::new();
        for g in group.elements()? {
            let mut perm = Permutation::identity(graph);
            for (i, &k) in g.0.iter().enumerate() {
                for _ in 0..k {
                    perm = perm.then(&generators[i]);
                }
            }
            elements.push((g, perm));
        }
        Ok(GroupAction { group, elements })
    }

    pub fn trivial(graph: &KGraph) -> GroupAction {
        GroupAction {
            group: GroupSpec::cyclic(1),
            elements: vec![(GroupElem(vec![0]), Permutation::identity(graph))],
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn elements(&self) -> &[(GroupElem, Permutation)] {
        &self.elements
    }

    pub fn permutation(&self, g: &GroupElem) -> &Permutation {
        &self
            .elements
            .iter()
            .find(|(h, _)| h == g)
            .expect("element of the acting group")
            .1
    }

    /// The first non-identity element fixing a vertex, if any.
    pub fn fixed_vertex(&self) -> Option<(GroupElem, VertexId)> {
        for (g, p) in &self.elements {
            if g.0.iter().all(|&x| x == 0) {
                continue;
            }
            if let Some(i) = p.vertices.iter().enumerate().position(|(i, v)| v.index() == i) {
                return Some((g.clone(), VertexId(i as u32)));
            }
        }
        None
    }
}

/// Checks that `p` is a degree-preserving automorphism: bijective, color-,
/// range- and source-preserving, and compatible with all squares.
pub(crate) fn check_automorphism(graph: &KGraph, p: &Permutation) -> std::result::Result<(), String> {
    let nv = graph.vertex_count();
    let ne = graph.skeleton().edge_count();
    if p.vertices.len() != nv || p.edges.len() != ne {
        return Err("permutation has the wrong size".into());
    }
    let mut seen_v = vec![false; nv];
    for v in &p.vertices {
        if v.index() >= nv || std::mem::replace(&mut seen_v[v.index()], true) {
            return Err("vertex map is not a bijection".into());
        }
    }
    let mut seen_e = vec![false; ne];
    for e in &p.edges {
        if e.index() >= ne || std::mem::replace(&mut seen_e[e.index()], true) {
            return Err("edge map is not a bijection".into());
        }
    }
    for e in graph.edge_ids() {
        let (a, b) = (graph.edge(e), graph.edge(p.edge(e)));
        if a.color != b.color || p.vertex(a.range) != b.range || p.vertex(a.source) != b.source {
            return Err(format!("edge {} is not mapped compatibly", a.name));
        }
    }
    for sq in graph.squares().squares() {
        let image = graph.square_forward(p.edge(sq.lo), p.edge(sq.hi));
        if image != Some((p.edge(sq.hi2), p.edge(sq.lo2))) {
            return Err(format!(
                "square {} {} is not preserved",
                graph.edge_name(sq.lo),
                graph.edge_name(sq.hi)
            ));
        }
    }
    Ok(())
}
