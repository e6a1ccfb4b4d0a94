//! Products, pullbacks, skew products, quotients, cocycle recovery and the
//! assembly of a 2-graph from two 1-graphs and a square bijection.
//!
//! Every construction materializes its output as an ordinary square
//! presentation whose squares are computed from the input graph, so the
//! result supports the same rewriting-based composition as a validated
//! graph. Skew products by windowed ℤʳ groups produce windowed graphs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{KGraph, Morphism};
use crate::group::{check_automorphism, Cocycle, GroupAction, GroupElem, GroupSpec};
use crate::iso::Isomorphism;
use crate::skeleton::{EdgeId, Skeleton, SquareSet, VertexId};

/// A monoid morphism `f: ℕˡ → ℕᵏ`, `f(n) = Fn`, stored as the k×ℓ matrix `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidMap {
    rows: Vec<Vec<u32>>,
    domain: usize,
}

impl MonoidMap {
    pub fn new(codomain: usize, domain: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if codomain == 0 || domain == 0 || rows.len() != codomain || rows.iter().any(|r| r.len() != domain) {
            return Err(Error::MalformedSkeleton(format!("monoid map must be a {codomain} x {domain} matrix")));
        }
        Ok(MonoidMap { rows, domain })
    }

    pub fn identity(k: usize) -> Self {
        let rows = (0..k).map(|i| (0..k).map(|j| u32::from(i == j)).collect()).collect();
        MonoidMap { rows, domain: k }
    }

    /// `f(m₁, …, m_ℓ) = m₁ + ⋯ + m_ℓ` into ℕ.
    pub fn sum(domain: usize) -> Self {
        MonoidMap {
            rows: vec![vec![1; domain]],
            domain,
        }
    }

    /// `n ↦ n·e_i` from ℕ into ℕᵏ.
    pub fn coordinate(k: usize, color: usize) -> Self {
        MonoidMap {
            rows: (0..k).map(|i| vec![u32::from(i == color)]).collect(),
            domain: 1,
        }
    }

    /// `n ↦ (n, …, n)` from ℕ into ℕᵏ.
    pub fn diagonal(k: usize) -> Self {
        MonoidMap {
            rows: vec![vec![1]; k],
            domain: 1,
        }
    }

    pub fn codomain_rank(&self) -> usize {
        self.rows.len()
    }

    pub fn domain_rank(&self) -> usize {
        self.domain
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.rows[i][j]
    }

    pub fn apply(&self, n: &Degree) -> Degree {
        assert_eq!(n.rank(), self.domain, "monoid map applied to a degree of the wrong rank");
        Degree::new(
            self.rows
                .iter()
                .map(|r| r.iter().zip(n.entries()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `f(e_j)`.
    pub fn column(&self, j: usize) -> Degree {
        Degree::new(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Injective iff the columns are linearly independent over ℚ.
    pub fn is_injective(&self) -> bool {
        let mut m: Vec<Vec<i128>> = self.rows.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        let (k, l) = (m.len(), self.domain);
        let mut rank = 0;
        for col in 0..l {
            let Some(p) = (rank..k).find(|&r| m[r][col] != 0) else { continue };
            m.swap(rank, p);
            for r in 0..k {
                if r != rank && m[r][col] != 0 {
                    let (a, b) = (m[rank][col], m[r][col]);
                    let pivot = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot) {
                        *x = *x * a - y * b;
                    }
                    let g = m[r].iter().fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x));
                    if g > 1 {
                        m[r].iter_mut().for_each(|x| *x /= g);
                    }
                }
            }
            rank += 1;
        }
        rank == l
    }

    /// Surjective onto ℕᵏ iff every unit vector occurs as a column.
    pub fn is_surjective(&self) -> bool {
        let cols: Vec<Degree> = (0..self.domain).map(|j| self.column(j)).collect();
        (0..self.codomain_rank()).all(|i| cols.contains(&Degree::unit(self.codomain_rank(), i)))
    }

    /// The image is cofinal iff every row has a nonzero entry.
    pub fn has_cofinal_image(&self) -> bool {
        self.rows.iter().all(|r| r.iter().any(|&x| x > 0))
    }

    /// Parses `"k x l: a11,a12;a21,a22"` (rows separated by `;`).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::MalformedSkeleton(format!("cannot parse monoid map {text:?}"));
        let (shape, body) = text.split_once(':').ok_or_else(bad)?;
        let (k, l) = shape.split_once('x').ok_or_else(bad)?;
        let k: usize = k.trim().parse().map_err(|_| bad())?;
        let l: usize = l.trim().parse().map_err(|_| bad())?;
        let rows = body
            .split(';')
            .map(|r| r.split(',').map(|x| x.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        MonoidMap::new(k, l, rows)
    }
}

impl fmt::Display for MonoidMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{} x {}: {}", self.codomain_rank(), self.domain, rows.join(";"))
    }
}

fn interior_of(g: &KGraph) -> Vec<bool> {
    g.vertices().map(|v| g.is_interior(v)).collect()
}

/// The product `Λ₁ × Λ₂` of rank `k₁ + k₂`. Vertex `(v₁, v₂)` is named
/// `[v₁,v₂]`; edges `[a,v₂]` carry the colors of `Λ₁` and `[v₁,b]` those of `Λ₂`.
pub fn product(a: &KGraph, b: &KGraph) -> Result<KGraph> {
    let (k1, k2) = (a.rank(), b.rank());
    let nb = b.vertex_count();
    let mut sk = Skeleton::new(k1 + k2)?;
    let vid = |v1: VertexId, v2: VertexId| VertexId((v1.index() * nb + v2.index()) as u32);
    for v1 in a.vertices() {
        for v2 in b.vertices() {
            sk.add_vertex(&format!("[{},{}]", a.vertex_name(v1), b.vertex_name(v2)))?;
        }
    }
    let mut left: HashMap<(EdgeId, VertexId), EdgeId> = HashMap::new();
    let mut right: HashMap<(VertexId, EdgeId), EdgeId> = HashMap::new();
    for e in a.edge_ids() {
        let x = a.edge(e);
        for v2 in b.vertices() {
            let id = sk.add_edge_ids(x.color, &format!("[{},{}]", x.name, b.vertex_name(v2)), vid(x.range, v2), vid(x.source, v2))?;
            left.insert((e, v2), id);
        }
    }
    for e in b.edge_ids() {
        let y = b.edge(e);
        for v1 in a.vertices() {
            let id = sk.add_edge_ids(k1 + y.color, &format!("[{},{}]", a.vertex_name(v1), y.name), vid(v1, y.range), vid(v1, y.source))?;
            right.insert((v1, e), id);
        }
    }
    let mut squares = SquareSet::new();
    for sq in a.squares().squares() {
        for v2 in b.vertices() {
            squares.insert(left[&(sq.lo, v2)], left[&(sq.hi, v2)], left[&(sq.hi2, v2)], left[&(sq.lo2, v2)]);
        }
    }
    for sq in b.squares().squares() {
        for v1 in a.vertices() {
            squares.insert(right[&(v1, sq.lo)], right[&(v1, sq.hi)], right[&(v1, sq.hi2)], right[&(v1, sq.lo2)]);
        }
    }
    // An edge of Λ₁ followed by an edge of Λ₂ commutes past it unchanged.
    for ea in a.edge_ids() {
        let x = a.edge(ea);
        for eb in b.edge_ids() {
            let y = b.edge(eb);
            squares.insert(left[&(ea, y.range)], right[&(x.source, eb)], right[&(x.range, eb)], left[&(ea, y.source)]);
        }
    }
    let interior = if a.is_windowed() || b.is_windowed() {
        let (ia, ib) = (interior_of(a), interior_of(b));
        Some(ia.iter().flat_map(|&x| ib.iter().map(move |&y| x && y)).collect())
    } else {
        None
    };
    KGraph::build(sk, squares, interior)
}

/// The pullback `f*(Λ)` together with the lifts of its edges.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub graph: KGraph,
    pub map: MonoidMap,
    lifts: Vec<Morphism>,
    index: HashMap<(Morphism, usize), EdgeId>,
}

impl Pullback {
    /// The morphism `λ` of `Λ` underlying an edge `(λ, e_j)`.
    pub fn edge_lift(&self, e: EdgeId) -> &Morphism {
        &self.lifts[e.index()]
    }

    /// `(λ, n) ↦ λ`.
    pub fn project(&self, base: &KGraph, m: &Morphism) -> Result<Morphism> {
        let mut acc = base.identity(m.range());
        for &e in m.word() {
            acc = base.compose(&acc, &self.lifts[e.index()])?;
        }
        Ok(acc)
    }

    /// The unique `(λ, n)` over `λ`, given `d(λ) = f(n)`.
    pub fn lift(&self, base: &KGraph, lambda: &Morphism, n: &Degree) -> Result<Morphism> {
        if &self.map.apply(n) != lambda.degree() {
            return Err(Error::DegreeMismatch {
                m: self.map.apply(n).to_string(),
                n: "0".into(),
                degree: lambda.degree().to_string(),
            });
        }
        let mut word = Vec::new();
        let mut rest = lambda.clone();
        for (j, &count) in n.entries().iter().enumerate() {
            for _ in 0..count {
                let step = self.map.column(j);
                let remaining = rest.degree().checked_sub(&step).expect("degree bookkeeping");
                let (head, tail) = base.factor(&rest, &step, &remaining)?;
                word.push(self.index[&(head, j)]);
                rest = tail;
            }
        }
        self.graph.from_edges(lambda.range(), &word)
    }
}

fn morphism_label(g: &KGraph, m: &Morphism) -> String {
    if m.is_identity() {
        g.vertex_name(m.range()).to_string()
    } else {
        m.word().iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join("/")
    }
}

/// The ℓ-graph `f*(Λ) = {(λ, n) : d(λ) = f(n)}`. Its color-`j` edges are the
/// morphisms of degree `f(e_j)`, named `[word:j]` with `/`-separated words.
pub fn pullback(f: &MonoidMap, base: &KGraph) -> Result<Pullback> {
    if f.codomain_rank() != base.rank() {
        return Err(Error::RankMismatch {
            expected: base.rank(),
            found: format!("codomain of {f}"),
        });
    }
    let l = f.domain_rank();
    let mut sk = Skeleton::new(l)?;
    for v in base.vertices() {
        sk.add_vertex(base.vertex_name(v))?;
    }
    let mut lifts = Vec::new();
    let mut index = HashMap::new();
    for j in 0..l {
        for m in base.morphisms_of_degree(&f.column(j))? {
            let id = sk.add_edge_ids(j, &format!("[{}:{}]", morphism_label(base, &m), j + 1), m.range(), m.source())?;
            index.insert((m.clone(), j), id);
            lifts.push(m);
        }
    }
    let mut squares = SquareSet::new();
    for a in sk.edge_ids() {
        let ca = sk.edge(a).color;
        let sa = sk.edge(a).source;
        for b in sk.edge_ids() {
            let cb = sk.edge(b).color;
            if ca >= cb || sk.edge(b).range != sa {
                continue;
            }
            let joined = match base.compose(&lifts[a.index()], &lifts[b.index()]) {
                Ok(m) => m,
                Err(Error::WindowOverflow(..)) => continue,
                Err(e) => return Err(e),
            };
            let (hi, lo) = match base.factor(&joined, &f.column(cb), &f.column(ca)) {
                Ok(p) => p,
                Err(Error::WindowOverflow(..)) => continue,
                Err(e) => return Err(e),
            };
            squares.insert(a, b, index[&(hi, cb)], index[&(lo, ca)]);
        }
    }
    let interior = base.is_windowed().then(|| interior_of(base));
    let graph = KGraph::build(sk, squares, interior)?;
    Ok(Pullback {
        graph,
        map: f.clone(),
        lifts,
        index,
    })
}

/// The coordinate graph `Λ_i = f_i*(Λ)`, a 1-graph. `color` is 0-based.
pub fn coordinate(base: &KGraph, color: usize) -> Result<Pullback> {
    if color >= base.rank() {
        return Err(Error::MalformedSkeleton(format!("color {} exceeds rank {}", color + 1, base.rank())));
    }
    pullback(&MonoidMap::coordinate(base.rank(), color), base)
}

fn elem_label(g: &GroupElem) -> String {
    g.to_string()
}

/// `G ×_c Λ` with vertex `(g, v)` named `v[g]` and edge `(g, e)` named `e[g]`.
#[derive(Clone, Debug)]
pub struct SkewProduct {
    pub graph: KGraph,
    pub group: GroupSpec,
    vertex_labels: Vec<(GroupElem, VertexId)>,
    edge_labels: Vec<(GroupElem, EdgeId)>,
    vertex_index: HashMap<(GroupElem, VertexId), VertexId>,
    edge_index: HashMap<(GroupElem, EdgeId), EdgeId>,
}

impl SkewProduct {
    pub fn vertex(&self, g: &GroupElem, v: VertexId) -> Option<VertexId> {
        self.vertex_index.get(&(g.clone(), v)).copied()
    }

    pub fn edge(&self, g: &GroupElem, e: EdgeId) -> Option<EdgeId> {
        self.edge_index.get(&(g.clone(), e)).copied()
    }

    pub fn vertex_label(&self, v: VertexId) -> &(GroupElem, VertexId) {
        &self.vertex_labels[v.index()]
    }

    pub fn edge_label(&self, e: EdgeId) -> &(GroupElem, EdgeId) {
        &self.edge_labels[e.index()]
    }

    /// The translation action `h·(g, v) = (hg, v)` for a finite group.
    pub fn translation_action(&self) -> Result<GroupAction> {
        if !self.group.is_finite() {
            return Err(Error::InvalidGroup("translation action needs a finite group".into()));
        }
        let generators = (0..self.group.rank())
            .map(|i| {
                let h = self.group.generator(i);
                crate::group::Permutation {
                    vertices: self
                        .vertex_labels
                        .iter()
                        .map(|(g, v)| self.vertex(&self.group.op(&h, g), *v).expect("finite carrier"))
                        .collect(),
                    edges: self
                        .edge_labels
                        .iter()
                        .map(|(g, e)| self.edge(&self.group.op(&h, g), *e).expect("finite carrier"))
                        .collect(),
                }
            })
            .collect();
        GroupAction::new(&self.graph, self.group.clone(), generators)
    }
}

/// `G ×_c Λ`: `r(g, λ) = (g, r(λ))`, `s(g, λ) = (g·c(λ), s(λ))`.
///
/// For a windowed ℤʳ group only the window is materialized. An edge exists
/// when both endpoints lie in the window; a vertex `(g, v)` is interior when
/// every element reachable from `g` by at most two edge values stays inside.
pub fn skew_product(c: &Cocycle, base: &KGraph) -> Result<SkewProduct> {
    let group = c.group().clone();
    let elements = group.elements()?;
    let mut sk = Skeleton::new(base.rank())?;
    let mut vertex_labels = Vec::new();
    let mut vertex_index = HashMap::new();
    for g in &elements {
        for v in base.vertices() {
            let id = sk.add_vertex(&format!("{}[{}]", base.vertex_name(v), elem_label(g)))?;
            vertex_index.insert((g.clone(), v), id);
            vertex_labels.push((g.clone(), v));
        }
    }
    let mut edge_labels = Vec::new();
    let mut edge_index = HashMap::new();
    for g in &elements {
        for e in base.edge_ids() {
            let x = base.edge(e);
            let target = group.op(g, c.edge_value(e));
            let Some(&s) = vertex_index.get(&(target, x.source)) else { continue };
            let r = vertex_index[&(g.clone(), x.range)];
            let id = sk.add_edge_ids(x.color, &format!("{}[{}]", x.name, elem_label(g)), r, s)?;
            edge_index.insert((g.clone(), e), id);
            edge_labels.push((g.clone(), e));
        }
    }
    let mut squares = SquareSet::new();
    for g in &elements {
        for sq in base.squares().squares() {
            let g_mid = group.op(g, c.edge_value(sq.lo));
            let g_mid2 = group.op(g, c.edge_value(sq.hi2));
            let parts = (
                edge_index.get(&(g.clone(), sq.lo)),
                edge_index.get(&(g_mid, sq.hi)),
                edge_index.get(&(g.clone(), sq.hi2)),
                edge_index.get(&(g_mid2, sq.lo2)),
            );
            if let (Some(&a), Some(&b), Some(&b2), Some(&a2)) = parts {
                squares.insert(a, b, b2, a2);
            }
        }
    }
    let interior = if group.is_windowed() || base.is_windowed() {
        let mut steps: BTreeSet<GroupElem> = BTreeSet::new();
        steps.insert(group.identity());
        for x in c.values() {
            steps.insert(x.clone());
            for y in c.values() {
                steps.insert(group.op(x, y));
            }
        }
        Some(
            vertex_labels
                .iter()
                .map(|(g, v)| base.is_interior(*v) && steps.iter().all(|h| group.in_window(&group.op(g, h))))
                .collect(),
        )
    } else {
        None
    };
    let graph = KGraph::build(sk, squares, interior)?;
    Ok(SkewProduct {
        graph,
        group,
        vertex_labels,
        edge_labels,
        vertex_index,
        edge_index,
    })
}

/// `Λ/G` for a free action. Each orbit is represented by its vertex of
/// smallest id, and each quotient edge by its lift whose range is a
/// representative; quotient names are the names of these lifts.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: KGraph,
    vertex_class: Vec<VertexId>,
    edge_class: Vec<EdgeId>,
    reps: Vec<VertexId>,
    edge_lifts: Vec<EdgeId>,
    /// `offset[v]` is the unique `g` with `v = g·rep(v)`.
    offset: Vec<GroupElem>,
}

impl Quotient {
    pub fn vertex_class(&self, v: VertexId) -> VertexId {
        self.vertex_class[v.index()]
    }

    pub fn edge_class(&self, e: EdgeId) -> EdgeId {
        self.edge_class[e.index()]
    }

    pub fn representative(&self, q: VertexId) -> VertexId {
        self.reps[q.index()]
    }

    pub fn edge_lift(&self, q: EdgeId) -> EdgeId {
        self.edge_lifts[q.index()]
    }

    pub fn offset(&self, v: VertexId) -> &GroupElem {
        &self.offset[v.index()]
    }

    /// The quotient functor on morphisms.
    pub fn project(&self, m: &Morphism) -> Result<Morphism> {
        let word: Vec<EdgeId> = m.word().iter().map(|&e| self.edge_class(e)).collect();
        self.graph.from_edges(self.vertex_class(m.range()), &word)
    }
}

pub fn quotient(base: &KGraph, action: &GroupAction) -> Result<Quotient> {
    for (g, p) in action.elements() {
        check_automorphism(base, p).map_err(|m| Error::IncompatibleAction(format!("element {g}: {m}")))?;
    }
    if let Some((g, v)) = action.fixed_vertex() {
        return Err(Error::NonFreeAction(format!("{g} fixes vertex {}", base.vertex_name(v))));
    }
    let nv = base.vertex_count();
    let mut rep_of = vec![None::<(VertexId, GroupElem)>; nv];
    let mut reps = Vec::new();
    for v in base.vertices() {
        if rep_of[v.index()].is_some() {
            continue;
        }
        reps.push(v);
        for (g, p) in action.elements() {
            rep_of[p.vertex(v).index()] = Some((v, g.clone()));
        }
    }
    let class_of_rep: HashMap<VertexId, VertexId> = reps.iter().enumerate().map(|(i, &r)| (r, VertexId(i as u32))).collect();
    let (vertex_class, offset): (Vec<VertexId>, Vec<GroupElem>) = rep_of
        .into_iter()
        .map(|x| {
            let (r, g) = x.expect("every vertex lies in an orbit");
            (class_of_rep[&r], g)
        })
        .unzip();

    let mut sk = Skeleton::new(base.rank())?;
    for &r in &reps {
        sk.add_vertex(base.vertex_name(r))?;
    }
    let mut edge_lifts = Vec::new();
    let mut lift_index = HashMap::new();
    for &r in &reps {
        for c in 0..base.rank() {
            for &e in base.edges_into(r, c) {
                let x = base.edge(e);
                let id = sk.add_edge_ids(c, &x.name, vertex_class[r.index()], vertex_class[x.source.index()])?;
                lift_index.insert(e, id);
                edge_lifts.push(e);
            }
        }
    }
    let inverse_action = |v: VertexId| action.permutation(&action.group().inverse(&offset[v.index()])).clone();
    let edge_class: Vec<EdgeId> = base
        .edge_ids()
        .map(|e| {
            let back = inverse_action(base.edge(e).range);
            lift_index[&back.edge(e)]
        })
        .collect();
    let mut squares = SquareSet::new();
    for sq in base.squares().squares() {
        if reps.contains(&base.edge(sq.lo).range) {
            squares.insert(
                edge_class[sq.lo.index()],
                edge_class[sq.hi.index()],
                edge_class[sq.hi2.index()],
                edge_class[sq.lo2.index()],
            );
        }
    }
    let interior = base
        .is_windowed()
        .then(|| reps.iter().map(|&r| base.is_interior(r)).collect());
    let graph = KGraph::build(sk, squares, interior).map_err(|e| Error::IncompatibleAction(e.to_string()))?;
    Ok(Quotient {
        graph,
        vertex_class,
        edge_class,
        reps,
        edge_lifts,
        offset,
    })
}

/// The output of cocycle recovery: `Λ/G`, the cocycle `c` on it, the skew
/// product `G ×_c (Λ/G)` and the isomorphism `(g, λ) ↦ g·λ′` onto `Λ`.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub quotient: Quotient,
    pub cocycle: Cocycle,
    pub skew: SkewProduct,
    pub iso: Isomorphism,
}

/// Chooses representatives `v′` (smallest vertex id per orbit), lifts `λ′`
/// with `r(λ′) = r(λ)′`, and defines `c` by `s(λ′) = c(λ)·s(λ)′`.
pub fn recover_cocycle(base: &KGraph, action: &GroupAction, check_degree: &Degree) -> Result<Recovery> {
    let q = quotient(base, action)?;
    let values: Vec<GroupElem> = q
        .graph
        .edge_ids()
        .map(|e| q.offset(base.edge(q.edge_lift(e)).source).clone())
        .collect();
    let cocycle = Cocycle::new(&q.graph, action.group().clone(), values)?;
    let skew = skew_product(&cocycle, &q.graph)?;
    let vertices = skew
        .graph
        .vertices()
        .map(|w| {
            let (g, v) = skew.vertex_label(w);
            action.permutation(g).vertex(q.representative(*v))
        })
        .collect();
    let edges = skew
        .graph
        .edge_ids()
        .map(|x| {
            let (g, e) = skew.edge_label(x);
            action.permutation(g).edge(q.edge_lift(*e))
        })
        .collect();
    let iso = Isomorphism { vertices, edges };
    iso.verify(&skew.graph, base, check_degree)
        .map_err(|m| Error::IncompatibleAction(format!("recovered isomorphism fails: {m}")))?;
    Ok(Recovery {
        quotient: q,
        cocycle,
        skew,
        iso,
    })
}

impl Recovery {
    /// Checks `Φ(h·x) = h·Φ(x)` for every group generator `h` on every
    /// vertex and edge of the skew product.
    pub fn check_equivariance(&self, action: &GroupAction) -> std::result::Result<(), String> {
        let group = action.group();
        for i in 0..group.rank() {
            let h = group.generator(i);
            let ph = action.permutation(&h);
            for w in self.skew.graph.vertices() {
                let (g, v) = self.skew.vertex_label(w);
                let moved = self.skew.vertex(&group.op(&h, g), *v).expect("finite carrier");
                if self.iso.vertices[moved.index()] != ph.vertex(self.iso.vertices[w.index()]) {
                    return Err(format!("vertex {} breaks equivariance under {h}", self.skew.graph.vertex_name(w)));
                }
            }
            for x in self.skew.graph.edge_ids() {
                let (g, e) = self.skew.edge_label(x);
                let moved = self.skew.edge(&group.op(&h, g), *e).expect("finite carrier");
                if self.iso.edges[moved.index()] != ph.edge(self.iso.edges[x.index()]) {
                    return Err(format!("edge {} breaks equivariance under {h}", self.skew.graph.edge_name(x)));
                }
            }
        }
        Ok(())
    }
}

pub type EdgePair = (EdgeId, EdgeId);

/// A bijection `θ: A¹∗B¹ → B¹∗A¹`, `(α, β) ↦ (β′, α′)`, with `α, α′` edges of
/// `A` and `β, β′` edges of `B` (ids in their own graphs).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgePairing {
    entries: Vec<(EdgePair, EdgePair)>,
}

impl EdgePairing {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, alpha: EdgeId, beta: EdgeId, beta2: EdgeId, alpha2: EdgeId) {
        self.entries.push(((alpha, beta), (beta2, alpha2)));
    }

    pub fn entries(&self) -> &[(EdgePair, EdgePair)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `θ = ι` for `A = B`: `(α, β) ↦ (α, β)` read in `B¹∗A¹`.
    pub fn identity(a: &KGraph) -> Self {
        let mut p = EdgePairing::new();
        for x in a.edge_ids() {
            for &y in a.edges_into(a.edge(x).source, 0) {
                p.insert(x, y, x, y);
            }
        }
        p
    }

    /// The flip `(α, β) ↦ (β, α)` for `A = B`.
    pub fn flip(a: &KGraph) -> Self {
        let mut p = EdgePairing::new();
        for x in a.edge_ids() {
            for &y in a.edges_into(a.edge(x).source, 0) {
                p.insert(x, y, y, x);
            }
        }
        p
    }
}

/// `A ∗_θ B`: vertices of `A`, `A`-edges in color 1, `B`-edges in color 2.
/// `B`-edge names that clash with `A` names get a `'` suffix.
pub fn assemble_2graph(a: &KGraph, b: &KGraph, theta: &EdgePairing) -> Result<KGraph> {
    for g in [a, b] {
        if g.rank() != 1 {
            return Err(Error::RankMismatch {
                expected: 1,
                found: format!("a rank-{} graph", g.rank()),
            });
        }
    }
    let names_a: BTreeSet<&str> = a.vertices().map(|v| a.vertex_name(v)).collect();
    let names_b: BTreeSet<&str> = b.vertices().map(|v| b.vertex_name(v)).collect();
    if names_a != names_b {
        let diff: Vec<&str> = names_a.symmetric_difference(&names_b).copied().collect();
        return Err(Error::VertexSetMismatch(diff.join(", ")));
    }
    let to_a: Vec<VertexId> = b.vertices().map(|v| a.vertex(b.vertex_name(v)).expect("same names")).collect();
    let ma = a.edge_matrix(0);
    let mut mb = crate::matrix::IntMatrix::zeros(a.vertex_count());
    for e in b.skeleton().edges() {
        mb.add_at(to_a[e.range.index()].index(), to_a[e.source.index()].index(), 1);
    }
    if ma.mul(&mb) != mb.mul(&ma) {
        return Err(Error::NonCommutingMatrices);
    }

    let mut sk = Skeleton::new(2)?;
    for v in a.vertices() {
        sk.add_vertex(a.vertex_name(v))?;
    }
    let a_edges: Vec<EdgeId> = a
        .skeleton()
        .edges()
        .iter()
        .map(|e| sk.add_edge_ids(0, &e.name, e.range, e.source))
        .collect::<Result<_>>()?;
    let mut b_edges = Vec::new();
    for e in b.skeleton().edges() {
        let mut name = e.name.clone();
        while sk.edge_by_name(&name).is_some() || a.edge_by_name(&name).is_some() {
            name.push('\'');
        }
        b_edges.push(sk.add_edge_ids(1, &name, to_a[e.range.index()], to_a[e.source.index()])?);
    }
    let invalid = |m: String| Error::InvalidTheta(m);
    let mut squares = SquareSet::new();
    for &((alpha, beta), (beta2, alpha2)) in theta.entries() {
        if alpha.index() >= a_edges.len()
            || alpha2.index() >= a_edges.len()
            || beta.index() >= b_edges.len()
            || beta2.index() >= b_edges.len()
        {
            return Err(invalid("entry references an edge outside A or B".into()));
        }
        squares.insert(a_edges[alpha.index()], b_edges[beta.index()], b_edges[beta2.index()], a_edges[alpha2.index()]);
    }
    KGraph::build(sk, squares, None).map_err(|e| match e {
        Error::FactorizationError(m) => invalid(m),
        other => other,
    })
}
