//! Exact computation in the dense *-subalgebra of `C*(Λ)` spanned by the
//! monomials `s_λ s_μ*` with `s(λ) = s(μ)`.
//!
//! Formal sums of monomials are not canonical: `s_λ s_μ* = Σ s_{λγ} s_{μγ}*`
//! over `γ ∈ Λⁿ(s(λ))`. Within a fixed grade `d(λ) − d(μ)`, refining every
//! monomial to a common `d(λ)` gives linearly independent monomials, so two
//! elements are equal exactly when their difference refines to zero.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::constructions::Pullback;
use crate::degree::{Degree, Grade};
use crate::error::{Error, Result};
use crate::graph::{KGraph, Morphism};
use crate::group::{Cocycle, GroupElem};
use crate::matrix::IntMatrix;
use crate::skeleton::VertexId;

/// An exact Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_integer(1)
    }

    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::new(BigRational::new(BigInt::from(n), BigInt::from(d)), BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.re.clone(), -self.im.clone())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |x: &BigRational| {
            if x.is_one() {
                "i".to_string()
            } else if x.is_integer() {
                format!("{x}i")
            } else {
                format!("({x})i")
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}", imag(&-self.im.clone()))
            } else {
                write!(f, "{}", imag(&self.im))
            }
        } else if self.im.is_negative() {
            write!(f, "({}-{})", self.re, imag(&-self.im.clone()))
        } else {
            write!(f, "({}+{})", self.re, imag(&self.im))
        }
    }
}

pub type Key = (Morphism, Morphism);

/// A finite combination of monomials `s_λ s_μ*`. The derived equality is
/// literal equality of the stored sums; use [`Element::same_element`] for
/// equality in the algebra.
#[derive(Clone, Debug)]
pub struct Element<'g> {
    graph: &'g KGraph,
    terms: BTreeMap<Key, Scalar>,
}

impl PartialEq for Element<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph) && self.terms == other.terms
    }
}

fn grade(key: &Key) -> Grade {
    key.0.degree().grade_minus(key.1.degree())
}

/// The pairs `(γ, δ)` with `μγ = αδ` and `d(μγ) = q`, so that
/// `s_μ* s_α = Σ s_γ s_δ*`.
pub fn star_expand(g: &KGraph, mu: &Morphism, alpha: &Morphism, q: &Degree) -> Result<Vec<(Morphism, Morphism)>> {
    let too_small = |d: &Degree| Error::DegreeTooSmall {
        target: q.to_string(),
        degree: d.to_string(),
    };
    let gdeg = q.checked_sub(mu.degree()).ok_or_else(|| too_small(mu.degree()))?;
    let ddeg = q.checked_sub(alpha.degree()).ok_or_else(|| too_small(alpha.degree()))?;
    if mu.range() != alpha.range() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for gamma in g.morphisms(mu.source(), &gdeg)? {
        let nu = g.compose(mu, &gamma)?;
        let (head, delta) = g.factor(&nu, alpha.degree(), &ddeg)?;
        if &head == alpha {
            out.push((gamma, delta));
        }
    }
    Ok(out)
}

impl<'g> Element<'g> {
    pub fn zero(graph: &'g KGraph) -> Self {
        Element {
            graph,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(graph: &'g KGraph, lambda: Morphism, mu: Morphism) -> Result<Self> {
        if lambda.source() != mu.source() {
            return Err(Error::SourceMismatch(
                graph.vertex_name(lambda.source()).into(),
                graph.vertex_name(mu.source()).into(),
            ));
        }
        let mut x = Element::zero(graph);
        x.terms.insert((lambda, mu), Scalar::one());
        Ok(x)
    }

    /// `s_λ`.
    pub fn s(graph: &'g KGraph, lambda: &Morphism) -> Self {
        let id = graph.identity(lambda.source());
        Element::monomial(graph, lambda.clone(), id).expect("sources agree")
    }

    /// `s_λ*`.
    pub fn s_star(graph: &'g KGraph, lambda: &Morphism) -> Self {
        Element::s(graph, lambda).adjoint()
    }

    /// `p_λ = s_λ s_λ*`.
    pub fn projection(graph: &'g KGraph, lambda: &Morphism) -> Self {
        Element::monomial(graph, lambda.clone(), lambda.clone()).expect("sources agree")
    }

    /// `p_v`.
    pub fn vertex_projection(graph: &'g KGraph, v: VertexId) -> Self {
        Element::projection(graph, &graph.identity(v))
    }

    /// `Σ_v p_v`, the unit.
    pub fn unit(graph: &'g KGraph) -> Self {
        let mut x = Element::zero(graph);
        for v in graph.vertices() {
            x.terms.insert((graph.identity(v), graph.identity(v)), Scalar::one());
        }
        x
    }

    pub fn graph(&self) -> &'g KGraph {
        self.graph
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No stored terms. An element may vanish in the algebra while its
    /// formal sum is nonempty; see [`Element::is_zero_element`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_graph(&self, other: &Element<'_>) -> Result<()> {
        if std::ptr::eq(self.graph, other.graph) {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    fn accumulate(&mut self, key: Key, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Element<'_>) -> Result<Element<'g>> {
        self.same_graph(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element<'_>) -> Result<Element<'g>> {
        self.add(&other.scale(&-&Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Element<'g> {
        let mut out = Element::zero(self.graph);
        for (k, x) in &self.terms {
            out.accumulate(k.clone(), x * c);
        }
        out
    }

    /// Product with `s_μ* s_α` expanded at `q = d(μ) ∨ d(α)`.
    pub fn multiply(&self, other: &Element<'_>) -> Result<Element<'g>> {
        self.multiply_at(other, &Degree::zero(self.graph.rank()))
    }

    /// Product with `s_μ* s_α` expanded at `q = d(μ) ∨ d(α) + extra`.
    pub fn multiply_at(&self, other: &Element<'_>, extra: &Degree) -> Result<Element<'g>> {
        self.same_graph(other)?;
        let g = self.graph;
        let mut out = Element::zero(g);
        for ((lambda, mu), x) in &self.terms {
            for ((alpha, beta), y) in &other.terms {
                let q = &mu.degree().join(alpha.degree()) + extra;
                let c = x * y;
                for (gamma, delta) in star_expand(g, mu, alpha, &q)? {
                    out.accumulate((g.compose(lambda, &gamma)?, g.compose(beta, &delta)?), c.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Element<'g> {
        let mut out = Element::zero(self.graph);
        for ((lambda, mu), c) in &self.terms {
            out.accumulate((mu.clone(), lambda.clone()), c.conj());
        }
        out
    }

    /// The grades `d(λ) − d(μ)` that occur.
    pub fn grades(&self) -> BTreeSet<Grade> {
        self.terms.keys().map(grade).collect()
    }

    /// Rewrites every monomial via `s_λ s_μ* = Σ s_{λγ} s_{μγ}*` so that
    /// `d(λ) = target`.
    pub fn refine(&self, target: &Degree) -> Result<Element<'g>> {
        let g = self.graph;
        let mut out = Element::zero(g);
        for ((lambda, mu), c) in &self.terms {
            let n = target.checked_sub(lambda.degree()).ok_or_else(|| Error::DegreeTooSmall {
                target: target.to_string(),
                degree: lambda.degree().to_string(),
            })?;
            for gamma in g.morphisms(lambda.source(), &n)? {
                out.accumulate((g.compose(lambda, &gamma)?, g.compose(mu, &gamma)?), c.clone());
            }
        }
        Ok(out)
    }

    /// Each grade class refined to the join of its `d(λ)`.
    pub fn canonical(&self) -> Result<Element<'g>> {
        let mut classes: BTreeMap<Grade, Element<'g>> = BTreeMap::new();
        for (k, c) in &self.terms {
            classes
                .entry(grade(k))
                .or_insert_with(|| Element::zero(self.graph))
                .accumulate(k.clone(), c.clone());
        }
        let mut out = Element::zero(self.graph);
        for class in classes.values() {
            let target = class
                .terms
                .keys()
                .fold(Degree::zero(self.graph.rank()), |acc, (l, _)| acc.join(l.degree()));
            for (k, c) in class.refine(&target)?.terms {
                out.accumulate(k, c);
            }
        }
        Ok(out)
    }

    pub fn is_zero_element(&self) -> Result<bool> {
        Ok(self.canonical()?.is_empty())
    }

    /// Equality in the algebra, decided by common refinement.
    pub fn same_element(&self, other: &Element<'_>) -> Result<bool> {
        self.sub(other)?.is_zero_element()
    }

    /// `Φ`: keeps the grade-zero monomials.
    pub fn expectation(&self) -> Element<'g> {
        let mut out = Element::zero(self.graph);
        for (k, c) in &self.terms {
            if k.0.degree() == k.1.degree() {
                out.accumulate(k.clone(), c.clone());
            }
        }
        out
    }

    /// Splits into components indexed by `c(λ)c(μ)⁻¹`.
    pub fn cocycle_grading(&self, c: &Cocycle) -> Result<BTreeMap<GroupElem, Element<'g>>> {
        if c.values().len() != self.graph.skeleton().edge_count() {
            return Err(Error::GraphMismatch);
        }
        let group = c.group();
        let mut out: BTreeMap<GroupElem, Element<'g>> = BTreeMap::new();
        for ((lambda, mu), x) in &self.terms {
            let key = group.op(&c.value(lambda), &group.inverse(&c.value(mu)));
            out.entry(key)
                .or_insert_with(|| Element::zero(self.graph))
                .accumulate((lambda.clone(), mu.clone()), x.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for Element<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let g = self.graph;
        for (i, ((lambda, mu), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} * s{} s{}^*", g.display_morphism(lambda), g.display_morphism(mu))?;
        }
        Ok(())
    }
}

/// `π_f`: maps `(λ, n) ↦ λ` monomial-wise from `f*(Λ)` to `Λ`.
pub fn algebra_map_pullback<'g>(pb: &Pullback, base: &'g KGraph, x: &Element<'_>) -> Result<Element<'g>> {
    if !std::ptr::eq(x.graph, &pb.graph) {
        return Err(Error::GraphMismatch);
    }
    let mut out = Element::zero(base);
    for ((lambda, mu), c) in &x.terms {
        out.accumulate((pb.project(base, lambda)?, pb.project(base, mu)?), c.clone());
    }
    Ok(out)
}

/// One relation of the Cuntz–Krieger family, with the number of instances
/// checked and a description of each violation.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationCheck {
    fn new(name: &'static str) -> Self {
        RelationCheck {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub relations: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(RelationCheck::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.relations {
            let status = if r.passed() { "pass" } else { "FAIL" };
            out.push_str(&format!("{status} {} ({} instances)\n", r.name, r.checked));
            for f in &r.failures {
                out.push_str(&format!("  {f}\n"));
            }
        }
        out
    }
}

fn morphisms_up_to(g: &KGraph, bound: &Degree) -> Result<Vec<Morphism>> {
    let mut out = Vec::new();
    for n in bound.box_below() {
        out.extend(g.morphisms_of_degree(&n)?);
    }
    Ok(out)
}

/// Expands `p_v` one edge at a time, color by color in the given order.
fn expand_by_edges(g: &KGraph, v: VertexId, n: &Degree, colors: &[usize]) -> Result<BTreeSet<Morphism>> {
    let mut paths = vec![g.identity(v)];
    for &c in colors {
        let unit = Degree::unit(g.rank(), c);
        for _ in 0..n.get(c) {
            let mut next = Vec::new();
            for lambda in &paths {
                for e in g.morphisms(lambda.source(), &unit)? {
                    next.push(g.compose(lambda, &e)?);
                }
            }
            paths = next;
        }
    }
    let count = paths.len();
    let set: BTreeSet<Morphism> = paths.into_iter().collect();
    if set.len() != count {
        return Err(Error::FactorizationError("edge expansion produced a repeated path".into()));
    }
    Ok(set)
}

/// Verifies relations (i)–(iv) symbolically for every morphism of degree
/// at most `bound`. Relation (iv) for a general `n` is obtained by
/// expanding `p_v` through the single-edge relations, in ascending and in
/// descending color order, and compared with `Σ_{λ ∈ Λⁿ(v)} p_λ`.
pub fn check_ck_relations(g: &KGraph, bound: &Degree) -> Result<RelationReport> {
    let mut r1 = RelationCheck::new("(i) p_v p_w = δ_{v,w} p_v");
    for v in g.vertices() {
        for w in g.vertices() {
            let prod = Element::vertex_projection(g, v).multiply(&Element::vertex_projection(g, w))?;
            let expected = if v == w {
                Element::vertex_projection(g, v)
            } else {
                Element::zero(g)
            };
            r1.record(prod.same_element(&expected)?, || {
                format!("p_{} p_{}", g.vertex_name(v), g.vertex_name(w))
            });
        }
    }
    let all = morphisms_up_to(g, bound)?;
    let mut r2 = RelationCheck::new("(ii) s_{λμ} = s_λ s_μ");
    let mut r3 = RelationCheck::new("(iii) s_λ^* s_λ = p_{s(λ)}");
    for nu in &all {
        for m in nu.degree().box_below() {
            let rest = nu.degree().checked_sub(&m).expect("m ≤ d(ν)");
            let (lambda, mu) = g.factor(nu, &m, &rest)?;
            let prod = Element::s(g, &lambda).multiply(&Element::s(g, &mu))?;
            r2.record(prod.same_element(&Element::s(g, nu))?, || g.word_string(nu));
        }
        let prod = Element::s_star(g, nu).multiply(&Element::s(g, nu))?;
        r3.record(prod.same_element(&Element::vertex_projection(g, nu.source()))?, || {
            g.word_string(nu)
        });
    }
    let mut r4 = RelationCheck::new("(iv) p_v = Σ_{λ ∈ Λⁿ(v)} s_λ s_λ^*");
    let ascending: Vec<usize> = (0..g.rank()).collect();
    let descending: Vec<usize> = (0..g.rank()).rev().collect();
    for n in bound.box_below() {
        for v in g.vertices() {
            let direct: BTreeSet<Morphism> = g.morphisms(v, &n)?.into_iter().collect();
            let up = expand_by_edges(g, v, &n, &ascending)?;
            let down = expand_by_edges(g, v, &n, &descending)?;
            let refined = Element::vertex_projection(g, v).refine(&n)?;
            let mut sum = Element::zero(g);
            for lambda in &direct {
                sum = sum.add(&Element::projection(g, lambda))?;
            }
            r4.record(up == direct && down == direct && refined == sum, || {
                format!("{} at degree {n}", g.vertex_name(v))
            });
        }
    }
    Ok(RelationReport {
        relations: vec![r1, r2, r3, r4],
    })
}

/// Compares `s_λ* s_μ` expanded at `q = d(λ) ∨ d(μ)` and at `q + (1, …, 1)`
/// for all pairs of morphisms of degree at most `bound`.
pub fn check_expansion_independence(g: &KGraph, bound: &Degree) -> Result<RelationCheck> {
    let mut check = RelationCheck::new("s_λ^* s_μ independent of q");
    let all = morphisms_up_to(g, bound)?;
    let step = Degree::diagonal(g.rank(), 1);
    for lambda in &all {
        for mu in all.iter().filter(|m| m.range() == lambda.range()) {
            let x = Element::s_star(g, lambda);
            let y = Element::s(g, mu);
            let least = x.multiply(&y)?;
            let larger = x.multiply_at(&y, &step)?;
            check.record(least.same_element(&larger)?, || {
                format!("{} vs {}", g.word_string(lambda), g.word_string(mu))
            });
        }
    }
    Ok(check)
}

/// The block `F_m(v)`, spanned by `s_λ s_μ*` with `λ, μ` in `basis`.
#[derive(Clone, Debug)]
pub struct FBlock {
    pub vertex: VertexId,
    pub basis: Vec<Morphism>,
}

#[derive(Clone, Debug)]
pub struct FDecomposition {
    pub degree: Degree,
    pub blocks: Vec<FBlock>,
    /// Number of monomial products verified against the matrix-unit law.
    pub products_checked: usize,
}

/// `F_m ≅ ⊕_v F_m(v)`, after checking
/// `(s_λ s_μ*)(s_α s_β*) = δ_{μ,α} s_λ s_β*` on every pair of monomials
/// with all four degrees equal to `m`.
pub fn f_block(g: &KGraph, m: &Degree) -> Result<FDecomposition> {
    let mut by_source: BTreeMap<VertexId, Vec<Morphism>> = BTreeMap::new();
    for lambda in g.morphisms_of_degree(m)? {
        by_source.entry(lambda.source()).or_default().push(lambda);
    }
    let blocks: Vec<FBlock> = by_source
        .into_iter()
        .map(|(vertex, basis)| FBlock { vertex, basis })
        .collect();
    let units: Vec<(&Morphism, &Morphism)> = blocks
        .iter()
        .flat_map(|b| b.basis.iter().flat_map(move |l| b.basis.iter().map(move |u| (l, u))))
        .collect();
    let mut checked = 0;
    for &(lambda, mu) in &units {
        let x = Element::monomial(g, lambda.clone(), mu.clone())?;
        for &(alpha, beta) in &units {
            let y = Element::monomial(g, alpha.clone(), beta.clone())?;
            let expected = if mu == alpha {
                Element::monomial(g, lambda.clone(), beta.clone())?
            } else {
                Element::zero(g)
            };
            if x.multiply(&y)? != expected {
                return Err(Error::MatrixUnitViolation(format!(
                    "({}, {}) · ({}, {})",
                    g.word_string(lambda),
                    g.word_string(mu),
                    g.word_string(alpha),
                    g.word_string(beta)
                )));
            }
            checked += 1;
        }
    }
    Ok(FDecomposition {
        degree: m.clone(),
        blocks,
        products_checked: checked,
    })
}

/// The AF core as a Bratteli diagram along `p = (1, …, 1)`.
#[derive(Clone, Debug)]
pub struct BratteliDiagram {
    pub vertex_names: Vec<String>,
    /// `sizes[ℓ][v] = #{λ ∈ Λ^{ℓp} : s(λ) = v}`.
    pub sizes: Vec<Vec<u64>>,
    /// `Mᵖ(v, w)`: multiplicity of the block at `v` in the block at `w`
    /// one level down.
    pub multiplicities: IntMatrix,
}

pub fn bratteli(g: &KGraph, levels: u32) -> Result<BratteliDiagram> {
    let n = g.vertex_count();
    let sizes = (0..=levels)
        .map(|l| {
            let m = g.vertex_matrix(&Degree::diagonal(g.rank(), l))?;
            Ok((0..n).map(|v| m.column_sum(v)).collect())
        })
        .collect::<Result<Vec<Vec<u64>>>>()?;
    Ok(BratteliDiagram {
        vertex_names: g.vertices().map(|v| g.vertex_name(v).to_string()).collect(),
        sizes,
        multiplicities: g.vertex_matrix(&Degree::diagonal(g.rank(), 1))?,
    })
}

impl BratteliDiagram {
    /// `N_{ℓ+1}(w) = Σ_v N_ℓ(v) Mᵖ(v, w)` at every level.
    pub fn check_recursion(&self) -> bool {
        self.sizes
            .windows(2)
            .all(|pair| self.multiplicities.left_apply(&pair[0]) == pair[1])
    }

    pub fn levels(&self) -> usize {
        self.sizes.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (l, row) in self.sizes.iter().enumerate() {
            let blocks: Vec<String> = row
                .iter()
                .enumerate()
                .filter(|(_, &s)| s > 0)
                .map(|(v, s)| format!("{}:{s}", self.vertex_names[v]))
                .collect();
            out.push_str(&format!("level {l}: {}\n", blocks.join(" ")));
        }
        out.push_str(&format!("multiplicities:\n{}", self.multiplicities));
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n");
        for (l, row) in self.sizes.iter().enumerate() {
            for (v, &s) in row.iter().enumerate() {
                if s > 0 {
                    out.push_str(&format!("  \"L{l}_{v}\" [label=\"{}:{s}\"];\n", self.vertex_names[v]));
                }
            }
        }
        for l in 0..self.sizes.len().saturating_sub(1) {
            for (v, &a) in self.sizes[l].iter().enumerate() {
                for (w, &b) in self.sizes[l + 1].iter().enumerate() {
                    let m = self.multiplicities.get(v, w);
                    if a > 0 && b > 0 && m > 0 {
                        out.push_str(&format!("  \"L{l}_{v}\" -> \"L{}_{w}\" [label=\"{m}\"];\n", l + 1));
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The block structure `A_n ≅ ⊕_{b(v) = n} K(ℓ²(s⁻¹(v)))` for a map
/// `b: Λ⁰ → ℤᵏ` with `d(λ) = b(s(λ)) − b(r(λ))`.
#[derive(Clone, Debug)]
pub struct AfGrading {
    /// Per grade `n`: the vertices with `b(v) = n` and `#{λ : s(λ) = v, d(λ) ≤ bound}`.
    pub blocks: BTreeMap<Grade, Vec<(VertexId, u64)>>,
    /// `(v, w, #{λ : r(λ) = v, s(λ) = w})` for `b(w) = b(v) + e_i`.
    pub embeddings: Vec<(VertexId, VertexId, u64)>,
    pub edges_checked: usize,
    pub morphisms_checked: usize,
}

/// Checks the hypothesis on every edge and square between interior
/// vertices and on every morphism of degree at most `bound` between them,
/// then reports the blocks of the grading.
pub fn af_grading(g: &KGraph, b: &[Grade], bound: &Degree) -> Result<AfGrading> {
    if b.len() != g.vertex_count() || b.iter().any(|x| x.len() != g.rank()) {
        return Err(Error::RankMismatch {
            expected: g.rank(),
            found: format!("a grading of {} vertices", b.len()),
        });
    }
    let fits = |m: &Morphism| {
        let expected: Grade = b[m.source().index()]
            .iter()
            .zip(&b[m.range().index()])
            .map(|(s, r)| s - r)
            .collect();
        m.degree().to_grade() == expected
    };
    let inside = |v: VertexId| g.is_interior(v);
    let mut edges_checked = 0;
    for e in g.edge_ids() {
        let m = g.edge_morphism(e);
        if inside(m.range()) && inside(m.source()) {
            edges_checked += 1;
            if !fits(&m) {
                return Err(Error::GradingHypothesisViolated(g.edge_name(e).to_string()));
            }
        }
    }
    for sq in g.squares().squares() {
        let ends = [g.edge(sq.lo).range, g.edge(sq.hi).source, g.edge(sq.lo).source, g.edge(sq.hi2).source];
        if ends.iter().all(|&v| inside(v)) {
            let path = g.from_edges(ends[0], &[sq.lo, sq.hi])?;
            if !fits(&path) {
                return Err(Error::GradingHypothesisViolated(g.edge_name(sq.lo).to_string()));
            }
        }
    }
    let mut into: HashMap<VertexId, u64> = HashMap::new();
    let mut morphisms_checked = 0;
    for n in bound.box_below() {
        for v in g.vertices().filter(|&v| inside(v)) {
            for m in g.morphisms(v, &n)? {
                if !inside(m.source()) {
                    continue;
                }
                morphisms_checked += 1;
                if !fits(&m) {
                    return Err(Error::GradingHypothesisViolated(g.word_string(&m)));
                }
                *into.entry(m.source()).or_default() += 1;
            }
        }
    }
    let mut blocks: BTreeMap<Grade, Vec<(VertexId, u64)>> = BTreeMap::new();
    for v in g.vertices().filter(|&v| inside(v)) {
        blocks
            .entry(b[v.index()].clone())
            .or_default()
            .push((v, into.get(&v).copied().unwrap_or(0)));
    }
    let mut embeddings = Vec::new();
    for c in 0..g.rank() {
        let unit = Degree::unit(g.rank(), c);
        for v in g.vertices().filter(|&v| inside(v)) {
            let mut counts: BTreeMap<VertexId, u64> = BTreeMap::new();
            for m in g.morphisms(v, &unit)? {
                if inside(m.source()) {
                    *counts.entry(m.source()).or_default() += 1;
                }
            }
            embeddings.extend(counts.into_iter().map(|(w, k)| (v, w, k)));
        }
    }
    Ok(AfGrading {
        blocks,
        embeddings,
        edges_checked,
        morphisms_checked,
    })
}

/// A column of a truncated operator; `None` when the truncation does not
/// determine it.
pub type Column = Option<BTreeMap<usize, Scalar>>;

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    columns: Vec<Column>,
}

impl Operator {
    pub fn column(&self, i: usize) -> &Column {
        &self.columns[i]
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let col = col.as_ref()?;
                let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (&j, c) in col {
                    for (&i, x) in self.columns[j].as_ref()? {
                        let sum = out.get(&i).map_or_else(|| x * c, |prev| prev + &(x * c));
                        if sum.is_zero() {
                            out.remove(&i);
                        } else {
                            out.insert(i, sum);
                        }
                    }
                }
                Some(out)
            })
            .collect();
        Operator { columns }
    }

    pub fn add(&self, other: &Operator) -> Operator {
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let (a, b) = (a.as_ref()?, b.as_ref()?);
                let mut out = a.clone();
                for (&i, x) in b {
                    let sum = out.get(&i).map_or_else(|| x.clone(), |prev| prev + x);
                    if sum.is_zero() {
                        out.remove(&i);
                    } else {
                        out.insert(i, sum);
                    }
                }
                Some(out)
            })
            .collect();
        Operator { columns }
    }

    pub fn scale(&self, c: &Scalar) -> Operator {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                Some(
                    col.as_ref()?
                        .iter()
                        .map(|(&i, x)| (i, x * c))
                        .filter(|(_, x)| !x.is_zero())
                        .collect(),
                )
            })
            .collect();
        Operator { columns }
    }

    /// Compares on the columns both operators determine; returns how many
    /// were compared and the first disagreeing column.
    pub fn agree_where_defined(&self, other: &Operator) -> (usize, Option<usize>) {
        let mut compared = 0;
        for (i, (a, b)) in self.columns.iter().zip(&other.columns).enumerate() {
            if let (Some(a), Some(b)) = (a, b) {
                compared += 1;
                if a != b {
                    return (compared, Some(i));
                }
            }
        }
        (compared, None)
    }
}

/// The representation `S_λ e_y = e_{λy}`, truncated to basis
/// vectors indexed by morphisms `y` with `d(y) ≤ depth`. The vector `e_y`
/// stands for the cylinder of infinite paths with prefix `y`, so a column
/// is recorded only when that prefix determines the image.
pub struct InteriorRep<'g> {
    graph: &'g KGraph,
    depth: Degree,
    basis: Vec<Morphism>,
    index: HashMap<Morphism, usize>,
}

impl<'g> InteriorRep<'g> {
    pub fn new(graph: &'g KGraph, depth: &Degree) -> Result<Self> {
        let basis = morphisms_up_to(graph, depth)?;
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(InteriorRep {
            graph,
            depth: depth.clone(),
            basis,
            index,
        })
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    fn unit_column(&self, m: &Morphism) -> Column {
        Some(BTreeMap::from([(self.index[m], Scalar::one())]))
    }

    /// `S_λ`.
    pub fn s(&self, lambda: &Morphism) -> Result<Operator> {
        let g = self.graph;
        let columns = self
            .basis
            .iter()
            .map(|y| {
                if y.range() != lambda.source() {
                    Ok(Some(BTreeMap::new()))
                } else if (lambda.degree() + y.degree()).le(&self.depth) {
                    Ok(self.unit_column(&g.compose(lambda, y)?))
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Operator { columns })
    }

    /// `S_λ*`.
    pub fn s_star(&self, lambda: &Morphism) -> Result<Operator> {
        let g = self.graph;
        let columns = self
            .basis
            .iter()
            .map(|z| {
                if z.range() != lambda.range() {
                    return Ok(Some(BTreeMap::new()));
                }
                if lambda.degree().le(z.degree()) {
                    let rest = z.degree().checked_sub(lambda.degree()).expect("d(λ) ≤ d(z)");
                    let (head, tail) = g.factor(z, lambda.degree(), &rest)?;
                    return Ok(if &head == lambda {
                        self.unit_column(&tail)
                    } else {
                        Some(BTreeMap::new())
                    });
                }
                let common = lambda.degree().meet(z.degree());
                let zero = Degree::zero(g.rank());
                if g.segment(z, &zero, &common)? != g.segment(lambda, &zero, &common)? {
                    Ok(Some(BTreeMap::new()))
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Operator { columns })
    }

    pub fn vertex_projection(&self, v: VertexId) -> Operator {
        let columns = self
            .basis
            .iter()
            .map(|y| {
                if y.range() == v {
                    self.unit_column(y)
                } else {
                    Some(BTreeMap::new())
                }
            })
            .collect();
        Operator { columns }
    }

    pub fn zero(&self) -> Operator {
        Operator {
            columns: vec![Some(BTreeMap::new()); self.basis.len()],
        }
    }

    /// The operator of an algebra element, term by term.
    pub fn element(&self, x: &Element<'_>) -> Result<Operator> {
        if !std::ptr::eq(x.graph, self.graph) {
            return Err(Error::GraphMismatch);
        }
        let mut acc = self.zero();
        for ((lambda, mu), c) in &x.terms {
            acc = acc.add(&self.s(lambda)?.mul(&self.s_star(mu)?).scale(c));
        }
        Ok(acc)
    }

    /// Relations (i)–(iv) as matrices for every morphism of degree at most
    /// `bound`. (i) and (ii) must hold column for column, including which
    /// columns are determined; (iii) and (iv) are compared on the columns
    /// both sides determine.
    pub fn check_relations(&self, bound: &Degree) -> Result<RelationReport> {
        let g = self.graph;
        let mut r1 = RelationCheck::new("(i) P_v P_w = δ_{v,w} P_v");
        for v in g.vertices() {
            for w in g.vertices() {
                let prod = self.vertex_projection(v).mul(&self.vertex_projection(w));
                let expected = if v == w { self.vertex_projection(v) } else { self.zero() };
                r1.record(prod == expected, || format!("{} {}", g.vertex_name(v), g.vertex_name(w)));
            }
        }
        let all = morphisms_up_to(g, bound)?;
        let mut r2 = RelationCheck::new("(ii) S_{λμ} = S_λ S_μ");
        let mut r3 = RelationCheck::new("(iii) S_λ^* S_λ = P_{s(λ)} where S_λ is determined");
        for nu in &all {
            for m in nu.degree().box_below() {
                let rest = nu.degree().checked_sub(&m).expect("m ≤ d(ν)");
                let (lambda, mu) = g.factor(nu, &m, &rest)?;
                r2.record(self.s(&lambda)?.mul(&self.s(&mu)?) == self.s(nu)?, || g.word_string(nu));
            }
            let lhs = self.s_star(nu)?.mul(&self.s(nu)?);
            let (compared, bad) = lhs.agree_where_defined(&self.vertex_projection(nu.source()));
            r3.record(bad.is_none() && compared > 0, || g.word_string(nu));
        }
        let mut r4 = RelationCheck::new("(iv) Σ S_λ S_λ^* = P_v on interior vectors");
        for n in bound.box_below() {
            for v in g.vertices() {
                let mut sum = self.zero();
                for lambda in g.morphisms(v, &n)? {
                    sum = sum.add(&self.s(&lambda)?.mul(&self.s_star(&lambda)?));
                }
                let (compared, bad) = sum.agree_where_defined(&self.vertex_projection(v));
                r4.record(bad.is_none() && compared > 0, || format!("{} at {n}", g.vertex_name(v)));
            }
        }
        Ok(RelationReport {
            relations: vec![r1, r2, r3, r4],
        })
    }

    /// Compares the symbolic product with the matrix product; returns the
    /// number of interior columns compared, or the first disagreeing basis
    /// vector.
    pub fn check_product(&self, x: &Element<'_>, y: &Element<'_>) -> Result<std::result::Result<usize, Morphism>> {
        let symbolic = self.element(&x.multiply(y)?)?;
        let matrix = self.element(x)?.mul(&self.element(y)?);
        let (compared, bad) = symbolic.agree_where_defined(&matrix);
        Ok(match bad {
            Some(i) => Err(self.basis[i].clone()),
            None => Ok(compared),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn word(g: &KGraph, w: &str) -> Morphism {
        g.parse_word(w, None).unwrap()
    }

    #[test]
    fn scalar_rendering() {
        assert_eq!(Scalar::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::i().to_string(), "i");
        assert_eq!((-&Scalar::i()).to_string(), "-i");
        assert_eq!((&Scalar::one() + &Scalar::i()).to_string(), "(1+i)");
        assert_eq!((&Scalar::i() * &Scalar::i()).to_string(), "-1");
    }

    #[test]
    fn orthogonal_edges_multiply_to_zero() {
        let g = fixtures::o2();
        let x = Element::s_star(&g, &word(&g, "e")).multiply(&Element::s(&g, &word(&g, "f"))).unwrap();
        assert!(x.is_empty());
        let y = Element::s_star(&g, &word(&g, "e")).multiply(&Element::s(&g, &word(&g, "e"))).unwrap();
        assert_eq!(y.to_string(), "1 * s() s()^*");
    }

    #[test]
    fn t2_expansion_is_a_single_term() {
        let g = fixtures::t(2);
        let x = Element::s_star(&g, &word(&g, "a1")).multiply(&Element::s(&g, &word(&g, "a2"))).unwrap();
        assert_eq!(x.to_string(), "1 * s(a2) s(a1)^*");
    }

    #[test]
    fn refinement_identifies_equal_sums() {
        let g = fixtures::o2();
        let pv = Element::vertex_projection(&g, VertexId(0));
        let split = Element::projection(&g, &word(&g, "e"))
            .add(&Element::projection(&g, &word(&g, "f")))
            .unwrap();
        assert_ne!(pv, split);
        assert!(pv.same_element(&split).unwrap());
        assert_eq!(pv.refine(&Degree::new(vec![1])).unwrap(), split);
        assert!(matches!(
            split.refine(&Degree::new(vec![0])),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn expectation_drops_nonzero_grades() {
        let g = fixtures::o2();
        let pv = Element::vertex_projection(&g, VertexId(0));
        let fixed = Element::monomial(&g, word(&g, "e"), word(&g, "f")).unwrap().add(&pv).unwrap();
        assert_eq!(fixed.expectation(), fixed);
        let x = Element::monomial(&g, word(&g, "e"), word(&g, "f.e")).unwrap().add(&pv).unwrap();
        assert_eq!(x.expectation(), pv);
        assert!(Element::s(&g, &word(&g, "e")).expectation().is_empty());
    }

    #[test]
    fn parity_grading_splits_generators() {
        let g = fixtures::o2();
        let c = fixtures::o2_parity(&g);
        let x = Element::s(&g, &word(&g, "e")).add(&Element::s(&g, &word(&g, "f"))).unwrap();
        let parts = x.cocycle_grading(&c).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&GroupElem(vec![0])], Element::s(&g, &word(&g, "e")));
        assert_eq!(parts[&GroupElem(vec![1])], Element::s(&g, &word(&g, "f")));
    }

    #[test]
    fn ck_relations_on_o2() {
        let g = fixtures::o2();
        let report = check_ck_relations(&g, &Degree::new(vec![2])).unwrap();
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn blocks_of_small_cores() {
        let g = fixtures::o2();
        let f = f_block(&g, &Degree::new(vec![1])).unwrap();
        assert_eq!(f.blocks.len(), 1);
        assert_eq!(f.blocks[0].basis.len(), 2);
        let f = f_block(&fixtures::flip(), &Degree::new(vec![1, 1])).unwrap();
        assert_eq!(f.blocks[0].basis.len(), 4);
    }

    #[test]
    fn two_cycle_bratteli_diagram() {
        let d = bratteli(&fixtures::two_cycle(), 4).unwrap();
        assert!(d.sizes.iter().all(|row| row == &vec![1, 1]));
        assert!(d.check_recursion());
        assert!(d.to_dot().contains("[label=\"u:1\"]"));
    }

    #[test]
    fn o2_has_no_af_grading() {
        let g = fixtures::o2();
        let err = af_grading(&g, &[vec![0]], &Degree::new(vec![1])).unwrap_err();
        assert_eq!(err, Error::GradingHypothesisViolated("e".into()));
    }

    #[test]
    fn truncated_representation_of_o2() {
        let g = fixtures::o2();
        let rep = InteriorRep::new(&g, &Degree::new(vec![3])).unwrap();
        let report = rep.check_relations(&Degree::new(vec![2])).unwrap();
        assert!(report.passed(), "{}", report.render());
        let x = Element::s(&g, &word(&g, "e"));
        let y = Element::s_star(&g, &word(&g, "f.e"));
        assert!(rep.check_product(&x.adjoint(), &y.adjoint()).unwrap().unwrap() > 0);
    }
}
