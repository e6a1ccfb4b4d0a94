//! Validated k-graphs and their morphisms.
//!
//! A morphism is stored in color-ascending normal form: all color-1 edges,
//! then all color-2 edges, and so on. By unique factorization this word is
//! canonical, so equality is structural. Composition and factorization are
//! implemented by rewriting adjacent edge pairs of different colors through
//! the commuting squares.

use std::collections::HashMap;
use std::fmt;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::skeleton::{Edge, EdgeId, Skeleton, SquareSet, VertexId};

/// A normal-form morphism of some [`KGraph`].
///
/// `source` is derivable from the last edge (or equals `range` for an
/// identity) and is cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    degree: Degree,
    word: Vec<EdgeId>,
    range: VertexId,
    source: VertexId,
}

impl Morphism {
    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn word(&self) -> &[EdgeId] {
        &self.word
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct KGraph {
    skeleton: Skeleton,
    squares: SquareSet,
    /// (lo, hi) ↦ (hi′, lo′)
    forward: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    /// (hi′, lo′) ↦ (lo, hi)
    backward: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    /// `in_edges[v][c]`: color-`c` edges with range `v`, in declaration order.
    in_edges: Vec<Vec<Vec<EdgeId>>>,
    /// `None` for ordinary graphs; for windowed graphs marks the vertices
    /// whose data can be trusted.
    interior: Option<Vec<bool>>,
}

impl KGraph {
    /// Validates a square presentation of rank 1 or 2.
    pub fn validate(skeleton: Skeleton, squares: SquareSet) -> Result<KGraph> {
        if skeleton.rank() > 2 {
            return Err(Error::RankUnsupported(skeleton.rank()));
        }
        Self::build(skeleton, squares, None)
    }

    /// Validates presentation data produced by a construction. Any rank is
    /// accepted because the squares come from a genuine k-graph. When
    /// `interior` is given the graph is a window: squares may be partial and
    /// the no-sources condition is only enforced on interior vertices.
    pub(crate) fn build(skeleton: Skeleton, squares: SquareSet, interior: Option<Vec<bool>>) -> Result<KGraph> {
        let k = skeleton.rank();
        let nv = skeleton.vertex_count();
        if nv == 0 {
            return Err(Error::MalformedSkeleton("no vertices".into()));
        }
        let mut in_edges = vec![vec![Vec::new(); k]; nv];
        for (i, e) in skeleton.edges().iter().enumerate() {
            in_edges[e.range.index()][e.color].push(EdgeId(i as u32));
        }
        for v in skeleton.vertex_ids() {
            if let Some(int) = &interior {
                if !int[v.index()] {
                    continue;
                }
            }
            for (c, list) in in_edges[v.index()].iter().enumerate() {
                if list.is_empty() {
                    return Err(Error::SourceViolation {
                        vertex: skeleton.vertex_name(v).to_string(),
                        color: c + 1,
                    });
                }
            }
        }

        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        let name = |e: EdgeId| skeleton.edge(e).name.clone();
        for sq in squares.squares() {
            for e in [sq.lo, sq.hi, sq.hi2, sq.lo2] {
                if e.index() >= skeleton.edge_count() {
                    return Err(Error::FactorizationError(format!("square references unknown edge id {}", e.0)));
                }
            }
            let (lo, hi, hi2, lo2) = (skeleton.edge(sq.lo), skeleton.edge(sq.hi), skeleton.edge(sq.hi2), skeleton.edge(sq.lo2));
            let label = format!("{} {} = {} {}", lo.name, hi.name, hi2.name, lo2.name);
            if lo.color >= hi.color || lo2.color != lo.color || hi2.color != hi.color {
                return Err(Error::FactorizationError(format!("square {label}: colors out of order")));
            }
            if lo.source != hi.range || hi2.source != lo2.range {
                return Err(Error::FactorizationError(format!("square {label}: pair not composable")));
            }
            if hi2.range != lo.range || lo2.source != hi.source {
                return Err(Error::FactorizationError(format!("square {label}: endpoints mismatch")));
            }
            if forward.insert((sq.lo, sq.hi), (sq.hi2, sq.lo2)).is_some() {
                return Err(Error::FactorizationError(format!(
                    "pair ({}, {}) has more than one square",
                    name(sq.lo),
                    name(sq.hi)
                )));
            }
            if backward.insert((sq.hi2, sq.lo2), (sq.lo, sq.hi)).is_some() {
                return Err(Error::FactorizationError(format!(
                    "θ is not injective: ({}, {}) is hit twice",
                    name(sq.hi2),
                    name(sq.lo2)
                )));
            }
        }

        if interior.is_none() {
            // Totality and surjectivity on composable pairs of distinct colors.
            let edges = skeleton.edges();
            for (i, a) in edges.iter().enumerate() {
                for &b in &in_edges[a.source.index()].iter().flatten().copied().collect::<Vec<_>>() {
                    let be = skeleton.edge(b);
                    let a_id = EdgeId(i as u32);
                    if a.color < be.color && !forward.contains_key(&(a_id, b)) {
                        return Err(Error::FactorizationError(format!(
                            "θ is not total: no square for ({}, {})",
                            a.name, be.name
                        )));
                    }
                    if a.color > be.color && !backward.contains_key(&(a_id, b)) {
                        return Err(Error::FactorizationError(format!(
                            "θ is not surjective: ({}, {}) is not hit",
                            a.name, be.name
                        )));
                    }
                }
            }
        }

        Ok(KGraph {
            skeleton,
            squares,
            forward,
            backward,
            in_edges,
            interior,
        })
    }

    pub fn rank(&self) -> usize {
        self.skeleton.rank()
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn squares(&self) -> &SquareSet {
        &self.squares
    }

    pub fn vertex_count(&self) -> usize {
        self.skeleton.vertex_count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.skeleton.vertex_ids()
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.skeleton
            .vertex(name)
            .ok_or_else(|| Error::InvalidVertex(name.to_string()))
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        self.skeleton.vertex_name(v)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        self.skeleton.edge(e)
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.skeleton.edge(e).name
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.skeleton.edge_by_name(name)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.skeleton.edge_ids()
    }

    /// Color-`color` edges with range `v`, in declaration order.
    pub fn edges_into(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.in_edges[v.index()][color]
    }

    /// The square with lower-color edge `lo` followed by `hi`, if any.
    pub fn square_forward(&self, lo: EdgeId, hi: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.forward.get(&(lo, hi)).copied()
    }

    pub fn square_backward(&self, hi: EdgeId, lo: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.backward.get(&(hi, lo)).copied()
    }

    pub fn is_windowed(&self) -> bool {
        self.interior.is_some()
    }

    pub fn is_interior(&self, v: VertexId) -> bool {
        self.interior.as_ref().is_none_or(|int| int[v.index()])
    }

    pub fn interior_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_interior(v)).collect()
    }

    fn check_rank(&self, d: &Degree) -> Result<()> {
        if d.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: d.to_string(),
            });
        }
        Ok(())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.index() >= self.vertex_count() {
            return Err(Error::InvalidVertex(v.to_string()));
        }
        Ok(())
    }

    pub fn identity(&self, v: VertexId) -> Morphism {
        Morphism {
            degree: Degree::zero(self.rank()),
            word: Vec::new(),
            range: v,
            source: v,
        }
    }

    pub fn edge_morphism(&self, e: EdgeId) -> Morphism {
        let edge = self.edge(e);
        Morphism {
            degree: Degree::unit(self.rank(), edge.color),
            word: vec![e],
            range: edge.range,
            source: edge.source,
        }
    }

    fn color(&self, e: EdgeId) -> usize {
        self.skeleton.edge(e).color
    }

    /// Exchanges an adjacent pair `x y` of distinct colors for the other
    /// factorization `y′ x′` of the same degree-`e_i + e_j` morphism.
    pub fn swap(&self, x: EdgeId, y: EdgeId) -> Result<(EdgeId, EdgeId)> {
        let (cx, cy) = (self.color(x), self.color(y));
        let found = match cx.cmp(&cy) {
            std::cmp::Ordering::Less => self.forward.get(&(x, y)),
            std::cmp::Ordering::Greater => self.backward.get(&(x, y)),
            std::cmp::Ordering::Equal => {
                return Err(Error::FactorizationError(format!(
                    "cannot swap edges {} and {} of the same color",
                    self.edge_name(x),
                    self.edge_name(y)
                )))
            }
        };
        found.copied().ok_or_else(|| {
            if self.is_windowed() {
                Error::WindowOverflow(self.edge_name(x).to_string(), self.edge_name(y).to_string())
            } else {
                Error::FactorizationError(format!(
                    "no square for ({}, {})",
                    self.edge_name(x),
                    self.edge_name(y)
                ))
            }
        })
    }

    /// Performs one rewrite at position `i` if the pair there is out of
    /// color order. Returns whether a rewrite happened.
    pub fn rewrite_at(&self, word: &mut [EdgeId], i: usize) -> Result<bool> {
        if self.color(word[i]) <= self.color(word[i + 1]) {
            return Ok(false);
        }
        let (a, b) = self.swap(word[i], word[i + 1])?;
        word[i] = a;
        word[i + 1] = b;
        Ok(true)
    }

    /// Sorts a composable edge word into color-ascending normal form.
    pub fn normalize_word(&self, mut word: Vec<EdgeId>) -> Result<Vec<EdgeId>> {
        for i in 1..word.len() {
            let mut j = i;
            while j > 0 && self.rewrite_at(&mut word, j - 1)? {
                j -= 1;
            }
        }
        Ok(word)
    }

    /// Rewrites a word so that its color sequence equals `pattern`.
    fn reshape(&self, mut word: Vec<EdgeId>, pattern: &[usize]) -> Result<Vec<EdgeId>> {
        debug_assert_eq!(word.len(), pattern.len());
        for (p, &want) in pattern.iter().enumerate() {
            let q = (p..word.len())
                .find(|&q| self.color(word[q]) == want)
                .expect("pattern has the same color multiset as the word");
            for j in (p..q).rev() {
                let (a, b) = self.swap(word[j], word[j + 1])?;
                word[j] = a;
                word[j + 1] = b;
            }
        }
        Ok(word)
    }

    fn color_pattern(degrees: &[&Degree]) -> Vec<usize> {
        let mut pattern = Vec::new();
        for d in degrees {
            for (c, &n) in d.entries().iter().enumerate() {
                pattern.extend(std::iter::repeat_n(c, n as usize));
            }
        }
        pattern
    }

    fn degree_of_word(&self, word: &[EdgeId]) -> Degree {
        let mut d = vec![0; self.rank()];
        for &e in word {
            d[self.color(e)] += 1;
        }
        Degree::new(d)
    }

    /// Builds a morphism from a composable edge word in any color order.
    pub fn from_edges(&self, range: VertexId, word: &[EdgeId]) -> Result<Morphism> {
        self.check_vertex(range)?;
        let mut at = range;
        for &e in word {
            let edge = self.edge(e);
            if edge.range != at {
                return Err(Error::NotComposable {
                    left_source: self.vertex_name(at).to_string(),
                    right_range: self.vertex_name(edge.range).to_string(),
                });
            }
            at = edge.source;
        }
        let normal = self.normalize_word(word.to_vec())?;
        Ok(Morphism {
            degree: self.degree_of_word(&normal),
            word: normal,
            range,
            source: at,
        })
    }

    pub fn compose(&self, lambda: &Morphism, mu: &Morphism) -> Result<Morphism> {
        if lambda.source != mu.range {
            return Err(Error::NotComposable {
                left_source: self.vertex_name(lambda.source).to_string(),
                right_range: self.vertex_name(mu.range).to_string(),
            });
        }
        let mut word = lambda.word.clone();
        word.extend_from_slice(&mu.word);
        // Each half is already sorted; only the seam needs rewriting.
        let word = self.normalize_word(word)?;
        Ok(Morphism {
            degree: &lambda.degree + &mu.degree,
            word,
            range: lambda.range,
            source: mu.source,
        })
    }

    /// The unique `(μ, ν)` with `λ = μν`, `d(μ) = m`, `d(ν) = n`.
    pub fn factor(&self, lambda: &Morphism, m: &Degree, n: &Degree) -> Result<(Morphism, Morphism)> {
        self.check_rank(m)?;
        self.check_rank(n)?;
        if &(m + n) != lambda.degree() {
            return Err(Error::DegreeMismatch {
                m: m.to_string(),
                n: n.to_string(),
                degree: lambda.degree.to_string(),
            });
        }
        let pattern = Self::color_pattern(&[m, n]);
        let word = self.reshape(lambda.word.clone(), &pattern)?;
        let split = m.total() as usize;
        let (first, second) = word.split_at(split);
        let mid = first.last().map_or(lambda.range, |&e| self.edge(e).source);
        Ok((
            Morphism {
                degree: m.clone(),
                word: first.to_vec(),
                range: lambda.range,
                source: mid,
            },
            Morphism {
                degree: n.clone(),
                word: second.to_vec(),
                range: mid,
                source: lambda.source,
            },
        ))
    }

    /// `λ(a, b)`: the middle factor of `λ` of degree `b − a` for `a ≤ b ≤ d(λ)`.
    pub fn segment(&self, lambda: &Morphism, a: &Degree, b: &Degree) -> Result<Morphism> {
        let mid = b.checked_sub(a).ok_or_else(|| Error::DegreeOrderViolation {
            m: a.to_string(),
            n: b.to_string(),
        })?;
        let rest = lambda.degree.checked_sub(b).ok_or_else(|| Error::DegreeOrderViolation {
            m: b.to_string(),
            n: lambda.degree.to_string(),
        })?;
        let (_, tail) = self.factor(lambda, a, &(&mid + &rest))?;
        let (middle, _) = self.factor(&tail, &mid, &rest)?;
        Ok(middle)
    }

    /// All `λ ∈ Λⁿ` with `r(λ) = v`, in lexicographic order of normal forms.
    pub fn morphisms(&self, v: VertexId, n: &Degree) -> Result<Vec<Morphism>> {
        self.check_vertex(v)?;
        self.check_rank(n)?;
        let pattern = Self::color_pattern(&[n]);
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(pattern.len());
        self.enumerate(v, &pattern, &mut word, &mut |word, end| {
            out.push(Morphism {
                degree: n.clone(),
                word: word.to_vec(),
                range: v,
                source: end,
            })
        });
        Ok(out)
    }

    fn enumerate(&self, at: VertexId, pattern: &[usize], word: &mut Vec<EdgeId>, emit: &mut dyn FnMut(&[EdgeId], VertexId)) {
        self.enumerate_while(at, pattern, word, &mut |w, end| {
            emit(w, end);
            true
        });
    }

    fn enumerate_while(
        &self,
        at: VertexId,
        pattern: &[usize],
        word: &mut Vec<EdgeId>,
        emit: &mut dyn FnMut(&[EdgeId], VertexId) -> bool,
    ) -> bool {
        match pattern.split_first() {
            None => emit(word, at),
            Some((&c, rest)) => {
                for &e in self.edges_into(at, c) {
                    word.push(e);
                    let go_on = self.enumerate_while(self.edge(e).source, rest, word, emit);
                    word.pop();
                    if !go_on {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Visits `Λⁿ(v)` in enumeration order until `visit` returns `false`.
    pub fn visit_morphisms(&self, v: VertexId, n: &Degree, visit: &mut dyn FnMut(&Morphism) -> bool) -> Result<()> {
        self.check_vertex(v)?;
        self.check_rank(n)?;
        let pattern = Self::color_pattern(&[n]);
        let mut word = Vec::with_capacity(pattern.len());
        self.enumerate_while(v, &pattern, &mut word, &mut |word, end| {
            visit(&Morphism {
                degree: n.clone(),
                word: word.to_vec(),
                range: v,
                source: end,
            })
        });
        Ok(())
    }

    /// All degree-`n` morphisms, grouped by range vertex in id order.
    pub fn morphisms_of_degree(&self, n: &Degree) -> Result<Vec<Morphism>> {
        let mut out = Vec::new();
        for v in self.vertices() {
            out.extend(self.morphisms(v, n)?);
        }
        Ok(out)
    }

    /// `#Λⁿ(v)`.
    pub fn count(&self, v: VertexId, n: &Degree) -> Result<u64> {
        self.check_vertex(v)?;
        Ok(self.vertex_matrix(n)?.row_sum(v.index()))
    }

    pub fn edge_matrix(&self, color: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.vertex_count());
        for e in self.skeleton.edges().iter().filter(|e| e.color == color) {
            m.add_at(e.range.index(), e.source.index(), 1);
        }
        m
    }

    /// `Mⁿ(u, v) = #{λ ∈ Λⁿ : r(λ) = u, s(λ) = v}`, counted over
    /// color-ordered edge words.
    pub fn vertex_matrix(&self, n: &Degree) -> Result<IntMatrix> {
        self.check_rank(n)?;
        let mut m = IntMatrix::identity(self.vertex_count());
        for c in 0..self.rank() {
            let step = self.edge_matrix(c);
            for _ in 0..n.get(c) {
                m = m.mul(&step);
            }
        }
        Ok(m)
    }

    /// Renders a morphism as its dotted edge word, e.g. `e.f`; identities as
    /// the empty word.
    pub fn word_string(&self, m: &Morphism) -> String {
        m.word
            .iter()
            .map(|&e| self.edge_name(e))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Word plus `@vertex` for identities when the vertex is ambiguous.
    pub fn display_morphism<'a>(&'a self, m: &'a Morphism) -> DisplayMorphism<'a> {
        DisplayMorphism { graph: self, morphism: m }
    }

    /// Parses a dotted edge word (`"e.f"`); `"@v"` or `""` (single vertex)
    /// denotes an identity.
    pub fn parse_word(&self, word: &str, at: Option<&str>) -> Result<Morphism> {
        let word = word.trim();
        if word.is_empty() {
            let v = match at {
                Some(name) => self.vertex(name)?,
                None if self.vertex_count() == 1 => VertexId(0),
                None => {
                    return Err(Error::InvalidVertex(
                        "identity needs @vertex in a graph with several vertices".into(),
                    ))
                }
            };
            return Ok(self.identity(v));
        }
        let edges = word
            .split('.')
            .map(|name| {
                self.edge_by_name(name.trim())
                    .ok_or_else(|| Error::MalformedSkeleton(format!("unknown edge {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let range = self.edge(edges[0]).range;
        let m = self.from_edges(range, &edges)?;
        if let Some(name) = at {
            if self.vertex(name)? != range {
                return Err(Error::InvalidVertex(format!("{name} is not the range of {word}")));
            }
        }
        Ok(m)
    }
}

pub struct DisplayMorphism<'a> {
    graph: &'a KGraph,
    morphism: &'a Morphism,
}

impl fmt::Display for DisplayMorphism<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.morphism.is_identity() {
            if self.graph.vertex_count() == 1 {
                write!(f, "()")
            } else {
                write!(f, "()@{}", self.graph.vertex_name(self.morphism.range))
            }
        } else {
            write!(f, "({})", self.graph.word_string(self.morphism))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn missing_color_two_edge_is_a_source_violation() {
        let mut sk = Skeleton::new(2).unwrap();
        sk.add_vertex("u").unwrap();
        sk.add_vertex("v").unwrap();
        sk.add_edge(0, "a", "u", "v").unwrap();
        sk.add_edge(0, "b", "v", "u").unwrap();
        sk.add_edge(1, "c", "u", "u").unwrap();
        let err = KGraph::validate(sk, SquareSet::new()).unwrap_err();
        assert_eq!(
            err,
            Error::SourceViolation {
                vertex: "v".into(),
                color: 2
            }
        );
    }

    #[test]
    fn missing_square_is_a_factorization_error() {
        let mut sk = Skeleton::new(2).unwrap();
        sk.add_vertex("v").unwrap();
        sk.add_edge(0, "a", "v", "v").unwrap();
        sk.add_edge(1, "b", "v", "v").unwrap();
        assert!(matches!(
            KGraph::validate(sk, SquareSet::new()),
            Err(Error::FactorizationError(_))
        ));
    }

    #[test]
    fn non_injective_theta_is_rejected() {
        let mut sk = Skeleton::new(2).unwrap();
        sk.add_vertex("v").unwrap();
        let a = sk.add_edge(0, "a", "v", "v").unwrap();
        let a2 = sk.add_edge(0, "a2", "v", "v").unwrap();
        let b = sk.add_edge(1, "b", "v", "v").unwrap();
        let b2 = sk.add_edge(1, "b2", "v", "v").unwrap();
        let mut sq = SquareSet::new();
        sq.insert(a, b, b, a);
        sq.insert(a, b2, b, a);
        sq.insert(a2, b, b2, a2);
        sq.insert(a2, b2, b2, a2);
        assert!(matches!(KGraph::validate(sk, sq), Err(Error::FactorizationError(_))));
    }

    #[test]
    fn endpoint_mismatch_is_rejected() {
        let mut sk = Skeleton::new(2).unwrap();
        sk.add_vertex("u").unwrap();
        sk.add_vertex("v").unwrap();
        let a = sk.add_edge(0, "a", "u", "u").unwrap();
        sk.add_edge(0, "a2", "v", "v").unwrap();
        let b = sk.add_edge(1, "b", "u", "u").unwrap();
        sk.add_edge(1, "b2", "v", "v").unwrap();
        let mut sq = SquareSet::new();
        // (a, b) composes at u but the claimed square ends at v
        sq.insert(a, b, b, EdgeId(1));
        assert!(matches!(KGraph::validate(sk, sq), Err(Error::FactorizationError(_))));
    }

    #[test]
    fn rank_three_presentations_are_refused() {
        let mut sk = Skeleton::new(3).unwrap();
        sk.add_vertex("v").unwrap();
        assert_eq!(KGraph::validate(sk, SquareSet::new()).unwrap_err(), Error::RankUnsupported(3));
    }

    #[test]
    fn flip_compose_and_factor() {
        let g = fixtures::flip();
        let e1 = g.edge_by_name("e").unwrap();
        let f2 = g.edge_by_name("f'").unwrap();
        let fe = g.from_edges(VertexId(0), &[f2, e1]).unwrap();
        assert_eq!(fe.word(), &[e1, f2]);
        let (b, a) = g.factor(&fe, &Degree::new(vec![0, 1]), &Degree::new(vec![1, 0])).unwrap();
        assert_eq!((b.word(), a.word()), (&[f2][..], &[e1][..]));
    }

    #[test]
    fn iota_compose_keeps_positions() {
        let g = fixtures::iota();
        let f2 = g.edge_by_name("f'").unwrap();
        let e1 = g.edge_by_name("e").unwrap();
        let f1 = g.edge_by_name("f").unwrap();
        let e2 = g.edge_by_name("e'").unwrap();
        let m = g.from_edges(VertexId(0), &[f2, e1]).unwrap();
        assert_eq!(m.word(), &[f1, e2]);
    }

    #[test]
    fn factor_rejects_wrong_split() {
        let g = fixtures::t(2);
        let m = g.morphisms(VertexId(0), &Degree::new(vec![1, 1])).unwrap().remove(0);
        let err = g.factor(&m, &Degree::new(vec![1, 0]), &Degree::new(vec![1, 0])).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { .. }));
    }

    #[test]
    fn compose_rejects_mismatched_endpoints() {
        let g = fixtures::two_cycle();
        let x = g.edge_morphism(g.edge_by_name("x").unwrap());
        assert!(matches!(g.compose(&x, &x), Err(Error::NotComposable { .. })));
    }

    #[test]
    fn parse_word_round_trip() {
        let g = fixtures::flip();
        let m = g.parse_word("f'.e", None).unwrap();
        assert_eq!(g.word_string(&m), "e.f'");
        assert!(g.parse_word("", None).unwrap().is_identity());
        let two = fixtures::two_cycle();
        assert!(two.parse_word("", None).is_err());
        assert!(two.parse_word("", Some("u")).is_ok());
    }
}
