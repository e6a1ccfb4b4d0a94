//! Vertices, colored edges and commuting squares: the raw presentation data
//! of a k-graph before validation.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

/// Edge identifiers follow declaration order, which is also the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A degree-`e_color` morphism. Category orientation: `range` is where the
/// edge points *from* in composition order, so `λμ` needs `s(λ) = r(μ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// 0-based color.
    pub color: usize,
    pub range: VertexId,
    pub source: VertexId,
}

const RESERVED: &[char] = &['#', '.', '*', '+', '(', ')', '@', '^'];

pub(crate) fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
        return Err(Error::MalformedSkeleton(format!("invalid name {name:?}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

impl Skeleton {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::MalformedSkeleton("rank must be positive".into()));
        }
        Ok(Skeleton {
            rank,
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
        })
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        check_name(name)?;
        if self.vertex_index.contains_key(name) {
            return Err(Error::MalformedSkeleton(format!("duplicate vertex {name}")));
        }
        let id = VertexId(self.vertices.len() as u32);
        self.vertices.push(name.to_string());
        self.vertex_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds an edge by vertex names. `color` is 0-based.
    pub fn add_edge(&mut self, color: usize, name: &str, range: &str, source: &str) -> Result<EdgeId> {
        let r = self
            .vertex(range)
            .ok_or_else(|| Error::MalformedSkeleton(format!("edge {name}: unknown range vertex {range}")))?;
        let s = self
            .vertex(source)
            .ok_or_else(|| Error::MalformedSkeleton(format!("edge {name}: unknown source vertex {source}")))?;
        self.add_edge_ids(color, name, r, s)
    }

    pub fn add_edge_ids(&mut self, color: usize, name: &str, range: VertexId, source: VertexId) -> Result<EdgeId> {
        check_name(name)?;
        if color >= self.rank {
            return Err(Error::MalformedSkeleton(format!(
                "edge {name}: color {} exceeds rank {}",
                color + 1,
                self.rank
            )));
        }
        if range.index() >= self.vertices.len() || source.index() >= self.vertices.len() {
            return Err(Error::MalformedSkeleton(format!("edge {name}: dangling endpoint")));
        }
        if self.edge_index.contains_key(name) {
            return Err(Error::MalformedSkeleton(format!("duplicate edge {name}")));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Edge {
            name: name.to_string(),
            color,
            range,
            source,
        });
        self.edge_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// One commuting square `lo · hi = hi2 · lo2`, where `lo`, `lo2` carry the
/// lower color and `hi`, `hi2` the higher one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub lo: EdgeId,
    pub hi: EdgeId,
    pub hi2: EdgeId,
    pub lo2: EdgeId,
}

/// The bijections θ_{ij}: (a, b) ↦ (b′, a′) for every pair of colors i < j.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SquareSet {
    squares: Vec<Square>,
}

impl SquareSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, lo: EdgeId, hi: EdgeId, hi2: EdgeId, lo2: EdgeId) {
        self.squares.push(Square { lo, hi, hi2, lo2 });
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }
}

impl FromIterator<Square> for SquareSet {
    fn from_iter<I: IntoIterator<Item = Square>>(iter: I) -> Self {
        SquareSet {
            squares: iter.into_iter().collect(),
        }
    }
}
