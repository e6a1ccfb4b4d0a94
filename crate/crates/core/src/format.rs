//! Line-oriented text formats for graphs, cocycles and group actions.
//!
//! ```text
//! kgraph 1
//! rank 2
//! vertex v
//! edge 1 e v v          # color, name, range, source
//! edge 2 f v v
//! square e f = f e      # A B = B' A' with A of the lower color
//! ```
//!
//! Edges run from range to source, as morphisms of a category do; a
//! directed graph drawn with arrows from source to range must be reversed.
//! Optional `interior NAME` lines mark a window: only the named vertices
//! must receive edges of every color, and squares may be partial.
//!
//! Cocycle files declare `group G` and then `label EDGE = ELEMENT` for every
//! edge. Action files declare `group G` and then, for each generator of `G`,
//! `gen I: a->b, c->d, …` listing every vertex and every edge.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::group::{Cocycle, GroupAction, GroupElem, GroupSpec, Permutation};
use crate::skeleton::{EdgeId, Skeleton, SquareSet, VertexId};

/// Lines with comments stripped, numbered from 1, blank lines skipped.
fn statements(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::SyntaxError {
        line,
        message: message.into(),
    }
}

fn unknown(line: usize, name: &str) -> Error {
    Error::UnknownName {
        line,
        name: name.to_string(),
    }
}

fn duplicate(line: usize, name: &str) -> Error {
    Error::DuplicateDeclaration {
        line,
        name: name.to_string(),
    }
}

/// Parsed but not yet validated graph data.
#[derive(Clone, Debug)]
pub struct KGraphFile {
    pub skeleton: Skeleton,
    pub squares: SquareSet,
    pub interior: Option<Vec<bool>>,
}

impl KGraphFile {
    pub fn parse(text: &str) -> Result<KGraphFile> {
        let mut lines = statements(text);
        match lines.next() {
            Some((_, t)) if t == ["kgraph", "1"] => {}
            Some((n, _)) => return Err(syntax(n, "expected header `kgraph 1`")),
            None => return Err(syntax(1, "empty file")),
        }
        let mut skeleton: Option<Skeleton> = None;
        let mut squares = SquareSet::new();
        let mut pairs: HashSet<(EdgeId, EdgeId)> = HashSet::new();
        let mut interior: Option<Vec<String>> = None;
        for (n, t) in lines {
            match t[0] {
                "rank" => {
                    if skeleton.is_some() {
                        return Err(duplicate(n, "rank"));
                    }
                    let [_, k] = t[..] else { return Err(syntax(n, "expected `rank K`")) };
                    let k: usize = k.parse().map_err(|_| syntax(n, format!("bad rank {k}")))?;
                    if k > 2 {
                        return Err(syntax(n, format!("files present graphs of rank 1 or 2, not {k}")));
                    }
                    skeleton = Some(Skeleton::new(k).map_err(|e| syntax(n, e.to_string()))?);
                }
                "vertex" => {
                    let sk = skeleton.as_mut().ok_or_else(|| syntax(n, "`rank` must come first"))?;
                    let [_, name] = t[..] else { return Err(syntax(n, "expected `vertex NAME`")) };
                    if sk.vertex(name).is_some() {
                        return Err(duplicate(n, name));
                    }
                    sk.add_vertex(name).map_err(|e| syntax(n, e.to_string()))?;
                }
                "edge" => {
                    let sk = skeleton.as_mut().ok_or_else(|| syntax(n, "`rank` must come first"))?;
                    let [_, color, name, r, s] = t[..] else {
                        return Err(syntax(n, "expected `edge COLOR NAME RANGE SOURCE`"));
                    };
                    let color: usize = color
                        .parse()
                        .ok()
                        .filter(|&c| c >= 1 && c <= sk.rank())
                        .ok_or_else(|| syntax(n, format!("bad color {color}")))?;
                    if sk.edge_by_name(name).is_some() {
                        return Err(duplicate(n, name));
                    }
                    let r = sk.vertex(r).ok_or_else(|| unknown(n, r))?;
                    let s = sk.vertex(s).ok_or_else(|| unknown(n, s))?;
                    sk.add_edge_ids(color - 1, name, r, s).map_err(|e| syntax(n, e.to_string()))?;
                }
                "square" => {
                    let sk = skeleton.as_ref().ok_or_else(|| syntax(n, "`rank` must come first"))?;
                    let [_, a, b, "=", b2, a2] = t[..] else {
                        return Err(syntax(n, "expected `square A B = B' A'`"));
                    };
                    let id = |x: &str| sk.edge_by_name(x).ok_or_else(|| unknown(n, x));
                    let (a, b, b2, a2) = (id(a)?, id(b)?, id(b2)?, id(a2)?);
                    if !pairs.insert((a, b)) {
                        return Err(duplicate(n, &format!("square {} {}", t[1], t[2])));
                    }
                    squares.insert(a, b, b2, a2);
                }
                "interior" => {
                    let sk = skeleton.as_ref().ok_or_else(|| syntax(n, "`rank` must come first"))?;
                    let [_, name] = t[..] else { return Err(syntax(n, "expected `interior NAME`")) };
                    if sk.vertex(name).is_none() {
                        return Err(unknown(n, name));
                    }
                    interior.get_or_insert_with(Vec::new).push(name.to_string());
                }
                other => return Err(syntax(n, format!("unknown statement {other}"))),
            }
        }
        let skeleton = skeleton.ok_or_else(|| syntax(1, "missing `rank`"))?;
        let interior = interior.map(|names| {
            let mut mask = vec![false; skeleton.vertex_count()];
            for name in names {
                mask[skeleton.vertex(&name).expect("checked").index()] = true;
            }
            mask
        });
        Ok(KGraphFile {
            skeleton,
            squares,
            interior,
        })
    }

    pub fn validate(self) -> Result<KGraph> {
        match self.interior {
            None => KGraph::validate(self.skeleton, self.squares),
            Some(mask) => KGraph::build(self.skeleton, self.squares, Some(mask)),
        }
    }
}

pub fn parse_kgraph(text: &str) -> Result<KGraph> {
    KGraphFile::parse(text)?.validate()
}

/// Writes a graph of rank 1 or 2 in declaration order.
pub fn emit_kgraph(g: &KGraph) -> Result<String> {
    if g.rank() > 2 {
        return Err(Error::RankUnsupported(g.rank()));
    }
    let mut out = format!("kgraph 1\nrank {}\n", g.rank());
    for v in g.vertices() {
        out.push_str(&format!("vertex {}\n", g.vertex_name(v)));
    }
    for e in g.skeleton().edges() {
        out.push_str(&format!(
            "edge {} {} {} {}\n",
            e.color + 1,
            e.name,
            g.vertex_name(e.range),
            g.vertex_name(e.source)
        ));
    }
    for sq in g.squares().squares() {
        out.push_str(&format!(
            "square {} {} = {} {}\n",
            g.edge_name(sq.lo),
            g.edge_name(sq.hi),
            g.edge_name(sq.hi2),
            g.edge_name(sq.lo2)
        ));
    }
    if g.is_windowed() {
        for v in g.interior_vertices() {
            out.push_str(&format!("interior {}\n", g.vertex_name(v)));
        }
    }
    Ok(out)
}

fn parse_group<'a>(lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>) -> Result<GroupSpec> {
    match lines.next() {
        Some((n, t)) if t[0] == "group" && t.len() > 1 => {
            GroupSpec::parse(&t[1..].join(" ")).map_err(|e| syntax(n, e.to_string()))
        }
        Some((n, _)) => Err(syntax(n, "expected `group G`")),
        None => Err(syntax(1, "empty file")),
    }
}

pub fn parse_cocycle(g: &KGraph, text: &str) -> Result<Cocycle> {
    let mut lines = statements(text);
    let group = parse_group(&mut lines)?;
    let mut values: Vec<Option<GroupElem>> = vec![None; g.skeleton().edge_count()];
    let mut last = 1;
    for (n, t) in lines {
        last = n;
        let ["label", edge, "=", rest @ ..] = &t[..] else {
            return Err(syntax(n, "expected `label EDGE = ELEMENT`"));
        };
        let e = g.edge_by_name(edge).ok_or_else(|| unknown(n, edge))?;
        if values[e.index()].is_some() {
            return Err(duplicate(n, edge));
        }
        let x = group.parse_elem(&rest.join(" ")).map_err(|err| syntax(n, err.to_string()))?;
        values[e.index()] = Some(x);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| syntax(last, format!("no label for edge {}", g.edge_name(EdgeId(i as u32))))))
        .collect::<Result<Vec<_>>>()?;
    Cocycle::new(g, group, values)
}

pub fn emit_cocycle(g: &KGraph, c: &Cocycle) -> String {
    let mut out = format!("group {}\n", c.group());
    for e in g.edge_ids() {
        out.push_str(&format!("label {} = {}\n", g.edge_name(e), c.edge_value(e)));
    }
    out
}

pub fn parse_action(g: &KGraph, text: &str) -> Result<GroupAction> {
    let mut lines = statements(text);
    let group = parse_group(&mut lines)?;
    let mut generators: HashMap<usize, Permutation> = HashMap::new();
    let mut last = 1;
    for (n, t) in lines {
        last = n;
        if t[0] != "gen" || t.len() < 2 {
            return Err(syntax(n, "expected `gen I: a->b, …`"));
        }
        let joined = t[1..].join(" ");
        let (index, body) = joined.split_once(':').ok_or_else(|| syntax(n, "missing `:`"))?;
        let index: usize = index
            .trim()
            .parse()
            .ok()
            .filter(|&i| i >= 1 && i <= group.rank())
            .ok_or_else(|| syntax(n, format!("bad generator index {index}")))?;
        if generators.contains_key(&index) {
            return Err(duplicate(n, &format!("gen {index}")));
        }
        let mut vertices: Vec<Option<VertexId>> = vec![None; g.vertex_count()];
        let mut edges: Vec<Option<EdgeId>> = vec![None; g.skeleton().edge_count()];
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item.split_once("->").ok_or_else(|| syntax(n, format!("expected a->b, got {item}")))?;
            let (a, b) = (a.trim(), b.trim());
            if let (Some(x), Ok(y)) = (g.skeleton().vertex(a), g.vertex(b)) {
                if vertices[x.index()].replace(y).is_some() {
                    return Err(duplicate(n, a));
                }
            } else if let (Some(x), Some(y)) = (g.edge_by_name(a), g.edge_by_name(b)) {
                if edges[x.index()].replace(y).is_some() {
                    return Err(duplicate(n, a));
                }
            } else {
                let missing = if g.skeleton().vertex(a).is_some() || g.edge_by_name(a).is_some() { b } else { a };
                return Err(unknown(n, missing));
            }
        }
        let vertices = vertices
            .into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| syntax(n, format!("vertex {} is not mapped", g.vertex_name(VertexId(i as u32))))))
            .collect::<Result<Vec<_>>>()?;
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| syntax(n, format!("edge {} is not mapped", g.edge_name(EdgeId(i as u32))))))
            .collect::<Result<Vec<_>>>()?;
        generators.insert(index, Permutation { vertices, edges });
    }
    let generators = (1..=group.rank())
        .map(|i| generators.remove(&i).ok_or_else(|| syntax(last, format!("generator {i} is missing"))))
        .collect::<Result<Vec<_>>>()?;
    GroupAction::new(g, group, generators)
}
