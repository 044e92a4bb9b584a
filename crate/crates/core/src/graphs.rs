//! Edge-labeled directed graphs ("structures") over colored or plain symbols.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::automata::{Color, Symbol, Word};
use crate::intern::intern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a chain needs a non-empty word")]
    EmptyWord,
    #[error("chain endpoints must differ (both are '{0}')")]
    SameEndpoints(String),
    #[error("vertex name '{0}' is already in use")]
    NameClash(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("invalid vertex name '{0}'")]
    InvalidVertexName(String),
    #[error("malformed graph: {0}")]
    Malformed(String),
}

/// Interned vertex name. Compared by identity, ordered by name.
#[derive(Clone, Copy)]
pub struct VertexId(&'static str);

impl VertexId {
    pub fn new(name: &str) -> Result<VertexId, GraphError> {
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(GraphError::InvalidVertexName(name.to_owned()));
        }
        Ok(VertexId(intern(name)))
    }

    /// Panics on names that contain whitespace; meant for literals and generated names.
    pub fn named(name: &str) -> VertexId {
        VertexId::new(name).expect("valid vertex name")
    }

    pub fn name(&self) -> &'static str {
        self.0
    }
}

impl PartialEq for VertexId {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for VertexId {}

impl std::hash::Hash for VertexId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        std::ptr::hash(self.0, state)
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(other.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.0)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        VertexId::new(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: VertexId,
    pub label: Symbol,
    pub dst: VertexId,
}

impl Edge {
    pub fn new(src: VertexId, label: Symbol, dst: VertexId) -> Edge {
        Edge { src, label, dst }
    }
}

/// A finite set of vertices and a set of labeled edges between them.
///
/// Parallel edges with distinct labels are allowed; re-adding an edge is a no-op.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LabeledGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
}

impl LabeledGraph {
    pub fn new() -> LabeledGraph {
        LabeledGraph::default()
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I) -> LabeledGraph {
        let mut g = LabeledGraph::new();
        for e in edges {
            g.add_edge(e);
        }
        g
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        self.vertices.insert(v)
    }

    /// Inserts the edge and its endpoints; returns whether the edge was new.
    pub fn add_edge(&mut self, e: Edge) -> bool {
        self.vertices.insert(e.src);
        self.vertices.insert(e.dst);
        self.edges.insert(e)
    }

    pub fn require_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v.to_string()))
        }
    }

    /// Distinct edge labels, sorted by token.
    pub fn labels(&self) -> BTreeSet<Symbol> {
        self.edges.iter().map(|e| e.label).collect()
    }

    /// Every vertex and edge of `self` is also in `other`.
    pub fn is_subgraph_of(&self, other: &LabeledGraph) -> bool {
        self.vertices.is_subset(&other.vertices) && self.edges.is_subset(&other.edges)
    }

    pub fn recolor(&self, color: Color) -> LabeledGraph {
        self.map_labels(|s| s.with_color(color))
    }

    /// Erases the shade of every grid label; `alpha`/`beta`/`omega` and colors are kept.
    pub fn strip_shades(&self) -> LabeledGraph {
        self.map_labels(|s| s.strip_shade())
    }

    pub fn map_labels<F: Fn(Symbol) -> Symbol>(&self, f: F) -> LabeledGraph {
        LabeledGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge::new(e.src, f(e.label), e.dst))
                .collect(),
        }
    }

    /// Edges whose label has the given color.
    pub fn edges_of_color(&self, color: Color) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.label.color() == Some(color))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<LabeledGraph, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            vertices: Vec<VertexId>,
            edges: Vec<Edge>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let vertices: BTreeSet<VertexId> = raw.vertices.into_iter().collect();
        for e in &raw.edges {
            for v in [e.src, e.dst] {
                if !vertices.contains(&v) {
                    return Err(serde::de::Error::custom(format!(
                        "edge endpoint '{v}' is not a declared vertex"
                    )));
                }
            }
        }
        Ok(LabeledGraph {
            vertices,
            edges: raw.edges.into_iter().collect(),
        })
    }
}

/// Set-union of graphs; vertices with the same name are the same vertex.
pub fn graph_union<'a, I: IntoIterator<Item = &'a LabeledGraph>>(graphs: I) -> LabeledGraph {
    let mut out = LabeledGraph::new();
    for g in graphs {
        out.vertices.extend(g.vertices.iter().copied());
        out.edges.extend(g.edges.iter().copied());
    }
    out
}

/// Name of the `k`-th intermediate vertex of a chain (`x1`, `x2`, ...).
pub fn chain_vertex(k: usize) -> VertexId {
    VertexId::named(&format!("x{k}"))
}

/// The frozen body of the chain query `w(x, y)`: a fresh path spelling `w`
/// from `x` to `y` through `x1, ..., x(n-1)`.
pub fn chain_graph(w: &Word, x: VertexId, y: VertexId) -> Result<LabeledGraph, GraphError> {
    if w.is_empty() {
        return Err(GraphError::EmptyWord);
    }
    if x == y {
        return Err(GraphError::SameEndpoints(x.to_string()));
    }
    let n = w.len();
    let mut names = Vec::with_capacity(n + 1);
    names.push(x);
    for k in 1..n {
        let v = chain_vertex(k);
        if v == x || v == y {
            return Err(GraphError::NameClash(v.to_string()));
        }
        names.push(v);
    }
    names.push(y);
    let mut g = LabeledGraph::new();
    g.add_vertex(x);
    g.add_vertex(y);
    for (i, &a) in w.iter().enumerate() {
        g.add_edge(Edge::new(names[i], a, names[i + 1]));
    }
    Ok(g)
}

/// A graph with two designated vertices `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointedGraph {
    pub graph: LabeledGraph,
    pub a: VertexId,
    pub b: VertexId,
}

impl EndpointedGraph {
    pub fn new(graph: LabeledGraph, a: VertexId, b: VertexId) -> Result<EndpointedGraph, GraphError> {
        graph.require_vertex(a)?;
        graph.require_vertex(b)?;
        Ok(EndpointedGraph { graph, a, b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Symbol {
        Symbol::parse(s).unwrap()
    }

    fn v(s: &str) -> VertexId {
        VertexId::named(s)
    }

    #[test]
    fn chain_counts() {
        let g = chain_graph(&Word::parse("G:alpha").unwrap(), v("a"), v("b")).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        let g = chain_graph(&Word::parse("G:alpha G:beta").unwrap(), v("a"), v("b")).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 2));
        assert!(g.contains_edge(&Edge::new(v("x1"), sym("G:beta"), v("b"))));
    }

    #[test]
    fn chain_errors() {
        assert_eq!(
            chain_graph(&Word::empty(), v("a"), v("b")),
            Err(GraphError::EmptyWord)
        );
        assert!(matches!(
            chain_graph(&Word::parse("alpha").unwrap(), v("a"), v("a")),
            Err(GraphError::SameEndpoints(_))
        ));
        assert!(matches!(
            chain_graph(&Word::parse("alpha beta").unwrap(), v("x1"), v("b")),
            Err(GraphError::NameClash(_))
        ));
    }

    #[test]
    fn recolor_and_union() {
        let g = LabeledGraph::from_edges([Edge::new(v("a"), sym("R:omega"), v("b"))]);
        let green = g.recolor(Color::Green);
        assert_eq!(green.edges().iter().next().unwrap().label.name(), "G:omega");
        assert_eq!(g.recolor(Color::Red).recolor(Color::Red), g.recolor(Color::Red));
        assert_eq!(graph_union([&g, &g]), g);
        let h = LabeledGraph::from_edges([Edge::new(v("c"), sym("alpha"), v("d"))]);
        let u = graph_union([&g, &h]);
        assert_eq!((u.vertex_count(), u.edge_count()), (4, 2));
    }

    #[test]
    fn strip_shades_collapses() {
        let g1 = LabeledGraph::from_edges([
            Edge::new(v("a"), sym("R:A-H-W-black"), v("b")),
            Edge::new(v("a"), sym("G:alpha"), v("b")),
        ]);
        let g2 = g1.map_labels(|s| s.with_shade("grey").unwrap_or(s));
        assert_ne!(g1, g2);
        assert_eq!(g1.strip_shades(), g2.strip_shades());
        let labels: Vec<_> = g1.strip_shades().labels().iter().map(|s| s.name()).collect();
        assert_eq!(labels, ["G:alpha", "R:A-H-W"]);
    }

    #[test]
    fn json_shape() {
        let g = LabeledGraph::from_edges([Edge::new(v("a"), sym("G:alpha"), v("x1"))]);
        assert_eq!(
            g.to_json(),
            r#"{"vertices":["a","x1"],"edges":[{"src":"a","label":"G:alpha","dst":"x1"}]}"#
        );
        assert_eq!(LabeledGraph::from_json(&g.to_json()).unwrap(), g);
        assert!(LabeledGraph::from_json(
            r#"{"vertices":["a"],"edges":[{"src":"a","label":"G:alpha","dst":"x1"}]}"#
        )
        .is_err());
        assert!(LabeledGraph::from_json(r#"{"vertices":["a"],"edges":[{"src":"a","label":"gamma","dst":"a"}]}"#).is_err());
    }
}
