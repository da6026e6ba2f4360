//! Finite directed edge-labeled graphs.
//!
//! Vertices and edges are named by opaque [`Id`] tokens. Parallel edges and
//! loops are allowed; an undirected edge is encoded as two opposite directed
//! edges carrying the same label.

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Opaque identifier of a vertex or an edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Id(Arc<str>);

impl Id {
    pub fn new(s: impl AsRef<str>) -> Self {
        Id(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Id {
    fn from(s: &str) -> Self {
        Id::new(s)
    }
}

impl From<String> for Id {
    fn from(s: String) -> Self {
        Id(Arc::from(s))
    }
}

impl From<&String> for Id {
    fn from(s: &String) -> Self {
        Id::new(s)
    }
}

/// Edge label. The token `*` marks an unlabeled edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub const UNLABELED: &'static str = "*";

    pub fn new(s: impl AsRef<str>) -> Self {
        Label(Arc::from(s.as_ref()))
    }

    pub fn unlabeled() -> Self {
        Label::new(Self::UNLABELED)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

/// A vertex or an edge of some graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Vertex(Id),
    Edge(Id),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Vertex(id) => write!(f, "vertex {id}"),
            Item::Edge(id) => write!(f, "edge {id}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: Id,
    pub tgt: Id,
    pub label: Label,
}

impl Edge {
    pub fn new(src: impl Into<Id>, tgt: impl Into<Id>, label: impl Into<Label>) -> Self {
        Edge {
            src: src.into(),
            tgt: tgt.into(),
            label: label.into(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.tgt
    }
}

/// A broken graph invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphViolation {
    DanglingSource { edge: Id, vertex: Id },
    DanglingTarget { edge: Id, vertex: Id },
    EmptyLabel { edge: Id },
    EmptyId(Item),
    DuplicateVertex(Id),
    DuplicateEdge(Id),
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::DanglingSource { edge, vertex } => {
                write!(f, "edge {edge} has unknown source vertex {vertex}")
            }
            GraphViolation::DanglingTarget { edge, vertex } => {
                write!(f, "edge {edge} has unknown target vertex {vertex}")
            }
            GraphViolation::EmptyLabel { edge } => write!(f, "edge {edge} has an empty label"),
            GraphViolation::EmptyId(item) => write!(f, "empty identifier ({item})"),
            GraphViolation::DuplicateVertex(id) => write!(f, "duplicate vertex id {id}"),
            GraphViolation::DuplicateEdge(id) => write!(f, "duplicate edge id {id}"),
        }
    }
}

/// A finite directed edge-labeled graph.
///
/// Insertion does not check endpoints; use [`Graph::violations`] (or build
/// with [`Graph::from_parts`]) to establish the graph invariants.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: BTreeSet<Id>,
    edges: BTreeMap<Id, Edge>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from raw lists, reporting duplicates as well as every
    /// violation [`Graph::violations`] would find.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = Id>,
        edges: impl IntoIterator<Item = (Id, Edge)>,
    ) -> Result<Graph, Vec<GraphViolation>> {
        let mut g = Graph::new();
        let mut errors = Vec::new();
        for v in vertices {
            if !g.vertices.insert(v.clone()) {
                errors.push(GraphViolation::DuplicateVertex(v));
            }
        }
        for (id, e) in edges {
            match g.edges.entry(id) {
                Entry::Occupied(o) => errors.push(GraphViolation::DuplicateEdge(o.key().clone())),
                Entry::Vacant(slot) => {
                    slot.insert(e);
                }
            }
        }
        errors.extend(g.violations());
        if errors.is_empty() {
            Ok(g)
        } else {
            Err(errors)
        }
    }

    pub fn with_vertex(mut self, id: impl Into<Id>) -> Self {
        self.add_vertex(id);
        self
    }

    pub fn with_edge(
        mut self,
        id: impl Into<Id>,
        src: impl Into<Id>,
        tgt: impl Into<Id>,
        label: impl Into<Label>,
    ) -> Self {
        self.add_edge(id, Edge::new(src, tgt, label));
        self
    }

    /// Adds the two opposite directed edges `fwd: u -> v` and `back: v -> u`.
    pub fn with_undirected(
        self,
        fwd: impl Into<Id>,
        back: impl Into<Id>,
        u: impl Into<Id>,
        v: impl Into<Id>,
        label: impl Into<Label>,
    ) -> Self {
        let (u, v, label) = (u.into(), v.into(), label.into());
        self.with_edge(fwd, u.clone(), v.clone(), label.clone())
            .with_edge(back, v, u, label)
    }

    /// Returns `false` if the vertex was already present.
    pub fn add_vertex(&mut self, id: impl Into<Id>) -> bool {
        self.vertices.insert(id.into())
    }

    /// Inserts an edge, returning the edge previously stored under `id`.
    pub fn add_edge(&mut self, id: impl Into<Id>, edge: Edge) -> Option<Edge> {
        self.edges.insert(id.into(), edge)
    }

    pub fn vertices(&self) -> &BTreeSet<Id> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<Id, Edge> {
        &self.edges
    }

    pub fn edge(&self, id: &Id) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn has_vertex(&self, id: &Id) -> bool {
        self.vertices.contains(id)
    }

    pub fn has_edge(&self, id: &Id) -> bool {
        self.edges.contains_key(id)
    }

    pub fn has_item(&self, item: &Item) -> bool {
        match item {
            Item::Vertex(v) => self.has_vertex(v),
            Item::Edge(e) => self.has_edge(e),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    /// Every vertex and edge, vertices first, each in id order.
    pub fn items(&self) -> impl Iterator<Item = Item> + '_ {
        self.vertices
            .iter()
            .cloned()
            .map(Item::Vertex)
            .chain(self.edges.keys().cloned().map(Item::Edge))
    }

    /// Edge ids whose source or target is `v`.
    pub fn incident_edges<'a>(&'a self, v: &'a Id) -> impl Iterator<Item = &'a Id> + 'a {
        self.edges
            .iter()
            .filter(move |(_, e)| &e.src == v || &e.tgt == v)
            .map(|(id, _)| id)
    }

    /// The subgraph spanned by the given id sets. Ids absent from `self` are
    /// ignored; edges whose endpoints are not kept are kept anyway, so callers
    /// validate closedness themselves.
    pub fn restrict_to(&self, vertices: &BTreeSet<Id>, edges: &BTreeSet<Id>) -> Graph {
        Graph {
            vertices: self.vertices.intersection(vertices).cloned().collect(),
            edges: self
                .edges
                .iter()
                .filter(|(id, _)| edges.contains(*id))
                .map(|(id, e)| (id.clone(), e.clone()))
                .collect(),
        }
    }

    /// True iff `self` is a subgraph of `other` by id-sharing: every vertex is
    /// present and every edge is present with identical data.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self
                .edges
                .iter()
                .all(|(id, e)| other.edges.get(id) == Some(e))
    }

    /// All invariant violations; empty iff the graph is well formed.
    pub fn violations(&self) -> Vec<GraphViolation> {
        let mut out = Vec::new();
        for v in &self.vertices {
            if v.as_str().is_empty() {
                out.push(GraphViolation::EmptyId(Item::Vertex(v.clone())));
            }
        }
        for (id, e) in &self.edges {
            if id.as_str().is_empty() {
                out.push(GraphViolation::EmptyId(Item::Edge(id.clone())));
            }
            if !self.vertices.contains(&e.src) {
                out.push(GraphViolation::DanglingSource {
                    edge: id.clone(),
                    vertex: e.src.clone(),
                });
            }
            if !self.vertices.contains(&e.tgt) {
                out.push(GraphViolation::DanglingTarget {
                    edge: id.clone(),
                    vertex: e.tgt.clone(),
                });
            }
            if e.label.as_str().is_empty() {
                out.push(GraphViolation::EmptyLabel { edge: id.clone() });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Checks the graph invariants; see [`Graph::violations`].
pub fn validate_graph(g: &Graph) -> Vec<GraphViolation> {
    g.violations()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_is_valid() {
        assert!(validate_graph(&Graph::new()).is_empty());
    }

    #[test]
    fn dangling_target_is_reported() {
        let g = Graph::new()
            .with_vertex("v1")
            .with_edge("e", "v1", "v9", "*");
        assert_eq!(
            validate_graph(&g),
            [GraphViolation::DanglingTarget {
                edge: "e".into(),
                vertex: "v9".into()
            }]
        );
    }

    #[test]
    fn from_parts_reports_duplicates() {
        let err = Graph::from_parts(
            ["v".into(), "v".into()],
            [
                ("e".into(), Edge::new("v", "v", "a")),
                ("e".into(), Edge::new("v", "v", "b")),
            ],
        )
        .unwrap_err();
        assert!(err.contains(&GraphViolation::DuplicateVertex("v".into())));
        assert!(err.contains(&GraphViolation::DuplicateEdge("e".into())));
    }

    #[test]
    fn empty_label_is_reported() {
        let g = Graph::new().with_vertex("v").with_edge("e", "v", "v", "");
        assert_eq!(
            validate_graph(&g),
            [GraphViolation::EmptyLabel { edge: "e".into() }]
        );
    }

    #[test]
    fn subgraph_requires_identical_edge_data() {
        let host = Graph::new()
            .with_vertex("u")
            .with_vertex("v")
            .with_edge("e", "u", "v", "a");
        let same = Graph::new()
            .with_vertex("u")
            .with_vertex("v")
            .with_edge("e", "u", "v", "a");
        let relabeled = Graph::new()
            .with_vertex("u")
            .with_vertex("v")
            .with_edge("e", "u", "v", "b");
        assert!(same.is_subgraph_of(&host));
        assert!(!relabeled.is_subgraph_of(&host));
    }
}
