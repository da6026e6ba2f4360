//! Subgraphs of a fixed host, stored as id-subsets.
//!
//! Intersection and union of handles on the same host realize the pullback
//! of two inclusions and the pushout of that pullback; both reduce to
//! componentwise set operations.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Id, Item};
use crate::morphism::GraphMorphism;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphHandle {
    host: Arc<Graph>,
    vertices: BTreeSet<Id>,
    edges: BTreeSet<Id>,
}

impl SubgraphHandle {
    /// Fails if an id is absent from the host or an edge's endpoint is not
    /// among `vertices`.
    pub fn new(host: Arc<Graph>, vertices: BTreeSet<Id>, edges: BTreeSet<Id>) -> Result<Self> {
        let h = Self::new_unchecked(host, vertices, edges);
        let bad = h.defects();
        if bad.is_empty() {
            Ok(h)
        } else {
            Err(Error::NotASubgraph(bad))
        }
    }

    pub(crate) fn new_unchecked(
        host: Arc<Graph>,
        vertices: BTreeSet<Id>,
        edges: BTreeSet<Id>,
    ) -> Self {
        SubgraphHandle {
            host,
            vertices,
            edges,
        }
    }

    pub fn full(host: Arc<Graph>) -> Self {
        let vertices = host.vertices().clone();
        let edges = host.edges().keys().cloned().collect();
        SubgraphHandle {
            host,
            vertices,
            edges,
        }
    }

    pub fn empty(host: Arc<Graph>) -> Self {
        SubgraphHandle {
            host,
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    /// The handle of an id-subgraph `sub` of `host`.
    pub fn of_subgraph(host: Arc<Graph>, sub: &Graph) -> Result<Self> {
        if !sub.is_subgraph_of(&host) {
            let missing = sub.items().filter(|i| !host.has_item(i)).collect();
            return Err(Error::NotASubgraph(missing));
        }
        Ok(SubgraphHandle {
            host,
            vertices: sub.vertices().clone(),
            edges: sub.edges().keys().cloned().collect(),
        })
    }

    pub fn host(&self) -> &Arc<Graph> {
        &self.host
    }

    pub fn vertices(&self) -> &BTreeSet<Id> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Id> {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn contains(&self, item: &Item) -> bool {
        match item {
            Item::Vertex(v) => self.vertices.contains(v),
            Item::Edge(e) => self.edges.contains(e),
        }
    }

    /// Items that break the handle invariants.
    pub fn defects(&self) -> Vec<Item> {
        let mut out = Vec::new();
        for v in &self.vertices {
            if !self.host.has_vertex(v) {
                out.push(Item::Vertex(v.clone()));
            }
        }
        for e in &self.edges {
            match self.host.edge(e) {
                Some(edge)
                    if self.vertices.contains(&edge.src) && self.vertices.contains(&edge.tgt) => {}
                _ => out.push(Item::Edge(e.clone())),
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.defects().is_empty()
    }

    fn same_host(&self, other: &SubgraphHandle) -> Result<()> {
        if self.host == other.host {
            Ok(())
        } else {
            Err(Error::HostMismatch)
        }
    }

    pub fn intersect(&self, other: &SubgraphHandle) -> Result<SubgraphHandle> {
        self.same_host(other)?;
        Ok(SubgraphHandle {
            host: self.host.clone(),
            vertices: self.vertices.intersection(&other.vertices).cloned().collect(),
            edges: self.edges.intersection(&other.edges).cloned().collect(),
        })
    }

    pub fn union(&self, other: &SubgraphHandle) -> Result<SubgraphHandle> {
        self.same_host(other)?;
        Ok(SubgraphHandle {
            host: self.host.clone(),
            vertices: self.vertices.union(&other.vertices).cloned().collect(),
            edges: self.edges.union(&other.edges).cloned().collect(),
        })
    }

    /// Componentwise inclusion of id-sets; hosts must agree.
    pub fn is_subset(&self, other: &SubgraphHandle) -> Result<bool> {
        self.same_host(other)?;
        Ok(self.vertices.is_subset(&other.vertices) && self.edges.is_subset(&other.edges))
    }

    /// Items of `self` missing from `other`.
    pub fn missing_from(&self, other: &SubgraphHandle) -> Vec<Item> {
        self.vertices
            .difference(&other.vertices)
            .cloned()
            .map(Item::Vertex)
            .chain(self.edges.difference(&other.edges).cloned().map(Item::Edge))
            .collect()
    }

    /// The subgraph as a standalone graph with the host's ids.
    pub fn materialize(&self) -> Graph {
        self.host.restrict_to(&self.vertices, &self.edges)
    }

    pub fn inclusion(&self) -> GraphMorphism {
        GraphMorphism::inclusion(Arc::new(self.materialize()), self.host.clone())
            .expect("a handle materializes to a subgraph of its host")
    }

    /// The same id-sets viewed inside another host that contains them.
    pub fn rehost(&self, host: Arc<Graph>) -> Result<SubgraphHandle> {
        SubgraphHandle::new(host, self.vertices.clone(), self.edges.clone())
    }

    /// `outer ∘ inner`: `inner` lives in the materialization of `outer`; the
    /// result is the same id-sets as a handle of `outer`'s host.
    pub fn compose(outer: &SubgraphHandle, inner: &SubgraphHandle) -> Result<SubgraphHandle> {
        if *inner.host != outer.materialize() {
            return Err(Error::HostMismatch);
        }
        Ok(SubgraphHandle {
            host: outer.host.clone(),
            vertices: inner.vertices.clone(),
            edges: inner.edges.clone(),
        })
    }
}

pub fn intersect(a: &SubgraphHandle, b: &SubgraphHandle) -> Result<SubgraphHandle> {
    a.intersect(b)
}

pub fn union(a: &SubgraphHandle, b: &SubgraphHandle) -> Result<SubgraphHandle> {
    a.union(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn host() -> Arc<Graph> {
        Arc::new(
            Graph::new()
                .with_vertex("a")
                .with_vertex("b")
                .with_vertex("c")
                .with_edge("ab", "a", "b", "*")
                .with_edge("bc", "b", "c", "*"),
        )
    }

    fn handle(h: &Arc<Graph>, vs: &[&str], es: &[&str]) -> SubgraphHandle {
        SubgraphHandle::new(
            h.clone(),
            vs.iter().map(|v| Id::from(*v)).collect(),
            es.iter().map(|e| Id::from(*e)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn edge_without_endpoints_is_rejected() {
        let h = host();
        let err = SubgraphHandle::new(
            h,
            ["a"].into_iter().map(Id::from).collect(),
            ["ab"].into_iter().map(Id::from).collect(),
        )
        .unwrap_err();
        assert_eq!(err, Error::NotASubgraph(alloc::vec![Item::Edge("ab".into())]));
    }

    #[test]
    fn intersect_is_idempotent_and_disjoint_gives_empty() {
        let h = host();
        let a = handle(&h, &["a", "b"], &["ab"]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        let c = handle(&h, &["c"], &[]);
        assert!(a.intersect(&c).unwrap().is_empty());
    }

    #[test]
    fn union_with_empty() {
        let h = host();
        let a = handle(&h, &["b", "c"], &["bc"]);
        assert_eq!(a.union(&SubgraphHandle::empty(h)).unwrap(), a);
    }

    #[test]
    fn host_mismatch() {
        let a = SubgraphHandle::full(host());
        let other = SubgraphHandle::full(Arc::new(Graph::new().with_vertex("z")));
        assert_eq!(a.intersect(&other), Err(Error::HostMismatch));
        assert_eq!(a.union(&other), Err(Error::HostMismatch));
    }

    #[test]
    fn union_inclusion_is_mono() {
        let h = host();
        let a = handle(&h, &["a", "b"], &["ab"]);
        let b = handle(&h, &["b", "c"], &["bc"]);
        let u = a.union(&b).unwrap();
        assert!(u.is_valid());
        assert!(u.inclusion().classify().mono);
    }

    #[test]
    fn compose_handles() {
        let h = host();
        let outer = handle(&h, &["a", "b"], &["ab"]);
        let inner_host = Arc::new(outer.materialize());
        let inner = handle(&inner_host, &["b"], &[]);
        let composed = SubgraphHandle::compose(&outer, &inner).unwrap();
        assert_eq!(composed, handle(&h, &["b"], &[]));
    }
}
