//! Graph morphisms and their epi-mono factorization.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Id, Item, Label};
use crate::subgraph::SubgraphHandle;

/// A broken morphism invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    UnmappedVertex(Id),
    UnmappedEdge(Id),
    UnknownVertexKey(Id),
    UnknownEdgeKey(Id),
    VertexImageMissing { vertex: Id, image: Id },
    EdgeImageMissing { edge: Id, image: Id },
    SourceMismatch { edge: Id },
    TargetMismatch { edge: Id },
    LabelMismatch { edge: Id, expected: Label, found: Label },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::UnmappedVertex(v) => write!(f, "vertex {v} is not mapped"),
            MorphismViolation::UnmappedEdge(e) => write!(f, "edge {e} is not mapped"),
            MorphismViolation::UnknownVertexKey(v) => {
                write!(f, "vertex map mentions {v}, which is not in the domain")
            }
            MorphismViolation::UnknownEdgeKey(e) => {
                write!(f, "edge map mentions {e}, which is not in the domain")
            }
            MorphismViolation::VertexImageMissing { vertex, image } => {
                write!(f, "vertex {vertex} maps to {image}, which is not in the codomain")
            }
            MorphismViolation::EdgeImageMissing { edge, image } => {
                write!(f, "edge {edge} maps to {image}, which is not in the codomain")
            }
            MorphismViolation::SourceMismatch { edge } => {
                write!(f, "edge {edge}: source is not preserved")
            }
            MorphismViolation::TargetMismatch { edge } => {
                write!(f, "edge {edge}: target is not preserved")
            }
            MorphismViolation::LabelMismatch {
                edge,
                expected,
                found,
            } => write!(f, "edge {edge}: label {expected} mapped onto label {found}"),
        }
    }
}

/// A pair of vertex and edge maps between two graphs.
///
/// Construction through [`GraphMorphism::new`] checks totality and structure
/// preservation; [`GraphMorphism::new_unchecked`] defers that to
/// [`GraphMorphism::violations`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    dom: Arc<Graph>,
    cod: Arc<Graph>,
    vmap: BTreeMap<Id, Id>,
    emap: BTreeMap<Id, Id>,
}

/// Injectivity / surjectivity summary of a morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub mono: bool,
    pub epi: bool,
    pub iso: bool,
}

/// `m = mono ∘ epi` with `image` the subgraph of the codomain hit by `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub epi: GraphMorphism,
    pub image: SubgraphHandle,
    pub mono: GraphMorphism,
}

impl GraphMorphism {
    pub fn new(
        dom: Arc<Graph>,
        cod: Arc<Graph>,
        vmap: BTreeMap<Id, Id>,
        emap: BTreeMap<Id, Id>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(dom, cod, vmap, emap);
        let violations = m.violations();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidMorphism(violations))
        }
    }

    pub fn new_unchecked(
        dom: Arc<Graph>,
        cod: Arc<Graph>,
        vmap: BTreeMap<Id, Id>,
        emap: BTreeMap<Id, Id>,
    ) -> Self {
        GraphMorphism {
            dom,
            cod,
            vmap,
            emap,
        }
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        let vmap = g.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
        let emap = g.edges().keys().map(|e| (e.clone(), e.clone())).collect();
        GraphMorphism {
            dom: g.clone(),
            cod: g,
            vmap,
            emap,
        }
    }

    /// The id-sharing inclusion of `sub` into `host`.
    pub fn inclusion(sub: Arc<Graph>, host: Arc<Graph>) -> Result<Self> {
        if !sub.is_subgraph_of(&host) {
            let missing = sub.items().filter(|i| !host.has_item(i)).collect::<Vec<_>>();
            return Err(Error::NotASubgraph(missing));
        }
        let vmap = sub.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
        let emap = sub.edges().keys().map(|e| (e.clone(), e.clone())).collect();
        Ok(GraphMorphism {
            dom: sub,
            cod: host,
            vmap,
            emap,
        })
    }

    /// The unique morphism out of the empty graph.
    pub fn empty_into(cod: Arc<Graph>) -> Self {
        GraphMorphism {
            dom: Arc::new(Graph::new()),
            cod,
            vmap: BTreeMap::new(),
            emap: BTreeMap::new(),
        }
    }

    pub fn dom(&self) -> &Arc<Graph> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Graph> {
        &self.cod
    }

    pub fn vmap(&self) -> &BTreeMap<Id, Id> {
        &self.vmap
    }

    pub fn emap(&self) -> &BTreeMap<Id, Id> {
        &self.emap
    }

    pub fn vertex(&self, v: &Id) -> Option<&Id> {
        self.vmap.get(v)
    }

    pub fn edge(&self, e: &Id) -> Option<&Id> {
        self.emap.get(e)
    }

    pub fn item(&self, item: &Item) -> Option<Item> {
        match item {
            Item::Vertex(v) => self.vmap.get(v).cloned().map(Item::Vertex),
            Item::Edge(e) => self.emap.get(e).cloned().map(Item::Edge),
        }
    }

    /// Same maps, different codomain. The caller is responsible for the
    /// result being a morphism; see [`GraphMorphism::violations`].
    pub fn with_cod(&self, cod: Arc<Graph>) -> Self {
        GraphMorphism {
            dom: self.dom.clone(),
            cod,
            vmap: self.vmap.clone(),
            emap: self.emap.clone(),
        }
    }

    /// Same maps, different domain.
    pub fn with_dom(&self, dom: Arc<Graph>) -> Self {
        GraphMorphism {
            dom,
            cod: self.cod.clone(),
            vmap: self.vmap.clone(),
            emap: self.emap.clone(),
        }
    }

    /// Factors `self` through the id-subgraph `sub` of its codomain, if the
    /// image lies inside `sub`.
    pub fn corestrict(&self, sub: &Arc<Graph>) -> Option<GraphMorphism> {
        let inside = self.vmap.values().all(|v| sub.has_vertex(v))
            && self.emap.values().all(|e| sub.has_edge(e));
        inside.then(|| self.with_cod(sub.clone()))
    }

    /// Restriction of the maps to the id-subgraph `sub` of the domain.
    pub fn restrict_dom(&self, sub: Arc<Graph>) -> GraphMorphism {
        let vmap = sub
            .vertices()
            .iter()
            .filter_map(|v| self.vmap.get(v).map(|w| (v.clone(), w.clone())))
            .collect();
        let emap = sub
            .edges()
            .keys()
            .filter_map(|e| self.emap.get(e).map(|f| (e.clone(), f.clone())))
            .collect();
        GraphMorphism {
            dom: sub,
            cod: self.cod.clone(),
            vmap,
            emap,
        }
    }

    /// All violations of totality and structure preservation.
    pub fn violations(&self) -> Vec<MorphismViolation> {
        let mut out = Vec::new();
        for v in self.dom.vertices() {
            match self.vmap.get(v) {
                None => out.push(MorphismViolation::UnmappedVertex(v.clone())),
                Some(w) if !self.cod.has_vertex(w) => {
                    out.push(MorphismViolation::VertexImageMissing {
                        vertex: v.clone(),
                        image: w.clone(),
                    })
                }
                Some(_) => {}
            }
        }
        for v in self.vmap.keys() {
            if !self.dom.has_vertex(v) {
                out.push(MorphismViolation::UnknownVertexKey(v.clone()));
            }
        }
        for e in self.emap.keys() {
            if !self.dom.has_edge(e) {
                out.push(MorphismViolation::UnknownEdgeKey(e.clone()));
            }
        }
        for (id, edge) in self.dom.edges() {
            let Some(image_id) = self.emap.get(id) else {
                out.push(MorphismViolation::UnmappedEdge(id.clone()));
                continue;
            };
            let Some(image) = self.cod.edge(image_id) else {
                out.push(MorphismViolation::EdgeImageMissing {
                    edge: id.clone(),
                    image: image_id.clone(),
                });
                continue;
            };
            if self.vmap.get(&edge.src) != Some(&image.src) {
                out.push(MorphismViolation::SourceMismatch { edge: id.clone() });
            }
            if self.vmap.get(&edge.tgt) != Some(&image.tgt) {
                out.push(MorphismViolation::TargetMismatch { edge: id.clone() });
            }
            if edge.label != image.label {
                out.push(MorphismViolation::LabelMismatch {
                    edge: id.clone(),
                    expected: edge.label.clone(),
                    found: image.label.clone(),
                });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// `other ∘ self`. Requires `cod(self) == dom(other)`.
    pub fn then(&self, other: &GraphMorphism) -> Result<GraphMorphism> {
        if self.cod != other.dom {
            return Err(Error::DomainMismatch);
        }
        let vmap = self
            .vmap
            .iter()
            .filter_map(|(k, v)| other.vmap.get(v).map(|w| (k.clone(), w.clone())))
            .collect();
        let emap = self
            .emap
            .iter()
            .filter_map(|(k, e)| other.emap.get(e).map(|f| (k.clone(), f.clone())))
            .collect();
        Ok(GraphMorphism {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            vmap,
            emap,
        })
    }

    pub fn is_injective(&self) -> bool {
        injective(&self.vmap) && injective(&self.emap)
    }

    pub fn is_surjective(&self) -> bool {
        let vimg: BTreeSet<&Id> = self.vmap.values().collect();
        let eimg: BTreeSet<&Id> = self.emap.values().collect();
        self.cod.vertices().iter().all(|v| vimg.contains(v))
            && self.cod.edges().keys().all(|e| eimg.contains(e))
    }

    pub fn classify(&self) -> Classification {
        let mono = self.is_injective();
        let epi = self.is_surjective();
        Classification {
            mono,
            epi,
            iso: mono && epi,
        }
    }

    /// The image `m(dom)` as a subgraph of the codomain.
    pub fn image(&self) -> SubgraphHandle {
        SubgraphHandle::new_unchecked(
            self.cod.clone(),
            self.vmap.values().cloned().collect(),
            self.emap.values().cloned().collect(),
        )
    }

    /// Epi-mono factorization through the image.
    pub fn epi_mono_factorize(&self) -> Factorization {
        let image = self.image();
        let image_graph = Arc::new(image.materialize());
        let epi = self.with_cod(image_graph.clone());
        let mono = GraphMorphism {
            vmap: image_graph
                .vertices()
                .iter()
                .map(|v| (v.clone(), v.clone()))
                .collect(),
            emap: image_graph
                .edges()
                .keys()
                .map(|e| (e.clone(), e.clone()))
                .collect(),
            dom: image_graph,
            cod: self.cod.clone(),
        };
        Factorization { epi, image, mono }
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<GraphMorphism> {
        if !self.classify().iso {
            return None;
        }
        Some(GraphMorphism {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            vmap: self.vmap.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
            emap: self.emap.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        })
    }
}

fn injective(map: &BTreeMap<Id, Id>) -> bool {
    let mut seen = BTreeSet::new();
    map.values().all(|v| seen.insert(v))
}

/// Checks totality and structure preservation; see
/// [`GraphMorphism::violations`].
pub fn validate_morphism(m: &GraphMorphism) -> Vec<MorphismViolation> {
    m.violations()
}

/// `g ∘ f`.
pub fn compose(f: &GraphMorphism, g: &GraphMorphism) -> Result<GraphMorphism> {
    f.then(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<Id, Id> {
        pairs.iter().map(|(a, b)| (Id::from(*a), Id::from(*b))).collect()
    }

    fn two_vertices() -> Arc<Graph> {
        Arc::new(Graph::new().with_vertex("x").with_vertex("y"))
    }

    #[test]
    fn identity_is_iso() {
        let g = Arc::new(
            Graph::new()
                .with_vertex("v")
                .with_edge("l", "v", "v", "a"),
        );
        let id = GraphMorphism::identity(g);
        assert!(id.violations().is_empty());
        assert_eq!(
            id.classify(),
            Classification {
                mono: true,
                epi: true,
                iso: true
            }
        );
    }

    #[test]
    fn label_violation() {
        let dom = Arc::new(Graph::new().with_vertex("v").with_edge("l", "v", "v", "a"));
        let cod = Arc::new(Graph::new().with_vertex("w").with_edge("k", "w", "w", "*"));
        let m = GraphMorphism::new_unchecked(dom, cod, map(&[("v", "w")]), map(&[("l", "k")]));
        assert_eq!(
            m.violations(),
            vec![MorphismViolation::LabelMismatch {
                edge: "l".into(),
                expected: "a".into(),
                found: "*".into()
            }]
        );
    }

    #[test]
    fn unmapped_and_unknown_entries() {
        let dom = two_vertices();
        let cod = Arc::new(Graph::new().with_vertex("z"));
        let m = GraphMorphism::new_unchecked(dom, cod, map(&[("x", "z"), ("q", "z")]), map(&[]));
        let v = m.violations();
        assert!(v.contains(&MorphismViolation::UnmappedVertex("y".into())));
        assert!(v.contains(&MorphismViolation::UnknownVertexKey("q".into())));
    }

    #[test]
    fn compose_with_identity_and_mismatch() {
        let dom = two_vertices();
        let cod = Arc::new(Graph::new().with_vertex("a").with_vertex("b").with_vertex("c"));
        let f = GraphMorphism::new(dom.clone(), cod.clone(), map(&[("x", "a"), ("y", "c")]), map(&[]))
            .unwrap();
        assert_eq!(f.then(&GraphMorphism::identity(cod)).unwrap(), f);
        assert_eq!(GraphMorphism::identity(dom.clone()).then(&f).unwrap(), f);
        assert_eq!(
            f.then(&GraphMorphism::identity(dom)),
            Err(Error::DomainMismatch)
        );
    }

    #[test]
    fn fold_is_epi_not_mono() {
        let dom = two_vertices();
        let cod = Arc::new(Graph::new().with_vertex("z"));
        let m = GraphMorphism::new(dom, cod, map(&[("x", "z"), ("y", "z")]), map(&[])).unwrap();
        let c = m.classify();
        assert!(c.epi && !c.mono && !c.iso);
        let fact = m.epi_mono_factorize();
        assert_eq!(fact.image.vertices().len(), 1);
        assert_eq!(fact.epi.then(&fact.mono).unwrap(), m);
    }

    #[test]
    fn factorization_of_mono_has_iso_epi() {
        let dom = two_vertices();
        let cod = Arc::new(Graph::new().with_vertex("a").with_vertex("b").with_vertex("c"));
        let m = GraphMorphism::new(dom, cod, map(&[("x", "a"), ("y", "b")]), map(&[])).unwrap();
        let fact = m.epi_mono_factorize();
        assert!(fact.epi.classify().iso);
        assert!(fact.mono.classify().mono);
        assert_eq!(fact.epi.then(&fact.mono).unwrap(), m);
        assert!(fact.image.is_valid());
    }

    #[test]
    fn inverse_round_trips() {
        let dom = two_vertices();
        let cod = Arc::new(Graph::new().with_vertex("a").with_vertex("b"));
        let m = GraphMorphism::new(dom.clone(), cod, map(&[("x", "b"), ("y", "a")]), map(&[])).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.then(&inv).unwrap(), GraphMorphism::identity(dom));
    }
}
