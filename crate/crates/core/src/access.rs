//! The accessed part of a derivation: the part of the start graph that some
//! left match reads, directly or through items kept until a later step.
//!
//! `acc(G ⇒⁰ G) = ∅` and `acc(G ⇒ H ⇒ⁿ X) = (acc(H ⇒ⁿ X) ∩ Z) ∪ g(L)`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::subgraph::SubgraphHandle;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessedPart {
    pub derivation: Derivation,
    /// Subgraph of `derivation.start()`.
    pub handle: SubgraphHandle,
    /// `suffixes[i]` is the accessed part of the steps from `i` on, as a
    /// subgraph of the `i`-th graph; the last entry is empty.
    pub suffixes: Vec<SubgraphHandle>,
}

/// One backward pass over the steps.
pub fn accessed_part(d: &Derivation) -> AccessedPart {
    let mut suffixes = Vec::with_capacity(d.len() + 1);
    let mut acc = SubgraphHandle::empty(d.end().clone());
    suffixes.push(acc.clone());
    for step in d.steps().iter().rev() {
        acc = step_back(&acc, step.intermediate(), step.input(), step.g().image());
        suffixes.push(acc.clone());
    }
    suffixes.reverse();
    AccessedPart {
        derivation: d.clone(),
        handle: acc,
        suffixes,
    }
}

fn step_back(
    later: &SubgraphHandle,
    z: &Arc<Graph>,
    input: &Arc<Graph>,
    read: SubgraphHandle,
) -> SubgraphHandle {
    let vertices = later
        .vertices()
        .iter()
        .filter(|v| z.has_vertex(v))
        .chain(read.vertices())
        .cloned()
        .collect();
    let edges = later
        .edges()
        .iter()
        .filter(|e| z.has_edge(e))
        .chain(read.edges())
        .cloned()
        .collect();
    // Items kept in Z exist in G, and Z is closed under edge endpoints.
    SubgraphHandle::new_unchecked(input.clone(), vertices, edges)
}

impl AccessedPart {
    /// Recomputes the handle from the stored per-step data.
    pub fn recompute(&self) -> SubgraphHandle {
        accessed_part(&self.derivation).handle
    }
}

/// The accessed part as a subgraph of `m`, if it lies inside `m`.
pub fn factors_through(acc: &AccessedPart, m: &SubgraphHandle) -> Result<Option<SubgraphHandle>> {
    if acc.handle.host() != m.host() {
        return Err(Error::HostMismatch);
    }
    if !acc.handle.is_subset(m)? {
        return Ok(None);
    }
    Ok(Some(acc.handle.rehost(Arc::new(m.materialize()))?))
}
