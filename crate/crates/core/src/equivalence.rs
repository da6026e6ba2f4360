//! Equality of derivations up to isomorphism.
//!
//! Two derivations are equal up to isomorphism if they apply the same rules
//! and a start isomorphism extends, step by step, to isomorphisms of the
//! intermediate and derived graphs that commute with all matches and
//! inclusions. Given the start isomorphism the extension is forced: on `Z`
//! it is the restriction of the previous one, on created items it is
//! dictated by the right matches. Only the start isomorphism is searched.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::derivation::Derivation;
use crate::graph::{Graph, Id};
use crate::matching::for_each_isomorphism;
use crate::morphism::GraphMorphism;
use crate::step::DerivationStep;

/// Start isomorphisms tried before giving up.
pub const DEFAULT_ISO_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepIso {
    /// `Z -> Z'`
    pub intermediate: GraphMorphism,
    /// `H -> H'`
    pub derived: GraphMorphism,
}

/// Chain of isomorphisms from one derivation to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationIso {
    pub start: GraphMorphism,
    pub steps: Vec<StepIso>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Found(DerivationIso),
    NotEqual,
    /// The cap was reached without finding a chain.
    Undecided { tried: usize },
}

impl IsoOutcome {
    pub fn found(&self) -> Option<&DerivationIso> {
        match self {
            IsoOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

fn map_all(map: &BTreeMap<Id, Id>, keys: &Graph, vertices: bool) -> Option<BTreeMap<Id, Id>> {
    let mut out = BTreeMap::new();
    if vertices {
        for v in keys.vertices() {
            out.insert(v.clone(), map.get(v)?.clone());
        }
    } else {
        for e in keys.edges().keys() {
            out.insert(e.clone(), map.get(e)?.clone());
        }
    }
    Some(out)
}

fn is_iso(m: &GraphMorphism) -> bool {
    m.is_valid() && m.classify().iso
}

/// Extends `phi: G1 -> G2` across one step pair, if compatible.
fn extend(phi: &GraphMorphism, s1: &DerivationStep, s2: &DerivationStep) -> Option<StepIso> {
    if s1.rule() != s2.rule() {
        return None;
    }
    if phi.dom() != s1.input() || phi.cod() != s2.input() {
        return None;
    }
    // g2 = phi ∘ g1
    if s1.g().then(phi).ok()?.vmap() != s2.g().vmap() || s1.g().then(phi).ok()?.emap() != s2.g().emap() {
        return None;
    }
    let z1 = s1.intermediate();
    let z2 = s2.intermediate();
    let intermediate = GraphMorphism::new_unchecked(
        z1.clone(),
        z2.clone(),
        map_all(phi.vmap(), z1, true)?,
        map_all(phi.emap(), z1, false)?,
    );
    if !is_iso(&intermediate) {
        return None;
    }
    let mut vmap = intermediate.vmap().clone();
    let mut emap = intermediate.emap().clone();
    let k = s1.rule().interface();
    for v in s1.rule().rhs().vertices().iter().filter(|v| !k.has_vertex(v)) {
        vmap.insert(s1.h().vertex(v)?.clone(), s2.h().vertex(v)?.clone());
    }
    for e in s1.rule().rhs().edges().keys().filter(|e| !k.has_edge(e)) {
        emap.insert(s1.h().edge(e)?.clone(), s2.h().edge(e)?.clone());
    }
    let derived = GraphMorphism::new_unchecked(s1.output().clone(), s2.output().clone(), vmap, emap);
    if !is_iso(&derived) {
        return None;
    }
    let h = s1.h().then(&derived).ok()?;
    if h.vmap() != s2.h().vmap() || h.emap() != s2.h().emap() {
        return None;
    }
    Some(StepIso {
        intermediate,
        derived,
    })
}

fn propagate(start: GraphMorphism, d: &Derivation, d2: &Derivation) -> Option<DerivationIso> {
    let mut steps = Vec::with_capacity(d.len());
    let mut phi = start.clone();
    for (s1, s2) in d.steps().iter().zip(d2.steps()) {
        let si = extend(&phi, s1, s2)?;
        phi = si.derived.clone();
        steps.push(si);
    }
    Some(DerivationIso { start, steps })
}

/// `d ≡ d2`, trying at most `cap` start isomorphisms.
pub fn derivations_equal_up_to_iso_capped(d: &Derivation, d2: &Derivation, cap: usize) -> IsoOutcome {
    if d.len() != d2.len() || d.rule_names() != d2.rule_names() {
        return IsoOutcome::NotEqual;
    }
    let mut tried = 0;
    if d.start() == d2.start() {
        tried += 1;
        if let Some(w) = propagate(GraphMorphism::identity(d.start().clone()), d, d2) {
            return IsoOutcome::Found(w);
        }
    }
    let mut found = None;
    let mut capped = false;
    for_each_isomorphism(d.start(), d2.start(), &mut |phi| {
        if tried >= cap {
            capped = true;
            return ControlFlow::Break(());
        }
        tried += 1;
        match propagate(phi, d, d2) {
            Some(w) => {
                found = Some(w);
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    match (found, capped) {
        (Some(w), _) => IsoOutcome::Found(w),
        (None, true) => IsoOutcome::Undecided { tried },
        (None, false) => IsoOutcome::NotEqual,
    }
}

/// `d ≡ d2` with the default cap.
pub fn derivations_equal_up_to_iso(d: &Derivation, d2: &Derivation) -> IsoOutcome {
    derivations_equal_up_to_iso_capped(d, d2, DEFAULT_ISO_CAP)
}

impl DerivationIso {
    /// Checks that every map is an isomorphism between the corresponding
    /// graphs of `d` and `d2` and that all squares commute.
    pub fn verify(&self, d: &Derivation, d2: &Derivation) -> bool {
        if d.len() != d2.len() || self.steps.len() != d.len() {
            return false;
        }
        if self.start.dom() != d.start() || self.start.cod() != d2.start() || !is_iso(&self.start) {
            return false;
        }
        let mut phi = self.start.clone();
        for ((s1, s2), si) in d.steps().iter().zip(d2.steps()).zip(&self.steps) {
            match extend(&phi, s1, s2) {
                Some(e) if e == *si => phi = e.derived,
                _ => return false,
            }
        }
        true
    }

    /// The chain read backwards, from `d2` to `d`.
    pub fn inverse(&self) -> DerivationIso {
        let inv = |m: &GraphMorphism| m.inverse().expect("chain maps are isomorphisms");
        DerivationIso {
            start: inv(&self.start),
            steps: self
                .steps
                .iter()
                .map(|s| StepIso {
                    intermediate: inv(&s.intermediate),
                    derived: inv(&s.derived),
                })
                .collect(),
        }
    }

    /// `other` after `self`: a chain from the source of `self` to the target
    /// of `other`.
    pub fn then(&self, other: &DerivationIso) -> Option<DerivationIso> {
        if self.steps.len() != other.steps.len() {
            return None;
        }
        Some(DerivationIso {
            start: self.start.then(&other.start).ok()?,
            steps: self
                .steps
                .iter()
                .zip(&other.steps)
                .map(|(a, b)| {
                    Some(StepIso {
                        intermediate: a.intermediate.then(&b.intermediate).ok()?,
                        derived: a.derived.then(&b.derived).ok()?,
                    })
                })
                .collect::<Option<Vec<_>>>()?,
        })
    }
}

/// Renames every id of `d` through `rename`, which must be injective; gives
/// a derivation equal to `d` up to isomorphism.
pub fn rename_derivation(d: &Derivation, rename: &dyn Fn(&Id) -> Id) -> Derivation {
    let graph = |g: &Graph| -> Graph {
        let mut out = Graph::new();
        for v in g.vertices() {
            out.add_vertex(rename(v));
        }
        for (id, e) in g.edges() {
            out.add_edge(
                rename(id),
                crate::graph::Edge {
                    src: rename(&e.src),
                    tgt: rename(&e.tgt),
                    label: e.label.clone(),
                },
            );
        }
        out
    };
    let mut cache: BTreeMap<*const Graph, Arc<Graph>> = BTreeMap::new();
    let mut arc = |g: &Arc<Graph>| -> Arc<Graph> {
        cache
            .entry(Arc::as_ptr(g))
            .or_insert_with(|| Arc::new(graph(g)))
            .clone()
    };
    let start = arc(d.start());
    let mut steps = Vec::with_capacity(d.len());
    let mut input = start.clone();
    for s in d.steps() {
        let z = arc(s.intermediate());
        let output = arc(s.output());
        let out_map = |m: &GraphMorphism, cod: &Arc<Graph>| {
            GraphMorphism::new_unchecked(
                m.dom().clone(),
                cod.clone(),
                m.vmap().iter().map(|(a, b)| (a.clone(), rename(b))).collect(),
                m.emap().iter().map(|(a, b)| (a.clone(), rename(b))).collect(),
            )
        };
        let incl = |sub: &Arc<Graph>, host: &Arc<Graph>| {
            GraphMorphism::inclusion(sub.clone(), host.clone()).expect("renaming keeps inclusions")
        };
        steps.push(DerivationStep::from_parts_unchecked(
            s.rule().clone(),
            out_map(s.g(), &input),
            out_map(s.z(), &z),
            out_map(s.h(), &output),
            incl(&z, &input),
            incl(&z, &output),
        ));
        input = output;
    }
    Derivation::new(start, steps).expect("renaming keeps the chain")
}
