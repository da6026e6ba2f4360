//! Restriction of a derivation to a subgraph of its start graph, and the
//! spine as the restriction to the accessed part.
//!
//! A restricted step applies the same rule at the corestricted match and
//! reuses the ids created by the original step, so every restricted graph
//! is an id-subgraph of the graph it was restricted from.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::access::{accessed_part, AccessedPart};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::graph::{Graph, Id, Item};
use crate::step::{apply_with, double_pushout_defects, DerivationStep, FreshIds};
use crate::subgraph::SubgraphHandle;

/// `step` restricted to the subgraph `m` of its input, together with the
/// restricted output as a subgraph of the original output.
pub fn restrict_step(step: &DerivationStep, m: &SubgraphHandle) -> Result<(DerivationStep, SubgraphHandle)> {
    if m.host() != step.input() {
        return Err(Error::HostMismatch);
    }
    let sub = Arc::new(m.materialize());
    let g = step.g().corestrict(&sub).ok_or_else(|| {
        let image = step.g().image();
        Error::DoesNotFactor(image.missing_from(m))
    })?;
    let restricted = apply_with(step.rule(), &g, FreshIds::Reuse(step.h()))?;
    let out = SubgraphHandle::of_subgraph(step.output().clone(), restricted.output())?;
    Ok((restricted, out))
}

/// A restricted derivation with the subgraph chain that embeds it into the
/// original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionCertificate {
    pub original: Derivation,
    /// `mono_chain[i]` embeds the `i`-th restricted graph into the `i`-th
    /// original graph.
    pub mono_chain: Vec<SubgraphHandle>,
    pub restricted: Derivation,
}

fn ids(g: &Graph) -> (BTreeSet<Id>, BTreeSet<Id>) {
    (g.vertices().clone(), g.edges().keys().cloned().collect())
}

impl RestrictionCertificate {
    /// Everything wrong with the per-step decomposition: restricted steps
    /// must be double pushouts, `Z' = Z ∩ G'` and `Z' = Z ∩ H'` (the two
    /// pullbacks), and `H'` must be covered by `Z'` and the right match.
    pub fn defects(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.original.len();
        if self.restricted.len() != n || self.mono_chain.len() != n + 1 {
            out.push(String::from("lengths do not match"));
            return out;
        }
        for (i, handle) in self.mono_chain.iter().enumerate() {
            let original = match i {
                0 => self.original.start(),
                _ => self.original.steps()[i - 1].output(),
            };
            let restricted = match i {
                0 => self.restricted.start(),
                _ => self.restricted.steps()[i - 1].output(),
            };
            if handle.host() != original || handle.materialize() != **restricted {
                out.push(format!("graph {i} is not the subgraph recorded in the chain"));
            }
        }
        for (i, (orig, rest)) in self.original.steps().iter().zip(self.restricted.steps()).enumerate() {
            if orig.rule() != rest.rule() {
                out.push(format!("step {i}: rule differs"));
            }
            for d in double_pushout_defects(rest) {
                out.push(format!("step {i}: {d}"));
            }
            let z = ids(orig.intermediate());
            let z_r = ids(rest.intermediate());
            for (which, side) in [("G'", rest.input()), ("H'", rest.output())] {
                let s = ids(side);
                let meet = (
                    z.0.intersection(&s.0).cloned().collect(),
                    z.1.intersection(&s.1).cloned().collect(),
                );
                if z_r != meet {
                    out.push(format!("step {i}: Z' is not Z ∩ {which}"));
                }
            }
            let image = rest.h().image();
            let mut cover = z_r.clone();
            cover.0.extend(image.vertices().iter().cloned());
            cover.1.extend(image.edges().iter().cloned());
            if cover != ids(rest.output()) {
                out.push(format!("step {i}: H' is not Z' ∪ h(R)"));
            }
        }
        out
    }

    pub fn check(&self) -> bool {
        self.defects().is_empty()
    }
}

/// `d|m`. The accessed part of `d` must lie inside `m`.
pub fn restrict(d: &Derivation, m: &SubgraphHandle) -> Result<RestrictionCertificate> {
    restrict_with(d, m, &accessed_part(d))
}

fn restrict_with(d: &Derivation, m: &SubgraphHandle, acc: &AccessedPart) -> Result<RestrictionCertificate> {
    if m.host() != d.start() {
        return Err(Error::HostMismatch);
    }
    let missing = acc.handle.missing_from(m);
    if !missing.is_empty() {
        return Err(Error::DoesNotFactor(missing));
    }
    let mut chain = Vec::with_capacity(d.len() + 1);
    chain.push(m.clone());
    let mut restricted = Derivation::empty(Arc::new(m.materialize()));
    for step in d.steps() {
        let (s, next) = restrict_step(step, chain.last().expect("chain starts non-empty"))?;
        restricted.push(s)?;
        chain.push(next);
    }
    Ok(RestrictionCertificate {
        original: d.clone(),
        mono_chain: chain,
        restricted,
    })
}

/// The accessed part of `d` and the restriction of `d` to it.
pub fn spine(d: &Derivation) -> (AccessedPart, Derivation) {
    let acc = accessed_part(d);
    let cert = restrict_with(d, &acc.handle, &acc)
        .expect("a derivation restricts to its own accessed part");
    (acc, cert.restricted)
}

/// Items of `m` that `d` needs but that lie outside it, empty if `d`
/// restricts to `m`.
pub fn missing_for_restriction(d: &Derivation, m: &SubgraphHandle) -> Vec<Item> {
    accessed_part(d).handle.missing_from(m)
}
