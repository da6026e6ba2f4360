//! Parallel and sequential independence, conflux and interchange.
//!
//! Intermediate graphs are id-subgraphs of their hosts, so a witness
//! morphism exists exactly when a match image lies inside the other step's
//! intermediate graph, and it is then the corestriction of that match.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::derivation::applicable_matches;
use crate::error::{Error, Result};
use crate::graph::{Graph, Item};
use crate::matching::find_isomorphism;
use crate::morphism::GraphMorphism;
use crate::rule::Rule;
use crate::step::{apply, apply_with, DerivationStep, FreshIds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndependenceKind {
    /// Two steps out of the same graph.
    Parallel,
    /// Two consecutive steps.
    Sequential,
}

/// The pair of factorizations that makes two steps independent.
///
/// Parallel, for `s1: G ⇒ H` and `s2: G ⇒ H̄`: `f: L1 -> Z2` and
/// `f_bar: L2 -> Z1`. Sequential, for `s1: G ⇒ H̄` and `s2: H̄ ⇒ X`:
/// `f: R1 -> Z2` and `f_bar: L2 -> Z1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceWitness {
    pub kind: IndependenceKind,
    pub f: GraphMorphism,
    pub f_bar: GraphMorphism,
}

/// Items of the image of `m` missing from `z`.
fn outside(m: &GraphMorphism, z: &Graph) -> Vec<Item> {
    let image = m.image();
    let mut out: Vec<Item> = image
        .vertices()
        .iter()
        .filter(|v| !z.has_vertex(v))
        .cloned()
        .map(Item::Vertex)
        .collect();
    out.extend(
        image
            .edges()
            .iter()
            .filter(|e| !z.has_edge(e))
            .cloned()
            .map(Item::Edge),
    );
    out
}

fn witness(
    kind: IndependenceKind,
    first: &GraphMorphism,
    first_into: &Arc<Graph>,
    second: &GraphMorphism,
    second_into: &Arc<Graph>,
) -> Option<IndependenceWitness> {
    Some(IndependenceWitness {
        kind,
        f: first.corestrict(first_into)?,
        f_bar: second.corestrict(second_into)?,
    })
}

/// Witness for `s1` and `s2` out of the same graph, if they are parallel
/// independent.
pub fn parallel_independent(
    s1: &DerivationStep,
    s2: &DerivationStep,
) -> Result<Option<IndependenceWitness>> {
    if s1.input() != s2.input() {
        return Err(Error::DifferentStart);
    }
    Ok(witness(
        IndependenceKind::Parallel,
        s1.g(),
        s2.intermediate(),
        s2.g(),
        s1.intermediate(),
    ))
}

/// Witness for `s1` followed by `s2`, if they are sequentially independent.
pub fn sequentially_independent(
    s1: &DerivationStep,
    s2: &DerivationStep,
) -> Result<Option<IndependenceWitness>> {
    if s1.output() != s2.input() {
        return Err(Error::NotComposable { index: 1 });
    }
    Ok(witness(
        IndependenceKind::Sequential,
        s1.h(),
        s2.intermediate(),
        s2.g(),
        s1.intermediate(),
    ))
}

/// Why two steps fail to be independent, as readable text.
pub fn independence_failure(
    kind: IndependenceKind,
    s1: &DerivationStep,
    s2: &DerivationStep,
) -> Option<String> {
    let (a, a_name) = match kind {
        IndependenceKind::Parallel => (s1.g(), "g"),
        IndependenceKind::Sequential => (s1.h(), "h"),
    };
    let first = outside(a, s2.intermediate());
    let second = outside(s2.g(), s1.intermediate());
    let mut parts = Vec::new();
    if !first.is_empty() {
        parts.push(format!(
            "{} of {} uses {} removed by {}",
            a_name,
            s1.rule().name(),
            join(&first),
            s2.rule().name()
        ));
    }
    if !second.is_empty() {
        parts.push(format!(
            "g of {} uses {} {} by {}",
            s2.rule().name(),
            join(&second),
            match kind {
                IndependenceKind::Parallel => "removed",
                IndependenceKind::Sequential => "created",
            },
            s1.rule().name()
        ));
    }
    (!parts.is_empty()).then(|| parts.join("; "))
}

fn join(items: &[Item]) -> String {
    items.iter().map(|i| format!("{i}")).collect::<Vec<_>>().join(", ")
}

/// Closing a parallel independent peak `H ⇐ G ⇒ H̄` to a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflux {
    /// `H ⇒ X` by the rule of the second step.
    pub after_first: DerivationStep,
    /// `H̄ ⇒ X` by the rule of the first step.
    pub after_second: DerivationStep,
    /// Isomorphism between the two results; the identity whenever both
    /// sides produce the same graph, which is the case unless created ids
    /// clash.
    pub iso: GraphMorphism,
}

fn check_witness(
    w: &IndependenceWitness,
    expected: Option<IndependenceWitness>,
) -> Result<()> {
    match expected {
        Some(e) if e == *w => Ok(()),
        _ => Err(Error::WitnessInvalid),
    }
}

/// Applies each rule at the other step's result, reusing the created ids of
/// the original steps.
pub fn conflux(s1: &DerivationStep, s2: &DerivationStep, w: &IndependenceWitness) -> Result<Conflux> {
    check_witness(w, parallel_independent(s1, s2)?)?;
    let after_first = apply_with(s2.rule(), &s2.g().with_cod(s1.output().clone()), FreshIds::Reuse(s2.h()))?;
    let after_second = apply_with(s1.rule(), &s1.g().with_cod(s2.output().clone()), FreshIds::Reuse(s1.h()))?;
    let iso = if after_first.output() == after_second.output() {
        GraphMorphism::identity(after_first.output().clone())
    } else {
        find_isomorphism(after_first.output(), after_second.output()).ok_or(Error::NotConfluent)?
    };
    Ok(Conflux {
        after_first,
        after_second,
        iso,
    })
}

/// Swaps a sequentially independent pair `G ⇒p̄ H̄ ⇒p X` into
/// `G ⇒p Y ⇒p̄ X'`, returning the two new steps and an iso `X' -> X`.
pub fn interchange(
    s1: &DerivationStep,
    s2: &DerivationStep,
    w: &IndependenceWitness,
) -> Result<(DerivationStep, DerivationStep, GraphMorphism)> {
    check_witness(w, sequentially_independent(s1, s2)?)?;
    let back = s1.inverse();
    let pw = parallel_independent(&back, s2)?.ok_or(Error::WitnessInvalid)?;
    let c = conflux(&back, s2, &pw)?;
    // c.after_first: G ⇒p Y, c.after_second: X ⇒p̄⁻¹ Y
    let second = c.after_second.inverse();
    let iso = if second.output() == s2.output() {
        GraphMorphism::identity(second.output().clone())
    } else {
        find_isomorphism(second.output(), s2.output()).ok_or(Error::NotConfluent)?
    };
    Ok((c.after_first, second, iso))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Index into the supplied host list.
    pub host: usize,
    pub first_rule: String,
    pub first_match: GraphMorphism,
    pub second_rule: String,
    pub second_match: GraphMorphism,
    pub reason: String,
}

/// Result of a bounded check of rule-set independence. `bounded` is always
/// set: only the supplied hosts (and, for the sequential case, their
/// one-step successors) are examined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub kind: IndependenceKind,
    pub hosts: usize,
    pub pairs_checked: usize,
    pub counterexamples: Vec<Counterexample>,
    pub bounded: bool,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks every pair of applicable steps on the given hosts.
///
/// Parallel: steps of `p` and `p_bar` out of each host. Sequential: a step
/// of `p_bar` out of a host followed by a step of `p` out of its result.
pub fn check_rule_pair_independence(
    p: &[Arc<Rule>],
    p_bar: &[Arc<Rule>],
    hosts: &[Arc<Graph>],
    kind: IndependenceKind,
) -> Result<IndependenceReport> {
    let mut report = IndependenceReport {
        kind,
        hosts: hosts.len(),
        pairs_checked: 0,
        counterexamples: Vec::new(),
        bounded: true,
    };
    let record = |host: usize, s1: &DerivationStep, s2: &DerivationStep, report: &mut IndependenceReport| {
        report.pairs_checked += 1;
        if let Some(reason) = independence_failure(kind, s1, s2) {
            report.counterexamples.push(Counterexample {
                host,
                first_rule: s1.rule().name().into(),
                first_match: s1.g().clone(),
                second_rule: s2.rule().name().into(),
                second_match: s2.g().clone(),
                reason,
            });
        }
    };
    for (hi, host) in hosts.iter().enumerate() {
        match kind {
            IndependenceKind::Parallel => {
                let firsts = steps_of(p, host, 0)?;
                let seconds = steps_of(p_bar, host, 1)?;
                for s1 in &firsts {
                    for s2 in &seconds {
                        record(hi, s1, s2, &mut report);
                    }
                }
            }
            IndependenceKind::Sequential => {
                for s1 in steps_of(p_bar, host, 0)? {
                    for s2 in steps_of(p, s1.output(), 1)? {
                        record(hi, &s1, &s2, &mut report);
                    }
                }
            }
        }
    }
    Ok(report)
}

fn steps_of(rules: &[Arc<Rule>], host: &Arc<Graph>, index: usize) -> Result<Vec<DerivationStep>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for rule in rules {
        // rules given twice under one name would be checked twice
        if !seen.insert(rule.name()) {
            continue;
        }
        for m in applicable_matches(rule, host) {
            out.push(apply(rule, &m, index)?);
        }
    }
    Ok(out)
}
