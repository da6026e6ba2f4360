//! Sequences of composable direct derivations and scripted construction.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::{Graph, Id};
use crate::matching::for_each_morphism;
use crate::morphism::GraphMorphism;
use crate::rule::Rule;
use crate::step::{apply, is_applicable, DerivationStep};

/// `start ⇒ ... ⇒ end`; zero steps are allowed and leave `start` unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    start: Arc<Graph>,
    steps: Vec<DerivationStep>,
}

impl Derivation {
    pub fn empty(start: Arc<Graph>) -> Self {
        Derivation {
            start,
            steps: Vec::new(),
        }
    }

    /// Checks that the steps chain from `start`.
    pub fn new(start: Arc<Graph>, steps: Vec<DerivationStep>) -> Result<Self> {
        let mut d = Derivation::empty(start);
        for step in steps {
            d.push(step)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, step: DerivationStep) -> Result<()> {
        if step.input() != self.end() {
            return Err(Error::NotComposable {
                index: self.steps.len(),
            });
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn start(&self) -> &Arc<Graph> {
        &self.start
    }

    pub fn end(&self) -> &Arc<Graph> {
        self.steps.last().map_or(&self.start, |s| s.output())
    }

    pub fn steps(&self) -> &[DerivationStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rule_names(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.rule().name()).collect()
    }

    /// The derivation after dropping the first step.
    pub fn tail(&self) -> Derivation {
        match self.steps.split_first() {
            None => self.clone(),
            Some((first, rest)) => Derivation {
                start: first.output().clone(),
                steps: rest.to_vec(),
            },
        }
    }

    /// `end ⇒ ... ⇒ start` by the inverted steps in reverse order.
    pub fn inverse(&self) -> Derivation {
        Derivation {
            start: self.end().clone(),
            steps: self.steps.iter().rev().map(DerivationStep::inverse).collect(),
        }
    }
}

pub fn invert_derivation(d: &Derivation) -> Derivation {
    d.inverse()
}

/// Rules addressable by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: BTreeMap<String, Arc<Rule>>,
}

impl RuleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the rule previously registered under the same name.
    pub fn insert(&mut self, rule: Rule) -> Option<Arc<Rule>> {
        self.rules.insert(rule.name().into(), Arc::new(rule))
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Rule>> {
        self.rules.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<Rule>> {
        self.rules.values()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl FromIterator<Rule> for RuleSet {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        let mut set = RuleSet::new();
        for r in iter {
            set.insert(r);
        }
        set
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchSpec {
    /// First injective match, in enumeration order, that satisfies both
    /// gluing conditions.
    Auto,
    Explicit {
        vmap: BTreeMap<Id, Id>,
        emap: BTreeMap<Id, Id>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptEntry {
    pub rule: String,
    pub matching: MatchSpec,
}

impl ScriptEntry {
    pub fn auto(rule: impl Into<String>) -> Self {
        ScriptEntry {
            rule: rule.into(),
            matching: MatchSpec::Auto,
        }
    }

    pub fn explicit<'a>(
        rule: impl Into<String>,
        vmap: impl IntoIterator<Item = (&'a str, &'a str)>,
        emap: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        ScriptEntry {
            rule: rule.into(),
            matching: MatchSpec::Explicit {
                vmap: vmap.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
                emap: emap.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
            },
        }
    }
}

/// First injective applicable match of `rule` into `host`.
pub fn first_applicable_match(rule: &Rule, host: &Arc<Graph>) -> Option<GraphMorphism> {
    let mut found = None;
    for_each_morphism(rule.lhs(), host, true, &mut |m| {
        if is_applicable(rule, &m) {
            found = Some(m);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// Every match of `rule` into `host` (injective or not) that satisfies both
/// gluing conditions.
pub fn applicable_matches(rule: &Rule, host: &Arc<Graph>) -> Vec<GraphMorphism> {
    let mut out = Vec::new();
    for_each_morphism(rule.lhs(), host, false, &mut |m| {
        if is_applicable(rule, &m) {
            out.push(m);
        }
        ControlFlow::Continue(())
    });
    out
}

/// Runs `script` from `start`, stopping at the first entry that cannot be
/// applied. Step `i` names its created items `<rule>.<i>.<id>`.
pub fn run_script(start: Arc<Graph>, rules: &RuleSet, script: &[ScriptEntry]) -> Result<Derivation> {
    let mut d = Derivation::empty(start);
    for (index, entry) in script.iter().enumerate() {
        let at = |e: Error| Error::ScriptStep {
            index,
            source: Box::new(e),
        };
        let rule = rules
            .get(&entry.rule)
            .ok_or_else(|| at(Error::NoSuchRule(entry.rule.clone())))?;
        let host = d.end().clone();
        let m = match &entry.matching {
            MatchSpec::Auto => first_applicable_match(rule, &host).ok_or_else(|| {
                at(Error::NoApplicableMatch {
                    rule: entry.rule.clone(),
                })
            })?,
            MatchSpec::Explicit { vmap, emap } => {
                GraphMorphism::new(rule.lhs().clone(), host, vmap.clone(), emap.clone()).map_err(at)?
            }
        };
        let step = apply(rule, &m, index).map_err(at)?;
        d.push(step).map_err(at)?;
    }
    Ok(d)
}
