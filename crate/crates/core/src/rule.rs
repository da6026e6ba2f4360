use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Item};

const INVERSE_SUFFIX: &str = "^-1";

/// A rule `L ⊇ K ⊆ R`, with `K` shared with both sides by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    name: String,
    lhs: Arc<Graph>,
    interface: Arc<Graph>,
    rhs: Arc<Graph>,
}

impl Rule {
    pub fn new(name: impl Into<String>, lhs: Graph, interface: Graph, rhs: Graph) -> Result<Self> {
        let name = name.into();
        let bad = |reason: String| Error::InvalidRule {
            rule: name.clone(),
            reason,
        };
        for (side, g) in [("L", &lhs), ("K", &interface), ("R", &rhs)] {
            let v = g.violations();
            if !v.is_empty() {
                return Err(bad(format!("{side} is not a graph: {}", v[0])));
            }
        }
        if !interface.is_subgraph_of(&lhs) {
            return Err(bad("K is not a subgraph of L".to_string()));
        }
        if !interface.is_subgraph_of(&rhs) {
            return Err(bad("K is not a subgraph of R".to_string()));
        }
        Ok(Rule {
            name,
            lhs: Arc::new(lhs),
            interface: Arc::new(interface),
            rhs: Arc::new(rhs),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lhs(&self) -> &Arc<Graph> {
        &self.lhs
    }

    pub fn interface(&self) -> &Arc<Graph> {
        &self.interface
    }

    pub fn rhs(&self) -> &Arc<Graph> {
        &self.rhs
    }

    /// `L - K`
    pub fn deleted_items(&self) -> Vec<Item> {
        self.lhs.items().filter(|i| !self.interface.has_item(i)).collect()
    }

    /// `R - K`
    pub fn created_items(&self) -> Vec<Item> {
        self.rhs.items().filter(|i| !self.interface.has_item(i)).collect()
    }

    /// `R ⊇ K ⊆ L`. The name gains (or loses) a `^-1` suffix so that
    /// inversion is an involution.
    pub fn inverse(&self) -> Rule {
        let name = match self.name.strip_suffix(INVERSE_SUFFIX) {
            Some(base) => base.to_string(),
            None => format!("{}{INVERSE_SUFFIX}", self.name),
        };
        Rule {
            name,
            lhs: self.rhs.clone(),
            interface: self.interface.clone(),
            rhs: self.lhs.clone(),
        }
    }
}

pub fn invert_rule(rule: &Rule) -> Rule {
    rule.inverse()
}
