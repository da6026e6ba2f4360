use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{GraphViolation, Id, Item};
use crate::morphism::MorphismViolation;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("subgraph handles live in different host graphs")]
    HostMismatch,
    #[error("morphisms are not composable: codomain of the first is not the domain of the second")]
    DomainMismatch,
    #[error("invalid graph: {}", list(.0))]
    InvalidGraph(Vec<GraphViolation>),
    #[error("invalid morphism: {}", list(.0))]
    InvalidMorphism(Vec<MorphismViolation>),
    #[error("not a subgraph of the host: {}", list(.0))]
    NotASubgraph(Vec<Item>),
    #[error("invalid rule {rule}: {reason}")]
    InvalidRule { rule: String, reason: String },
    #[error("rule {rule}: identification condition fails, items {} of L collapse outside K", list(.items))]
    IdentificationViolated { rule: String, items: Vec<Item> },
    #[error("rule {rule}: dangling condition fails for edges {}", list(.edges))]
    DanglingViolated { rule: String, edges: Vec<Id> },
    #[error("rule {rule}: fresh identifier {id} already exists in the host")]
    FreshIdCollision { rule: String, id: Id },
    #[error("invalid derivation step: {0}")]
    InvalidStep(String),
    #[error("no rule named {0}")]
    NoSuchRule(String),
    #[error("rule {rule} has no applicable match")]
    NoApplicableMatch { rule: String },
    #[error("script step {index}: {source}")]
    ScriptStep { index: usize, source: Box<Error> },
    #[error("step {index} does not start at the graph the preceding steps end in")]
    NotComposable { index: usize },
    #[error("derivations do not start at the same graph")]
    DifferentStart,
    #[error("independence witness does not match the given steps")]
    WitnessInvalid,
    #[error("steps are not independent ({first} vs {second})")]
    NotIndependent { first: String, second: String },
    #[error("grid cell ({row}, {col}): {first} and {second} are not parallel independent")]
    GridCell {
        row: usize,
        col: usize,
        first: String,
        second: String,
    },
    #[error("invalid grid evaluation order: {0}")]
    InvalidOrder(String),
    #[error("conflux results are not isomorphic")]
    NotConfluent,
    #[error("accessed part does not factor through the subgraph; missing {}", list(.0))]
    DoesNotFactor(Vec<Item>),
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{item}");
    }
    out
}
