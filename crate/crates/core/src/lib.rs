//! Double-pushout rewriting of directed edge-labeled graphs, together with
//! the algebra of derivations built on it: independence of rule
//! applications, conflux and interchange, moving a derivation forward or
//! backward along another one, accessed parts, restrictions and spines.
//!
//! Every graph shares identifiers with the graphs it is derived from:
//! intermediate graphs are id-subgraphs of both neighbours, restrictions
//! reuse the ids of the restricted derivation, and moved steps reuse the ids
//! of the steps they were moved from. Inclusions are therefore plain id-set
//! containments and most categorical checks reduce to set operations.
#![no_std]

extern crate alloc;

pub mod access;
pub mod derivation;
pub mod equivalence;
pub mod error;
pub mod graph;
pub mod independence;
pub mod matching;
pub mod morphism;
pub mod moving;
pub mod restriction;
pub mod rule;
pub mod step;
pub mod subgraph;
pub mod theorem;

pub use access::{accessed_part, factors_through, AccessedPart};
pub use derivation::{
    applicable_matches, first_applicable_match, invert_derivation, run_script, Derivation,
    MatchSpec, RuleSet, ScriptEntry,
};
pub use equivalence::{
    derivations_equal_up_to_iso, derivations_equal_up_to_iso_capped, rename_derivation,
    DerivationIso, IsoOutcome, StepIso, DEFAULT_ISO_CAP,
};
pub use error::{Error, Result};
pub use graph::{validate_graph, Edge, Graph, GraphViolation, Id, Item, Label};
pub use independence::{
    check_rule_pair_independence, conflux, independence_failure, interchange,
    parallel_independent, sequentially_independent, Conflux, Counterexample, IndependenceKind,
    IndependenceReport, IndependenceWitness,
};
pub use matching::{
    are_isomorphic, enumerate_monomorphisms, enumerate_morphisms, find_isomorphism,
    for_each_isomorphism, for_each_morphism,
};
pub use morphism::{compose, validate_morphism, Classification, Factorization, GraphMorphism};
pub use moving::{evom, move_forward, move_forward_in_order, row_major, Grid, MovedPair};
pub use restriction::{
    missing_for_restriction, restrict, restrict_step, spine, RestrictionCertificate,
};
pub use rule::{invert_rule, Rule};
pub use step::{
    apply, apply_with, check_dangling, check_identification, double_pushout_defects, invert_step,
    is_applicable, verify_double_pushout, DerivationStep, FreshIds, PushoutDefect,
};
pub use subgraph::{intersect, union, SubgraphHandle};
pub use theorem::{
    check_backward_spine_preservation, check_spine_preservation, BackwardSpineReport, OneStepLaw,
    SpineReport,
};
