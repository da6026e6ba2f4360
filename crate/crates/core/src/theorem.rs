//! Executable checks that moving a derivation preserves its spine.

use alloc::sync::Arc;

use crate::derivation::Derivation;
use crate::equivalence::{derivations_equal_up_to_iso_capped, IsoOutcome};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::moving::{evom, move_forward, MovedPair};
use crate::restriction::{restrict, spine};
use crate::subgraph::SubgraphHandle;

/// Comparison of `d|Z̄` and `move(d, d̄)|Z̄` for a one-step `d̄` with
/// intermediate graph `Z̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneStepLaw {
    /// Both restrictions are the same derivation value.
    pub identical: bool,
    pub iso: IsoOutcome,
}

impl OneStepLaw {
    pub fn holds(&self) -> bool {
        self.identical || self.iso.found().is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineReport {
    pub moved: MovedPair,
    pub spine: Derivation,
    pub moved_spine: Derivation,
    pub witness: IsoOutcome,
    /// Present when `d̄` has exactly one step.
    pub one_step: Option<OneStepLaw>,
}

impl SpineReport {
    pub fn holds(&self) -> bool {
        self.witness.found().is_some() && self.one_step.as_ref().is_none_or(OneStepLaw::holds)
    }
}

fn z_handle(host: &Arc<Graph>, z: &Graph) -> Result<SubgraphHandle> {
    SubgraphHandle::of_subgraph(host.clone(), z)
}

/// `spine(d) ≡ spine(move(d, d̄))`, with the one-step restriction law when
/// `d̄` is a single step.
pub fn check_spine_preservation(d: &Derivation, d_bar: &Derivation, cap: usize) -> Result<SpineReport> {
    let moved = move_forward(d, d_bar)?;
    let (_, spine_d) = spine(d);
    let (_, spine_m) = spine(&moved.moved);
    let witness = derivations_equal_up_to_iso_capped(&spine_d, &spine_m, cap);
    let one_step = match d_bar.steps() {
        [only] => {
            let z = only.intermediate();
            let left = restrict(d, &z_handle(d.start(), z)?)?.restricted;
            let right = restrict(&moved.moved, &z_handle(moved.moved.start(), z)?)?.restricted;
            Some(OneStepLaw {
                identical: left == right,
                iso: derivations_equal_up_to_iso_capped(&left, &right, cap),
            })
        }
        _ => None,
    };
    Ok(SpineReport {
        moved,
        spine: spine_d,
        moved_spine: spine_m,
        witness,
        one_step,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackwardSpineReport {
    pub moved: Derivation,
    pub spine: Derivation,
    pub moved_spine: Derivation,
    pub witness: IsoOutcome,
}

impl BackwardSpineReport {
    pub fn holds(&self) -> bool {
        self.witness.found().is_some()
    }
}

/// `spine(d') ≡ spine(evom(d', d̄))`.
pub fn check_backward_spine_preservation(
    d_prime: &Derivation,
    d_bar: &Derivation,
    cap: usize,
) -> Result<BackwardSpineReport> {
    if d_bar.end() != d_prime.start() {
        return Err(Error::NotComposable { index: d_bar.len() });
    }
    let moved = evom(d_prime, d_bar)?;
    let (_, spine_d) = spine(d_prime);
    let (_, spine_m) = spine(&moved);
    let witness = derivations_equal_up_to_iso_capped(&spine_d, &spine_m, cap);
    Ok(BackwardSpineReport {
        moved,
        spine: spine_d,
        moved_spine: spine_m,
        witness,
    })
}
