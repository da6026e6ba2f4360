//! The randomized law suite: one seed, one independent instance, every law
//! checked on it.

use std::collections::BTreeSet;

use dpo_core::{
    accessed_part, check_backward_spine_preservation, check_spine_preservation,
    derivations_equal_up_to_iso_capped, move_forward, move_forward_in_order, restrict,
    verify_double_pushout, Derivation, Id, SubgraphHandle,
};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::random::{independent_instance, rng_for, Instance};

/// The laws, by letter.
pub const LAWS: [(&str, &str); 6] = [
    ("a", "spine(d) ≡ spine(move(d, d̄)) and spine(d') ≡ spine(evom(d', d̄))"),
    ("b", "(d|m)|m' = d|(m ∘ m')"),
    ("c", "acc(d|m) ≅ acc(d) with commuting inclusion"),
    ("d", "move is independent of grid evaluation order up to iso"),
    ("e", "every constructed and inverted step is a double pushout"),
    ("f", "invert(invert(d)) = d"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub seed: u64,
    pub law: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct CaseStats {
    pub d_steps: usize,
    pub d_bar_steps: usize,
    pub start_vertices: usize,
}

/// A subgraph of `host` containing `base`, grown by random vertices and
/// then random edges between chosen vertices.
pub fn random_superset(rng: &mut impl Rng, base: &SubgraphHandle) -> SubgraphHandle {
    let host = base.host();
    let mut vertices: BTreeSet<Id> = base.vertices().clone();
    for v in host.vertices() {
        if rng.gen_bool(0.5) {
            vertices.insert(v.clone());
        }
    }
    let mut edges: BTreeSet<Id> = base.edges().clone();
    for (id, e) in host.edges() {
        if vertices.contains(&e.src) && vertices.contains(&e.tgt) && rng.gen_bool(0.5) {
            edges.insert(id.clone());
        }
    }
    SubgraphHandle::new(host.clone(), vertices, edges).expect("edges chosen between chosen vertices")
}

/// A random order of grid cells in which every cell follows its upper and
/// left neighbours.
pub fn random_cell_order(rng: &mut impl Rng, rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut frontier: Vec<usize> = vec![0; rows];
    let mut order = Vec::with_capacity(rows * cols);
    while order.len() < rows * cols {
        let ready: Vec<usize> = (0..rows)
            .filter(|&i| frontier[i] < cols && (i == 0 || frontier[i - 1] > frontier[i]))
            .collect();
        let &i = ready.choose(rng).expect("some cell is always ready");
        order.push((i, frontier[i]));
        frontier[i] += 1;
    }
    order
}

fn all_steps_pushouts(d: &Derivation) -> bool {
    d.steps().iter().all(verify_double_pushout) && d.inverse().steps().iter().all(verify_double_pushout)
}

/// Checks every law on the instance for `seed`.
pub fn check_seed(seed: u64, max_iso: usize) -> (CaseStats, Vec<Violation>) {
    let Instance { d, d_bar, .. } = independent_instance(seed);
    let stats = CaseStats {
        d_steps: d.len(),
        d_bar_steps: d_bar.len(),
        start_vertices: d.start().vertex_count(),
    };
    let mut out = Vec::new();
    let mut fail = |law: &'static str, detail: String| out.push(Violation { seed, law, detail });
    // a separate stream from the one that built the instance
    let mut rng = rng_for(seed ^ 0x5eed_0000_0000_0000);

    // (a)
    match check_spine_preservation(&d, &d_bar, max_iso) {
        Ok(r) if r.holds() => {
            match check_backward_spine_preservation(&r.moved.moved, &d_bar, max_iso) {
                Ok(b) if b.holds() => {
                    if derivations_equal_up_to_iso_capped(&b.moved, &d, max_iso).found().is_none() {
                        fail("a", "evom(move(d, d̄), d̄) is not equal to d up to iso".into());
                    }
                }
                Ok(_) => fail("a", "backward spine not preserved".into()),
                Err(e) => fail("a", format!("evom failed: {e}")),
            }
        }
        Ok(r) => fail("a", format!("spine not preserved: {:?}", r.witness)),
        Err(e) => fail("a", format!("move failed: {e}")),
    }

    // (b), (c)
    let acc = accessed_part(&d);
    let m = random_superset(&mut rng, &acc.handle);
    match restrict(&d, &m) {
        Ok(outer) => {
            if !outer.check() {
                fail("b", format!("restriction certificate: {:?}", outer.defects()));
            }
            let inner_acc = accessed_part(&outer.restricted);
            match SubgraphHandle::compose(&m, &inner_acc.handle) {
                Ok(h) if h == acc.handle => {}
                Ok(_) => fail("c", "m ∘ acc(d|m) differs from acc(d)".into()),
                Err(e) => fail("c", e.to_string()),
            }
            let m2 = random_superset(&mut rng, &inner_acc.handle);
            let nested = restrict(&outer.restricted, &m2);
            let direct = SubgraphHandle::compose(&m, &m2).and_then(|mm| restrict(&d, &mm));
            match (nested, direct) {
                (Ok(a), Ok(b)) if a.restricted == b.restricted => {}
                (Ok(_), Ok(_)) => fail("b", "(d|m)|m' differs from d|(m ∘ m')".into()),
                (Err(e), _) | (_, Err(e)) => fail("b", e.to_string()),
            }
        }
        Err(e) => fail("b", format!("d|m failed: {e}")),
    }

    // (d), (e)
    match move_forward(&d, &d_bar) {
        Ok(reference) => {
            let order = random_cell_order(&mut rng, d.len(), d_bar.len());
            match move_forward_in_order(&d, &d_bar, &order) {
                Ok(other) => {
                    let same = |a: &Derivation, b: &Derivation| {
                        derivations_equal_up_to_iso_capped(a, b, max_iso).found().is_some()
                    };
                    if !same(&reference.moved, &other.moved) || !same(&reference.co_moved, &other.co_moved) {
                        fail("d", format!("order {order:?} gives a different result"));
                    }
                }
                Err(e) => fail("d", format!("order {order:?}: {e}")),
            }
            let grid_ok = reference
                .grid
                .vertical
                .iter()
                .chain(&reference.grid.horizontal)
                .flatten()
                .all(|s| verify_double_pushout(s) && verify_double_pushout(&s.inverse()));
            if !grid_ok || !all_steps_pushouts(&reference.moved) || !all_steps_pushouts(&reference.co_moved) {
                fail("e", "a grid step is not a double pushout".into());
            }
        }
        Err(e) => fail("d", format!("move failed: {e}")),
    }
    if !all_steps_pushouts(&d) || !all_steps_pushouts(&d_bar) {
        fail("e", "a generated step is not a double pushout".into());
    }

    // (f)
    if d.inverse().inverse() != d || d_bar.inverse().inverse() != d_bar {
        fail("f", "double inversion changed a derivation".into());
    }
    (stats, out)
}
