//! Seeded random instances of independent derivation pairs.
//!
//! Two rule families are built over disjoint edge alphabets and neither
//! deletes vertices. A rule of one family only reads vertices and edges of
//! its own alphabet, and only deletes edges of its own alphabet, so any step
//! of one family is parallel and sequentially independent of any step of the
//! other.

use std::sync::Arc;

use dpo_core::{apply, enumerate_monomorphisms, is_applicable, Derivation, Graph, Rule};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub const MAX_START_VERTICES: usize = 8;
pub const MAX_STEPS: usize = 6;

/// Rules over the edge labels `l1`, `l2`, named `<prefix>.<rule>`.
pub fn rule_family(prefix: &str, l1: &str, l2: &str) -> Vec<Arc<Rule>> {
    let name = |r: &str| format!("{prefix}.{r}");
    let a = Graph::new().with_vertex("a");
    let ab = a.clone().with_vertex("b");
    let mut rules = Vec::new();
    for (l, other) in [(l1, l2), (l2, l1)] {
        let with_e = ab.clone().with_edge("e", "a", "b", l);
        rules.push(Rule::new(name(&format!("add({l})")), ab.clone(), ab.clone(), with_e.clone()));
        rules.push(Rule::new(
            name(&format!("loop({l})")),
            a.clone(),
            a.clone(),
            a.clone().with_edge("e", "a", "a", l),
        ));
        rules.push(Rule::new(name(&format!("del({l})")), with_e.clone(), ab.clone(), ab.clone()));
        rules.push(Rule::new(
            name(&format!("relabel({l},{other})")),
            with_e.clone(),
            ab.clone(),
            ab.clone().with_edge("f", "a", "b", other),
        ));
        rules.push(Rule::new(
            name(&format!("spawn({l})")),
            a.clone(),
            a.clone(),
            a.clone().with_vertex("n").with_edge("e", "a", "n", l),
        ));
        rules.push(Rule::new(
            name(&format!("mark({l},{other})")),
            with_e.clone(),
            with_e.clone(),
            with_e.with_edge("m", "a", "a", other),
        ));
    }
    rules
        .into_iter()
        .map(|r| Arc::new(r.expect("family rules are well formed")))
        .collect()
}

/// A random graph with `1..=max_vertices` vertices whose edges carry labels
/// from `labels`.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, labels: &[&str]) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(format!("n{i}"));
    }
    let edges = rng.gen_range(0..=2 * n);
    for i in 0..edges {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let l = labels[rng.gen_range(0..labels.len())];
        g = g.with_edge(format!("e{i}"), format!("n{s}"), format!("n{t}"), l);
    }
    g
}

/// Up to `max_steps` steps, each with a uniformly chosen rule among those
/// that apply and a uniformly chosen injective match.
pub fn random_derivation(
    rng: &mut impl Rng,
    start: Arc<Graph>,
    rules: &[Arc<Rule>],
    max_steps: usize,
) -> Derivation {
    let steps = rng.gen_range(0..=max_steps);
    let mut d = Derivation::empty(start);
    for index in 0..steps {
        let host = d.end().clone();
        let mut options: Vec<_> = rules
            .iter()
            .flat_map(|r| {
                enumerate_monomorphisms(r.lhs(), &host)
                    .into_iter()
                    .filter(|m| is_applicable(r, m))
                    .map(move |m| (r, m))
            })
            .collect();
        options.shuffle(rng);
        let Some((rule, m)) = options.pop() else { break };
        let step = apply(rule, &m, index).expect("applicable match applies");
        d.push(step).expect("step starts at the current end");
    }
    d
}

/// Two derivations out of one random start graph, from the two families.
#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub d: Derivation,
    pub d_bar: Derivation,
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn independent_instance(seed: u64) -> Instance {
    let mut rng = rng_for(seed);
    let start = Arc::new(random_graph(&mut rng, MAX_START_VERTICES, &["p", "q", "x", "y", "*"]));
    let p = rule_family("P", "p", "q");
    let p_bar = rule_family("Q", "x", "y");
    let d = random_derivation(&mut rng, start.clone(), &p, MAX_STEPS);
    let d_bar = random_derivation(&mut rng, start, &p_bar, MAX_STEPS);
    Instance { seed, d, d_bar }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        let a = independent_instance(7);
        let b = independent_instance(7);
        assert_eq!(a.d, b.d);
        assert_eq!(a.d_bar, b.d_bar);
        assert!(a.d.start().vertex_count() <= MAX_START_VERTICES);
        assert!(a.d.len() <= MAX_STEPS && a.d_bar.len() <= MAX_STEPS);
    }

    #[test]
    fn families_have_distinct_names() {
        let p = rule_family("P", "p", "q");
        let q = rule_family("Q", "x", "y");
        assert!(p.iter().all(|r| q.iter().all(|s| r.name() != s.name())));
        assert_eq!(p.len(), 12);
    }
}
