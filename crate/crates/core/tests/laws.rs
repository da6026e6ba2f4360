use std::collections::BTreeSet;
use std::sync::Arc;

use dpo_core::{
    accessed_part, applicable_matches, apply, intersect, restrict, union, verify_double_pushout,
    Derivation, DerivationStep, Graph, Id, Rule, SubgraphHandle,
};
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..=6)
        .prop_flat_map(|n| {
            let edge = (0..n, 0..n, prop_oneof![Just("a"), Just("b")]);
            (Just(n), prop::collection::vec(edge, 0..=10))
        })
        .prop_map(|(n, edges)| {
            let mut g = Graph::new();
            for i in 0..n {
                g.add_vertex(format!("n{i}"));
            }
            for (k, (s, t, l)) in edges.into_iter().enumerate() {
                g = g.with_edge(format!("e{k}"), format!("n{s}"), format!("n{t}"), l);
            }
            g
        })
}

fn handle_from(host: &Arc<Graph>, vbits: &[bool], ebits: &[bool]) -> SubgraphHandle {
    let vertices: BTreeSet<Id> = host
        .vertices()
        .iter()
        .zip(vbits.iter().cycle())
        .filter(|(_, &b)| b)
        .map(|(v, _)| v.clone())
        .collect();
    let edges = host
        .edges()
        .iter()
        .zip(ebits.iter().cycle())
        .filter(|((_, e), &b)| b && vertices.contains(&e.src) && vertices.contains(&e.tgt))
        .map(|((id, _), _)| id.clone())
        .collect();
    SubgraphHandle::new(host.clone(), vertices, edges).unwrap()
}

fn arb_host_with_handles(k: usize) -> impl Strategy<Value = (Arc<Graph>, Vec<SubgraphHandle>)> {
    let bits = (prop::collection::vec(any::<bool>(), 6), prop::collection::vec(any::<bool>(), 10));
    (arb_graph(), prop::collection::vec(bits, k)).prop_map(|(g, bits)| {
        let g = Arc::new(g);
        let hs = bits.iter().map(|(v, e)| handle_from(&g, v, e)).collect();
        (g, hs)
    })
}

fn rules() -> Vec<Arc<Rule>> {
    let x = Graph::new().with_vertex("x");
    let xy = x.clone().with_vertex("y");
    let xy_a = xy.clone().with_edge("e", "x", "y", "a");
    [
        Rule::new("link", xy.clone(), xy.clone(), xy_a.clone()),
        Rule::new("unlink", xy_a.clone(), xy.clone(), xy.clone()),
        Rule::new("drop", x.clone(), Graph::new(), Graph::new()),
        Rule::new("grow", x.clone(), x.clone(), x.clone().with_vertex("n").with_edge("f", "x", "n", "b")),
        Rule::new("flip", xy_a, xy.clone(), xy.with_edge("g", "y", "x", "b")),
    ]
    .into_iter()
    .map(|r| Arc::new(r.unwrap()))
    .collect()
}

fn derive(start: Graph, choices: &[usize]) -> Derivation {
    let rules = rules();
    let mut d = Derivation::empty(Arc::new(start));
    for (index, &c) in choices.iter().enumerate() {
        let host = d.end().clone();
        let options: Vec<_> = rules
            .iter()
            .flat_map(|r| applicable_matches(r, &host).into_iter().map(move |m| (r, m)))
            .collect();
        if options.is_empty() {
            break;
        }
        let (r, m) = &options[c % options.len()];
        d.push(apply(r, m, index).unwrap()).unwrap();
    }
    d
}

fn with_junk(g: &Graph) -> Arc<Graph> {
    Arc::new(g.clone().with_vertex("junk"))
}

/// Corruptions of a valid step that keep every morphism well formed.
fn corruptions(s: &DerivationStep) -> Vec<DerivationStep> {
    let mut out = Vec::new();
    let g2 = with_junk(s.input());
    out.push(DerivationStep::from_parts_unchecked(
        s.rule().clone(),
        s.g().with_cod(g2.clone()),
        s.z().clone(),
        s.h().clone(),
        s.incl_zg().with_cod(g2),
        s.incl_zh().clone(),
    ));
    let h2 = with_junk(s.output());
    out.push(DerivationStep::from_parts_unchecked(
        s.rule().clone(),
        s.g().clone(),
        s.z().clone(),
        s.h().with_cod(h2.clone()),
        s.incl_zg().clone(),
        s.incl_zh().with_cod(h2),
    ));
    // keep a deleted edge whose endpoints survive
    let z = s.intermediate();
    let kept = s.g().emap().values().find(|e| {
        let edge = s.input().edge(e).unwrap();
        !z.has_edge(e) && z.has_vertex(&edge.src) && z.has_vertex(&edge.tgt)
    });
    if let Some(e) = kept {
        let edge = s.input().edge(e).unwrap().clone();
        let mut z2 = (**z).clone();
        z2.add_edge(e.clone(), edge.clone());
        let mut h2 = (**s.output()).clone();
        h2.add_edge(e.clone(), edge);
        let (z2, h2) = (Arc::new(z2), Arc::new(h2));
        out.push(DerivationStep::from_parts_unchecked(
            s.rule().clone(),
            s.g().clone(),
            s.z().with_cod(z2.clone()),
            s.h().with_cod(h2.clone()),
            dpo_core::GraphMorphism::inclusion(z2.clone(), s.input().clone()).unwrap(),
            dpo_core::GraphMorphism::inclusion(z2, h2).unwrap(),
        ));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subgraph_lattice((_, hs) in arb_host_with_handles(3)) {
        let (a, b, c) = (&hs[0], &hs[1], &hs[2]);
        let ab = intersect(a, b).unwrap();
        prop_assert_eq!(&ab, &intersect(b, a).unwrap());
        prop_assert_eq!(union(a, b).unwrap(), union(b, a).unwrap());
        prop_assert_eq!(intersect(&ab, c).unwrap(), intersect(a, &intersect(b, c).unwrap()).unwrap());
        prop_assert_eq!(
            union(&union(a, b).unwrap(), c).unwrap(),
            union(a, &union(b, c).unwrap()).unwrap()
        );
        prop_assert_eq!(&union(a, &ab).unwrap(), a);
        prop_assert_eq!(&intersect(a, &union(a, b).unwrap()).unwrap(), a);
        prop_assert_eq!(&intersect(a, a).unwrap(), a);
        prop_assert_eq!(
            intersect(a, &union(b, c).unwrap()).unwrap(),
            union(&ab, &intersect(a, c).unwrap()).unwrap()
        );
        prop_assert!(ab.is_subset(a).unwrap() && a.is_subset(&union(a, b).unwrap()).unwrap());
        prop_assert!(ab.is_valid() && union(a, b).unwrap().is_valid());
    }

    #[test]
    fn steps_are_pushouts_and_corruptions_are_caught(
        g in arb_graph(),
        choices in prop::collection::vec(any::<usize>(), 1..=5),
    ) {
        let d = derive(g, &choices);
        for s in d.steps() {
            prop_assert!(verify_double_pushout(s));
            prop_assert!(verify_double_pushout(&s.inverse()));
            for bad in corruptions(s) {
                prop_assert!(!verify_double_pushout(&bad));
            }
        }
    }

    #[test]
    fn inversion_round_trip(g in arb_graph(), choices in prop::collection::vec(any::<usize>(), 0..=6)) {
        let d = derive(g, &choices);
        let inv = d.inverse();
        prop_assert_eq!(inv.start(), d.end());
        prop_assert_eq!(inv.end(), d.start());
        prop_assert_eq!(inv.len(), d.len());
        prop_assert_eq!(inv.inverse(), d);
    }

    #[test]
    fn accessed_part_is_least_restriction(
        g in arb_graph(),
        choices in prop::collection::vec(any::<usize>(), 0..=4),
        vbits in prop::collection::vec(any::<bool>(), 6),
        ebits in prop::collection::vec(any::<bool>(), 10),
    ) {
        let d = derive(g, &choices);
        let acc = accessed_part(&d);
        prop_assert!(restrict(&d, &acc.handle).is_ok());
        let m = handle_from(d.start(), &vbits, &ebits);
        // restriction is defined exactly on the handles above acc
        let defined = restrict(&d, &m).is_ok();
        prop_assert_eq!(defined, acc.handle.is_subset(&m).unwrap());
    }
}
