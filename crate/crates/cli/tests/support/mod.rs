//! Independent oracles and hand-built expected graphs shared by the
//! integration tests. Nothing here calls the matcher under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use dpo_core::{Graph, GraphMorphism, Id};

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

type Triple = (Id, Id, String);

fn triples(g: &Graph) -> Vec<(Id, Triple)> {
    g.edges()
        .iter()
        .map(|(id, e)| (id.clone(), (e.src.clone(), e.tgt.clone(), e.label.as_str().to_string())))
        .collect()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Number of isomorphisms `g -> h`, by trying every vertex bijection and
/// counting edge bijections between equal edge classes.
pub fn brute_iso_count(g: &Graph, h: &Graph) -> usize {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return 0;
    }
    let gv: Vec<Id> = g.vertices().iter().cloned().collect();
    let hv: Vec<Id> = h.vertices().iter().cloned().collect();
    let mut h_classes: BTreeMap<Triple, usize> = BTreeMap::new();
    for (_, t) in triples(h) {
        *h_classes.entry(t).or_default() += 1;
    }
    let edge_factor: usize = h_classes.values().map(|&m| factorial(m)).product();
    let g_edges: Vec<Triple> = triples(g).into_iter().map(|(_, t)| t).collect();

    // vertex signature: (out-degree, in-degree, sorted loop labels)
    let sig = |x: &Graph, v: &Id| {
        let mut loops: Vec<String> = Vec::new();
        let (mut o, mut i) = (0, 0);
        for e in x.edges().values() {
            if &e.src == v {
                o += 1;
            }
            if &e.tgt == v {
                i += 1;
            }
            if &e.src == v && &e.tgt == v {
                loops.push(e.label.as_str().to_string());
            }
        }
        loops.sort();
        (o, i, loops)
    };
    let gs: Vec<_> = gv.iter().map(|v| sig(g, v)).collect();
    let hs: Vec<_> = hv.iter().map(|v| sig(h, v)).collect();

    let mut count = 0;
    let mut used = vec![false; hv.len()];
    let mut perm: Vec<usize> = Vec::new();
    fn go(
        k: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        gs: &[(usize, usize, Vec<String>)],
        hs: &[(usize, usize, Vec<String>)],
        check: &mut dyn FnMut(&[usize]),
    ) {
        if k == gs.len() {
            check(perm);
            return;
        }
        for j in 0..hs.len() {
            if !used[j] && gs[k] == hs[j] {
                used[j] = true;
                perm.push(j);
                go(k + 1, perm, used, gs, hs, check);
                perm.pop();
                used[j] = false;
            }
        }
    }
    let mut check = |perm: &[usize]| {
        let f: BTreeMap<&Id, &Id> = gv.iter().zip(perm.iter().map(|&j| &hv[j])).collect();
        let mut image: BTreeMap<Triple, usize> = BTreeMap::new();
        for (s, t, l) in &g_edges {
            *image.entry((f[s].clone(), f[t].clone(), l.clone())).or_default() += 1;
        }
        if image == h_classes {
            count += edge_factor;
        }
    };
    go(0, &mut perm, &mut used, &gs, &hs, &mut check);
    count
}

pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    brute_iso_count(g, h) > 0
}

pub type Maps = (BTreeMap<Id, Id>, BTreeMap<Id, Id>);

/// Every morphism `p -> h`: all vertex functions, and for each all edge
/// functions into the edges with the right endpoints and label, then kept
/// if (optionally) injective.
pub fn naive_morphisms(p: &Graph, h: &Graph, injective: bool) -> BTreeSet<Maps> {
    let pv: Vec<Id> = p.vertices().iter().cloned().collect();
    let hv: Vec<Id> = h.vertices().iter().cloned().collect();
    let pe = triples(p);
    let he = triples(h);
    let mut out = BTreeSet::new();
    if hv.is_empty() && !pv.is_empty() {
        return out;
    }
    let total = hv.len().pow(pv.len() as u32);
    for code in 0..total.max(1) {
        let mut c = code;
        let mut vmap = BTreeMap::new();
        for v in &pv {
            vmap.insert(v.clone(), hv[c % hv.len()].clone());
            c /= hv.len().max(1);
        }
        if injective && vmap.values().collect::<BTreeSet<_>>().len() != vmap.len() {
            continue;
        }
        let candidates: Vec<Vec<Id>> = pe
            .iter()
            .map(|(_, (s, t, l))| {
                he.iter()
                    .filter(|(_, (hs, ht, hl))| *hs == vmap[s] && *ht == vmap[t] && hl == l)
                    .map(|(id, _)| id.clone())
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; pe.len()];
        if candidates.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            let emap: BTreeMap<Id, Id> = pe
                .iter()
                .zip(&idx)
                .enumerate()
                .map(|(k, ((id, _), &i))| (id.clone(), candidates[k][i].clone()))
                .collect();
            if !injective || emap.values().collect::<BTreeSet<_>>().len() == emap.len() {
                out.insert((vmap.clone(), emap));
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < candidates[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

pub fn maps_of(m: &GraphMorphism) -> Maps {
    (m.vmap().clone(), m.emap().clone())
}

/// Both directions of an undirected edge.
fn undirected(g: Graph, a: &str, b: &str, label: &str) -> Graph {
    g.with_edge(format!("{a}-{b}"), a, b, label)
        .with_edge(format!("{b}-{a}"), b, a, label)
}

const SIDES: [[&str; 3]; 2] = [["v1", "v3", "v5"], ["v2", "v4", "v6"]];

fn vertices() -> Graph {
    (1..=6).fold(Graph::new(), |g, i| g.with_vertex(format!("v{i}")))
}

pub fn k33() -> Graph {
    let mut g = vertices();
    for a in SIDES[0] {
        for b in SIDES[1] {
            g = undirected(g, a, b, "*");
        }
    }
    g
}

pub fn two_triangles() -> Graph {
    let mut g = vertices();
    for side in SIDES {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            g = undirected(g, side[a], side[b], "*");
        }
    }
    g
}

/// `base` with the two color vertices, their loops `1` and `2`, and each
/// side of the bipartition joined to one color.
pub fn colored(base: Graph) -> Graph {
    let mut g = base
        .with_vertex("c1")
        .with_vertex("c2")
        .with_edge("l1", "c1", "c1", "1")
        .with_edge("l2", "c2", "c2", "2");
    for (side, c) in SIDES.iter().zip(["c1", "c2"]) {
        for v in side {
            g = undirected(g, v, c, "*");
        }
    }
    g
}
