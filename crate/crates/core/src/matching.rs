//! Backtracking enumeration of graph morphisms.
//!
//! Vertices of the pattern are assigned first, in id order, each trying host
//! vertices in id order; then edges, in id order, each trying the compatible
//! host edges in id order. The resulting sequence of morphisms is therefore
//! lexicographic and reproducible.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::graph::{Graph, Id, Label};
use crate::morphism::GraphMorphism;

struct Search<'a> {
    pattern: &'a Arc<Graph>,
    host: &'a Arc<Graph>,
    injective: bool,
    pv: Vec<&'a Id>,
    hv: Vec<&'a Id>,
    pe: Vec<(&'a Id, &'a crate::graph::Edge)>,
    // host edges grouped by (src, tgt, label), ids ascending
    host_groups: BTreeMap<(&'a Id, &'a Id, &'a Label), Vec<&'a Id>>,
    // pattern edge groups checked once their later endpoint is assigned:
    // checks[k] lists (src, tgt, label, multiplicity) for vertex position k
    checks: Vec<Vec<(&'a Id, &'a Id, &'a Label, usize)>>,
    p_degree: BTreeMap<&'a Id, (usize, usize)>,
    h_degree: BTreeMap<&'a Id, (usize, usize)>,
}

fn degrees(g: &Graph) -> BTreeMap<&Id, (usize, usize)> {
    let mut d: BTreeMap<&Id, (usize, usize)> = g.vertices().iter().map(|v| (v, (0, 0))).collect();
    for e in g.edges().values() {
        if let Some(x) = d.get_mut(&e.src) {
            x.0 += 1;
        }
        if let Some(x) = d.get_mut(&e.tgt) {
            x.1 += 1;
        }
    }
    d
}

impl<'a> Search<'a> {
    fn new(pattern: &'a Arc<Graph>, host: &'a Arc<Graph>, injective: bool) -> Self {
        let pv: Vec<&Id> = pattern.vertices().iter().collect();
        let hv: Vec<&Id> = host.vertices().iter().collect();
        let pe: Vec<_> = pattern.edges().iter().collect();
        let mut host_groups: BTreeMap<_, Vec<&Id>> = BTreeMap::new();
        for (id, e) in host.edges() {
            host_groups.entry((&e.src, &e.tgt, &e.label)).or_default().push(id);
        }
        let pos: BTreeMap<&Id, usize> = pv.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut groups: BTreeMap<(&Id, &Id, &Label), usize> = BTreeMap::new();
        for (_, e) in &pe {
            *groups.entry((&e.src, &e.tgt, &e.label)).or_default() += 1;
        }
        let mut checks = vec![Vec::new(); pv.len()];
        for ((s, t, l), n) in groups {
            if let (Some(&i), Some(&j)) = (pos.get(s), pos.get(t)) {
                checks[i.max(j)].push((s, t, l, n));
            }
        }
        Search {
            pattern,
            host,
            injective,
            pv,
            hv,
            pe,
            host_groups,
            checks,
            p_degree: degrees(pattern),
            h_degree: degrees(host),
        }
    }

    fn group_len(&self, key: (&Id, &Id, &Label)) -> usize {
        self.host_groups.get(&key).map_or(0, Vec::len)
    }

    fn run(&self, visit: &mut dyn FnMut(GraphMorphism) -> ControlFlow<()>) -> ControlFlow<()> {
        // A pattern edge with a dangling endpoint can never be mapped.
        if self
            .pe
            .iter()
            .any(|(_, e)| !self.pattern.has_vertex(&e.src) || !self.pattern.has_vertex(&e.tgt))
        {
            return ControlFlow::Continue(());
        }
        let mut vmap: BTreeMap<&Id, &Id> = BTreeMap::new();
        let mut used = BTreeSet::new();
        self.assign_vertex(0, &mut vmap, &mut used, visit)
    }

    fn assign_vertex(
        &self,
        k: usize,
        vmap: &mut BTreeMap<&'a Id, &'a Id>,
        used: &mut BTreeSet<&'a Id>,
        visit: &mut dyn FnMut(GraphMorphism) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == self.pv.len() {
            let mut emap = Vec::with_capacity(self.pe.len());
            let mut used_edges = BTreeSet::new();
            return self.assign_edge(0, vmap, &mut emap, &mut used_edges, visit);
        }
        let v = self.pv[k];
        for &c in &self.hv {
            if self.injective {
                if used.contains(c) {
                    continue;
                }
                let (po, pi) = self.p_degree[v];
                let (ho, hi) = self.h_degree[c];
                if po > ho || pi > hi {
                    continue;
                }
            }
            vmap.insert(v, c);
            let ok = self.checks[k].iter().all(|&(s, t, l, n)| {
                let have = self.group_len((vmap[s], vmap[t], l));
                if self.injective {
                    have >= n
                } else {
                    have >= 1
                }
            });
            if ok {
                used.insert(c);
                let flow = self.assign_vertex(k + 1, vmap, used, visit);
                used.remove(c);
                if flow.is_break() {
                    vmap.remove(v);
                    return flow;
                }
            }
            vmap.remove(v);
        }
        ControlFlow::Continue(())
    }

    fn assign_edge(
        &self,
        k: usize,
        vmap: &BTreeMap<&'a Id, &'a Id>,
        emap: &mut Vec<&'a Id>,
        used: &mut BTreeSet<&'a Id>,
        visit: &mut dyn FnMut(GraphMorphism) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == self.pe.len() {
            let m = GraphMorphism::new_unchecked(
                self.pattern.clone(),
                self.host.clone(),
                vmap.iter().map(|(a, b)| ((*a).clone(), (*b).clone())).collect(),
                self.pe
                    .iter()
                    .zip(emap.iter())
                    .map(|((a, _), b)| ((*a).clone(), (*b).clone()))
                    .collect(),
            );
            return visit(m);
        }
        let e = self.pe[k].1;
        let key = (vmap[&e.src], vmap[&e.tgt], &e.label);
        let Some(cands) = self.host_groups.get(&key) else {
            return ControlFlow::Continue(());
        };
        for &c in cands {
            if self.injective && used.contains(c) {
                continue;
            }
            emap.push(c);
            used.insert(c);
            let flow = self.assign_edge(k + 1, vmap, emap, used, visit);
            used.remove(c);
            emap.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every morphism `pattern -> host` in deterministic order until the
/// visitor breaks. With `injective` set only monomorphisms are produced.
pub fn for_each_morphism(
    pattern: &Arc<Graph>,
    host: &Arc<Graph>,
    injective: bool,
    visit: &mut dyn FnMut(GraphMorphism) -> ControlFlow<()>,
) {
    let _ = Search::new(pattern, host, injective).run(visit);
}

/// All morphisms `pattern -> host`, injective ones only if requested.
pub fn enumerate_morphisms(pattern: &Arc<Graph>, host: &Arc<Graph>, injective: bool) -> Vec<GraphMorphism> {
    let mut out = Vec::new();
    for_each_morphism(pattern, host, injective, &mut |m| {
        out.push(m);
        ControlFlow::Continue(())
    });
    out
}

/// All monomorphisms `pattern -> host`.
pub fn enumerate_monomorphisms(pattern: &Arc<Graph>, host: &Arc<Graph>) -> Vec<GraphMorphism> {
    enumerate_morphisms(pattern, host, true)
}

fn same_shape(g: &Graph, h: &Graph) -> bool {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    fn labels(x: &Graph) -> Vec<&Label> {
        let mut l: Vec<&Label> = x.edges().values().map(|e| &e.label).collect();
        l.sort();
        l
    }
    fn degs(x: &Graph) -> Vec<(usize, usize)> {
        let mut d: Vec<(usize, usize)> = degrees(x).into_values().collect();
        d.sort();
        d
    }
    labels(g) == labels(h) && degs(g) == degs(h)
}

/// Visits isomorphisms `g -> h` in deterministic order.
pub fn for_each_isomorphism(
    g: &Arc<Graph>,
    h: &Arc<Graph>,
    visit: &mut dyn FnMut(GraphMorphism) -> ControlFlow<()>,
) {
    if !same_shape(g, h) {
        return;
    }
    // With equal item counts an injective morphism is a bijection whose
    // inverse is again structure-preserving.
    for_each_morphism(g, h, true, visit);
}

pub fn find_isomorphism(g: &Arc<Graph>, h: &Arc<Graph>) -> Option<GraphMorphism> {
    let mut found = None;
    for_each_isomorphism(g, h, &mut |m| {
        found = Some(m);
        ControlFlow::Break(())
    });
    found
}

pub fn are_isomorphic(g: &Arc<Graph>, h: &Arc<Graph>) -> bool {
    find_isomorphism(g, h).is_some()
}
