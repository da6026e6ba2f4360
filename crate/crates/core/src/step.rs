//! Direct derivations: the explicit double-pushout construction.
//!
//! Applying `L ⊇ K ⊆ R` at `g: L -> G` removes `g(L) - g(K)` from `G`,
//! giving the intermediate graph `Z` as an id-subgraph of `G`, then adds a
//! fresh copy of `R - K`, giving `H` with `Z` as an id-subgraph of `H`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Id, Item};
use crate::morphism::GraphMorphism;
use crate::rule::Rule;

/// How identifiers for the created items `R - K` are chosen.
#[derive(Clone, Copy, Debug)]
pub enum FreshIds<'a> {
    /// `<rule name>.<step index>.<id in R>`
    Indexed(usize),
    /// The ids that an existing right match assigns to `R - K`.
    Reuse(&'a GraphMorphism),
}

pub fn indexed_id(rule: &str, index: usize, original: &Id) -> Id {
    Id::from(format!("{rule}.{index}.{original}"))
}

impl FreshIds<'_> {
    fn id_for(&self, rule: &Rule, item: &Item) -> Option<Id> {
        match (self, item) {
            (FreshIds::Indexed(i), Item::Vertex(v) | Item::Edge(v)) => {
                Some(indexed_id(rule.name(), *i, v))
            }
            (FreshIds::Reuse(h), item) => h.item(item).map(|i| match i {
                Item::Vertex(v) | Item::Edge(v) => v,
            }),
        }
    }
}

/// One rule application with all of its graphs and maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    rule: Arc<Rule>,
    g: GraphMorphism,
    z: GraphMorphism,
    h: GraphMorphism,
    incl_zg: GraphMorphism,
    incl_zh: GraphMorphism,
}

/// Why a recorded step is not a double pushout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PushoutDefect {
    Shape(&'static str),
    InvalidMorphism(&'static str),
    NotInclusion(&'static str),
    NotCommuting { square: u8, item: Item },
    OverlapOutsideInterface { square: u8, item: Item },
    Identified { square: u8, item: Item },
    NotCovered { square: u8, item: Item },
}

impl fmt::Display for PushoutDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PushoutDefect::Shape(what) => write!(f, "shape mismatch: {what}"),
            PushoutDefect::InvalidMorphism(which) => write!(f, "{which} is not a morphism"),
            PushoutDefect::NotInclusion(which) => write!(f, "{which} is not an inclusion"),
            PushoutDefect::NotCommuting { square, item } => {
                write!(f, "square ({square}) does not commute at {item}")
            }
            PushoutDefect::OverlapOutsideInterface { square, item } => {
                write!(f, "square ({square}): {item} lies in both images but not in K")
            }
            PushoutDefect::Identified { square, item } => {
                write!(f, "square ({square}): extra identification at {item}")
            }
            PushoutDefect::NotCovered { square, item } => {
                write!(f, "square ({square}): {item} is in neither image")
            }
        }
    }
}

impl DerivationStep {
    /// Assembles a step from recorded parts and checks that both squares are
    /// pushouts.
    pub fn from_parts(
        rule: Arc<Rule>,
        g: GraphMorphism,
        z: GraphMorphism,
        h: GraphMorphism,
        incl_zg: GraphMorphism,
        incl_zh: GraphMorphism,
    ) -> Result<Self> {
        let step = Self::from_parts_unchecked(rule, g, z, h, incl_zg, incl_zh);
        let defects = double_pushout_defects(&step);
        if defects.is_empty() {
            Ok(step)
        } else {
            Err(Error::InvalidStep(describe(&defects)))
        }
    }

    pub fn from_parts_unchecked(
        rule: Arc<Rule>,
        g: GraphMorphism,
        z: GraphMorphism,
        h: GraphMorphism,
        incl_zg: GraphMorphism,
        incl_zh: GraphMorphism,
    ) -> Self {
        DerivationStep {
            rule,
            g,
            z,
            h,
            incl_zg,
            incl_zh,
        }
    }

    pub fn rule(&self) -> &Arc<Rule> {
        &self.rule
    }

    /// Left match `g: L -> G`.
    pub fn g(&self) -> &GraphMorphism {
        &self.g
    }

    /// `z: K -> Z`.
    pub fn z(&self) -> &GraphMorphism {
        &self.z
    }

    /// Right match `h: R -> H`.
    pub fn h(&self) -> &GraphMorphism {
        &self.h
    }

    pub fn incl_zg(&self) -> &GraphMorphism {
        &self.incl_zg
    }

    pub fn incl_zh(&self) -> &GraphMorphism {
        &self.incl_zh
    }

    /// Host graph `G`.
    pub fn input(&self) -> &Arc<Graph> {
        self.g.cod()
    }

    /// Intermediate graph `Z`.
    pub fn intermediate(&self) -> &Arc<Graph> {
        self.z.cod()
    }

    /// Derived graph `H`.
    pub fn output(&self) -> &Arc<Graph> {
        self.h.cod()
    }

    /// The same squares read right to left: `H ⇒ G` by the inverse rule.
    pub fn inverse(&self) -> DerivationStep {
        DerivationStep {
            rule: Arc::new(self.rule.inverse()),
            g: self.h.clone(),
            z: self.z.clone(),
            h: self.g.clone(),
            incl_zg: self.incl_zh.clone(),
            incl_zh: self.incl_zg.clone(),
        }
    }

    /// Items of `G` removed by this step.
    pub fn deleted(&self) -> BTreeSet<Item> {
        let z = self.intermediate();
        self.input().items().filter(|i| !z.has_item(i)).collect()
    }

    /// Items of `H` created by this step.
    pub fn created(&self) -> BTreeSet<Item> {
        let z = self.intermediate();
        self.output().items().filter(|i| !z.has_item(i)).collect()
    }
}

pub fn invert_step(step: &DerivationStep) -> DerivationStep {
    step.inverse()
}

fn check_match(rule: &Rule, g: &GraphMorphism) -> Result<()> {
    if g.dom() != rule.lhs() {
        return Err(Error::InvalidStep(format!(
            "match domain is not the left-hand side of {}",
            rule.name()
        )));
    }
    let v = g.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidMorphism(v))
    }
}

/// Items of `L` outside `K` that collide with another item under `g`.
pub fn identification_violations(rule: &Rule, g: &GraphMorphism) -> Vec<Item> {
    let k = rule.interface();
    let mut out = Vec::new();
    let mut by_vertex: BTreeMap<&Id, Vec<&Id>> = BTreeMap::new();
    for (x, y) in g.vmap() {
        by_vertex.entry(y).or_default().push(x);
    }
    for group in by_vertex.values().filter(|g| g.len() > 1) {
        out.extend(
            group
                .iter()
                .filter(|x| !k.has_vertex(x))
                .map(|x| Item::Vertex((*x).clone())),
        );
    }
    let mut by_edge: BTreeMap<&Id, Vec<&Id>> = BTreeMap::new();
    for (x, y) in g.emap() {
        by_edge.entry(y).or_default().push(x);
    }
    for group in by_edge.values().filter(|g| g.len() > 1) {
        out.extend(
            group
                .iter()
                .filter(|x| !k.has_edge(x))
                .map(|x| Item::Edge((*x).clone())),
        );
    }
    out
}

pub fn check_identification(rule: &Rule, g: &GraphMorphism) -> bool {
    identification_violations(rule, g).is_empty()
}

/// The images `g(L) - g(K)` split into vertices and edges.
fn deleted_images(rule: &Rule, g: &GraphMorphism) -> (BTreeSet<Id>, BTreeSet<Id>) {
    let k = rule.interface();
    let kept_v: BTreeSet<&Id> = k.vertices().iter().filter_map(|v| g.vertex(v)).collect();
    let kept_e: BTreeSet<&Id> = k.edges().keys().filter_map(|e| g.edge(e)).collect();
    let del_v = g.vmap().values().filter(|v| !kept_v.contains(v)).cloned().collect();
    let del_e = g.emap().values().filter(|e| !kept_e.contains(e)).cloned().collect();
    (del_v, del_e)
}

/// Host edges that would be left dangling by the deletion.
pub fn dangling_edges(rule: &Rule, g: &GraphMorphism) -> Vec<Id> {
    let (del_v, del_e) = deleted_images(rule, g);
    g.cod()
        .edges()
        .iter()
        .filter(|(id, e)| {
            !del_e.contains(*id) && (del_v.contains(&e.src) || del_v.contains(&e.tgt))
        })
        .map(|(id, _)| id.clone())
        .collect()
}

pub fn check_dangling(rule: &Rule, g: &GraphMorphism) -> bool {
    dangling_edges(rule, g).is_empty()
}

/// True iff `g` is a valid match satisfying both gluing conditions.
pub fn is_applicable(rule: &Rule, g: &GraphMorphism) -> bool {
    check_match(rule, g).is_ok() && check_identification(rule, g) && check_dangling(rule, g)
}

/// Applies `rule` at `g`, naming created items `<rule>.<index>.<id>`.
pub fn apply(rule: &Arc<Rule>, g: &GraphMorphism, index: usize) -> Result<DerivationStep> {
    apply_with(rule, g, FreshIds::Indexed(index))
}

/// Applies `rule` at `g` with an explicit fresh-id policy.
pub fn apply_with(rule: &Arc<Rule>, g: &GraphMorphism, fresh: FreshIds<'_>) -> Result<DerivationStep> {
    check_match(rule, g)?;
    let collapsed = identification_violations(rule, g);
    if !collapsed.is_empty() {
        return Err(Error::IdentificationViolated {
            rule: rule.name().into(),
            items: collapsed,
        });
    }
    let dangling = dangling_edges(rule, g);
    if !dangling.is_empty() {
        return Err(Error::DanglingViolated {
            rule: rule.name().into(),
            edges: dangling,
        });
    }

    let host = g.cod();
    let (del_v, del_e) = deleted_images(rule, g);
    let mut z = Graph::new();
    for v in host.vertices().iter().filter(|v| !del_v.contains(*v)) {
        z.add_vertex(v.clone());
    }
    for (id, e) in host.edges().iter().filter(|(id, _)| !del_e.contains(*id)) {
        z.add_edge(id.clone(), e.clone());
    }
    let z = Arc::new(z);

    let k = rule.interface();
    let rhs = rule.rhs();
    let mut taken: BTreeSet<Id> = host.items().map(|i| match i {
        Item::Vertex(v) | Item::Edge(v) => v,
    }).collect();
    let mut claim = |item: &Item| -> Result<Id> {
        let id = fresh.id_for(rule, item).ok_or_else(|| {
            Error::InvalidStep(format!("no fresh identifier for {item}"))
        })?;
        if !taken.insert(id.clone()) {
            return Err(Error::FreshIdCollision {
                rule: rule.name().into(),
                id,
            });
        }
        Ok(id)
    };

    let mut h_vmap: BTreeMap<Id, Id> = BTreeMap::new();
    let mut h_emap: BTreeMap<Id, Id> = BTreeMap::new();
    let mut out = (*z).clone();
    for v in rhs.vertices() {
        let image = match k.has_vertex(v) {
            true => g.vertex(v).expect("valid match is total").clone(),
            false => {
                let id = claim(&Item::Vertex(v.clone()))?;
                out.add_vertex(id.clone());
                id
            }
        };
        h_vmap.insert(v.clone(), image);
    }
    for (e, edge) in rhs.edges() {
        let image = match k.has_edge(e) {
            true => g.edge(e).expect("valid match is total").clone(),
            false => {
                let id = claim(&Item::Edge(e.clone()))?;
                out.add_edge(
                    id.clone(),
                    Edge {
                        src: h_vmap[&edge.src].clone(),
                        tgt: h_vmap[&edge.tgt].clone(),
                        label: edge.label.clone(),
                    },
                );
                id
            }
        };
        h_emap.insert(e.clone(), image);
    }
    let out = Arc::new(out);

    let zm = g.restrict_dom(k.clone()).with_cod(z.clone());
    let h = GraphMorphism::new_unchecked(rhs.clone(), out.clone(), h_vmap, h_emap);
    let incl_zg = GraphMorphism::inclusion(z.clone(), host.clone())?;
    let incl_zh = GraphMorphism::inclusion(z, out)?;
    Ok(DerivationStep {
        rule: rule.clone(),
        g: g.clone(),
        z: zm,
        h,
        incl_zg,
        incl_zh,
    })
}

fn is_id_inclusion(m: &GraphMorphism) -> bool {
    m.vmap().iter().all(|(a, b)| a == b) && m.emap().iter().all(|(a, b)| a == b)
}

fn square_defects(
    square: u8,
    side: &Arc<Graph>,
    k: &Arc<Graph>,
    m: &GraphMorphism,
    z: &GraphMorphism,
    incl: &GraphMorphism,
    out: &mut Vec<PushoutDefect>,
) {
    let (m_name, incl_name) = match square {
        1 => ("left match g", "inclusion Z -> G"),
        _ => ("right match h", "inclusion Z -> H"),
    };
    if m.dom() != side {
        out.push(PushoutDefect::Shape("match domain is not the rule side"));
        return;
    }
    if incl.cod() != m.cod() || incl.dom() != z.cod() {
        out.push(PushoutDefect::Shape("inclusion does not connect Z with the host"));
        return;
    }
    if !m.is_valid() {
        out.push(PushoutDefect::InvalidMorphism(m_name));
        return;
    }
    if !incl.is_valid() {
        out.push(PushoutDefect::InvalidMorphism(incl_name));
        return;
    }
    if !is_id_inclusion(incl) {
        out.push(PushoutDefect::NotInclusion(incl_name));
        return;
    }

    for x in k.items() {
        let via_z = z.item(&x).and_then(|y| incl.item(&y));
        if via_z.is_none() || m.item(&x) != via_z {
            out.push(PushoutDefect::NotCommuting { square, item: x });
        }
    }
    let zg = incl.cod();
    let in_z = |i: &Item| incl.dom().has_item(i);
    let mut seen = BTreeSet::new();
    for x in side.items().filter(|i| !k.has_item(i)) {
        let Some(y) = m.item(&x) else { continue };
        if in_z(&y) {
            out.push(PushoutDefect::OverlapOutsideInterface { square, item: x });
        } else if !seen.insert(y) {
            out.push(PushoutDefect::Identified { square, item: x });
        }
    }
    for y in zg.items() {
        if !in_z(&y) && !seen.contains(&y) {
            out.push(PushoutDefect::NotCovered { square, item: y });
        }
    }
}

/// Everything that keeps `step` from being a double pushout.
pub fn double_pushout_defects(step: &DerivationStep) -> Vec<PushoutDefect> {
    let mut out = Vec::new();
    let rule = &step.rule;
    if step.z.dom() != rule.interface() {
        out.push(PushoutDefect::Shape("z does not start at K"));
        return out;
    }
    if !step.z.is_valid() {
        out.push(PushoutDefect::InvalidMorphism("z"));
        return out;
    }
    square_defects(1, rule.lhs(), rule.interface(), &step.g, &step.z, &step.incl_zg, &mut out);
    square_defects(2, rule.rhs(), rule.interface(), &step.h, &step.z, &step.incl_zh, &mut out);
    out
}

/// True iff both squares of `step` are pushouts.
pub fn verify_double_pushout(step: &DerivationStep) -> bool {
    double_pushout_defects(step).is_empty()
}

fn describe(defects: &[PushoutDefect]) -> String {
    defects.iter().map(|d| format!("{d}")).collect::<Vec<_>>().join("; ")
}
