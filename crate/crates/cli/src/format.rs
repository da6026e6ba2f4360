//! JSON documents and their conversion to and from the core types.
//!
//! Every top-level document carries a `kind` discriminator and a format
//! `version`. Nested graphs, rules and maps are plain bodies without either.
//! Serialization is deterministic: all sets and maps are written in id
//! order.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use dpo_core::{
    Derivation, DerivationStep, Edge, Graph, GraphMorphism, Id, Rule, RuleSet, SubgraphHandle,
};
use serde::{Deserialize, Serialize};

pub const VERSION: u32 = 1;

/// A conversion failure, located by a dotted field path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            message: message.into(),
        }
    }

    fn within(self, outer: &str) -> Self {
        let field = match self.field.is_empty() {
            true => outer.to_string(),
            false => format!("{outer}.{}", self.field),
        };
        FieldError { field, ..self }
    }
}

type Conv<T> = Result<T, FieldError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
    pub label: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphBody {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismBody {
    #[serde(default)]
    pub vmap: BTreeMap<String, String>,
    #[serde(default)]
    pub emap: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleBody {
    pub name: String,
    #[serde(rename = "L")]
    pub lhs: GraphBody,
    #[serde(rename = "K")]
    pub interface: GraphBody,
    #[serde(rename = "R")]
    pub rhs: GraphBody,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdSets {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub rule: RuleBody,
    #[serde(rename = "G")]
    pub input: GraphBody,
    pub g: MorphismBody,
    #[serde(rename = "Z")]
    pub intermediate: GraphBody,
    pub z: MorphismBody,
    #[serde(rename = "H")]
    pub output: GraphBody,
    pub h: MorphismBody,
    #[serde(rename = "incl_ZG")]
    pub incl_zg: MorphismBody,
    #[serde(rename = "incl_ZH")]
    pub incl_zh: MorphismBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatchDoc {
    Keyword(String),
    Map(MorphismBody),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptStepDoc {
    pub rule: String,
    #[serde(rename = "match", default = "auto")]
    pub matching: MatchDoc,
}

fn auto() -> MatchDoc {
    MatchDoc::Keyword("auto".into())
}

/// Header shared by all top-level documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    /// May be omitted on input when the shape of the document is
    /// unambiguous.
    #[serde(default)]
    pub kind: String,
    #[serde(default = "current_version")]
    pub version: u32,
}

fn current_version() -> u32 {
    VERSION
}

impl Header {
    pub fn new(kind: &str) -> Self {
        Header {
            kind: kind.into(),
            version: VERSION,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    #[serde(flatten)]
    pub header: Header,
    #[serde(flatten)]
    pub body: GraphBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDoc {
    #[serde(flatten)]
    pub header: Header,
    #[serde(flatten)]
    pub body: RuleBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSetDoc {
    #[serde(flatten)]
    pub header: Header,
    pub rules: Vec<RuleBody>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptDoc {
    #[serde(flatten)]
    pub header: Header,
    /// Path of the start graph, relative to the script.
    pub start: String,
    /// Paths of rule or rule-set files, relative to the script.
    #[serde(default)]
    pub rules: Vec<String>,
    pub steps: Vec<ScriptStepDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationDoc {
    #[serde(flatten)]
    pub header: Header,
    pub start: GraphBody,
    pub steps: Vec<StepDoc>,
    /// Present on restricted derivations: graph `i` as an id-subset of
    /// graph `i` of the derivation it was restricted from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mono_chain: Option<Vec<IdSets>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleDoc {
    #[serde(flatten)]
    pub header: Header,
    #[serde(flatten)]
    pub sets: IdSets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDoc {
    pub i: usize,
    pub j: usize,
    pub rule: String,
    pub g: MorphismBody,
    pub h: MorphismBody,
}

/// Every transported step of a move grid, without the graphs, which can be
/// replayed from the two input derivations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDoc {
    #[serde(flatten)]
    pub header: Header,
    pub rows: usize,
    pub cols: usize,
    pub vertical: Vec<CellDoc>,
    pub horizontal: Vec<CellDoc>,
}

// ---- graphs -------------------------------------------------------------

impl From<&Graph> for GraphBody {
    fn from(g: &Graph) -> Self {
        GraphBody {
            vertices: g.vertices().iter().map(|v| v.to_string()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|(id, e)| EdgeDoc {
                    id: id.to_string(),
                    src: e.src.to_string(),
                    tgt: e.tgt.to_string(),
                    label: e.label.to_string(),
                })
                .collect(),
        }
    }
}

impl GraphBody {
    pub fn to_graph(&self) -> Conv<Graph> {
        Graph::from_parts(
            self.vertices.iter().map(Id::from),
            self.edges
                .iter()
                .map(|e| (Id::from(&e.id), Edge::new(e.src.as_str(), e.tgt.as_str(), e.label.as_str()))),
        )
        .map_err(|v| {
            let text: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            FieldError::new("", text.join("; "))
        })
    }
}

impl GraphDoc {
    pub fn new(g: &Graph) -> Self {
        GraphDoc {
            header: Header::new("graph"),
            body: g.into(),
        }
    }
}

// ---- morphisms ----------------------------------------------------------

impl From<&GraphMorphism> for MorphismBody {
    fn from(m: &GraphMorphism) -> Self {
        let conv = |map: &BTreeMap<Id, Id>| map.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        MorphismBody {
            vmap: conv(m.vmap()),
            emap: conv(m.emap()),
        }
    }
}

impl MorphismBody {
    pub fn maps(&self) -> (BTreeMap<Id, Id>, BTreeMap<Id, Id>) {
        let conv = |map: &BTreeMap<String, String>| map.iter().map(|(a, b)| (Id::from(a), Id::from(b))).collect();
        (conv(&self.vmap), conv(&self.emap))
    }

    pub fn to_morphism(&self, dom: &Arc<Graph>, cod: &Arc<Graph>) -> Conv<GraphMorphism> {
        let (vmap, emap) = self.maps();
        GraphMorphism::new(dom.clone(), cod.clone(), vmap, emap).map_err(|e| FieldError::new("", e.to_string()))
    }
}

// ---- rules --------------------------------------------------------------

impl From<&Rule> for RuleBody {
    fn from(r: &Rule) -> Self {
        RuleBody {
            name: r.name().into(),
            lhs: r.lhs().as_ref().into(),
            interface: r.interface().as_ref().into(),
            rhs: r.rhs().as_ref().into(),
        }
    }
}

impl RuleBody {
    pub fn to_rule(&self) -> Conv<Rule> {
        let l = self.lhs.to_graph().map_err(|e| e.within("L"))?;
        let k = self.interface.to_graph().map_err(|e| e.within("K"))?;
        let r = self.rhs.to_graph().map_err(|e| e.within("R"))?;
        Rule::new(self.name.clone(), l, k, r).map_err(|e| FieldError::new("", e.to_string()))
    }
}

impl RuleSetDoc {
    pub fn new(rules: &RuleSet) -> Self {
        RuleSetDoc {
            header: Header::new("ruleset"),
            rules: rules.iter().map(|r| r.as_ref().into()).collect(),
        }
    }

    pub fn to_rules(&self) -> Conv<Vec<Rule>> {
        let mut names = BTreeSet::new();
        self.rules
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if !names.insert(r.name.as_str()) {
                    return Err(FieldError::new(format!("rules[{i}]"), format!("duplicate rule name {}", r.name)));
                }
                r.to_rule().map_err(|e| e.within(&format!("rules[{i}]")))
            })
            .collect()
    }
}

// ---- handles ------------------------------------------------------------

impl From<&SubgraphHandle> for IdSets {
    fn from(h: &SubgraphHandle) -> Self {
        IdSets {
            vertices: h.vertices().iter().map(|v| v.to_string()).collect(),
            edges: h.edges().iter().map(|e| e.to_string()).collect(),
        }
    }
}

impl IdSets {
    pub fn to_handle(&self, host: &Arc<Graph>) -> Conv<SubgraphHandle> {
        SubgraphHandle::new(
            host.clone(),
            self.vertices.iter().map(Id::from).collect(),
            self.edges.iter().map(Id::from).collect(),
        )
        .map_err(|e| FieldError::new("", e.to_string()))
    }
}

impl HandleDoc {
    pub fn new(h: &SubgraphHandle) -> Self {
        HandleDoc {
            header: Header::new("handle"),
            sets: h.into(),
        }
    }
}

// ---- derivations --------------------------------------------------------

impl From<&DerivationStep> for StepDoc {
    fn from(s: &DerivationStep) -> Self {
        StepDoc {
            rule: s.rule().as_ref().into(),
            input: s.input().as_ref().into(),
            g: s.g().into(),
            intermediate: s.intermediate().as_ref().into(),
            z: s.z().into(),
            output: s.output().as_ref().into(),
            h: s.h().into(),
            incl_zg: s.incl_zg().into(),
            incl_zh: s.incl_zh().into(),
        }
    }
}

impl StepDoc {
    /// Rebuilds the step on top of `input`, which must equal the recorded
    /// `G`, and re-verifies both pushout squares.
    pub fn to_step(&self, input: &Arc<Graph>) -> Conv<DerivationStep> {
        let rule = Arc::new(self.rule.to_rule().map_err(|e| e.within("rule"))?);
        let recorded = self.input.to_graph().map_err(|e| e.within("G"))?;
        if recorded != **input {
            return Err(FieldError::new("G", "differs from the graph the previous step ends in"));
        }
        let z_graph = Arc::new(self.intermediate.to_graph().map_err(|e| e.within("Z"))?);
        let h_graph = Arc::new(self.output.to_graph().map_err(|e| e.within("H"))?);
        let g = self.g.to_morphism(rule.lhs(), input).map_err(|e| e.within("g"))?;
        let z = self.z.to_morphism(rule.interface(), &z_graph).map_err(|e| e.within("z"))?;
        let h = self.h.to_morphism(rule.rhs(), &h_graph).map_err(|e| e.within("h"))?;
        let incl_zg = self.incl_zg.to_morphism(&z_graph, input).map_err(|e| e.within("incl_ZG"))?;
        let incl_zh = self.incl_zh.to_morphism(&z_graph, &h_graph).map_err(|e| e.within("incl_ZH"))?;
        DerivationStep::from_parts(rule, g, z, h, incl_zg, incl_zh).map_err(|e| FieldError::new("", e.to_string()))
    }
}

impl DerivationDoc {
    pub fn new(d: &Derivation) -> Self {
        DerivationDoc {
            header: Header::new("derivation"),
            start: d.start().as_ref().into(),
            steps: d.steps().iter().map(StepDoc::from).collect(),
            mono_chain: None,
        }
    }

    pub fn with_chain(d: &Derivation, chain: &[SubgraphHandle]) -> Self {
        DerivationDoc {
            mono_chain: Some(chain.iter().map(IdSets::from).collect()),
            ..Self::new(d)
        }
    }

    pub fn to_derivation(&self) -> Conv<Derivation> {
        let start = Arc::new(self.start.to_graph().map_err(|e| e.within("start"))?);
        let mut d = Derivation::empty(start);
        for (i, s) in self.steps.iter().enumerate() {
            let step = s.to_step(d.end()).map_err(|e| e.within(&format!("steps[{i}]")))?;
            d.push(step).map_err(|e| FieldError::new(format!("steps[{i}]"), e.to_string()))?;
        }
        Ok(d)
    }
}

impl GridDoc {
    pub fn new(grid: &dpo_core::Grid) -> Self {
        let cells = |rows: &Vec<Vec<DerivationStep>>| {
            rows.iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter().enumerate().map(move |(j, s)| CellDoc {
                        i,
                        j,
                        rule: s.rule().name().into(),
                        g: s.g().into(),
                        h: s.h().into(),
                    })
                })
                .collect()
        };
        GridDoc {
            header: Header::new("grid"),
            rows: grid.rows(),
            cols: grid.cols(),
            vertical: cells(&grid.vertical),
            horizontal: cells(&grid.horizontal),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Graph {
        Graph::new()
            .with_vertex("a")
            .with_vertex("b")
            .with_undirected("ab", "ba", "a", "b", "*")
    }

    #[test]
    fn graph_round_trip() {
        let g = sample();
        let doc = GraphDoc::new(&g);
        let text = to_json(&doc);
        let back: GraphDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.body.to_graph().unwrap(), g);
        assert_eq!(to_json(&back), text);
        assert!(text.contains("\"kind\": \"graph\""));
    }

    #[test]
    fn dangling_edge_names_field() {
        let body: GraphBody =
            serde_json::from_str(r#"{"vertices":["a"],"edges":[{"id":"e","src":"a","tgt":"zz","label":"*"}]}"#)
                .unwrap();
        let err = body.to_graph().unwrap_err();
        assert!(err.message.contains("zz"), "{err:?}");
    }

    #[test]
    fn match_keyword_or_map() {
        let s: ScriptStepDoc = serde_json::from_str(r#"{"rule":"r","match":"auto"}"#).unwrap();
        assert_eq!(s.matching, MatchDoc::Keyword("auto".into()));
        let s: ScriptStepDoc = serde_json::from_str(r#"{"rule":"r","match":{"vmap":{"x":"v"}}}"#).unwrap();
        assert!(matches!(s.matching, MatchDoc::Map(_)));
        let s: ScriptStepDoc = serde_json::from_str(r#"{"rule":"r"}"#).unwrap();
        assert_eq!(s.matching, MatchDoc::Keyword("auto".into()));
    }

    #[test]
    fn rule_errors_are_located() {
        let body: RuleBody = serde_json::from_str(
            r#"{"name":"r","L":{"vertices":["x"]},"K":{"vertices":["x"]},"R":{"vertices":[]}}"#,
        )
        .unwrap();
        let err = body.to_rule().unwrap_err();
        assert!(err.message.contains("K is not a subgraph of R"), "{err:?}");
    }
}
