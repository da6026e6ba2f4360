//! Reading and writing documents on disk.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dpo_core::{run_script, Derivation, Graph, MatchSpec, Rule, RuleSet, ScriptEntry};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::format::{
    to_json, DerivationDoc, FieldError, GraphDoc, GridDoc, HandleDoc, IdSets, MatchDoc, MorphismBody,
    RuleDoc, RuleSetDoc, ScriptDoc, VERSION,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Graph,
    Rule,
    RuleSet,
    Script,
    Derivation,
    Handle,
    Grid,
    Morphism,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Graph => "graph",
            Kind::Rule => "rule",
            Kind::RuleSet => "ruleset",
            Kind::Script => "script",
            Kind::Derivation => "derivation",
            Kind::Handle => "handle",
            Kind::Grid => "grid",
            Kind::Morphism => "morphism",
        }
    }

    fn from_name(s: &str) -> Option<Kind> {
        [
            Kind::Graph,
            Kind::Rule,
            Kind::RuleSet,
            Kind::Script,
            Kind::Derivation,
            Kind::Handle,
            Kind::Grid,
            Kind::Morphism,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// A script with its start graph and rules resolved.
#[derive(Clone, Debug)]
pub struct Script {
    pub start: Arc<Graph>,
    pub rules: RuleSet,
    pub entries: Vec<ScriptEntry>,
}

/// Any document, converted and validated.
#[derive(Clone, Debug)]
pub enum Document {
    Graph(Graph),
    Rule(Rule),
    RuleSet(Vec<Rule>),
    Script(Script),
    Derivation(Derivation),
    Handle(IdSets),
    Grid(GridDoc),
    Morphism(MorphismBody),
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn infer(v: &Value) -> Option<Kind> {
    let obj = v.as_object()?;
    if let Some(k) = obj.get("kind").and_then(Value::as_str) {
        return Kind::from_name(k);
    }
    let has = |k: &str| obj.contains_key(k);
    Some(match () {
        _ if has("steps") && obj.get("start").is_some_and(Value::is_string) => Kind::Script,
        _ if has("steps") => Kind::Derivation,
        _ if has("rules") => Kind::RuleSet,
        _ if has("L") => Kind::Rule,
        _ if has("vmap") || has("emap") => Kind::Morphism,
        _ if has("vertical") => Kind::Grid,
        _ if obj
            .get("edges")
            .and_then(Value::as_array)
            .is_some_and(|es| es.first().is_some_and(Value::is_string)) =>
        {
            Kind::Handle
        }
        _ if has("vertices") => Kind::Graph,
        _ => return None,
    })
}

/// Parses `path` and determines its kind from the `kind` field or, failing
/// that, from its shape.
pub fn sniff(path: &Path) -> Result<(Kind, String), CliError> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::parse(path, &e))?;
    let kind = infer(&value).ok_or_else(|| {
        CliError::invalid(path, FieldError::new("kind", "missing or unknown document kind"))
    })?;
    if let Some(v) = value.get("version").and_then(Value::as_u64) {
        if v > u64::from(VERSION) {
            return Err(CliError::invalid(
                path,
                FieldError::new("version", format!("format version {v} is newer than {VERSION}")),
            ));
        }
    }
    Ok((kind, text))
}

fn typed<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(path, &e))
}

fn expect(path: &Path, found: Kind, wanted: &[Kind]) -> Result<(), CliError> {
    if wanted.contains(&found) {
        return Ok(());
    }
    let names: Vec<&str> = wanted.iter().map(|k| k.name()).collect();
    Err(CliError::invalid(
        path,
        FieldError::new("kind", format!("expected {}, found {}", names.join(" or "), found.name())),
    ))
}

pub fn load(path: &Path) -> Result<Document, CliError> {
    let (kind, text) = sniff(path)?;
    let bad = |e| CliError::invalid(path, e);
    Ok(match kind {
        Kind::Graph => Document::Graph(typed::<GraphDoc>(path, &text)?.body.to_graph().map_err(bad)?),
        Kind::Rule => Document::Rule(typed::<RuleDoc>(path, &text)?.body.to_rule().map_err(bad)?),
        Kind::RuleSet => Document::RuleSet(typed::<RuleSetDoc>(path, &text)?.to_rules().map_err(bad)?),
        Kind::Script => Document::Script(resolve_script(path, typed(path, &text)?)?),
        Kind::Derivation => {
            let doc: DerivationDoc = typed(path, &text)?;
            Document::Derivation(doc.to_derivation().map_err(bad)?)
        }
        Kind::Handle => Document::Handle(typed::<HandleDoc>(path, &text)?.sets),
        Kind::Grid => Document::Grid(typed(path, &text)?),
        Kind::Morphism => Document::Morphism(typed(path, &text)?),
    })
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    match load(path)? {
        Document::Graph(g) => Ok(g),
        other => Err(wrong(path, &other, &[Kind::Graph])),
    }
}

/// A rule file or a rule-set file.
pub fn load_rules(path: &Path) -> Result<Vec<Rule>, CliError> {
    match load(path)? {
        Document::Rule(r) => Ok(vec![r]),
        Document::RuleSet(rs) => Ok(rs),
        other => Err(wrong(path, &other, &[Kind::Rule, Kind::RuleSet])),
    }
}

pub fn load_derivation(path: &Path) -> Result<Derivation, CliError> {
    match load(path)? {
        Document::Derivation(d) => Ok(d),
        other => Err(wrong(path, &other, &[Kind::Derivation])),
    }
}

/// A derivation dump, or a script that is run to produce one.
pub fn load_derivation_or_script(path: &Path) -> Result<Derivation, CliError> {
    match load(path)? {
        Document::Derivation(d) => Ok(d),
        Document::Script(s) => Ok(run_script(s.start, &s.rules, &s.entries)?),
        other => Err(wrong(path, &other, &[Kind::Derivation, Kind::Script])),
    }
}

pub fn load_handle(path: &Path) -> Result<IdSets, CliError> {
    match load(path)? {
        Document::Handle(h) => Ok(h),
        other => Err(wrong(path, &other, &[Kind::Handle])),
    }
}

pub fn load_script(path: &Path) -> Result<Script, CliError> {
    match load(path)? {
        Document::Script(s) => Ok(s),
        other => Err(wrong(path, &other, &[Kind::Script])),
    }
}

pub fn kind_of(doc: &Document) -> Kind {
    match doc {
        Document::Graph(_) => Kind::Graph,
        Document::Rule(_) => Kind::Rule,
        Document::RuleSet(_) => Kind::RuleSet,
        Document::Script(_) => Kind::Script,
        Document::Derivation(_) => Kind::Derivation,
        Document::Handle(_) => Kind::Handle,
        Document::Grid(_) => Kind::Grid,
        Document::Morphism(_) => Kind::Morphism,
    }
}

fn wrong(path: &Path, doc: &Document, wanted: &[Kind]) -> CliError {
    expect(path, kind_of(doc), wanted).expect_err("kind was checked to differ")
}

fn relative(script: &Path, target: &str) -> PathBuf {
    script.parent().unwrap_or(Path::new(".")).join(target)
}

fn resolve_script(path: &Path, doc: ScriptDoc) -> Result<Script, CliError> {
    let start = Arc::new(load_graph(&relative(path, &doc.start))?);
    let mut rules = RuleSet::new();
    for (i, file) in doc.rules.iter().enumerate() {
        for rule in load_rules(&relative(path, file))? {
            let name = rule.name().to_string();
            if rules.insert(rule).is_some() {
                return Err(CliError::invalid(
                    path,
                    FieldError::new(format!("rules[{i}]"), format!("rule {name} is defined twice")),
                ));
            }
        }
    }
    let mut entries = Vec::with_capacity(doc.steps.len());
    for (i, step) in doc.steps.iter().enumerate() {
        let matching = match &step.matching {
            MatchDoc::Keyword(k) if k == "auto" => MatchSpec::Auto,
            MatchDoc::Keyword(k) => {
                return Err(CliError::invalid(
                    path,
                    FieldError::new(format!("steps[{i}].match"), format!("unknown match keyword {k:?}")),
                ))
            }
            MatchDoc::Map(m) => {
                let (vmap, emap) = m.maps();
                MatchSpec::Explicit { vmap, emap }
            }
        };
        if rules.get(&step.rule).is_none() {
            return Err(CliError::invalid(
                path,
                FieldError::new(format!("steps[{i}].rule"), format!("no rule named {}", step.rule)),
            ));
        }
        entries.push(ScriptEntry {
            rule: step.rule.clone(),
            matching,
        });
    }
    Ok(Script {
        start,
        rules,
        entries,
    })
}

/// Runs a script file.
pub fn derive_script(path: &Path) -> Result<Derivation, CliError> {
    let s = load_script(path)?;
    Ok(run_script(s.start, &s.rules, &s.entries)?)
}

pub fn write_doc<T: Serialize>(dir: &Path, name: &str, doc: &T) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, to_json(doc)).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}
