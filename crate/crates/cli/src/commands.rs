//! The verbs. Each one returns an [`Outcome`]: an exit code, a JSON report
//! or artifact, a text summary, and the files to write under `--out`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::thread;

use dpo_core::{
    accessed_part, check_backward_spine_preservation, check_rule_pair_independence,
    check_spine_preservation, derivations_equal_up_to_iso_capped, double_pushout_defects, evom,
    move_forward, restrict, spine, Counterexample, Derivation, DerivationIso, Graph,
    IndependenceKind, IsoOutcome, Rule, SubgraphHandle,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{DerivationDoc, GridDoc, HandleDoc, MorphismBody};
use crate::io::{self, load, load_derivation_or_script, Document, Kind};
use crate::properties::{check_seed, Violation, LAWS};

pub const OK: i32 = 0;
pub const INVALID: i32 = 1;
pub const PROPERTY_FAILED: i32 = 2;

#[derive(Clone, Debug)]
pub struct Settings {
    pub seed: u64,
    pub max_iso: usize,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    /// Printed under `--format json`.
    pub json: Value,
    /// Printed under `--format text`.
    pub text: String,
    /// `(file name, document)` pairs written under `--out`.
    pub files: Vec<(String, Value)>,
}

impl Outcome {
    fn new(code: i32, json: Value, text: String) -> Self {
        Outcome {
            code,
            json,
            text,
            files: Vec::new(),
        }
    }

    fn file(mut self, name: &str, doc: Value) -> Self {
        self.files.push((name.into(), doc));
        self
    }
}

fn value<T: serde::Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

fn size(g: &Graph) -> String {
    format!("{}v/{}e", g.vertex_count(), g.edge_count())
}

fn summary(d: &Derivation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "start {}", size(d.start()));
    let _ = writeln!(out, "{:>4}  {:<24} {:>6} {:>10}", "step", "rule", "|L|", "|H|");
    for (i, s) in d.steps().iter().enumerate() {
        let l = s.rule().lhs();
        let _ = writeln!(
            out,
            "{:>4}  {:<24} {:>6} {:>10}",
            i,
            s.rule().name(),
            l.vertex_count() + l.edge_count(),
            size(s.output())
        );
    }
    let _ = writeln!(out, "{} steps, end {}", d.len(), size(d.end()));
    out
}

fn derivation_outcome(d: &Derivation, name: &str) -> Outcome {
    let doc = value(&DerivationDoc::new(d));
    Outcome::new(OK, doc.clone(), summary(d)).file(name, doc)
}

fn iso_json(w: &DerivationIso) -> Value {
    json!({
        "start": value(&MorphismBody::from(&w.start)),
        "steps": w.steps.iter().map(|s| json!({
            "intermediate": value(&MorphismBody::from(&s.intermediate)),
            "derived": value(&MorphismBody::from(&s.derived)),
        })).collect::<Vec<_>>(),
    })
}

fn outcome_json(o: &IsoOutcome) -> Value {
    match o {
        IsoOutcome::Found(w) => json!({ "result": "found", "witness": iso_json(w) }),
        IsoOutcome::NotEqual => json!({ "result": "not_equal" }),
        IsoOutcome::Undecided { tried } => json!({ "result": "undecided", "tried": tried }),
    }
}

fn outcome_word(o: &IsoOutcome) -> String {
    match o {
        IsoOutcome::Found(_) => "equal up to iso".into(),
        IsoOutcome::NotEqual => "not equal".into(),
        IsoOutcome::Undecided { tried } => format!("undecided after {tried} start isomorphisms"),
    }
}

fn verdict(passed: bool) -> (&'static str, i32) {
    match passed {
        true => ("PASS", OK),
        false => ("FAIL", PROPERTY_FAILED),
    }
}

// ---- validate -----------------------------------------------------------

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io_err = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if path.is_dir() {
            out.extend(json_files(&path)?);
        } else if path.extension().is_some_and(|e| e == "json") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn validate_one(path: &Path) -> Result<Kind, CliError> {
    let doc = load(path)?;
    if let Document::Script(s) = &doc {
        dpo_core::run_script(s.start.clone(), &s.rules, &s.entries)?;
    }
    Ok(io::kind_of(&doc))
}

pub fn validate(paths: &[PathBuf]) -> Result<Outcome, CliError> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            files.extend(json_files(p)?);
        } else {
            files.push(p.clone());
        }
    }
    let mut results = Vec::new();
    let mut text = String::new();
    let mut all_ok = true;
    for f in &files {
        match validate_one(f) {
            Ok(kind) => {
                let _ = writeln!(text, "ok    {} ({})", f.display(), kind.name());
                results.push(json!({ "file": f.display().to_string(), "valid": true, "kind": kind.name() }));
            }
            Err(e) => {
                all_ok = false;
                let _ = writeln!(text, "error {e}");
                results.push(json!({ "file": f.display().to_string(), "valid": false, "error": e.to_string() }));
            }
        }
    }
    let code = if all_ok { OK } else { INVALID };
    let report = json!({ "check": "validate", "passed": all_ok, "files": results });
    Ok(Outcome::new(code, report.clone(), text).file("report.json", report))
}

// ---- derivation verbs ---------------------------------------------------

pub fn derive(path: &Path) -> Result<Outcome, CliError> {
    let d = load_derivation_or_script(path)?;
    Ok(derivation_outcome(&d, "derivation.json"))
}

pub fn invert(path: &Path) -> Result<Outcome, CliError> {
    let d = load_derivation_or_script(path)?;
    Ok(derivation_outcome(&d.inverse(), "inverse.json"))
}

pub fn move_cmd(a: &Path, b: &Path, backward: bool) -> Result<Outcome, CliError> {
    let d = load_derivation_or_script(a)?;
    let d_bar = load_derivation_or_script(b)?;
    if backward {
        let moved = evom(&d, &d_bar)?;
        return Ok(derivation_outcome(&moved, "evom.json"));
    }
    let pair = move_forward(&d, &d_bar)?;
    let moved = value(&DerivationDoc::new(&pair.moved));
    let text = format!(
        "moved {} steps along {} steps ({} grid cells)\n{}",
        d.len(),
        d_bar.len(),
        d.len() * d_bar.len(),
        summary(&pair.moved)
    );
    Ok(Outcome::new(OK, moved.clone(), text)
        .file("moved.json", moved)
        .file("co_moved.json", value(&DerivationDoc::new(&pair.co_moved)))
        .file("grid.json", value(&GridDoc::new(&pair.grid))))
}

fn handle_text(h: &SubgraphHandle) -> String {
    let list = |s: &std::collections::BTreeSet<dpo_core::Id>| {
        s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
    };
    format!(
        "{} vertices: {}\n{} edges: {}\n",
        h.vertices().len(),
        list(h.vertices()),
        h.edges().len(),
        list(h.edges())
    )
}

pub fn acc(path: &Path) -> Result<Outcome, CliError> {
    let d = load_derivation_or_script(path)?;
    let a = accessed_part(&d);
    let doc = value(&HandleDoc::new(&a.handle));
    Ok(Outcome::new(OK, doc.clone(), handle_text(&a.handle)).file("acc.json", doc))
}

pub fn restrict_cmd(dump: &Path, handle: &Path) -> Result<Outcome, CliError> {
    let d = load_derivation_or_script(dump)?;
    let m = io::load_handle(handle)?
        .to_handle(d.start())
        .map_err(|e| CliError::invalid(handle, e))?;
    let cert = restrict(&d, &m)?;
    let doc = value(&DerivationDoc::with_chain(&cert.restricted, &cert.mono_chain));
    Ok(Outcome::new(OK, doc.clone(), summary(&cert.restricted)).file("restricted.json", doc))
}

pub fn spine_cmd(path: &Path) -> Result<Outcome, CliError> {
    let d = load_derivation_or_script(path)?;
    let (a, _) = spine(&d);
    let cert = restrict(&d, &a.handle)?;
    let doc = value(&DerivationDoc::with_chain(&cert.restricted, &cert.mono_chain));
    let text = format!("accessed part:\n{}{}", handle_text(&a.handle), summary(&cert.restricted));
    Ok(Outcome::new(OK, doc.clone(), text)
        .file("spine.json", doc)
        .file("acc.json", value(&HandleDoc::new(&a.handle))))
}

pub fn iso(a: &Path, b: &Path, s: &Settings) -> Result<Outcome, CliError> {
    let d = load_derivation_or_script(a)?;
    let d2 = load_derivation_or_script(b)?;
    let o = derivations_equal_up_to_iso_capped(&d, &d2, s.max_iso);
    let (word, code) = verdict(o.found().is_some());
    let report = json!({ "check": "iso", "passed": o.found().is_some(), "outcome": outcome_json(&o) });
    Ok(Outcome::new(code, report.clone(), format!("{word}: {}\n", outcome_word(&o))).file("report.json", report))
}

// ---- check --------------------------------------------------------------

pub fn check_theorem(a: &Path, b: &Path, backward: bool, s: &Settings) -> Result<Outcome, CliError> {
    let d = load_derivation_or_script(a)?;
    let d_bar = load_derivation_or_script(b)?;
    let (report, passed, text) = if backward {
        let r = check_backward_spine_preservation(&d, &d_bar, s.max_iso)?;
        let text = format!(
            "spine(d') {} steps, spine(evom(d', d̄)) {} steps: {}\n",
            r.spine.len(),
            r.moved_spine.len(),
            outcome_word(&r.witness)
        );
        let report = json!({
            "check": "theorem",
            "direction": "backward",
            "passed": r.holds(),
            "moved": value(&DerivationDoc::new(&r.moved)),
            "spine": value(&DerivationDoc::new(&r.spine)),
            "moved_spine": value(&DerivationDoc::new(&r.moved_spine)),
            "witness": outcome_json(&r.witness),
        });
        (report, r.holds(), text)
    } else {
        let r = check_spine_preservation(&d, &d_bar, s.max_iso)?;
        let mut text = format!(
            "spine(d) {} steps, spine(move(d, d̄)) {} steps: {}\n",
            r.spine.len(),
            r.moved_spine.len(),
            outcome_word(&r.witness)
        );
        let one_step = r.one_step.as_ref().map(|l| {
            let _ = writeln!(
                text,
                "one-step law: {}",
                if l.identical { "identical".to_string() } else { outcome_word(&l.iso) }
            );
            json!({ "identical": l.identical, "iso": outcome_json(&l.iso), "holds": l.holds() })
        });
        let report = json!({
            "check": "theorem",
            "direction": "forward",
            "passed": r.holds(),
            "moved": value(&DerivationDoc::new(&r.moved.moved)),
            "spine": value(&DerivationDoc::new(&r.spine)),
            "moved_spine": value(&DerivationDoc::new(&r.moved_spine)),
            "witness": outcome_json(&r.witness),
            "one_step": one_step,
        });
        (report, r.holds(), text)
    };
    let (word, code) = verdict(passed);
    Ok(Outcome::new(code, report.clone(), format!("{word}\n{text}")).file("report.json", report))
}

fn counterexample_json(c: &Counterexample) -> Value {
    json!({
        "host": c.host,
        "first_rule": c.first_rule,
        "first_match": value(&MorphismBody::from(&c.first_match)),
        "second_rule": c.second_rule,
        "second_match": value(&MorphismBody::from(&c.second_match)),
        "reason": c.reason,
    })
}

pub fn check_indep(p: &Path, p_bar: &Path, hosts: &[PathBuf], sequential: bool) -> Result<Outcome, CliError> {
    let rules = |path: &Path| -> Result<Vec<Arc<Rule>>, CliError> {
        Ok(io::load_rules(path)?.into_iter().map(Arc::new).collect())
    };
    let (p, p_bar) = (rules(p)?, rules(p_bar)?);
    let graphs = hosts
        .iter()
        .map(|h| io::load_graph(h).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    let kind = match sequential {
        true => IndependenceKind::Sequential,
        false => IndependenceKind::Parallel,
    };
    let r = check_rule_pair_independence(&p, &p_bar, &graphs, kind)?;
    let (word, code) = verdict(r.passed());
    let mut text = format!(
        "{word}: {} {} pairs on {} hosts, {} counterexamples\n",
        r.pairs_checked,
        if sequential { "sequential" } else { "parallel" },
        r.hosts,
        r.counterexamples.len()
    );
    for c in &r.counterexamples {
        let _ = writeln!(text, "  host {} ({}): {}", c.host, hosts[c.host].display(), c.reason);
    }
    let report = json!({
        "check": "independence",
        "kind": if sequential { "sequential" } else { "parallel" },
        "passed": r.passed(),
        "bounded": r.bounded,
        "hosts": hosts.iter().map(|h| h.display().to_string()).collect::<Vec<_>>(),
        "pairs_checked": r.pairs_checked,
        "counterexamples": r.counterexamples.iter().map(counterexample_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(code, report.clone(), text).file("report.json", report))
}

pub fn check_dpo(paths: &[PathBuf]) -> Result<Outcome, CliError> {
    let mut failures = Vec::new();
    let mut steps = 0;
    for path in paths {
        let d = load_derivation_or_script(path)?;
        for (label, dd) in [("step", d.clone()), ("inverse step", d.inverse())] {
            for (i, s) in dd.steps().iter().enumerate() {
                steps += 1;
                let defects = double_pushout_defects(s);
                if !defects.is_empty() {
                    failures.push(json!({
                        "file": path.display().to_string(),
                        "step": i,
                        "which": label,
                        "defects": defects.iter().map(|d| format!("{d:?}")).collect::<Vec<_>>(),
                    }));
                }
            }
        }
    }
    let passed = failures.is_empty();
    let (word, code) = verdict(passed);
    let text = format!("{word}: {steps} steps checked, {} not double pushouts\n", failures.len());
    let report = json!({ "check": "dpo", "passed": passed, "steps_checked": steps, "failures": failures });
    Ok(Outcome::new(code, report.clone(), text).file("report.json", report))
}

/// Runs the law suite on `count` seeds starting at `seed`, spread over the
/// available cores.
pub fn run_laws(seed: u64, count: u64, max_iso: usize) -> Vec<Violation> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let workers = workers.clamp(1, count.max(1));
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (0..count)
                        .filter(|k| k % workers == w)
                        .flat_map(|k| check_seed(seed.wrapping_add(k), max_iso).1)
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<Violation> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("law worker panicked"))
            .collect();
        all.sort_by_key(|v| (v.seed, v.law));
        all
    })
}

pub fn check_random(count: u64, s: &Settings) -> Result<Outcome, CliError> {
    let violations = run_laws(s.seed, count, s.max_iso);
    let passed = violations.is_empty();
    let (word, code) = verdict(passed);
    let mut text = format!("{word}: seeds {}..{}\n", s.seed, s.seed.wrapping_add(count));
    let mut laws = Vec::new();
    for (law, statement) in LAWS {
        let failed = violations.iter().filter(|v| v.law == law).count();
        let _ = writeln!(text, "  ({law}) {statement}: {failed} violations");
        laws.push(json!({ "law": law, "statement": statement, "violations": failed }));
    }
    for v in &violations {
        let _ = writeln!(text, "  seed {} ({}): {}", v.seed, v.law, v.detail);
    }
    let report = json!({
        "check": "random",
        "passed": passed,
        "seed": s.seed,
        "count": count,
        "laws": laws,
        "violations": violations.iter().map(|v| json!({ "seed": v.seed, "law": v.law, "detail": v.detail })).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(code, report.clone(), text).file("report.json", report))
}
