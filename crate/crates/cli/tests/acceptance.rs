//! End-to-end acceptance run over the shipped corpus and the randomized law
//! suite. Prints one line per criterion and exits nonzero if any fails.

mod support;

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use dpo_cli::io::{derive_script, load_rules};
use dpo_cli::random::{independent_instance, random_graph, rng_for, MAX_START_VERTICES, MAX_STEPS};
use dpo_core::{
    accessed_part, check_rule_pair_independence, derivations_equal_up_to_iso, enumerate_morphisms,
    evom, for_each_isomorphism, move_forward, spine, Derivation, Graph, IndependenceKind, Rule,
    DEFAULT_ISO_CAP,
};
use rand::seq::SliceRandom;
use rand::Rng;
use support::*;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn script(name: &str) -> Result<Derivation, String> {
    derive_script(&corpus(name)).map_err(|e| e.to_string())
}

fn d_color() -> Result<Derivation, String> {
    script("d_color.json")
}

fn d_dual() -> Result<Derivation, String> {
    script("d_dual.json")
}

fn rule_counts(d: &Derivation) -> Vec<(String, usize)> {
    let mut out: Vec<(String, usize)> = Vec::new();
    for name in d.rule_names() {
        let family = name.split('(').next().unwrap_or(name).to_string();
        match out.last_mut() {
            Some((f, n)) if *f == family => *n += 1,
            _ => out.push((family, 1)),
        }
    }
    out
}

fn counts(spec: &[(&str, usize)]) -> Vec<(String, usize)> {
    spec.iter().map(|(s, n)| (s.to_string(), *n)).collect()
}

fn all_graphs(d: &Derivation) -> Vec<Arc<Graph>> {
    let mut out = vec![d.start().clone()];
    for s in d.steps() {
        out.push(s.intermediate().clone());
        out.push(s.output().clone());
    }
    out
}

fn without_host_edges(g: &Graph) -> Graph {
    // drops the edges between two of the six start vertices
    let start: BTreeSet<_> = (1..=6).map(|i| dpo_core::Id::new(format!("v{i}"))).collect();
    let keep = g
        .edges()
        .iter()
        .filter(|(_, e)| !(start.contains(&e.src) && start.contains(&e.tgt) && e.src != e.tgt))
        .map(|(id, _)| id.clone())
        .collect();
    g.restrict_to(g.vertices(), &keep)
}

fn c1_color_replay() -> Result<String, String> {
    let d = d_color()?;
    ensure(d.len() == 14, || format!("{} steps", d.len()))?;
    let expected = counts(&[("add_loop", 6), ("add_color", 2), ("choose_color", 6)]);
    ensure(rule_counts(&d) == expected, || format!("rule sequence {:?}", rule_counts(&d)))?;
    ensure(brute_isomorphic(d.start(), &k33()), || "start is not K3,3".into())?;
    let target = colored(k33());
    ensure(brute_isomorphic(d.end(), &target), || "final graph differs from the figure".into())?;
    Ok(format!("end {}v/{}e", d.end().vertex_count(), d.end().edge_count()))
}

fn c2_dual_replay() -> Result<String, String> {
    let d = d_dual()?;
    ensure(d.len() == 24, || format!("{} steps", d.len()))?;
    let expected = counts(&[("double_edge", 9), ("add_edge", 6), ("remove_pair", 9)]);
    ensure(rule_counts(&d) == expected, || format!("rule sequence {:?}", rule_counts(&d)))?;
    ensure(brute_isomorphic(d.end(), &two_triangles()), || "final graph is not two triangles".into())?;
    Ok(format!("end {}v/{}e", d.end().vertex_count(), d.end().edge_count()))
}

fn c3_accessed_part() -> Result<String, String> {
    let d = d_color()?;
    let acc = accessed_part(&d);
    let want: BTreeSet<_> = (1..=6).map(|i| dpo_core::Id::new(format!("v{i}"))).collect();
    ensure(acc.handle.vertices() == &want, || format!("vertices {:?}", acc.handle.vertices()))?;
    ensure(acc.handle.edges().is_empty(), || format!("edges {:?}", acc.handle.edges()))?;
    Ok("6 vertices, 0 edges".into())
}

fn c4_spine() -> Result<String, String> {
    let d = d_color()?;
    let (_, s) = spine(&d);
    ensure(s.rule_names() == d.rule_names(), || "rule sequence changed".into())?;
    ensure(s.start().edge_count() == 0 && s.start().vertex_count() == 6, || "start is not 6 discrete vertices".into())?;
    let original = all_graphs(&d);
    let restricted = all_graphs(&s);
    for (k, (o, r)) in original.iter().zip(&restricted).enumerate() {
        ensure(brute_isomorphic(r, &without_host_edges(o)), || format!("graph {k} of the spine"))?;
    }
    let end = colored((1..=6).fold(Graph::new(), |g, i| g.with_vertex(format!("v{i}"))));
    ensure(brute_isomorphic(s.end(), &end), || "end differs from the figure".into())?;
    Ok(format!("{} graphs compared", restricted.len()))
}

fn c5_move() -> Result<String, String> {
    let (d, dual) = (d_color()?, d_dual()?);
    let pair = move_forward(&d, &dual).map_err(|e| e.to_string())?;
    let g = &pair.grid;
    ensure(g.rows() == 14 && g.cols() == 24, || format!("grid {}x{}", g.rows(), g.cols()))?;
    ensure(g.vertical.iter().all(|r| r.len() == 25) && g.horizontal.len() == 15, || "grid shape".into())?;
    ensure(pair.moved.len() == 14, || format!("{} steps", pair.moved.len()))?;
    ensure(pair.moved.start() == dual.end(), || "does not start at the end of d_dual".into())?;
    ensure(pair.moved.rule_names() == d.rule_names(), || "rule sequence changed".into())?;
    ensure(brute_isomorphic(pair.moved.end(), &colored(two_triangles())), || "final graph".into())?;
    ensure(pair.co_moved.end() == pair.moved.end(), || "square does not close".into())?;
    Ok(format!("{} cells", g.rows() * g.cols()))
}

fn c6_theorem() -> Result<String, String> {
    let (d, dual) = (d_color()?, d_dual()?);
    let moved = move_forward(&d, &dual).map_err(|e| e.to_string())?.moved;
    let (_, a) = spine(&d);
    let (_, b) = spine(&moved);
    let o = derivations_equal_up_to_iso(&a, &b);
    let w = o.found().ok_or_else(|| format!("{o:?}"))?;
    ensure(w.verify(&a, &b), || "witness does not verify".into())?;
    ensure(brute_isomorphic(a.start(), b.start()) && brute_isomorphic(a.end(), b.end()), || "oracle disagrees".into())?;
    Ok("witness found".into())
}

fn c7_move_back() -> Result<String, String> {
    let (d, dual) = (d_color()?, d_dual()?);
    let moved = move_forward(&d, &dual).map_err(|e| e.to_string())?.moved;
    let back = evom(&moved, &dual).map_err(|e| e.to_string())?;
    let o = derivations_equal_up_to_iso(&back, &d);
    let w = o.found().ok_or_else(|| format!("{o:?}"))?;
    ensure(w.verify(&back, &d), || "witness does not verify".into())?;
    Ok(format!("identical: {}", back == d))
}

fn c8_negative_control() -> Result<String, String> {
    let rules = |n: &str| -> Result<Vec<Arc<Rule>>, String> {
        Ok(load_rules(&corpus(n)).map_err(|e| e.to_string())?.into_iter().map(Arc::new).collect())
    };
    let (dual, color) = (rules("P_dual.json")?, rules("P_color.json")?);
    let host = Arc::new(dpo_cli::io::load_graph(&corpus("k33_prepared.json")).map_err(|e| e.to_string())?);
    let run = || check_rule_pair_independence(&dual, &color, std::slice::from_ref(&host), IndependenceKind::Sequential);
    let r = run().map_err(|e| e.to_string())?;
    ensure(r == run().map_err(|e| e.to_string())?, || "not deterministic".into())?;
    let hits: Vec<_> = r
        .counterexamples
        .iter()
        .filter(|c| {
            c.first_rule.starts_with("choose_color")
                && c.second_rule == "double_edge"
                && c.second_match.emap().values().all(|e| e.as_str().starts_with("choose_color"))
        })
        .collect();
    ensure(!hits.is_empty(), || format!("{} counterexamples, none of the expected shape", r.counterexamples.len()))?;

    // the opposite order of the pair is independent on the same host
    let rev = check_rule_pair_independence(&color, &dual, std::slice::from_ref(&host), IndependenceKind::Sequential)
        .map_err(|e| e.to_string())?;
    ensure(rev.passed(), || format!("(P_color, P_dual) fails: {}", rev.counterexamples[0].reason))?;

    let mut out = Vec::new();
    let code = dpo_cli::run(
        [
            "dpo".into(),
            "check".into(),
            "--indep".into(),
            corpus("P_dual.json").into_os_string(),
            corpus("P_color.json").into_os_string(),
            "--host".into(),
            corpus("k33_prepared.json").into_os_string(),
            "--sequential".into(),
        ],
        &mut out,
        &mut Vec::new(),
    );
    ensure(code == 2, || format!("cli exit code {code}"))?;
    Ok(format!("{} of {} counterexamples name double_edge", hits.len(), r.counterexamples.len()))
}

const SEEDS: u64 = 200;

fn c9_properties() -> Result<String, String> {
    let mut nontrivial = 0;
    for seed in 0..SEEDS {
        let i = independent_instance(seed);
        ensure(i.d.start().vertex_count() <= MAX_START_VERTICES, || format!("seed {seed}: start too large"))?;
        ensure(i.d.len() <= MAX_STEPS && i.d_bar.len() <= MAX_STEPS, || format!("seed {seed}: too long"))?;
        nontrivial += usize::from(i.d.len() >= 2 && i.d_bar.len() >= 2);
    }
    ensure(nontrivial * 4 >= SEEDS as usize, || format!("only {nontrivial} instances with two or more steps each"))?;
    let violations = dpo_cli::commands::run_laws(0, SEEDS, DEFAULT_ISO_CAP);
    ensure(violations.is_empty(), || format!("{violations:?}"))?;
    Ok(format!("{SEEDS} seeds, {nontrivial} with ≥2 steps on both sides"))
}

fn renamed_shuffle(rng: &mut impl Rng, g: &Graph) -> Graph {
    let mut vs: Vec<_> = g.vertices().iter().cloned().collect();
    vs.shuffle(rng);
    let name = |v: &dpo_core::Id| format!("w{}", vs.iter().position(|x| x == v).unwrap());
    let mut h = Graph::new();
    for v in g.vertices() {
        h.add_vertex(name(v));
    }
    let mut es: Vec<_> = g.edges().values().cloned().collect();
    es.shuffle(rng);
    for (k, e) in es.iter().enumerate() {
        h = h.with_edge(format!("f{k}"), name(&e.src), name(&e.tgt), e.label.clone());
    }
    h
}

fn impl_iso_count(g: &Arc<Graph>, h: &Arc<Graph>) -> usize {
    let mut n = 0;
    for_each_isomorphism(g, h, &mut |_| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

fn c10_oracles() -> Result<String, String> {
    let mut pairs: Vec<(Arc<Graph>, Arc<Graph>)> = Vec::new();
    let mut rules = load_rules(&corpus("P_color.json")).map_err(|e| e.to_string())?;
    rules.extend(load_rules(&corpus("P_dual.json")).map_err(|e| e.to_string())?);
    let mut hosts: Vec<Arc<Graph>> = vec![Arc::new(k33()), Arc::new(two_triangles())];
    hosts.extend(all_graphs(&d_dual()?));
    hosts.retain(|h| h.vertex_count() <= 6);
    for r in &rules {
        for h in &hosts {
            pairs.push((r.lhs().clone(), h.clone()));
        }
    }
    let mut rng = rng_for(10);
    let labels = ["a", "b", "*"];
    for _ in 0..400 {
        let p = random_graph(&mut rng, 3, &labels);
        let h = random_graph(&mut rng, 6, &labels);
        pairs.push((Arc::new(p), Arc::new(h)));
    }
    let mut morphisms = 0;
    for (k, (p, h)) in pairs.iter().enumerate() {
        for injective in [true, false] {
            let got: BTreeSet<Maps> = enumerate_morphisms(p, h, injective).iter().map(maps_of).collect();
            let count = enumerate_morphisms(p, h, injective).len();
            let want = naive_morphisms(p, h, injective);
            ensure(got == want && count == want.len(), || {
                format!("pair {k} (injective {injective}): {} found, {} expected", count, want.len())
            })?;
            morphisms += count;
        }
    }

    let mut iso_pairs: Vec<(Arc<Graph>, Arc<Graph>)> = Vec::new();
    for g in &hosts {
        iso_pairs.push((g.clone(), Arc::new(renamed_shuffle(&mut rng, g))));
    }
    iso_pairs.push((Arc::new(k33()), Arc::new(two_triangles())));
    for _ in 0..300 {
        let g = random_graph(&mut rng, 6, &labels);
        let same = renamed_shuffle(&mut rng, &g);
        let other = random_graph(&mut rng, 6, &labels);
        iso_pairs.push((Arc::new(g.clone()), Arc::new(same)));
        iso_pairs.push((Arc::new(g), Arc::new(other)));
    }
    let mut isomorphic = 0;
    for (k, (g, h)) in iso_pairs.iter().enumerate() {
        let want = brute_iso_count(g, h);
        let got = impl_iso_count(g, h);
        ensure(got == want, || format!("iso pair {k}: {got} isomorphisms, {want} expected"))?;
        let found = dpo_core::find_isomorphism(g, h);
        ensure(found.is_some() == (want > 0), || format!("iso pair {k}: find disagrees"))?;
        if let Some(f) = found {
            let inverse_ok = f.inverse().is_some_and(|i| i.is_valid());
            ensure(f.is_valid() && f.is_injective() && f.is_surjective() && inverse_ok, || {
                format!("iso pair {k}: not an isomorphism")
            })?;
            isomorphic += 1;
        }
    }
    Ok(format!(
        "{} match pairs ({morphisms} morphisms), {} iso pairs ({isomorphic} isomorphic)",
        pairs.len(),
        iso_pairs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Option<Duration>); 10] = [
        ("d_color replay", c1_color_replay, Some(Duration::from_secs(1))),
        ("d_dual replay", c2_dual_replay, Some(Duration::from_secs(1))),
        ("accessed part of d_color", c3_accessed_part, None),
        ("spine of d_color", c4_spine, Some(Duration::from_secs(1))),
        ("move(d_color, d_dual)", c5_move, Some(Duration::from_secs(5))),
        ("spine preserved by move", c6_theorem, Some(Duration::from_secs(5))),
        ("evom(move(d_color, d_dual), d_dual) ≡ d_color", c7_move_back, Some(Duration::from_secs(5))),
        ("sequential independence fails for (P_dual, P_color)", c8_negative_control, None),
        ("randomized law suite", c9_properties, Some(Duration::from_secs(60))),
        ("matcher and iso search agree with brute force", c10_oracles, Some(Duration::from_secs(30))),
    ];
    let mut failed = 0;
    for (n, (name, check, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let elapsed = t.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took longer than {l:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => {
                failed += 1;
                ("FAIL", e.clone())
            }
        };
        println!("[{tag}] {:>2} {name} ({:.0?}): {detail}", n + 1, elapsed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
