use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use netform_core::formation::{run_ensemble_detailed, FormationConfig, Outcome};
use netform_core::graph::ENUMERATION_CAP;
use netform_core::stability::{check_complete_graph_conditions, check_nonneg_condition, ConditionCheck};
use netform_core::{
    enumerate_stable_with, is_pairwise_stable, DegreeSequence, EnumerateOptions, Error, GameSpec, Graph, NumberFormat,
};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::manifest::{pretty, OutputDir};
use crate::{ConditionSet, Format, GraphFormat, Verdict};

/// Named condition family with its checks, or why it does not apply.
type Family = (&'static str, Result<Vec<ConditionCheck>, Error>);

pub const CAP_ENV: &str = "NETFORM_MAX_ENUM_EDGES";

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {what} {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{what} {}: {e}", path.display()))
}

fn number_format(decimal: bool) -> NumberFormat {
    if decimal {
        NumberFormat::Decimal
    } else {
        NumberFormat::Exact
    }
}

fn config_echo<T: serde::Serialize>(config: &T) -> Value {
    serde_json::to_value(config).expect("configs serialize")
}

pub fn check(config: &Path, graph: &Path, decimal: bool, out: Option<&Path>, started: Instant) -> Result<Verdict> {
    let spec: GameSpec = read_json(config, "game config")?;
    let g: Graph = read_json(graph, "graph")?;
    let report = is_pairwise_stable(&spec, &g)?;
    let text = pretty(&report.to_json(number_format(decimal)));
    print!("{text}");
    if let Some(dir) = out {
        let mut files = OutputDir::create(dir)?;
        files.write("graphs/stability.json", &text)?;
        let echo = json!({ "game": config_echo(&spec), "graph": config_echo(&g) });
        files.finish("check", echo, None, started)?;
    }
    Ok(if report.stable { Verdict::Affirmative } else { Verdict::Negative })
}

/// Edge-slot cap: the built-in limit, lowered by the environment if set.
pub fn enumeration_cap() -> Result<usize> {
    match std::env::var(CAP_ENV) {
        Ok(v) => {
            let cap: usize =
                v.trim().parse().map_err(|_| anyhow!("{CAP_ENV} must be a non-negative integer, got {v:?}"))?;
            Ok(cap.min(ENUMERATION_CAP))
        }
        Err(_) => Ok(ENUMERATION_CAP),
    }
}

pub fn enumerate(
    config: &Path,
    n: Option<usize>,
    out: &Path,
    threads: Option<usize>,
    decimal: bool,
    started: Instant,
) -> Result<Verdict> {
    let spec: GameSpec = read_json(config, "game config")?;
    let n = n.unwrap_or(spec.n());
    let opts = EnumerateOptions { threads, cap: enumeration_cap()? };
    let census = enumerate_stable_with(&spec, n, &opts)?;
    let fmt = number_format(decimal);

    let mut files = OutputDir::create(out)?;
    files.write("graphs/stable_graphs.json", pretty(&census.to_json(fmt)))?;
    for s in &census.stable {
        files.write(&format!("graphs/stable_{}.dot", s.code), s.graph.to_dot())?;
    }
    let mut payoffs = Vec::new();
    census.write_payoff_csv(&mut payoffs, fmt)?;
    files.write("tables/payoffs.csv", payoffs)?;
    let mut groups = Vec::new();
    census.write_degree_groups_csv(&mut groups)?;
    files.write("tables/degree_sequences.csv", groups)?;
    files.finish("enumerate", config_echo(&spec), None, started)?;

    println!("stable graphs: {} of {}", census.count(), census.total_graphs);
    Ok(Verdict::Affirmative)
}

/// Runs the requested condition families; an `Err` entry marks a family that
/// does not apply to this game.
fn condition_families(spec: &GameSpec, at: Option<&Graph>, set: ConditionSet) -> Result<Vec<Family>> {
    let mut families = Vec::new();
    if matches!(set, ConditionSet::All | ConditionSet::Nonneg) {
        let checks = check_nonneg_condition(spec, at).map(|r| r.checks().cloned().collect());
        families.push(("nonneg", checks));
    }
    if matches!(set, ConditionSet::All | ConditionSet::Complete) {
        families.push(("complete_graph", check_complete_graph_conditions(spec)));
    }
    if set != ConditionSet::All {
        if let Some((_, Err(e))) = families.first() {
            bail!("{e}");
        }
    } else if families.iter().all(|(_, r)| r.is_err()) {
        let reasons: Vec<String> =
            families.iter().filter_map(|(_, r)| r.as_ref().err().map(|e| e.to_string())).collect();
        bail!("no condition family applies to this game: {}", reasons.join("; "));
    }
    Ok(families)
}

/// JSON document printed by `conditions`.
pub fn conditions_json(families: &[Family], fmt: NumberFormat) -> Value {
    let mut doc = serde_json::Map::new();
    let mut skipped = serde_json::Map::new();
    for (name, result) in families {
        match result {
            Ok(checks) => {
                doc.insert(name.to_string(), checks.iter().map(|c| c.to_json(fmt)).collect());
            }
            Err(e) => {
                skipped.insert(name.to_string(), Value::String(e.to_string()));
            }
        }
    }
    let all = families.iter().filter_map(|(_, r)| r.as_ref().ok()).flatten().all(|c| c.satisfied);
    doc.insert("all_satisfied".into(), Value::Bool(all));
    if !skipped.is_empty() {
        doc.insert("skipped".into(), Value::Object(skipped));
    }
    Value::Object(doc)
}

fn conditions_table(families: &[Family], fmt: NumberFormat) -> String {
    let mut rows = vec![["condition".to_string(), "result".into(), "margin".into(), "decimal".into()]];
    for (family, result) in families {
        match result {
            Ok(checks) => {
                for c in checks {
                    rows.push([
                        format!("{family}/{}", c.name),
                        if c.satisfied { "pass" } else { "FAIL" }.into(),
                        fmt.render(&c.margin),
                        netform_core::rational::to_decimal(&c.margin, netform_core::rational::DECIMAL_PLACES),
                    ]);
                }
            }
            Err(e) => rows.push([family.to_string(), "skipped".into(), e.to_string(), String::new()]),
        }
    }
    let widths: Vec<usize> = (0..4).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut text = String::new();
    for r in &rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        text.push_str(line.join("  ").trim_end());
        text.push('\n');
    }
    text
}

pub fn conditions(
    config: &Path,
    graph: Option<&Path>,
    set: ConditionSet,
    decimal: bool,
    format: Format,
    out: Option<&Path>,
    started: Instant,
) -> Result<Verdict> {
    let spec: GameSpec = read_json(config, "game config")?;
    let at: Option<Graph> = graph.map(|p| read_json(p, "graph")).transpose()?;
    let families = condition_families(&spec, at.as_ref(), set)?;
    let fmt = number_format(decimal);
    let doc = conditions_json(&families, fmt);
    match format {
        Format::Json => print!("{}", pretty(&doc)),
        Format::Table => print!("{}", conditions_table(&families, fmt)),
    }
    if let Some(dir) = out {
        let mut files = OutputDir::create(dir)?;
        files.write("tables/conditions.json", pretty(&doc))?;
        files.write("tables/conditions.txt", conditions_table(&families, fmt))?;
        files.finish("conditions", json!({ "game": config_echo(&spec) }), None, started)?;
    }
    Ok(if doc["all_satisfied"] == Value::Bool(true) { Verdict::Affirmative } else { Verdict::Negative })
}

pub fn simulate(
    config: &Path,
    runs: usize,
    seed: Option<u64>,
    out: &Path,
    threads: Option<usize>,
    traces: bool,
    started: Instant,
) -> Result<Verdict> {
    let mut cfg: FormationConfig = read_json(config, "formation config")?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    cfg.record_trace = cfg.record_trace || traces;
    let (stats, results) = run_ensemble_detailed(&cfg, runs, threads)?;
    let targets = cfg.spec.targets().expect("validated degree-target game").as_slice();

    let mut files = OutputDir::create(out)?;
    let mut histogram = Vec::new();
    stats.write_histogram_csv(&mut histogram, targets)?;
    files.write("tables/degree_histogram.csv", histogram)?;
    let mut players = Vec::new();
    stats.write_player_csv(&mut players, targets)?;
    files.write("tables/player_objectives.csv", players)?;
    files.write("tables/runs.csv", runs_csv(&cfg, &results))?;
    if cfg.record_trace {
        for (r, result) in results.iter().enumerate() {
            files.write(&format!("graphs/trace_{r:04}.json"), format!("{}\n", result.trace_json()))?;
        }
    }
    files.write("tables/summary.json", pretty(&serde_json::to_value(&stats)?))?;
    files.finish("simulate", config_echo(&cfg), Some(cfg.seed), started)?;

    println!(
        "success_rate: {} ({} stable, {} stalled, {} out of steps, {} runs)",
        stats.success_rate, stats.stable_runs, stats.stalled_runs, stats.exhausted_runs, stats.runs
    );
    if 2 * stats.stalled_runs > stats.runs {
        eprintln!("warning: {} of {} runs stalled before reaching stability", stats.stalled_runs, stats.runs);
    }
    Ok(Verdict::Affirmative)
}

fn runs_csv(cfg: &FormationConfig, results: &[netform_core::FormationResult]) -> String {
    let mut text = String::from("run,seed,outcome,steps,on_target\n");
    for (r, result) in results.iter().enumerate() {
        let outcome = match result.outcome {
            Outcome::Stable => "stable",
            Outcome::Stalled => "stalled",
            Outcome::StepBudgetExhausted => "step_budget_exhausted",
        };
        text.push_str(&format!(
            "{r},{},{outcome},{},{}\n",
            cfg.seed.wrapping_add(r as u64),
            result.steps,
            result.hit_targets(&cfg.spec)
        ));
    }
    text
}

pub fn realize(sequence: &str, format: GraphFormat, out: Option<&Path>, started: Instant) -> Result<Verdict> {
    let d: DegreeSequence = sequence.parse()?;
    let g = match netform_core::realize(&d) {
        Ok(g) => g,
        Err(Error::NotGraphical) => {
            println!("not graphical");
            return Ok(Verdict::Negative);
        }
        Err(e) => return Err(e.into()),
    };
    let as_json = pretty(&serde_json::to_value(&g)?);
    let dot = g.to_dot();
    match format {
        GraphFormat::Json => print!("{as_json}"),
        GraphFormat::Dot => print!("{dot}"),
    }
    if let Some(dir) = out {
        let mut files = OutputDir::create(dir)?;
        files.write("graphs/realization.json", &as_json)?;
        files.write("graphs/realization.dot", &dot)?;
        files.finish("realize", json!({ "sequence": d }), None, started)?;
    }
    Ok(Verdict::Affirmative)
}
