//! Stochastic formation of degree-target networks.
//!
//! Starting from the empty graph, each step joins two deficient vertices
//! (degree below target) that are not yet adjacent, then re-tests pairwise
//! stability. The run stops as soon as the graph is stable.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64(seed)`; every uniform pick is `gen_range(0..len)` over a
//! candidate list in increasing vertex order, so traces replay exactly on
//! any platform.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{GameKind, GameSpec, PayoffModel};
use crate::graph::{Edge, Graph};
use crate::rational;
use crate::stability::stability_with;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Both endpoints drawn uniformly.
    Uniform,
    /// Both endpoints drawn among candidates of largest target degree.
    PreferHighTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormationConfig {
    #[serde(rename = "game")]
    pub spec: GameSpec,
    #[serde(default)]
    pub seed: u64,
    pub max_steps: usize,
    pub variant: Variant,
    #[serde(default)]
    pub record_trace: bool,
}

impl FormationConfig {
    pub fn new(spec: GameSpec, seed: u64, max_steps: usize, variant: Variant) -> Self {
        FormationConfig { spec, seed, max_steps, variant, record_trace: false }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        FormationConfig { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::InvalidFormation("max_steps must be at least 1".into()));
        }
        if !self.spec.is_degree_target() {
            return Err(Error::WrongGameKind { expected: "DegreeTarget" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Stable,
    /// No eligible pair is left but the graph is not pairwise stable.
    Stalled,
    StepBudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormationResult {
    pub graph: Graph,
    pub steps: usize,
    pub outcome: Outcome,
    /// Added edges in order, when tracing was requested.
    pub trace: Option<Vec<Edge>>,
}

impl FormationResult {
    /// Whether the run ended stable with every vertex exactly on target.
    pub fn hit_targets(&self, spec: &GameSpec) -> bool {
        self.outcome == Outcome::Stable && spec.targets().is_some_and(|d| d.as_slice() == self.graph.degrees())
    }

    pub fn trace_json(&self) -> String {
        let pairs: Vec<[usize; 2]> = self.trace.iter().flatten().map(|&(i, j)| [i, j]).collect();
        serde_json::to_string(&pairs).expect("pairs serialize")
    }
}

struct Builder<'a> {
    targets: &'a [usize],
    graph: Graph,
    degrees: Vec<usize>,
}

impl Builder<'_> {
    fn deficient(&self) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&v| self.degrees[v] < self.targets[v]).collect()
    }

    /// Deficient vertices other than `v` and not adjacent to it.
    fn partners(&self, v: usize, deficient: &[usize]) -> Vec<usize> {
        deficient.iter().copied().filter(|&u| u != v && !self.graph.contains(u, v)).collect()
    }

    fn pick(&self, variant: Variant, rng: &mut ChaCha8Rng) -> Option<Edge> {
        let deficient = self.deficient();
        let firsts: Vec<usize> =
            deficient.iter().copied().filter(|&v| !self.partners(v, &deficient).is_empty()).collect();
        let a = self.draw(variant, &firsts, rng)?;
        let b = self.draw(variant, &self.partners(a, &deficient), rng)?;
        Some((a.min(b), a.max(b)))
    }

    fn draw(&self, variant: Variant, candidates: &[usize], rng: &mut ChaCha8Rng) -> Option<usize> {
        let pool: Vec<usize> = match variant {
            Variant::Uniform => candidates.to_vec(),
            Variant::PreferHighTarget => {
                let top = candidates.iter().map(|&v| self.targets[v]).max()?;
                candidates.iter().copied().filter(|&v| self.targets[v] == top).collect()
            }
        };
        if pool.is_empty() {
            None
        } else {
            Some(pool[rng.gen_range(0..pool.len())])
        }
    }
}

pub fn simulate(config: &FormationConfig) -> Result<FormationResult> {
    config.validate()?;
    let model = PayoffModel::new(&config.spec)?;
    simulate_with(config, &model)
}

fn simulate_with(config: &FormationConfig, model: &PayoffModel) -> Result<FormationResult> {
    let spec = &config.spec;
    let targets = spec.targets().expect("validated degree-target game").as_slice();
    let n = spec.n();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut b = Builder { targets, graph: Graph::empty(n)?, degrees: vec![0; n] };
    let mut trace = config.record_trace.then(Vec::new);
    let mut steps = 0;

    let outcome = loop {
        let Some((i, j)) = b.pick(config.variant, &mut rng) else {
            break if stability_with(model, &b.graph).stable { Outcome::Stable } else { Outcome::Stalled };
        };
        if steps == config.max_steps {
            break Outcome::StepBudgetExhausted;
        }
        b.graph.insert(i, j)?;
        b.degrees[i] += 1;
        b.degrees[j] += 1;
        steps += 1;
        if let Some(t) = trace.as_mut() {
            t.push((i, j));
        }
        if stability_with(model, &b.graph).stable {
            break Outcome::Stable;
        }
    };
    Ok(FormationResult { graph: b.graph, steps, outcome, trace })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub runs: usize,
    /// Mean number of vertices of each degree `0..n`; sums to `n`.
    pub mean_degree_histogram: Vec<f64>,
    /// Mean of the penalty `f(deg_i - k_i)` each player minimises.
    pub per_player_mean_objective: Vec<f64>,
    /// Population standard deviation of the same.
    pub per_player_objective_stddev: Vec<f64>,
    /// Fraction of runs ending stable with degrees exactly on target.
    pub success_rate: f64,
    pub stable_runs: usize,
    pub stalled_runs: usize,
    pub exhausted_runs: usize,
}

/// Runs `runs` simulations with seeds `seed, seed + 1, ...` and aggregates
/// them. Per-run results are also returned, in seed order.
pub fn run_ensemble_detailed(
    config: &FormationConfig,
    runs: usize,
    threads: Option<usize>,
) -> Result<(EnsembleStats, Vec<FormationResult>)> {
    if runs == 0 {
        return Err(Error::InvalidFormation("runs must be at least 1".into()));
    }
    config.validate()?;
    let model = PayoffModel::new(&config.spec)?;
    let one = |r: usize| simulate_with(&config.with_seed(config.seed.wrapping_add(r as u64)), &model);
    let results: Vec<Result<FormationResult>> = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(|| (0..runs).into_par_iter().map(one).collect()),
        None => (0..runs).into_par_iter().map(one).collect(),
    };
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((aggregate(&config.spec, &results)?, results))
}

pub fn run_ensemble(config: &FormationConfig, runs: usize, threads: Option<usize>) -> Result<EnsembleStats> {
    run_ensemble_detailed(config, runs, threads).map(|(stats, _)| stats)
}

fn aggregate(spec: &GameSpec, results: &[FormationResult]) -> Result<EnsembleStats> {
    let GameKind::DegreeTarget { targets, penalty } = spec.kind() else {
        return Err(Error::WrongGameKind { expected: "DegreeTarget" });
    };
    let n = spec.n();
    let runs = results.len() as f64;
    let mut histogram = vec![0.0; n];
    let mut sum = vec![0.0; n];
    let mut sum_sq = vec![0.0; n];
    for r in results {
        for (i, d) in r.graph.degrees().into_iter().enumerate() {
            histogram[d] += 1.0;
            let objective = rational::to_f64(&penalty.eval(d as i64 - targets.0[i] as i64)?);
            sum[i] += objective;
            sum_sq[i] += objective * objective;
        }
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / runs).collect();
    let stddev = sum_sq.iter().zip(&mean).map(|(sq, m)| (sq / runs - m * m).max(0.0).sqrt()).collect();
    let count = |o: Outcome| results.iter().filter(|r| r.outcome == o).count();
    Ok(EnsembleStats {
        runs: results.len(),
        mean_degree_histogram: histogram.into_iter().map(|h| h / runs).collect(),
        per_player_mean_objective: mean,
        per_player_objective_stddev: stddev,
        success_rate: results.iter().filter(|r| r.hit_targets(spec)).count() as f64 / runs,
        stable_runs: count(Outcome::Stable),
        stalled_runs: count(Outcome::Stalled),
        exhausted_runs: count(Outcome::StepBudgetExhausted),
    })
}

impl EnsembleStats {
    /// `degree,frequency` over the smallest degree range holding every
    /// target and every observed degree.
    pub fn write_histogram_csv<W: Write>(&self, out: W, targets: &[usize]) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["degree", "frequency"])?;
        let wanted = target_histogram(targets);
        let used: Vec<usize> = (0..self.mean_degree_histogram.len())
            .filter(|&d| self.mean_degree_histogram[d] > 0.0 || wanted.get(d).is_some_and(|&h| h > 0.0))
            .collect();
        if let (Some(&lo), Some(&hi)) = (used.first(), used.last()) {
            for d in lo..=hi {
                w.write_record([d.to_string(), self.mean_degree_histogram[d].to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// `player,k_i,mean_objective,stddev`, players numbered from 1.
    pub fn write_player_csv<W: Write>(&self, out: W, targets: &[usize]) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["player", "k_i", "mean_objective", "stddev"])?;
        for (i, k) in targets.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                k.to_string(),
                self.per_player_mean_objective[i].to_string(),
                self.per_player_objective_stddev[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Number of vertices of each degree `0..n` in a target sequence.
pub fn target_histogram(targets: &[usize]) -> Vec<f64> {
    let mut h = vec![0.0; targets.len()];
    for &k in targets {
        h[k] += 1.0;
    }
    h
}

/// Total-variation distance between two degree histograms after normalising
/// each to a probability distribution.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    let len = a.len().max(b.len());
    let at = |h: &[f64], s: f64, i: usize| h.get(i).map_or(0.0, |v| v / s);
    0.5 * (0..len).map(|i| (at(a, sa, i) - at(b, sb, i)).abs()).sum::<f64>()
}

/// The 100-player power-law target sequence: 75 vertices want one link,
/// 14 want two, 5 want three, 2 want four and one each wants 5, 6, 7, 8.
pub fn power_law_targets() -> Vec<usize> {
    let mut k = Vec::with_capacity(100);
    for (degree, count) in [(1, 75), (2, 14), (3, 5), (4, 2), (5, 1), (6, 1), (7, 1), (8, 1)] {
        k.extend(std::iter::repeat_n(degree, count));
    }
    k
}
