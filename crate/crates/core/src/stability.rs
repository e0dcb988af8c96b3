//! Pairwise stability, Pareto optimality, exhaustive stable-graph census and
//! the parameter conditions of the Cournot collaboration results.
//!
//! A graph is pairwise stable when
//! 1. no endpoint of an existing link strictly gains by dropping it, and
//! 2. no absent link would strictly benefit one endpoint while leaving the
//!    other no worse off.
//!
//! Indifference never destabilizes. Payoffs are exact rationals, so the
//! strict/weak distinction is taken literally.

use std::collections::BTreeMap;
use std::io::Write;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::games::{self, common_shape, linear_gamma, CostFunction, GameKind, GameSpec, PayoffModel};
use crate::graph::{self, DegreeSequence, Edge, Graph};
use crate::rational::{self, int, NumberFormat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationKind {
    Drop,
    Add,
}

impl DeviationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DeviationKind::Drop => "drop",
            DeviationKind::Add => "add",
        }
    }
}

/// A profitable one-link deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub kind: DeviationKind,
    /// The link, `(i, j)` with `i < j`.
    pub link: Edge,
    /// Endpoint whose strict gain triggers the deviation.
    pub deviator: usize,
    /// Payoff changes `Y(g') - Y(g)` for `i` and `j`.
    pub deltas: [Rational; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    pub witness: Option<Deviation>,
}

impl StabilityReport {
    pub fn to_json(&self, fmt: NumberFormat) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "kind": w.kind.as_str(),
                "link": [w.link.0, w.link.1],
                "deviator": w.deviator,
                "payoff_deltas": w.deltas.iter().map(|d| fmt.render(d)).collect::<Vec<_>>(),
            })
        });
        json!({ "stable": self.stable, "witness": witness })
    }
}

pub fn is_pairwise_stable(spec: &GameSpec, g: &Graph) -> Result<StabilityReport> {
    check_dims(spec, g)?;
    let model = PayoffModel::new(spec)?;
    Ok(stability_with(&model, g))
}

fn check_dims(spec: &GameSpec, g: &Graph) -> Result<()> {
    if spec.n() != g.node_count() {
        return Err(Error::DimensionMismatch { expected: spec.n(), found: g.node_count() });
    }
    Ok(())
}

/// Drop checks over existing links in canonical order, then add checks over
/// absent links; the first violation found is the witness.
pub(crate) fn stability_with(model: &PayoffModel, g: &Graph) -> StabilityReport {
    if let PayoffModel::ByDegree(table) = model {
        return by_degree_stability(table, g);
    }
    generic_stability(model, g)
}

fn generic_stability(model: &PayoffModel, g: &Graph) -> StabilityReport {
    let mut degrees = g.degrees();
    let base = model.payoffs(&degrees);
    let witness = |kind, (i, j): Edge, deviator, yi: Rational, yj: Rational| StabilityReport {
        stable: false,
        witness: Some(Deviation { kind, link: (i, j), deviator, deltas: [yi - &base[i], yj - &base[j]] }),
    };

    for (i, j) in g.edges() {
        degrees[i] -= 1;
        degrees[j] -= 1;
        let yi = model.payoff(&degrees, i);
        let yj = model.payoff(&degrees, j);
        degrees[i] += 1;
        degrees[j] += 1;
        if yi > base[i] {
            return witness(DeviationKind::Drop, (i, j), i, yi, yj);
        }
        if yj > base[j] {
            return witness(DeviationKind::Drop, (i, j), j, yi, yj);
        }
    }
    for (i, j) in g.non_edges() {
        degrees[i] += 1;
        degrees[j] += 1;
        let yi = model.payoff(&degrees, i);
        let yj = model.payoff(&degrees, j);
        degrees[i] -= 1;
        degrees[j] -= 1;
        if yi > base[i] && yj >= base[j] {
            return witness(DeviationKind::Add, (i, j), i, yi, yj);
        }
        if yj > base[j] && yi >= base[i] {
            return witness(DeviationKind::Add, (i, j), j, yi, yj);
        }
    }
    StabilityReport { stable: true, witness: None }
}

/// Same checks and witness order as [`stability_with`] when each payoff
/// depends on the player's own degree only: the sign of every one-step
/// payoff change is computed once per player.
fn by_degree_stability(table: &[Vec<Rational>], g: &Graph) -> StabilityReport {
    use std::cmp::Ordering;
    let degrees = g.degrees();
    let step = |i: usize, d: Option<usize>| d.map(|d| table[i][d].clone() - &table[i][degrees[i]]);
    let sign = |delta: &Option<Rational>| delta.as_ref().map_or(Ordering::Less, |v| v.cmp(&Rational::zero()));
    let down: Vec<Ordering> = (0..degrees.len()).map(|i| sign(&step(i, degrees[i].checked_sub(1)))).collect();
    let up: Vec<Ordering> =
        (0..degrees.len()).map(|i| sign(&step(i, Some(degrees[i] + 1).filter(|&d| d < table[i].len())))).collect();
    let report = |kind, (i, j): Edge, deviator| {
        let moved = |p: usize| match kind {
            DeviationKind::Drop => step(p, Some(degrees[p] - 1)),
            DeviationKind::Add => step(p, Some(degrees[p] + 1)),
        };
        StabilityReport {
            stable: false,
            witness: Some(Deviation {
                kind,
                link: (i, j),
                deviator,
                deltas: [moved(i).expect("degree in range"), moved(j).expect("degree in range")],
            }),
        }
    };
    use Ordering::*;
    for (i, j) in g.edges() {
        if down[i] == Greater {
            return report(DeviationKind::Drop, (i, j), i);
        }
        if down[j] == Greater {
            return report(DeviationKind::Drop, (i, j), j);
        }
    }
    for (i, j) in g.non_edges() {
        if up[i] == Greater && up[j] != Less {
            return report(DeviationKind::Add, (i, j), i);
        }
        if up[j] == Greater && up[i] != Less {
            return report(DeviationKind::Add, (i, j), j);
        }
    }
    StabilityReport { stable: true, witness: None }
}

/// One pairwise-stable graph of a census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableGraph {
    pub code: u64,
    pub graph: Graph,
    pub degrees: DegreeSequence,
    pub payoffs: Vec<Rational>,
}

/// All pairwise-stable labeled graphs of a game, in code order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub total_graphs: u64,
    pub stable: Vec<StableGraph>,
    pub by_degree_sequence: BTreeMap<DegreeSequence, usize>,
}

impl Census {
    pub fn count(&self) -> usize {
        self.stable.len()
    }

    pub fn to_json(&self, fmt: NumberFormat) -> Value {
        let stable: Vec<Value> = self
            .stable
            .iter()
            .map(|s| {
                json!({
                    "code": s.code,
                    "edges": s.graph.edges().map(|(i, j)| [i, j]).collect::<Vec<_>>(),
                    "degrees": s.degrees,
                    "payoffs": s.payoffs.iter().map(|y| fmt.render(y)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let groups: Vec<Value> =
            self.by_degree_sequence.iter().map(|(d, count)| json!({ "degrees": d, "count": count })).collect();
        json!({
            "n": self.n,
            "total_graphs": self.total_graphs,
            "stable_count": self.stable.len(),
            "stable": stable,
            "by_degree_sequence": groups,
        })
    }

    /// One row per stable graph: `code,degree_sequence,Y_1..Y_n`.
    pub fn write_payoff_csv<W: Write>(&self, out: W, fmt: NumberFormat) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["code".to_string(), "degree_sequence".to_string()];
        header.extend((1..=self.n).map(|i| format!("Y_{i}")));
        w.write_record(&header)?;
        for s in &self.stable {
            let mut row = vec![s.code.to_string(), s.degrees.to_string()];
            row.extend(s.payoffs.iter().map(|y| fmt.render(y)));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `degree_sequence,count`, sorted by sequence.
    pub fn write_degree_groups_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["degree_sequence", "count"])?;
        for (d, count) in &self.by_degree_sequence {
            w.write_record([d.to_string(), count.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Edge-slot cap, clamped to [`graph::ENUMERATION_CAP`].
    pub cap: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { threads: None, cap: graph::ENUMERATION_CAP }
    }
}

pub fn enumerate_stable(spec: &GameSpec, n: usize) -> Result<Census> {
    enumerate_stable_with(spec, n, &EnumerateOptions::default())
}

/// Exhaustive census. Code ranges are checked independently and merged in
/// code order, so the result does not depend on the thread count.
pub fn enumerate_stable_with(spec: &GameSpec, n: usize, opts: &EnumerateOptions) -> Result<Census> {
    if spec.n() != n {
        return Err(Error::DimensionMismatch { expected: spec.n(), found: n });
    }
    let total = graph::graph_count(n, opts.cap)?;
    let model = PayoffModel::new(spec)?;
    let chunk = (total / 256).max(64);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let scan = |&start: &u64| -> Result<Vec<StableGraph>> {
        let mut found = Vec::new();
        for g in graph::graphs_in_range(n, start..start + chunk, opts.cap)? {
            if stability_with(&model, &g).stable {
                let degrees = g.degree_sequence();
                found.push(StableGraph {
                    code: g.code_u64().expect("enumerated graphs have small codes"),
                    payoffs: model.payoffs(degrees.as_slice()),
                    degrees,
                    graph: g,
                });
            }
        }
        Ok(found)
    };
    let parts: Vec<Result<Vec<StableGraph>>> = match opts.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .expect("thread pool")
            .install(|| starts.par_iter().map(scan).collect()),
        None => starts.par_iter().map(scan).collect(),
    };
    let mut stable = Vec::new();
    for part in parts {
        stable.extend(part?);
    }
    let mut by_degree_sequence = BTreeMap::new();
    for s in &stable {
        *by_degree_sequence.entry(s.degrees.clone()).or_insert(0) += 1;
    }
    Ok(Census { n, total_graphs: total, stable, by_degree_sequence })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoReport {
    pub optimal: bool,
    /// Lowest-code graph dominating the input, if any.
    pub dominated_by: Option<Graph>,
}

/// `a` weakly improves on `b` everywhere and strictly somewhere.
fn dominates(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// Brute-force Pareto check against every graph on the same nodes.
pub fn is_pareto_optimal(spec: &GameSpec, g: &Graph) -> Result<ParetoReport> {
    check_dims(spec, g)?;
    let model = PayoffModel::new(spec)?;
    let mine = model.payoffs(&g.degrees());
    for other in graph::all_graphs(spec.n())? {
        if dominates(&model.payoffs(&other.degrees()), &mine) {
            return Ok(ParetoReport { optimal: false, dominated_by: Some(other) });
        }
    }
    Ok(ParetoReport { optimal: true, dominated_by: None })
}

/// Every Pareto-optimal graph on `spec.n()` nodes, in code order.
pub fn pareto_optimal_set(spec: &GameSpec) -> Result<Vec<Graph>> {
    let model = PayoffModel::new(spec)?;
    let graphs: Vec<Graph> = graph::all_graphs(spec.n())?.collect();
    let mut vectors: BTreeMap<Vec<usize>, Vec<Rational>> = BTreeMap::new();
    for g in &graphs {
        vectors.entry(g.degrees()).or_insert_with_key(|d| model.payoffs(d));
    }
    let distinct: Vec<&Vec<Rational>> = vectors.values().collect();
    let undominated: BTreeMap<&Vec<usize>, bool> =
        vectors.iter().map(|(d, y)| (d, !distinct.iter().any(|other| dominates(other, y)))).collect();
    Ok(graphs.into_iter().filter(|g| undominated[&g.degrees()]).collect())
}

/// One inequality of a parameter condition, with its exact slack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    pub name: String,
    pub satisfied: bool,
    /// Left side minus right side.
    pub margin: Rational,
    /// `margin > 0` required when strict, `margin >= 0` otherwise.
    pub strict: bool,
    pub details: Vec<(String, Rational)>,
}

impl ConditionCheck {
    fn strict(name: &str, margin: Rational, details: Vec<(String, Rational)>) -> Self {
        ConditionCheck { name: name.into(), satisfied: margin.is_positive(), margin, strict: true, details }
    }

    fn weak(name: &str, margin: Rational, details: Vec<(String, Rational)>) -> Self {
        ConditionCheck { name: name.into(), satisfied: !margin.is_negative(), margin, strict: false, details }
    }

    pub fn to_json(&self, fmt: NumberFormat) -> Value {
        let details: serde_json::Map<String, Value> =
            self.details.iter().map(|(k, v)| (k.clone(), Value::String(fmt.render(v)))).collect();
        json!({
            "name": self.name,
            "satisfied": self.satisfied,
            "strict": self.strict,
            "margin": fmt.render(&self.margin),
            "margin_decimal": rational::to_decimal(&self.margin, rational::DECIMAL_PLACES),
            "details": details,
        })
    }
}

/// Production-nonnegativity bound plus, when a graph is given, the two
/// per-graph inequalities it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnegReport {
    pub bound: ConditionCheck,
    pub auxiliary: Vec<ConditionCheck>,
}

impl NonnegReport {
    pub fn checks(&self) -> impl Iterator<Item = &ConditionCheck> {
        std::iter::once(&self.bound).chain(&self.auxiliary)
    }

    pub fn all_satisfied(&self) -> bool {
        self.checks().all(|c| c.satisfied)
    }
}

/// Sufficient condition for nonnegative equilibrium quantities on every graph.
///
/// For costs sharing a base shape `f` (firm `i` uses `f(x - k_i)`):
///
/// ```text
/// alpha - gamma0 - n max(f(n-1), f(1-n)) - (n-1)/2 max(f(1)-f(0), f(-1)-f(0)) > 0
/// ```
///
/// For all-linear costs `c_i = gamma0 - gamma deg_i` the classical bound
/// `alpha - gamma0 - gamma (n-1)(n-2) > 0` (one isolated firm against
/// rivals of maximal degree) is used instead.
pub fn check_nonneg_condition(spec: &GameSpec, at: Option<&Graph>) -> Result<NonnegReport> {
    let GameKind::Cournot { alpha, gamma0, .. } = spec.kind() else {
        return Err(Error::WrongGameKind { expected: "Cournot" });
    };
    let shape = common_shape(spec)?;
    let n = spec.n() as i64;
    let f = |x: i64| shape.eval(x);
    let base = alpha - gamma0;

    let bound = if let Ok(gamma) = linear_gamma(spec) {
        let penalty = &gamma * int((n - 1) * (n - 2));
        ConditionCheck::strict(
            "linear_nonneg_bound",
            &base - &penalty,
            vec![("alpha - gamma0".into(), base.clone()), ("gamma (n-1)(n-2)".into(), penalty)],
        )
    } else {
        let far = f(n - 1)?.max(f(1 - n)?);
        let step = (f(1)? - f(0)?).max(f(-1)? - f(0)?);
        let far_term = int(n) * &far;
        let step_term = rational::frac(n - 1, 2) * &step;
        ConditionCheck::strict(
            "nonneg_bound",
            &base - &far_term - &step_term,
            vec![
                ("alpha - gamma0".into(), base.clone()),
                ("n max(f(n-1), f(1-n))".into(), far_term),
                ("(n-1)/2 max(f(1)-f(0), f(-1)-f(0))".into(), step_term),
            ],
        )
    };

    let mut auxiliary = Vec::new();
    if let Some(g) = at {
        let outcome = games::cournot_outcome(spec, g)?;
        let ratio = rational::frac(n - 1, n + 1);
        for (name, step) in [("forward_step", f(1)? - f(0)?), ("backward_step", f(-1)? - f(0)?)] {
            let slack: Vec<Rational> = outcome.quantities.iter().map(|q| int(2) * q - &ratio * &step).collect();
            let margin = slack.iter().min().cloned().unwrap_or_else(Rational::zero);
            let details = slack.into_iter().enumerate().map(|(i, s)| (format!("firm {}", i + 1), s)).collect();
            auxiliary.push(ConditionCheck::strict(name, margin, details));
        }
    }
    Ok(NonnegReport { bound, auxiliary })
}

/// The five conditions under which the complete graph is the unique stable
/// network for a common, decreasing cost reduction `f`:
///
/// 1. `f` strictly decreasing on `0..=n-1`;
/// 2. `f` convex (second differences `>= 0`);
/// 3. `f` positive;
/// 4. `alpha - gamma0 > n f(0)`;
/// 5. `Df(a) - n Df(b) > 0` for all `a, b` in `0..=n-1`, `Df(k) = f(k+1) - f(k)`.
///
/// Condition 5 evaluates `f(n)`.
pub fn check_complete_graph_conditions(spec: &GameSpec) -> Result<Vec<ConditionCheck>> {
    let GameKind::Cournot { alpha, gamma0, costs } = spec.kind() else {
        return Err(Error::WrongGameKind { expected: "Cournot" });
    };
    if costs.iter().any(|c| c != &costs[0]) {
        return Err(Error::HeterogeneousShape(
            "the complete-graph conditions need one cost function for all firms".into(),
        ));
    }
    let f: &CostFunction = &costs[0];
    let n = spec.n() as i64;
    let values = f.eval_range(0, n)?;
    let diff: Vec<Rational> = values.windows(2).map(|w| &w[1] - &w[0]).collect();
    let within = &diff[..(n - 1) as usize];

    let decrease = within.iter().map(|d| -d).min().expect("n >= 2");
    let convexity = if within.len() >= 2 {
        within.windows(2).map(|w| &w[1] - &w[0]).min().expect("nonempty")
    } else {
        Rational::zero()
    };
    let positivity = values[..n as usize].iter().min().cloned().expect("n >= 2");
    let production = alpha - gamma0 - int(n) * &values[0];

    let mut worst: Option<(Rational, usize, usize)> = None;
    let mut best: Option<(Rational, usize, usize)> = None;
    for (a, da) in diff.iter().enumerate() {
        for (b, db) in diff.iter().enumerate() {
            let v = da - int(n) * db;
            if worst.as_ref().is_none_or(|w| v < w.0) {
                worst = Some((v.clone(), a, b));
            }
            if best.as_ref().is_none_or(|w| v > w.0) {
                best = Some((v, a, b));
            }
        }
    }
    let (worst, wa, wb) = worst.expect("nonempty");
    let (best, ba, bb) = best.expect("nonempty");

    Ok(vec![
        ConditionCheck::strict(
            "c1_strictly_decreasing",
            decrease,
            vec![("min f(k) - f(k+1)".into(), -within.iter().max().cloned().expect("n >= 2"))],
        ),
        ConditionCheck::weak("c2_convex", convexity.clone(), vec![("min second difference".into(), convexity)]),
        ConditionCheck::strict("c3_positive", positivity.clone(), vec![("min f(k)".into(), positivity)]),
        ConditionCheck::strict(
            "c4_positive_production",
            production,
            vec![("alpha - gamma0".into(), alpha - gamma0), ("n f(0)".into(), int(n) * &values[0])],
        ),
        ConditionCheck::strict(
            "c5_not_too_steep",
            worst.clone(),
            vec![(format!("Df({wa}) - n Df({wb})"), worst), (format!("Df({ba}) - n Df({bb})"), best)],
        ),
    ])
}

/// Payoff change of one endpoint of a single-link deviation from a graph
/// realizing the targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointDelta {
    pub player: usize,
    /// `f_p(k_p - 1) - f_p(k_p)` for a drop, `f_p(k_p + 1) - f_p(k_p)` for an add.
    pub step: Rational,
    pub quantity: Rational,
    /// `-step (n-1)/(n+1) (2 q_p - (n-1)/(n+1) step)`.
    pub closed_form: Rational,
    /// `Y_p(g') - Y_p(g)` from two equilibrium evaluations.
    pub direct: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaAnalysis {
    pub kind: DeviationKind,
    pub link: Edge,
    pub endpoints: [EndpointDelta; 2],
}

/// Closed-form versus direct payoff change when link `link` is dropped (if
/// present) or added (if absent) in a graph whose degrees equal the cost
/// shifts `k`.
pub fn deviation_delta_analysis(spec: &GameSpec, g: &Graph, link: Edge) -> Result<DeltaAnalysis> {
    check_dims(spec, g)?;
    let GameKind::Cournot { costs, .. } = spec.kind() else {
        return Err(Error::WrongGameKind { expected: "Cournot" });
    };
    let shape = common_shape(spec)?;
    let degrees = g.degrees();
    if degrees.iter().zip(&shape.shifts).any(|(&d, &k)| d as i64 != k) {
        return Err(Error::NotRealizingTargets);
    }
    let (i, j) = (link.0.min(link.1), link.0.max(link.1));
    let (kind, moved) = if g.has_edge(i, j)? {
        (DeviationKind::Drop, g.without_edge(i, j)?)
    } else {
        (DeviationKind::Add, g.with_edge(i, j)?)
    };
    let before = games::cournot_outcome(spec, g)?;
    let after = games::cournot_outcome(spec, &moved)?;
    let n = spec.n() as i64;
    let ratio = rational::frac(n - 1, n + 1);
    let endpoint = |p: usize| -> Result<EndpointDelta> {
        let k = degrees[p] as i64;
        let shifted = if kind == DeviationKind::Drop { k - 1 } else { k + 1 };
        let step = costs[p].eval(shifted)? - costs[p].eval(k)?;
        let q = before.quantities[p].clone();
        let closed_form = -(&step * &ratio) * (int(2) * &q - &ratio * &step);
        let direct = &after.payoffs[p] - &before.payoffs[p];
        Ok(EndpointDelta { player: p, step, quantity: q, closed_form, direct })
    };
    Ok(DeltaAnalysis { kind, link: (i, j), endpoints: [endpoint(i)?, endpoint(j)?] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{payoffs, CostFunction};
    use crate::graph::realize;
    use crate::rational::frac;

    fn asymmetric() -> GameSpec {
        let costs = [2, 3, 4, 3, 2].iter().map(|&k| CostFunction::shifted_power(2, k, int(2)).unwrap()).collect();
        GameSpec::cournot(int(100), int(5), costs).unwrap()
    }

    fn reciprocal() -> GameSpec {
        GameSpec::cournot(int(30), int(5), vec![CostFunction::reciprocal(int(3)).unwrap(); 5]).unwrap()
    }

    fn linear() -> GameSpec {
        GameSpec::linear_cournot(5, int(100), int(5), int(1)).unwrap()
    }

    fn targets_11123() -> GameSpec {
        GameSpec::degree_target(vec![1, 1, 1, 2, 3], CostFunction::shifted_power(2, 0, int(0)).unwrap()).unwrap()
    }

    /// Two stable graphs for d = (1,1,1,2,3): a realization (node 5 joined to
    /// 1, 2, 4; node 4 to 3) and the star where node 5 takes 1, 2, 3 and
    /// node 4 is left without any deficient partner.
    fn targets_11123_graphs() -> (Graph, Graph) {
        let realizing = Graph::from_edges(5, &[(0, 4), (1, 4), (3, 4), (2, 3)]).unwrap();
        let stuck = Graph::from_edges(5, &[(0, 4), (1, 4), (2, 4)]).unwrap();
        (realizing, stuck)
    }

    #[test]
    fn complete_graph_stable_under_linear_costs() {
        let report = is_pairwise_stable(&linear(), &Graph::complete(5).unwrap()).unwrap();
        assert!(report.stable);
        assert!(report.witness.is_none());
    }

    #[test]
    fn targets_11123_graphs_are_both_stable() {
        let (a, b) = targets_11123_graphs();
        assert_eq!(a.degrees(), vec![1, 1, 1, 2, 3]);
        assert_eq!(b.degrees(), vec![1, 1, 1, 0, 3]);
        assert!(is_pairwise_stable(&targets_11123(), &a).unwrap().stable);
        assert!(is_pairwise_stable(&targets_11123(), &b).unwrap().stable);
    }

    #[test]
    fn targets_11123_pareto() {
        let (a, b) = targets_11123_graphs();
        assert!(is_pareto_optimal(&targets_11123(), &a).unwrap().optimal);
        let report = is_pareto_optimal(&targets_11123(), &b).unwrap();
        assert!(!report.optimal);
        let dom = report.dominated_by.unwrap();
        assert_eq!(dom.degrees(), vec![1, 1, 1, 2, 3]);
    }

    #[test]
    fn witness_order_and_content() {
        let spec = reciprocal();
        let g = Graph::complete(5).unwrap().without_edge(0, 1).unwrap();
        let report = is_pairwise_stable(&spec, &g).unwrap();
        let w = report.witness.unwrap();
        assert_eq!((w.kind, w.link, w.deviator), (DeviationKind::Add, (0, 1), 0));
        assert!(w.deltas.iter().all(|d| d.is_positive()));

        // Empty graph under linear costs: the first absent link (0,1) is the witness.
        let w = is_pairwise_stable(&linear(), &Graph::empty(5).unwrap()).unwrap().witness.unwrap();
        assert_eq!((w.kind, w.link), (DeviationKind::Add, (0, 1)));

        // Overshooting degree targets: the drop check fires before any add.
        let dt = GameSpec::degree_target(vec![0, 0, 1, 1], CostFunction::shifted_power(2, 0, int(0)).unwrap()).unwrap();
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let w = is_pairwise_stable(&dt, &g).unwrap().witness.unwrap();
        assert_eq!((w.kind, w.link, w.deviator), (DeviationKind::Drop, (0, 1), 0));
        assert_eq!(w.deltas, [int(1), int(1)]);
    }

    #[test]
    fn degree_shortcut_agrees_with_generic_check() {
        let specs = [
            targets_11123(),
            GameSpec::degree_target(vec![0, 2, 1, 3, 2], CostFunction::shifted_power(4, 0, int(1)).unwrap()).unwrap(),
            GameSpec::degree_target(
                vec![4, 4, 0, 1, 1],
                CostFunction::table(-4, [6, 3, 1, 0, 0, 0, 2, 5, 9].map(int).to_vec()).unwrap(),
            )
            .unwrap(),
        ];
        for spec in &specs {
            let model = PayoffModel::new(spec).unwrap();
            for g in graph::all_graphs(5).unwrap() {
                assert_eq!(stability_with(&model, &g), generic_stability(&model, &g), "{g:?}");
            }
        }
    }

    #[test]
    fn indifference_does_not_destabilize() {
        // Constant penalty: nobody ever strictly gains.
        let flat = CostFunction::table(-2, vec![int(1); 5]).unwrap();
        let spec = GameSpec::degree_target(vec![1, 1, 0], flat).unwrap();
        for g in graph::all_graphs(3).unwrap() {
            assert!(is_pairwise_stable(&spec, &g).unwrap().stable);
        }
    }

    #[test]
    fn add_needs_the_partner_not_to_lose() {
        // Player 0 wants a link, player 1 is already satisfied and would lose.
        let spec = GameSpec::degree_target(vec![1, 0], CostFunction::shifted_power(2, 0, int(0)).unwrap()).unwrap();
        assert!(is_pairwise_stable(&spec, &Graph::empty(2).unwrap()).unwrap().stable);
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            is_pairwise_stable(&linear(), &Graph::empty(4).unwrap()),
            Err(Error::DimensionMismatch { expected: 5, found: 4 })
        );
        assert!(enumerate_stable(&linear(), 4).is_err());
    }

    #[test]
    fn census_reciprocal_and_linear_only_complete() {
        for spec in [reciprocal(), linear()] {
            let census = enumerate_stable(&spec, 5).unwrap();
            assert_eq!(census.total_graphs, 1024);
            assert_eq!(census.stable.len(), 1);
            assert_eq!(census.stable[0].graph, Graph::complete(5).unwrap());
            assert_eq!(census.stable[0].code, 1023);
        }
    }

    #[test]
    fn census_asymmetric_anchors() {
        let census = enumerate_stable(&asymmetric(), 5).unwrap();
        let k = DegreeSequence(vec![2, 3, 4, 3, 2]);
        assert_eq!(census.by_degree_sequence.get(&k), Some(&2));
        let isolated_three = census.stable.iter().filter(|s| s.degrees.0[2] == 0).count();
        assert_eq!(isolated_three, 3);
        // Firm 3 earns less than in the empty graph in exactly three stable graphs.
        let below = census.stable.iter().filter(|s| s.payoffs[2] < frac(169, 4)).count();
        assert_eq!(below, 3);
        assert_eq!(census.count(), 31);
    }

    #[test]
    fn census_matches_one_by_one_filter_and_thread_count() {
        let spec = asymmetric();
        let census = enumerate_stable(&spec, 5).unwrap();
        let one_by_one: Vec<Graph> =
            graph::all_graphs(5).unwrap().filter(|g| is_pairwise_stable(&spec, g).unwrap().stable).collect();
        assert_eq!(census.stable.iter().map(|s| s.graph.clone()).collect::<Vec<_>>(), one_by_one);
        let single =
            enumerate_stable_with(&spec, 5, &EnumerateOptions { threads: Some(1), ..Default::default() }).unwrap();
        let many =
            enumerate_stable_with(&spec, 5, &EnumerateOptions { threads: Some(4), ..Default::default() }).unwrap();
        assert_eq!(single, census);
        assert_eq!(many, census);
        for s in &census.stable {
            assert_eq!(s.payoffs, payoffs(&spec, &s.graph).unwrap());
        }
    }

    #[test]
    fn census_degree_target_zero() {
        let spec = GameSpec::degree_target(vec![0, 0, 0], CostFunction::shifted_power(2, 0, int(0)).unwrap()).unwrap();
        let census = enumerate_stable(&spec, 3).unwrap();
        assert_eq!(census.stable.len(), 1);
        assert_eq!(census.stable[0].graph, Graph::empty(3).unwrap());
    }

    #[test]
    fn census_cap_error() {
        let spec = GameSpec::linear_cournot(9, int(100), int(5), int(1)).unwrap();
        assert!(matches!(enumerate_stable(&spec, 9), Err(Error::EnumerationCap { .. })));
        let opts = EnumerateOptions { threads: None, cap: 6 };
        assert!(matches!(enumerate_stable_with(&linear(), 5, &opts), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn census_serialization() {
        let census = enumerate_stable(&reciprocal(), 5).unwrap();
        let v = census.to_json(NumberFormat::Exact);
        assert_eq!(v["stable_count"], 1);
        assert_eq!(v["stable"][0]["payoffs"][0], "841/49");
        let mut csv = Vec::new();
        census.write_payoff_csv(&mut csv, NumberFormat::Decimal).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "code,degree_sequence,Y_1,Y_2,Y_3,Y_4,Y_5\n1023,4 4 4 4 4,17.1633,17.1633,17.1633,17.1633,17.1633\n"
        );
        let mut groups = Vec::new();
        census.write_degree_groups_csv(&mut groups).unwrap();
        assert_eq!(String::from_utf8(groups).unwrap(), "degree_sequence,count\n4 4 4 4 4,1\n");
    }

    #[test]
    fn nonneg_bound_examples() {
        let r = check_nonneg_condition(&asymmetric(), None).unwrap();
        assert_eq!(r.bound.margin, int(3));
        assert!(r.bound.satisfied);
        let r = check_nonneg_condition(&linear(), None).unwrap();
        assert_eq!(r.bound.name, "linear_nonneg_bound");
        assert_eq!(r.bound.margin, int(83));
        let constant =
            GameSpec::cournot(int(20), int(5), vec![CostFunction::table(-2, vec![int(3); 5]).unwrap(); 3]).unwrap();
        assert_eq!(check_nonneg_condition(&constant, None).unwrap().bound.margin, int(20 - 5 - 3 * 3));
    }

    #[test]
    fn nonneg_auxiliary_at_graph() {
        let g = realize(&DegreeSequence(vec![2, 3, 4, 3, 2])).unwrap();
        let r = check_nonneg_condition(&asymmetric(), Some(&g)).unwrap();
        assert_eq!(r.auxiliary.len(), 2);
        // q = 31/2 everywhere; 2q - (4/6) * 1 = 31 - 2/3.
        assert!(r.auxiliary.iter().all(|c| c.margin == frac(91, 3)));
        assert!(r.all_satisfied());
    }

    #[test]
    fn nonneg_needs_common_shape() {
        let mixed = GameSpec::cournot(
            int(10),
            int(1),
            vec![CostFunction::reciprocal(int(3)).unwrap(), CostFunction::linear_decreasing(int(1))],
        )
        .unwrap();
        assert!(matches!(check_nonneg_condition(&mixed, None), Err(Error::HeterogeneousShape(_))));
    }

    #[test]
    fn complete_graph_conditions_reciprocal() {
        let checks = check_complete_graph_conditions(&reciprocal()).unwrap();
        assert_eq!(checks.len(), 5);
        assert!(checks.iter().all(|c| c.satisfied), "{checks:#?}");
        assert_eq!(checks[3].margin, int(25) - frac(5, 3));
        assert_eq!(checks[4].margin, frac(1, 168));
        assert_eq!(checks[4].details[0], ("Df(0) - n Df(4)".to_string(), frac(1, 168)));
        assert_eq!(checks[4].details[1], ("Df(4) - n Df(0)".to_string(), frac(67, 168)));
    }

    #[test]
    fn complete_graph_conditions_failures() {
        // Increasing f breaks (1).
        let up =
            GameSpec::cournot(int(30), int(5), vec![CostFunction::table(-4, (0..10).map(int).collect()).unwrap(); 5])
                .unwrap();
        let checks = check_complete_graph_conditions(&up).unwrap();
        assert!(!checks[0].satisfied);
        assert!(checks[0].margin.is_negative());
        // alpha = gamma0 breaks (4).
        let flat = GameSpec::cournot(int(5), int(5), vec![CostFunction::reciprocal(int(3)).unwrap(); 5]).unwrap();
        assert!(!check_complete_graph_conditions(&flat).unwrap()[3].satisfied);
        // Linear costs: convexity holds with equality.
        let lin = check_complete_graph_conditions(&linear()).unwrap();
        assert!(lin[1].satisfied && lin[1].margin.is_zero());
        assert!(matches!(check_complete_graph_conditions(&asymmetric()), Err(Error::HeterogeneousShape(_))));
    }

    #[test]
    fn delta_analysis_matches_direct_differences() {
        let spec = asymmetric();
        let g = realize(&DegreeSequence(vec![2, 3, 4, 3, 2])).unwrap();
        for i in 0..5 {
            for j in i + 1..5 {
                let a = deviation_delta_analysis(&spec, &g, (i, j)).unwrap();
                let expected = if g.has_edge(i, j).unwrap() { DeviationKind::Drop } else { DeviationKind::Add };
                assert_eq!(a.kind, expected);
                for e in &a.endpoints {
                    assert_eq!(e.closed_form, e.direct);
                    assert!(e.direct.is_negative());
                }
            }
        }
    }

    #[test]
    fn delta_analysis_constant_cost_is_indifferent() {
        let spec =
            GameSpec::cournot(int(50), int(5), vec![CostFunction::table(-3, vec![int(2); 7]).unwrap(); 4]).unwrap();
        let g = Graph::empty(4).unwrap();
        let a = deviation_delta_analysis(&spec, &g, (0, 1)).unwrap();
        assert!(a.endpoints.iter().all(|e| e.closed_form.is_zero() && e.direct.is_zero()));
    }

    #[test]
    fn delta_analysis_needs_target_graph() {
        assert_eq!(
            deviation_delta_analysis(&asymmetric(), &Graph::empty(5).unwrap(), (0, 1)),
            Err(Error::NotRealizingTargets)
        );
    }

    #[test]
    fn pareto_set_is_the_target_class_for_targets_11123() {
        let spec = targets_11123();
        let pareto = pareto_optimal_set(&spec).unwrap();
        assert!(!pareto.is_empty());
        assert!(pareto.iter().all(|g| g.degrees() == vec![1, 1, 1, 2, 3]));
        for g in &pareto {
            assert!(is_pareto_optimal(&spec, g).unwrap().optimal);
        }
    }
}
