//! Payoff evaluation for degree-target games and Cournot collaboration games.
//!
//! Every payoff here depends on a graph only through its degree sequence,
//! which is what lets the stability checks work on degree vectors.
//!
//! Cournot firms face inverse demand `P = alpha - Q` and marginal cost
//! `c_i = gamma0 + f_i(deg_i)`. The equilibrium quantity of firm `i` is
//!
//! ```text
//! q_i = (alpha - gamma0 - n f_i(deg_i) + sum_{j != i} f_j(deg_j)) / (n + 1)
//! ```
//!
//! and its profit is `Y_i = q_i (P - c_i)`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Graph};
use crate::rational::{self, Rational};

fn zero() -> Rational {
    Rational::zero()
}

/// Per-firm cost shape `f`, evaluated at integer arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum CostFunction {
    /// `(x - k)^p + psi`, `p` even and at least 2.
    ShiftedPower {
        p: u32,
        #[serde(default)]
        k: i64,
        #[serde(with = "rational::serde_str", default = "zero")]
        psi: Rational,
    },
    /// `1 / (x + a)`, `a > 0`.
    Reciprocal {
        #[serde(with = "rational::serde_str")]
        a: Rational,
    },
    /// `-gamma x`: the linear marginal-cost reduction `c_i = gamma0 - gamma deg_i`.
    LinearDecreasing {
        #[serde(with = "rational::serde_str")]
        gamma: Rational,
    },
    /// Explicit values `values[x - min_x]`.
    Table {
        min_x: i64,
        #[serde(with = "rational::serde_str::vec")]
        values: Vec<Rational>,
    },
}

impl CostFunction {
    pub fn shifted_power(p: u32, k: i64, psi: Rational) -> Result<Self> {
        let f = CostFunction::ShiftedPower { p, k, psi };
        f.validate()?;
        Ok(f)
    }

    pub fn reciprocal(a: Rational) -> Result<Self> {
        let f = CostFunction::Reciprocal { a };
        f.validate()?;
        Ok(f)
    }

    pub fn linear_decreasing(gamma: Rational) -> Self {
        CostFunction::LinearDecreasing { gamma }
    }

    pub fn table(min_x: i64, values: Vec<Rational>) -> Result<Self> {
        let f = CostFunction::Table { min_x, values };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CostFunction::ShiftedPower { p, .. } if *p < 2 || p % 2 != 0 => {
                Err(Error::InvalidCost(format!("shifted_power exponent must be even and >= 2, got {p}")))
            }
            CostFunction::Reciprocal { a } if !a.is_positive() => {
                Err(Error::InvalidCost(format!("reciprocal offset must be positive, got {a}")))
            }
            CostFunction::Table { values, .. } if values.is_empty() => {
                Err(Error::InvalidCost("table has no values".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: i64) -> Result<Rational> {
        match self {
            CostFunction::ShiftedPower { p, k, psi } => Ok(num_traits::pow(rational::int(x - k), *p as usize) + psi),
            CostFunction::Reciprocal { a } => {
                let den = rational::int(x) + a;
                if den.is_zero() {
                    return Err(Error::CostUndefined(x));
                }
                Ok(den.recip())
            }
            CostFunction::LinearDecreasing { gamma } => Ok(-(gamma * rational::int(x))),
            CostFunction::Table { min_x, values } => {
                usize::try_from(x - min_x).ok().and_then(|idx| values.get(idx)).cloned().ok_or(Error::CostUndefined(x))
            }
        }
    }

    /// Evaluates on every integer of `lo..=hi`.
    pub fn eval_range(&self, lo: i64, hi: i64) -> Result<Vec<Rational>> {
        (lo..=hi).map(|x| self.eval(x)).collect()
    }

    /// The same shape with any built-in shift removed.
    fn unshifted(&self) -> (CostFunction, i64) {
        match self {
            CostFunction::ShiftedPower { p, k, psi } => {
                (CostFunction::ShiftedPower { p: *p, k: 0, psi: psi.clone() }, *k)
            }
            other => (other.clone(), 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameKind {
    /// Player `i` earns `-penalty(deg_i - targets_i)`.
    DegreeTarget { targets: DegreeSequence, penalty: CostFunction },
    /// Cournot oligopoly with collaboration-dependent marginal costs.
    Cournot { alpha: Rational, gamma0: Rational, costs: Vec<CostFunction> },
}

/// A validated game on `n` players. Deserializes from the JSON config form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GameConfig", into = "GameConfig")]
pub struct GameSpec {
    n: usize,
    kind: GameKind,
}

impl GameSpec {
    pub fn degree_target(targets: Vec<usize>, penalty: CostFunction) -> Result<Self> {
        let spec =
            GameSpec { n: targets.len(), kind: GameKind::DegreeTarget { targets: DegreeSequence(targets), penalty } };
        spec.validate()?;
        Ok(spec)
    }

    pub fn cournot(alpha: Rational, gamma0: Rational, costs: Vec<CostFunction>) -> Result<Self> {
        let spec = GameSpec { n: costs.len(), kind: GameKind::Cournot { alpha, gamma0, costs } };
        spec.validate()?;
        Ok(spec)
    }

    /// Cournot game with `f_i(x) = -gamma x` for every firm.
    pub fn linear_cournot(n: usize, alpha: Rational, gamma0: Rational, gamma: Rational) -> Result<Self> {
        GameSpec::cournot(alpha, gamma0, vec![CostFunction::linear_decreasing(gamma); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &GameKind {
        &self.kind
    }

    pub fn targets(&self) -> Option<&DegreeSequence> {
        match &self.kind {
            GameKind::DegreeTarget { targets, .. } => Some(targets),
            GameKind::Cournot { .. } => None,
        }
    }

    pub fn is_degree_target(&self) -> bool {
        matches!(self.kind, GameKind::DegreeTarget { .. })
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 players, got {n}")));
        }
        let span = n as i64 - 1;
        match &self.kind {
            GameKind::DegreeTarget { targets, penalty } => {
                if let Some(k) = targets.as_slice().iter().find(|&&k| k + 1 > n) {
                    return Err(Error::InvalidSpec(format!("target degree {k} exceeds n - 1 = {span}")));
                }
                penalty.validate()?;
                let values = penalty.eval_range(-span, span)?;
                let at_zero = &values[span as usize];
                if values.iter().any(|v| v < at_zero) {
                    return Err(Error::InvalidSpec("penalty must have its minimum at 0".into()));
                }
                if values.windows(3).any(|w| &w[0] + &w[2] < &w[1] + &w[1]) {
                    return Err(Error::InvalidSpec("penalty must be convex".into()));
                }
            }
            GameKind::Cournot { alpha, gamma0, costs } => {
                if alpha < gamma0 {
                    return Err(Error::InvalidSpec(format!("alpha ({alpha}) below gamma0 ({gamma0})")));
                }
                for (i, f) in costs.iter().enumerate() {
                    f.validate()?;
                    let lo = if matches!(f, CostFunction::Table { .. }) { -span } else { 0 };
                    f.eval_range(lo, span).map_err(|e| Error::InvalidSpec(format!("cost of firm {i}: {e}")))?;
                }
            }
        }
        Ok(())
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.node_count() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: g.node_count() });
        }
        Ok(())
    }
}

/// JSON config form of a [`GameSpec`].
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum GameConfig {
    DegreeTarget {
        n: usize,
        targets: Vec<usize>,
        penalty: CostFunction,
    },
    Cournot {
        n: usize,
        #[serde(with = "rational::serde_str")]
        alpha: Rational,
        #[serde(with = "rational::serde_str")]
        gamma0: Rational,
        costs: Vec<CostFunction>,
    },
    LinearCournot {
        n: usize,
        #[serde(with = "rational::serde_str")]
        alpha: Rational,
        #[serde(with = "rational::serde_str")]
        gamma0: Rational,
        #[serde(with = "rational::serde_str")]
        gamma: Rational,
    },
}

impl TryFrom<GameConfig> for GameSpec {
    type Error = Error;

    fn try_from(cfg: GameConfig) -> Result<Self> {
        let expect_len = |n: usize, len: usize, field: &str| {
            if n == len {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("field `{field}` has {len} entries, n is {n}")))
            }
        };
        match cfg {
            GameConfig::DegreeTarget { n, targets, penalty } => {
                expect_len(n, targets.len(), "targets")?;
                GameSpec::degree_target(targets, penalty)
            }
            GameConfig::Cournot { n, alpha, gamma0, costs } => {
                expect_len(n, costs.len(), "costs")?;
                GameSpec::cournot(alpha, gamma0, costs)
            }
            GameConfig::LinearCournot { n, alpha, gamma0, gamma } => GameSpec::linear_cournot(n, alpha, gamma0, gamma),
        }
    }
}

impl From<GameSpec> for GameConfig {
    fn from(spec: GameSpec) -> Self {
        let n = spec.n;
        match spec.kind {
            GameKind::DegreeTarget { targets, penalty } => GameConfig::DegreeTarget { n, targets: targets.0, penalty },
            GameKind::Cournot { alpha, gamma0, costs } => GameConfig::Cournot { n, alpha, gamma0, costs },
        }
    }
}

/// Cournot equilibrium on one collaboration graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CournotOutcome {
    #[serde(with = "rational::serde_str::vec")]
    pub quantities: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub total: Rational,
    #[serde(with = "rational::serde_str")]
    pub price: Rational,
    #[serde(with = "rational::serde_str::vec")]
    pub marginal_costs: Vec<Rational>,
    #[serde(with = "rational::serde_str::vec")]
    pub payoffs: Vec<Rational>,
    /// Some firm's equilibrium quantity is negative; parameters fall outside
    /// the region where the closed form is economically meaningful.
    pub negative_quantity: bool,
}

impl CournotOutcome {
    fn from_quantities(alpha: &Rational, quantities: Vec<Rational>, marginal_costs: Vec<Rational>) -> Self {
        let total: Rational = quantities.iter().sum();
        let price = alpha - &total;
        let payoffs = quantities.iter().zip(&marginal_costs).map(|(q, c)| q * (&price - c)).collect();
        let negative_quantity = quantities.iter().any(|q| q.is_negative());
        CournotOutcome { quantities, total, price, marginal_costs, payoffs, negative_quantity }
    }
}

/// `Y_i = -penalty(deg_i - k_i)` for each player.
pub fn degree_target_payoffs(spec: &GameSpec, g: &Graph) -> Result<Vec<Rational>> {
    spec.check_graph(g)?;
    let GameKind::DegreeTarget { targets, penalty } = &spec.kind else {
        return Err(Error::WrongGameKind { expected: "degree-target" });
    };
    g.degrees().iter().zip(targets.as_slice()).map(|(&d, &k)| penalty.eval(d as i64 - k as i64).map(|v| -v)).collect()
}

/// Closed-form Cournot equilibrium for a general cost profile.
pub fn cournot_outcome(spec: &GameSpec, g: &Graph) -> Result<CournotOutcome> {
    spec.check_graph(g)?;
    let GameKind::Cournot { alpha, gamma0, costs } = &spec.kind else {
        return Err(Error::WrongGameKind { expected: "Cournot" });
    };
    let n = spec.n;
    let f: Vec<Rational> =
        g.degrees().iter().zip(costs).map(|(&d, cost)| cost.eval(d as i64)).collect::<Result<_>>()?;
    let sum_f: Rational = f.iter().sum();
    let base = alpha - gamma0;
    let denom = rational::int(n as i64 + 1);
    let quantities = f.iter().map(|fi| (&base - rational::int(n as i64) * fi + (&sum_f - fi)) / &denom).collect();
    let marginal_costs = f.iter().map(|fi| gamma0 + fi).collect();
    Ok(CournotOutcome::from_quantities(alpha, quantities, marginal_costs))
}

/// Cournot equilibrium under linear costs `c_i = gamma0 - gamma deg_i`, by the direct formula
/// `q_i = (alpha - gamma0 + n gamma deg_i - gamma sum_{j != i} deg_j) / (n + 1)`.
pub fn linear_cournot_outcome(spec: &GameSpec, g: &Graph) -> Result<CournotOutcome> {
    spec.check_graph(g)?;
    let GameKind::Cournot { alpha, gamma0, .. } = &spec.kind else {
        return Err(Error::WrongGameKind { expected: "Cournot" });
    };
    let gamma = linear_gamma(spec)?;
    let n = spec.n as i64;
    let degrees: Vec<i64> = g.degrees().iter().map(|&d| d as i64).collect();
    let degree_sum: i64 = degrees.iter().sum();
    let denom = rational::int(n + 1);
    let quantities = degrees
        .iter()
        .map(|&d| (alpha - gamma0 + rational::int(n * d) * &gamma - rational::int(degree_sum - d) * &gamma) / &denom)
        .collect();
    let marginal_costs = degrees.iter().map(|&d| gamma0 - rational::int(d) * &gamma).collect();
    Ok(CournotOutcome::from_quantities(alpha, quantities, marginal_costs))
}

/// The common `gamma` of an all-linear Cournot game.
pub fn linear_gamma(spec: &GameSpec) -> Result<Rational> {
    let GameKind::Cournot { costs, .. } = &spec.kind else {
        return Err(Error::WrongGameKind { expected: "Cournot" });
    };
    match costs.first() {
        Some(CostFunction::LinearDecreasing { gamma }) if costs.iter().all(|c| c == &costs[0]) => Ok(gamma.clone()),
        _ => Err(Error::HeterogeneousShape("not every firm has the same linear_decreasing cost".into())),
    }
}

/// Payoff vector for any game kind.
pub fn payoffs(spec: &GameSpec, g: &Graph) -> Result<Vec<Rational>> {
    match spec.kind {
        GameKind::DegreeTarget { .. } => degree_target_payoffs(spec, g),
        GameKind::Cournot { .. } => cournot_outcome(spec, g).map(|o| o.payoffs),
    }
}

/// Induced value `v(g) = sum_i Y_i(g)`.
pub fn value(spec: &GameSpec, g: &Graph) -> Result<Rational> {
    Ok(payoffs(spec, g)?.iter().sum())
}

/// A shared base shape `f` with per-firm shifts: `f_i(x) = f(x - shift_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonShape {
    pub base: CostFunction,
    pub shifts: Vec<i64>,
}

impl CommonShape {
    pub fn eval(&self, x: i64) -> Result<Rational> {
        self.base.eval(x)
    }

    pub fn is_unshifted(&self) -> bool {
        self.shifts.iter().all(|&s| s == 0)
    }
}

/// Extracts the common shape of a Cournot game's costs.
pub fn common_shape(spec: &GameSpec) -> Result<CommonShape> {
    let GameKind::Cournot { costs, .. } = &spec.kind else {
        return Err(Error::WrongGameKind { expected: "Cournot" });
    };
    let (base, first_shift) = costs[0].unshifted();
    let mut shifts = vec![first_shift];
    for (i, cost) in costs.iter().enumerate().skip(1) {
        let (b, s) = cost.unshifted();
        if b != base {
            return Err(Error::HeterogeneousShape(format!("firm {i} has a different cost shape than firm 0")));
        }
        shifts.push(s);
    }
    Ok(CommonShape { base, shifts })
}

/// Degree-indexed payoff evaluation prepared once per game.
///
/// `payoff(degrees, i)` equals `payoffs(spec, g)[i]` for any `g` with
/// degree vector `degrees`.
#[derive(Debug, Clone)]
pub(crate) enum PayoffModel {
    /// `table[i][d]` is player `i`'s payoff at degree `d`.
    ByDegree(Vec<Vec<Rational>>),
    Cournot {
        alpha: Rational,
        gamma0: Rational,
        /// `cost[i][d] = f_i(d)`.
        cost: Vec<Vec<Rational>>,
    },
}

impl PayoffModel {
    pub(crate) fn new(spec: &GameSpec) -> Result<Self> {
        let n = spec.n;
        let top = n as i64 - 1;
        match &spec.kind {
            GameKind::DegreeTarget { targets, penalty } => {
                let table = targets
                    .as_slice()
                    .iter()
                    .map(|&k| (0..=top).map(|d| penalty.eval(d - k as i64).map(|v| -v)).collect())
                    .collect::<Result<_>>()?;
                Ok(PayoffModel::ByDegree(table))
            }
            GameKind::Cournot { alpha, gamma0, costs } => Ok(PayoffModel::Cournot {
                alpha: alpha.clone(),
                gamma0: gamma0.clone(),
                cost: costs.iter().map(|c| c.eval_range(0, top)).collect::<Result<_>>()?,
            }),
        }
    }

    pub(crate) fn payoff(&self, degrees: &[usize], i: usize) -> Rational {
        match self {
            PayoffModel::ByDegree(table) => table[i][degrees[i]].clone(),
            PayoffModel::Cournot { alpha, gamma0, cost } => {
                let n = degrees.len() as i64;
                let f = |j: usize| &cost[j][degrees[j]];
                let sum_f: Rational = (0..degrees.len()).map(f).sum();
                let base = alpha - gamma0;
                let denom = rational::int(n + 1);
                let q_i = (&base - rational::int(n + 1) * f(i) + &sum_f) / &denom;
                // Q = (n (alpha - gamma0) - sum_f) / (n + 1)
                let total = (rational::int(n) * &base - &sum_f) / &denom;
                let margin = base - total - f(i);
                q_i * margin
            }
        }
    }

    pub(crate) fn payoffs(&self, degrees: &[usize]) -> Vec<Rational> {
        (0..degrees.len()).map(|i| self.payoff(degrees, i)).collect()
    }
}
