//! Strategic network formation: pairwise stability of collaboration graphs
//! in degree-target games and Cournot oligopolies with link-dependent costs.
//!
//! Payoffs and condition margins are exact rationals. Floating point only
//! appears in the ensemble statistics of [`formation`].

pub mod error;
pub mod formation;
pub mod games;
pub mod graph;
pub mod rational;
pub mod stability;

pub use error::{Error, Result};
pub use formation::{
    run_ensemble, run_ensemble_detailed, simulate, EnsembleStats, FormationConfig, FormationResult, Outcome, Variant,
};
pub use games::{cournot_outcome, payoffs, value, CostFunction, CournotOutcome, GameKind, GameSpec};
pub use graph::{eg_check, realize, DegreeSequence, Edge, Graph};
pub use rational::{NumberFormat, Rational};
pub use stability::{
    check_complete_graph_conditions, check_nonneg_condition, deviation_delta_analysis, enumerate_stable,
    enumerate_stable_with, is_pairwise_stable, is_pareto_optimal, pareto_optimal_set, Census, ConditionCheck,
    Deviation, DeviationKind, EnumerateOptions, ParetoReport, StabilityReport,
};
