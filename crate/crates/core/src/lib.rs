//! Equilibrium solver and analysis suite for the two-player safety-regulation
//! game with quadratic costs.
//!
//! A generalist `G` moves first and builds a technology `γ0 = (α0, β0)`
//! (performance, safety). A domain specialist `D` then extends it to
//! `γ1 ≥ γ0`. Revenue `rᵀγ1` is split `δ : 1 − δ`, each player pays a
//! quadratic cost, and a regulator imposes safety floors `β0 ≥ θ_G`,
//! `β1 ≥ θ_D`. Either player may abstain, leaving both with zero.
//!
//! The crate is organised as:
//!
//! * [`model`]: primitives and utility accounting, generic over the scalar.
//! * [`solver`]: closed-form subgame-perfect equilibria by KKT candidate
//!   enumeration.
//! * [`oracle`]: brute-force grid search used as ground truth.
//! * [`sweep`]: regulation sweeps, classification and backfire/mutualism probes.
//! * [`bargaining`]: revenue-share selection under three bargaining rules.
//! * [`analysis`]: Pareto hulls per regulatory regime and sweep summaries.
//!
//! The solver stack works in `f64`; the aliases below fix the scalar for it.

pub mod analysis;
pub mod bargaining;
pub mod conic;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod solver;
pub mod sweep;
pub mod tolerance;

pub type CostMatrix = model::CostMatrix<f64>;
pub type GameParams = model::GameParams<f64>;
pub type Strategy = model::Strategy<f64>;
pub type Regulation = model::Regulation<f64>;

pub use model::{
    cost_d, cost_g, interior_condition, is_positive_definite, two_sided_condition, utilities,
    validate, ConditionError, Player, ValidationReport, Violation, Warning,
};
pub use solver::{
    solve_spe, solve_unregulated, CandidateLabel, CandidateSet, EquilibriumOutcome, SolvedGame,
};
