//! Subgame-perfect equilibria by candidate enumeration.
//!
//! The specialist's problem given `γ0` is a quadratic program over the
//! increment `x = γ1 − γ0` with `x_a ≥ 0` and `x_b ≥ m`, where
//! `m = max(0, θ_D − β0)`. Its KKT points are the four closed forms in
//! [`specialist`], each affine in `m`.
//!
//! The generalist anticipates that response. On every interval of `β0` where
//! one specialist form wins, both utilities are bivariate quadratics in
//! `(α0, β0)`, so the generalist's problem splits into strips, each a
//! quadratic program with the participation constraint `U_D ≥ 0`. The KKT
//! points of every strip (interior, edges, corners, points on the
//! participation curve) form the candidate list; each is then scored with the
//! specialist's actual best response.

mod generalist;
mod specialist;

use std::fmt;

use crate::model;
use crate::tolerance;
use crate::{GameParams, Regulation, Strategy};

pub use generalist::{g_candidates, ud_zero_curve_candidates};
pub use specialist::{d_best_response, d_candidates, DResponse};

/// Provenance of a candidate strategy.
///
/// The declaration order is the final tie-break between candidates of equal
/// utility and equal strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CandidateLabel {
    /// Stationary point of the player's own objective.
    Unconstrained,
    /// Performance at its lower bound, safety free.
    BetaPinned,
    /// Safety at its lower bound, performance free.
    AlphaPinned,
    /// Both attributes at their lower bounds.
    OriginPinned,
    /// Specialist meets the safety floor exactly, performance free.
    MinimalCompliance,
    /// Participation curve `U_D = 0` meets `α0 = 0`.
    CurveIntersectAlpha0,
    /// Participation curve `U_D = 0` meets `β0 = θ_G`.
    CurveIntersectThetaG,
    /// Constrained maximum of `U_G` along `U_D = 0`.
    CurveInterior,
    /// Stationary point where the specialist's response moves with `β0`.
    ResponseInterior,
    /// Point on a boundary where the specialist switches response.
    ResponseBoundary,
    /// Brute-force grid point.
    GridSearch,
    /// Exit.
    Abstain,
}

impl CandidateLabel {
    pub const ALL: [CandidateLabel; 12] = [
        Self::Unconstrained,
        Self::BetaPinned,
        Self::AlphaPinned,
        Self::OriginPinned,
        Self::MinimalCompliance,
        Self::CurveIntersectAlpha0,
        Self::CurveIntersectThetaG,
        Self::CurveInterior,
        Self::ResponseInterior,
        Self::ResponseBoundary,
        Self::GridSearch,
        Self::Abstain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Unconstrained => "unconstrained",
            Self::BetaPinned => "beta-pinned",
            Self::AlphaPinned => "alpha-pinned",
            Self::OriginPinned => "origin-pinned",
            Self::MinimalCompliance => "minimal-compliance",
            Self::CurveIntersectAlpha0 => "curve-intersect-alpha0",
            Self::CurveIntersectThetaG => "curve-intersect-thetaG",
            Self::CurveInterior => "curve-interior",
            Self::ResponseInterior => "response-interior",
            Self::ResponseBoundary => "response-boundary",
            Self::GridSearch => "grid-search",
            Self::Abstain => "abstain",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.as_str() == s)
    }
}

impl fmt::Display for CandidateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a candidate is excluded from the argmax, if it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateStatus {
    Feasible,
    /// Violates a constraint or the participation condition.
    Infeasible,
    /// The closed form does not exist (singular matrix, zero diagonal).
    Unavailable,
    /// Negative implied increment clamped to zero; the clamped point is
    /// covered by another candidate.
    Clamped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub strategy: Strategy,
    pub label: CandidateLabel,
    pub status: CandidateStatus,
}

impl Candidate {
    pub fn is_feasible(&self) -> bool {
        self.status == CandidateStatus::Feasible
    }
}

/// Ordered candidate list for one player's decision.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CandidateSet {
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn feasible(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.is_feasible())
    }

    pub fn find(&self, label: CandidateLabel) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.label == label)
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// Equilibrium strategies and payoffs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumOutcome {
    pub abstained: bool,
    pub gamma0: Strategy,
    pub gamma1: Strategy,
    pub u_g: f64,
    pub u_d: f64,
    /// Generalist's winning candidate.
    pub g_candidate: CandidateLabel,
    /// Specialist's winning candidate.
    pub d_candidate: CandidateLabel,
}

impl EquilibriumOutcome {
    /// Both players out, both payoffs exactly zero.
    pub fn abstain() -> Self {
        Self {
            abstained: true,
            gamma0: Strategy::zero(),
            gamma1: Strategy::zero(),
            u_g: 0.0,
            u_d: 0.0,
            g_candidate: CandidateLabel::Abstain,
            d_candidate: CandidateLabel::Abstain,
        }
    }

    /// Final safety level `β1` (zero when abstained).
    pub fn final_safety(&self) -> f64 {
        self.gamma1.beta
    }

    pub fn welfare(&self) -> f64 {
        self.u_g + self.u_d
    }
}

/// An outcome tagged with the game and regulation it solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolvedGame {
    pub params: GameParams,
    pub regulation: Regulation,
    pub outcome: EquilibriumOutcome,
}

impl SolvedGame {
    pub fn solve(params: GameParams, regulation: Regulation) -> Self {
        Self {
            params,
            regulation,
            outcome: solve_spe(&params, &regulation),
        }
    }
}

/// Does `(u, s, label)` beat the incumbent? Utilities within `ε_tie` tie; ties
/// go to higher `β`, then higher `α`, then the earlier label.
pub(crate) fn beats(
    u: f64,
    s: &Strategy,
    label: CandidateLabel,
    best_u: f64,
    best_s: &Strategy,
    best_label: CandidateLabel,
) -> bool {
    if u > best_u + tolerance::TIE {
        return true;
    }
    if u < best_u - tolerance::TIE {
        return false;
    }
    if s.beta > best_s.beta + tolerance::TIE {
        return true;
    }
    if s.beta < best_s.beta - tolerance::TIE {
        return false;
    }
    if s.alpha > best_s.alpha + tolerance::TIE {
        return true;
    }
    if s.alpha < best_s.alpha - tolerance::TIE {
        return false;
    }
    label < best_label
}

/// Generalist's payoff from `γ0` given the specialist's actual response.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scored {
    pub gamma0: Strategy,
    pub label: CandidateLabel,
    pub response: DResponse,
    pub u_g: f64,
}

pub(crate) fn score(
    params: &GameParams,
    gamma0: Strategy,
    label: CandidateLabel,
    theta_d: f64,
) -> Scored {
    let response = d_best_response(params, &gamma0, theta_d);
    let u_g = match response {
        DResponse::Abstain => 0.0,
        DResponse::Participate { gamma1, .. } => model::utilities(params, &gamma0, &gamma1).0,
    };
    Scored {
        gamma0,
        label,
        response,
        u_g,
    }
}

/// Argmax over scored generalist candidates. Candidates after which the
/// specialist exits are equivalent to the generalist exiting.
pub(crate) fn select(params: &GameParams, scored: &[Scored]) -> EquilibriumOutcome {
    let mut best: Option<&Scored> = None;
    for s in scored {
        if matches!(s.response, DResponse::Abstain) {
            continue;
        }
        let replace = match best {
            None => true,
            Some(b) => beats(s.u_g, &s.gamma0, s.label, b.u_g, &b.gamma0, b.label),
        };
        if replace {
            best = Some(s);
        }
    }
    match best {
        Some(b) if b.u_g >= -tolerance::FEAS => {
            let DResponse::Participate { gamma1, label, .. } = b.response else {
                unreachable!("abstaining responses are skipped")
            };
            let (u_g, u_d) = model::utilities(params, &b.gamma0, &gamma1);
            EquilibriumOutcome {
                abstained: false,
                gamma0: b.gamma0,
                gamma1,
                u_g,
                u_d,
                g_candidate: b.label,
                d_candidate: label,
            }
        }
        _ => EquilibriumOutcome::abstain(),
    }
}

/// Subgame-perfect equilibrium of the regulated game.
pub fn solve_spe(params: &GameParams, reg: &Regulation) -> EquilibriumOutcome {
    let set = g_candidates(params, reg);
    let scored: Vec<Scored> = set
        .feasible()
        .filter(|c| c.label != CandidateLabel::Abstain)
        .map(|c| score(params, c.strategy, c.label, reg.theta_d))
        .collect();
    select(params, &scored)
}

/// Subgame-perfect equilibrium of the unregulated game from the closed-form
/// candidate lists directly, without the strip machinery.
///
/// Without floors the specialist's increment does not depend on `γ0`, and
/// its utility is at least `(1 − δ)·rᵀγ0 ≥ 0`, so it never exits.
pub fn solve_unregulated(params: &GameParams) -> EquilibriumOutcome {
    let k = 1.0 - params.delta;
    let (r_a, r_b) = (params.r_a, params.r_b);
    let c1 = &params.c1;

    let mut increments: Vec<(Strategy, CandidateLabel)> = Vec::new();
    if let Some((a, b)) = c1.solve(0.5 * k * r_a, 0.5 * k * r_b) {
        if a >= -tolerance::FEAS && b >= -tolerance::FEAS {
            increments.push((
                Strategy::new(a.max(0.0), b.max(0.0)),
                CandidateLabel::Unconstrained,
            ));
        }
    }
    if c1.c_bb > 0.0 {
        increments.push((
            Strategy::new(0.0, k * r_b / (2.0 * c1.c_bb)),
            CandidateLabel::BetaPinned,
        ));
    }
    if c1.c_aa > 0.0 {
        increments.push((
            Strategy::new(k * r_a / (2.0 * c1.c_aa), 0.0),
            CandidateLabel::AlphaPinned,
        ));
    }
    increments.push((Strategy::zero(), CandidateLabel::OriginPinned));

    let value = |x: &Strategy| k * params.revenue(x) - c1.quad_form(x.alpha, x.beta);
    let (mut x_best, mut d_label) = increments[0];
    for &(x, label) in &increments[1..] {
        if beats(value(&x), &x, label, value(&x_best), &x_best, d_label) {
            x_best = x;
            d_label = label;
        }
    }

    let d = params.delta;
    let c0 = &params.c0;
    let mut g_cands: Vec<(Strategy, CandidateLabel)> = Vec::new();
    if let Some((a, b)) = c0.solve(0.5 * d * r_a, 0.5 * d * r_b) {
        if a >= -tolerance::FEAS && b >= -tolerance::FEAS {
            g_cands.push((
                Strategy::new(a.max(0.0), b.max(0.0)),
                CandidateLabel::Unconstrained,
            ));
        }
    }
    if c0.c_bb > 0.0 {
        g_cands.push((
            Strategy::new(0.0, d * r_b / (2.0 * c0.c_bb)),
            CandidateLabel::BetaPinned,
        ));
    }
    if c0.c_aa > 0.0 {
        g_cands.push((
            Strategy::new(d * r_a / (2.0 * c0.c_aa), 0.0),
            CandidateLabel::AlphaPinned,
        ));
    }
    g_cands.push((Strategy::zero(), CandidateLabel::OriginPinned));

    let scored: Vec<Scored> = g_cands
        .into_iter()
        .map(|(g0, label)| {
            let gamma1 = Strategy::new(g0.alpha + x_best.alpha, g0.beta + x_best.beta);
            let (u_g, u_d) = model::utilities(params, &g0, &gamma1);
            Scored {
                gamma0: g0,
                label,
                response: DResponse::Participate {
                    gamma1,
                    label: d_label,
                    u_d,
                },
                u_g,
            }
        })
        .collect();
    select(params, &scored)
}
