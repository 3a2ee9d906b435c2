//! The specialist's best response to a given `γ0`.

use super::{beats, Candidate, CandidateLabel, CandidateSet, CandidateStatus};
use crate::model;
use crate::tolerance::FEAS;
use crate::{GameParams, Strategy};

/// One of the specialist's KKT forms: increment `x(m) = p + s·m` where `m` is
/// the binding part of the safety floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DForm {
    pub label: CandidateLabel,
    pub p: (f64, f64),
    pub s: (f64, f64),
    pub available: bool,
}

impl DForm {
    fn raw(&self, m: f64) -> (f64, f64) {
        (self.p.0 + self.s.0 * m, self.p.1 + self.s.1 * m)
    }

    /// Whether the form satisfies its own constraints at `m`.
    pub fn valid_at(&self, m: f64) -> bool {
        if !self.available {
            return false;
        }
        let (xa, xb) = self.raw(m);
        xa >= -FEAS && xb >= m - FEAS
    }

    /// Increment at `m`, with sub-tolerance violations rounded away.
    pub fn at(&self, m: f64) -> (f64, f64) {
        let (xa, xb) = self.raw(m);
        (xa.max(0.0), xb.max(m))
    }

    /// `V(m)`: the specialist's utility net of `(1 − δ)·rᵀγ0`.
    pub fn value(&self, params: &GameParams, m: f64) -> f64 {
        let (xa, xb) = self.at(m);
        (1.0 - params.delta) * (params.r_a * xa + params.r_b * xb) - params.c1.quad_form(xa, xb)
    }
}

/// The four forms in taxonomy order: unconstrained, safety-only,
/// minimal compliance, and staying at the floor.
pub(crate) fn d_forms(params: &GameParams) -> [DForm; 4] {
    let k = 1.0 - params.delta;
    let c1 = &params.c1;
    let unconstrained = match c1.solve(0.5 * k * params.r_a, 0.5 * k * params.r_b) {
        Some(u) if c1.det() > 0.0 => DForm {
            label: CandidateLabel::Unconstrained,
            p: u,
            s: (0.0, 0.0),
            available: true,
        },
        _ => DForm {
            label: CandidateLabel::Unconstrained,
            p: (0.0, 0.0),
            s: (0.0, 0.0),
            available: false,
        },
    };
    let beta_pinned = DForm {
        label: CandidateLabel::BetaPinned,
        p: (
            0.0,
            if c1.c_bb > 0.0 {
                k * params.r_b / (2.0 * c1.c_bb)
            } else {
                0.0
            },
        ),
        s: (0.0, 0.0),
        available: c1.c_bb > 0.0,
    };
    let minimal = if c1.c_aa > 0.0 {
        DForm {
            label: CandidateLabel::MinimalCompliance,
            p: (k * params.r_a / (2.0 * c1.c_aa), 0.0),
            s: (-c1.c_ab / c1.c_aa, 1.0),
            available: true,
        }
    } else {
        DForm {
            label: CandidateLabel::MinimalCompliance,
            p: (0.0, 0.0),
            s: (0.0, 1.0),
            available: false,
        }
    };
    let stay = DForm {
        label: CandidateLabel::OriginPinned,
        p: (0.0, 0.0),
        s: (0.0, 1.0),
        available: true,
    };
    [unconstrained, beta_pinned, minimal, stay]
}

/// Index of the form maximising `V(m)` among those valid at `m`, with the
/// same tie-break as [`d_best_response`]. The stay form is always valid.
pub(crate) fn winning_form(params: &GameParams, forms: &[DForm; 4], m: f64) -> usize {
    let mut best = 3;
    let (bx, by) = forms[3].at(m);
    let mut best_s = Strategy::new(bx, by);
    let mut best_v = forms[3].value(params, m);
    for (i, f) in forms.iter().enumerate().take(3) {
        if !f.valid_at(m) {
            continue;
        }
        let (xa, xb) = f.at(m);
        let s = Strategy::new(xa, xb);
        let v = f.value(params, m);
        if beats(v, &s, f.label, best_v, &best_s, forms[best].label) {
            best = i;
            best_s = s;
            best_v = v;
        }
    }
    best
}

/// Prop-style candidate list for the specialist, plus the abstain marker.
///
/// Candidates that violate `α1 ≥ α0`, `β1 ≥ max(β0, θ_D)` or `U_D ≥ 0`
/// (all up to `ε_feas`) are kept but marked infeasible.
pub fn d_candidates(params: &GameParams, g0: &Strategy, theta_d: f64) -> CandidateSet {
    let m = (theta_d - g0.beta).max(0.0);
    let floor = g0.beta.max(theta_d);
    let mut candidates = Vec::with_capacity(5);
    for form in d_forms(params) {
        let (xa, xb) = form.raw(m);
        let mut status = CandidateStatus::Feasible;
        let strategy;
        if !form.available {
            status = CandidateStatus::Unavailable;
            strategy = *g0;
        } else if form.label == CandidateLabel::MinimalCompliance && xa < -FEAS {
            status = CandidateStatus::Clamped;
            strategy = Strategy::new(g0.alpha, floor);
        } else {
            let (xa, xb) = if form.valid_at(m) {
                form.at(m)
            } else {
                (xa, xb)
            };
            strategy = Strategy::new(g0.alpha + xa, g0.beta + xb);
            let u_d = model::utilities(params, g0, &strategy).1;
            if strategy.alpha < g0.alpha - FEAS || strategy.beta < floor - FEAS || u_d < -FEAS {
                status = CandidateStatus::Infeasible;
            }
        }
        candidates.push(Candidate {
            strategy,
            label: form.label,
            status,
        });
    }
    candidates.push(Candidate {
        strategy: Strategy::zero(),
        label: CandidateLabel::Abstain,
        status: CandidateStatus::Feasible,
    });
    CandidateSet { candidates }
}

/// The specialist's reply to `γ0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DResponse {
    Participate {
        gamma1: Strategy,
        label: CandidateLabel,
        u_d: f64,
    },
    Abstain,
}

impl DResponse {
    pub fn is_abstain(&self) -> bool {
        matches!(self, DResponse::Abstain)
    }
}

/// Feasible candidate maximising `U_D`; abstains iff no candidate reaches
/// `U_D ≥ −ε_feas`.
pub fn d_best_response(params: &GameParams, g0: &Strategy, theta_d: f64) -> DResponse {
    let set = d_candidates(params, g0, theta_d);
    let mut best: Option<(Strategy, CandidateLabel, f64)> = None;
    for c in set.feasible() {
        if c.label == CandidateLabel::Abstain {
            continue;
        }
        let u_d = model::utilities(params, g0, &c.strategy).1;
        let replace = match &best {
            None => true,
            Some((s, l, u)) => beats(u_d, &c.strategy, c.label, *u, s, *l),
        };
        if replace {
            best = Some((c.strategy, c.label, u_d));
        }
    }
    match best {
        Some((gamma1, label, u_d)) => DResponse::Participate { gamma1, label, u_d },
        None => DResponse::Abstain,
    }
}
