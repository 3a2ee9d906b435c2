//! Regulation sweeps and cell classification.

mod probe;

use std::fmt;

use rayon::prelude::*;

use crate::model::{interior_condition, ConditionError, Player};
use crate::solver::{solve_spe, EquilibriumOutcome};
use crate::tolerance::{CLASS, FEAS};
use crate::{GameParams, Regulation};

pub use probe::{
    backfire_probe, mutualism_probe, sample_interior_game, sample_two_sided_game, BackfireReport,
    EpsilonMode, MutualismReport, ProbeCell, ProbeStatus,
};

/// Rectangular grid of floors, optionally restricted to `θ_D ≥ θ_G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub theta_g_min: f64,
    pub theta_g_max: f64,
    pub theta_g_step: f64,
    pub theta_d_min: f64,
    pub theta_d_max: f64,
    pub theta_d_step: f64,
    pub constrain_td_ge_tg: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("{axis} step must be positive and finite, got {step}")]
    BadStep { axis: &'static str, step: f64 },
    #[error("{axis} bounds must be finite")]
    NonFinite { axis: &'static str },
    #[error("backfire onset precondition not met: {0}")]
    HypothesisNotMet(String),
    #[error("no backfire onset in range")]
    NoOnset,
}

impl SweepGrid {
    /// Single `θ_G` value, `θ_D` from `min` to `max`.
    pub fn line(theta_g: f64, theta_d_min: f64, theta_d_max: f64, step: f64) -> Self {
        Self {
            theta_g_min: theta_g,
            theta_g_max: theta_g,
            theta_g_step: 1.0,
            theta_d_min,
            theta_d_max,
            theta_d_step: step,
            constrain_td_ge_tg: false,
        }
    }

    /// `θ_G ∈ [0, 1.2]` step 0.1, `θ_D ∈ [θ_G, 2.5]` step 0.05: 507 cells.
    pub fn bargaining_default() -> Self {
        Self {
            theta_g_min: 0.0,
            theta_g_max: 1.2,
            theta_g_step: 0.1,
            theta_d_min: 0.0,
            theta_d_max: 2.5,
            theta_d_step: 0.05,
            constrain_td_ge_tg: true,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        for (axis, step) in [
            ("theta_g", self.theta_g_step),
            ("theta_d", self.theta_d_step),
        ] {
            if !(step > 0.0 && step.is_finite()) {
                return Err(SweepError::BadStep { axis, step });
            }
        }
        for (axis, lo, hi) in [
            ("theta_g", self.theta_g_min, self.theta_g_max),
            ("theta_d", self.theta_d_min, self.theta_d_max),
        ] {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(SweepError::NonFinite { axis });
            }
        }
        Ok(())
    }
}

/// `min + i·step` for every `i` with value `≤ max + ε_feas`.
pub fn axis_values(min: f64, max: f64, step: f64) -> Vec<f64> {
    if min > max + FEAS {
        return Vec::new();
    }
    let count = ((max - min + FEAS) / step).floor() as usize + 1;
    (0..count).map(|i| min + i as f64 * step).collect()
}

/// Cells in row-major order: `θ_G` outer, `θ_D` inner, both ascending.
pub fn enumerate_grid(grid: &SweepGrid) -> Vec<Regulation> {
    let tds = axis_values(grid.theta_d_min, grid.theta_d_max, grid.theta_d_step);
    let mut out = Vec::new();
    for tg in axis_values(grid.theta_g_min, grid.theta_g_max, grid.theta_g_step) {
        for &td in &tds {
            if grid.constrain_td_ge_tg && td < tg - FEAS {
                continue;
            }
            out.push(Regulation::new(tg, td));
        }
    }
    out
}

/// Primary class of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Abstain,
    Backfire,
    Mutualism,
    SafetyImproving,
    Neutral,
    /// Utilities moved but safety did not, and not both upward.
    Mixed,
}

impl Class {
    pub const ALL: [Class; 6] = [
        Class::Abstain,
        Class::Backfire,
        Class::Mutualism,
        Class::SafetyImproving,
        Class::Neutral,
        Class::Mixed,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Class::Abstain => "abstain",
            Class::Backfire => "backfire",
            Class::Mutualism => "mutualism",
            Class::SafetyImproving => "safety_improving",
            Class::Neutral => "neutral",
            Class::Mixed => "mixed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub abstain: bool,
    pub backfire: bool,
    pub mutualism: bool,
    pub safety_improving: bool,
}

/// Flags and primary class of `outcome` against `baseline`.
pub fn classify(outcome: &EquilibriumOutcome, baseline: &EquilibriumOutcome) -> (Class, Flags) {
    let abstain = outcome.abstained;
    let d_safety = outcome.final_safety() - baseline.final_safety();
    let d_ug = outcome.u_g - baseline.u_g;
    let d_ud = outcome.u_d - baseline.u_d;
    let flags = Flags {
        abstain,
        backfire: !abstain && d_safety < -CLASS,
        mutualism: !abstain && d_ug > CLASS && d_ud > CLASS,
        safety_improving: !abstain && d_safety > CLASS,
    };
    let class = if flags.abstain {
        Class::Abstain
    } else if flags.backfire {
        Class::Backfire
    } else if flags.mutualism {
        Class::Mutualism
    } else if flags.safety_improving {
        Class::SafetyImproving
    } else if d_ug.abs() <= CLASS && d_ud.abs() <= CLASS {
        Class::Neutral
    } else {
        Class::Mixed
    };
    (class, flags)
}

/// One solved cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub regulation: Regulation,
    pub delta: f64,
    pub outcome: EquilibriumOutcome,
    pub baseline: EquilibriumOutcome,
    pub classification: Class,
    pub flags: Flags,
    pub d_safety: f64,
    pub d_ug: f64,
    pub d_ud: f64,
}

impl SweepRecord {
    pub fn new(
        regulation: Regulation,
        delta: f64,
        outcome: EquilibriumOutcome,
        baseline: EquilibriumOutcome,
    ) -> Self {
        let (classification, flags) = classify(&outcome, &baseline);
        Self {
            regulation,
            delta,
            outcome,
            baseline,
            classification,
            flags,
            d_safety: outcome.final_safety() - baseline.final_safety(),
            d_ug: outcome.u_g - baseline.u_g,
            d_ud: outcome.u_d - baseline.u_d,
        }
    }
}

/// Solves every `(δ, cell)` pair. Records are ordered by `δ` ascending, then
/// grid order; the order is independent of the thread pool.
pub fn run_sweep(params: &GameParams, grid: &SweepGrid, deltas: &[f64]) -> Vec<SweepRecord> {
    let cells = enumerate_grid(grid);
    let mut deltas = deltas.to_vec();
    deltas.sort_by(f64::total_cmp);
    let baselines: Vec<EquilibriumOutcome> = deltas
        .iter()
        .map(|&d| solve_spe(&params.with_delta(d), &Regulation::none()))
        .collect();
    let n = cells.len();
    (0..deltas.len() * n)
        .into_par_iter()
        .map(|idx| {
            let (di, ci) = (idx / n, idx % n);
            let p = params.with_delta(deltas[di]);
            let reg = cells[ci];
            SweepRecord::new(reg, deltas[di], solve_spe(&p, &reg), baselines[di])
        })
        .collect()
}

/// Where the generalist first abandons its unregulated candidate as `θ_D`
/// rises at `θ_G = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackfireOnset {
    pub theta_d_star: f64,
    /// Last cell keeping the unregulated candidate.
    pub below: SweepRecord,
    /// First cell with a different candidate.
    pub above: SweepRecord,
}

const ONSET_PRECISION: f64 = 1e-6;
const ONSET_SCAN: usize = 1000;

/// Bisection on `θ_D ∈ (0, β1^A)` for the switch of the generalist's
/// candidate label, to absolute precision `1e-6`.
pub fn find_backfire_onset(params: &GameParams) -> Result<BackfireOnset, SweepError> {
    for player in [Player::Generalist, Player::Specialist] {
        match interior_condition(params, player) {
            Ok(true) => {}
            Ok(false) => {
                return Err(SweepError::HypothesisNotMet(format!(
                    "interior condition fails for {player}"
                )))
            }
            Err(e @ (ConditionError::ZeroRevenue | ConditionError::DeltaOutOfRange)) => {
                return Err(SweepError::HypothesisNotMet(e.to_string()))
            }
        }
    }
    let baseline = solve_spe(params, &Regulation::none());
    let top = baseline.final_safety();
    let record = |td: f64| {
        let reg = Regulation::new(0.0, td);
        SweepRecord::new(reg, params.delta, solve_spe(params, &reg), baseline)
    };
    let switched = |r: &SweepRecord| r.outcome.g_candidate != baseline.g_candidate;

    // Coarse scan for the first switch, then bisection inside that bracket.
    let h = top / ONSET_SCAN as f64;
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..ONSET_SCAN {
        let td = i as f64 * h;
        if switched(&record(td)) {
            hi = Some(td);
            break;
        }
        lo = td;
    }
    let mut hi = hi.ok_or(SweepError::NoOnset)?;
    while hi - lo > ONSET_PRECISION {
        let mid = 0.5 * (lo + hi);
        if switched(&record(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(BackfireOnset {
        theta_d_star: 0.5 * (lo + hi),
        below: record(lo),
        above: record(hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bargaining_grid_has_507_cells() {
        assert_eq!(enumerate_grid(&SweepGrid::bargaining_default()).len(), 507);
        let mut unconstrained = SweepGrid::bargaining_default();
        unconstrained.constrain_td_ge_tg = false;
        assert_eq!(enumerate_grid(&unconstrained).len(), 13 * 51);
    }

    #[test]
    fn line_and_small_grids() {
        assert_eq!(
            enumerate_grid(&SweepGrid::line(0.0, 0.0, 2.5, 0.005)).len(),
            501
        );
        let g = SweepGrid {
            theta_g_min: 0.0,
            theta_g_max: 0.2,
            theta_g_step: 0.1,
            theta_d_min: 0.0,
            theta_d_max: 0.2,
            theta_d_step: 0.1,
            constrain_td_ge_tg: false,
        };
        let cells = enumerate_grid(&g);
        assert_eq!(cells.len(), 9);
        assert_eq!(cells[1], Regulation::new(0.0, 0.1));
        assert_eq!(cells[3].theta_g, 0.1);
        let mut empty = g;
        empty.theta_d_min = 1.0;
        assert!(enumerate_grid(&empty).is_empty());
    }

    #[test]
    fn zero_steps_are_rejected() {
        let mut g = SweepGrid::bargaining_default();
        g.theta_d_step = 0.0;
        assert!(g.validate().is_err());
    }

    #[test]
    fn baseline_cell_is_neutral() {
        let recs = run_sweep(
            &GameParams::canonical(),
            &SweepGrid::line(0.0, 0.0, 0.0, 0.1),
            &[0.5],
        );
        assert_eq!(recs[0].classification, Class::Neutral);
        assert_eq!(
            (recs[0].d_safety, recs[0].d_ug, recs[0].d_ud),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn mutualism_at_paired_floors() {
        let g = SweepGrid::line(0.5, 1.0, 1.0, 0.1);
        let recs = run_sweep(&GameParams::canonical(), &g, &[0.5]);
        assert!(recs[0].flags.mutualism);
        assert_eq!(
            recs[0].classification,
            Class::SafetyImproving.min(Class::Mutualism)
        );
    }

    #[test]
    fn canonical_onset() {
        let onset = find_backfire_onset(&GameParams::canonical()).unwrap();
        assert!((onset.theta_d_star - 0.375).abs() <= 1e-6);
        assert!(onset.above.flags.backfire);
        assert!(!onset.below.flags.backfire);
    }

    #[test]
    fn onset_requires_interior_condition() {
        let mut p = GameParams::canonical();
        p.c1 = crate::CostMatrix::new(1.0, 1.0, 2.0);
        assert!(matches!(
            find_backfire_onset(&p),
            Err(SweepError::HypothesisNotMet(_))
        ));
    }
}
