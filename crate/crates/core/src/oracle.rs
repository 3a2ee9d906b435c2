//! Brute-force equilibria on a uniform grid, used as ground truth for the
//! closed-form solver.
//!
//! The specialist's utility depends on `γ0` only through the constant
//! `(1 − δ)·rᵀγ0` and the admissible range of the increment, so the
//! two-stage search shares one table of increment values across all `γ0`
//! instead of re-scanning the grid for every first move.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::model;
use crate::solver::{CandidateLabel, EquilibriumOutcome, SolvedGame};
use crate::tolerance::FEAS;
use rand::Rng;

use crate::{CostMatrix, GameParams, Regulation, Strategy};

pub const DEFAULT_CAP: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Upper bound on every searched coordinate.
    pub gamma_max: f64,
    /// Grid pitch `h`.
    pub step: f64,
    /// Largest admissible number of points per stage.
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid needs {required} points per stage, cap is {cap}")]
    CapExceeded { required: usize, cap: usize },
    #[error("outcomes belong to different games or regulations")]
    Mismatch,
}

impl GridSpec {
    pub fn new(gamma_max: f64, step: f64) -> Result<Self, OracleError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(OracleError::InvalidGrid(format!(
                "step must be positive, got {step}"
            )));
        }
        if !(gamma_max >= step && gamma_max.is_finite()) {
            return Err(OracleError::InvalidGrid(format!(
                "gamma_max {gamma_max} must be at least the step {step}"
            )));
        }
        Ok(Self {
            gamma_max,
            step,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Box `4·(largest unregulated coordinate + largest floor)`.
    pub fn for_game(params: &GameParams, reg: &Regulation, step: f64) -> Result<Self, OracleError> {
        let base = crate::solver::solve_unregulated(params);
        let coord = [
            base.gamma0.alpha,
            base.gamma0.beta,
            base.gamma1.alpha,
            base.gamma1.beta,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let gamma_max = 4.0 * (coord + reg.theta_g.max(reg.theta_d));
        Self::new(gamma_max.max(step), step)
    }

    /// Points per axis.
    pub fn points_per_axis(&self) -> usize {
        (self.gamma_max / self.step + 1e-9).floor() as usize + 1
    }

    pub fn value(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    fn check_cap(&self) -> Result<usize, OracleError> {
        let n = self.points_per_axis();
        let required = n.saturating_mul(n);
        if required > self.cap {
            return Err(OracleError::CapExceeded {
                required,
                cap: self.cap,
            });
        }
        Ok(n)
    }

    /// Smallest index whose value is at least `x − ε_feas`.
    fn ceil_index(&self, x: f64) -> usize {
        if x <= 0.0 {
            0
        } else {
            ((x - FEAS) / self.step).ceil().max(0.0) as usize
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleResponse {
    Participate { gamma1: Strategy, u_d: f64 },
    Abstain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBestResponse {
    pub response: OracleResponse,
    /// No grid point satisfies the specialist's floor.
    pub floor_exceeds_grid: bool,
}

/// Lexicographic order on `(value, β, α)`, exact.
fn lex(v: f64, b: usize, a: usize, bv: f64, bb: usize, ba: usize) -> Ordering {
    v.total_cmp(&bv).then(b.cmp(&bb)).then(a.cmp(&ba))
}

/// Exhaustive specialist response over grid points `γ1`.
pub fn oracle_best_response(
    params: &GameParams,
    g0: &Strategy,
    theta_d: f64,
    grid: &GridSpec,
) -> Result<OracleBestResponse, OracleError> {
    let n = grid.check_cap()?;
    let i0 = grid.ceil_index(g0.alpha);
    let j0 = grid.ceil_index(g0.beta.max(theta_d));
    let mut best: Option<(f64, usize, usize)> = None;
    for j in j0..n {
        for i in i0..n {
            let g1 = Strategy::new(grid.value(i), grid.value(j));
            let u_d = model::utilities(params, g0, &g1).1;
            let better = match best {
                None => true,
                Some((bv, bj, bi)) => lex(u_d, j, i, bv, bj, bi) == Ordering::Greater,
            };
            if better {
                best = Some((u_d, j, i));
            }
        }
    }
    let floor_exceeds_grid = best.is_none();
    let response = match best {
        Some((u_d, j, i)) if u_d >= -FEAS => OracleResponse::Participate {
            gamma1: Strategy::new(grid.value(i), grid.value(j)),
            u_d,
        },
        _ => OracleResponse::Abstain,
    };
    Ok(OracleBestResponse {
        response,
        floor_exceeds_grid,
    })
}

/// Brute-force equilibrium with both moves restricted to the grid.
pub fn oracle_spe(
    params: &GameParams,
    reg: &Regulation,
    grid: &GridSpec,
) -> Result<EquilibriumOutcome, OracleError> {
    let n = grid.check_cap()?;
    let h = grid.step;
    let k = 1.0 - params.delta;
    let (r_a, r_b) = (params.r_a, params.r_b);

    // Specialist's utility net of (1 − δ)·rᵀγ0 for increment (di, dj)·h.
    let w = |di: usize, dj: usize| {
        let (x, y) = (di as f64 * h, dj as f64 * h);
        k * (r_a * x + r_b * y) - params.c1.quad_form(x, y)
    };

    // prefix[a·n + dj]: best di in 0..=a for this dj.
    let mut prefix_di = vec![0u32; n * n];
    let mut prefix_v = vec![0.0f64; n * n];
    for dj in 0..n {
        let mut bv = f64::NEG_INFINITY;
        let mut bi = 0usize;
        for a in 0..n {
            let v = w(a, dj);
            if v.total_cmp(&bv).then(a.cmp(&bi)) == Ordering::Greater {
                bv = v;
                bi = a;
            }
            prefix_di[a * n + dj] = bi as u32;
            prefix_v[a * n + dj] = bv;
        }
    }

    let b_min = grid.ceil_index(reg.theta_g);
    let mut best: Option<(f64, usize, usize, Strategy, f64)> = None;
    let mut window: VecDeque<usize> = VecDeque::new();

    for a0 in 0..n {
        let a_room = n - 1 - a0;
        let row_v = &prefix_v[a_room * n..(a_room + 1) * n];
        let row_i = &prefix_di[a_room * n..(a_room + 1) * n];
        window.clear();
        // Descending β0: the admissible range [m, top] of dj only moves up.
        let mut pushed = 0usize;
        for b0 in (b_min..n).rev() {
            let top = n - 1 - b0;
            let m = grid.ceil_index(reg.theta_d - grid.value(b0));
            while pushed <= top {
                let v = row_v[pushed];
                while let Some(&last) = window.back() {
                    if lex(
                        row_v[last],
                        last,
                        row_i[last] as usize,
                        v,
                        pushed,
                        row_i[pushed] as usize,
                    ) == Ordering::Greater
                    {
                        break;
                    }
                    window.pop_back();
                }
                window.push_back(pushed);
                pushed += 1;
            }
            while window.front().is_some_and(|&f| f < m) {
                window.pop_front();
            }
            let Some(&dj) = window.front() else {
                continue;
            };
            let di = row_i[dj] as usize;
            let g0 = Strategy::new(grid.value(a0), grid.value(b0));
            let g1 = Strategy::new(grid.value(a0 + di), grid.value(b0 + dj));
            let (u_g, u_d) = model::utilities(params, &g0, &g1);
            if u_d < -FEAS {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bv, bb, ba, _, _)) => lex(u_g, b0, a0, *bv, *bb, *ba) == Ordering::Greater,
            };
            if better {
                best = Some((u_g, b0, a0, g1, u_d));
            }
        }
    }

    Ok(match best {
        Some((u_g, b0, a0, gamma1, u_d)) if u_g >= -FEAS => EquilibriumOutcome {
            abstained: false,
            gamma0: Strategy::new(grid.value(a0), grid.value(b0)),
            gamma1,
            u_g,
            u_d,
            g_candidate: CandidateLabel::GridSearch,
            d_candidate: CandidateLabel::GridSearch,
        },
        _ => EquilibriumOutcome::abstain(),
    })
}

/// Differences between an analytic and an oracle solution of the same game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    /// Oracle minus analytic.
    pub du_g: f64,
    pub du_d: f64,
    pub gamma0_distance: f64,
    pub gamma1_distance: f64,
    pub tol_u: f64,
    pub tol_strategy: f64,
    /// Both strategies within `tol_strategy`. Reported, not required:
    /// near-indifferent games may pick distant strategies of equal value.
    pub strategies_close: bool,
    pub pass: bool,
}

/// Compares two solutions of one game. Passes when the oracle does not beat
/// the analytic utilities by more than `tol_u` and both utilities agree
/// within `tol_u`, where `tol_u = 5·(1 + max cost entry + max revenue
/// weight)·h`.
pub fn compare(
    analytic: &SolvedGame,
    oracle: &SolvedGame,
    grid: &GridSpec,
) -> Result<Comparison, OracleError> {
    if analytic.params != oracle.params || analytic.regulation != oracle.regulation {
        return Err(OracleError::Mismatch);
    }
    let p = &analytic.params;
    let k = 5.0 * (1.0 + p.c0.max_abs_entry().max(p.c1.max_abs_entry()) + p.r_a.max(p.r_b));
    let tol_u = k * grid.step;
    let tol_strategy = 2.0 * grid.step;
    let (a, o) = (&analytic.outcome, &oracle.outcome);
    let du_g = o.u_g - a.u_g;
    let du_d = o.u_d - a.u_d;
    let gamma0_distance = a.gamma0.distance(&o.gamma0);
    let gamma1_distance = a.gamma1.distance(&o.gamma1);
    let pass = du_g <= tol_u && du_d <= tol_u && du_g.abs() <= tol_u && du_d.abs() <= tol_u;
    Ok(Comparison {
        du_g,
        du_d,
        gamma0_distance,
        gamma1_distance,
        tol_u,
        tol_strategy,
        strategies_close: gamma0_distance <= tol_strategy && gamma1_distance <= tol_strategy,
        pass,
    })
}

/// Random valid game for cross-checks. Diagonals, revenue weights on
/// `[0.5, 2]`, `δ` on `[0.1, 0.9]`, cross-terms on
/// `(−0.9·sqrt(c_aa·c_bb), 1.5·sqrt(c_aa·c_bb))`, which includes indefinite
/// cost matrices.
pub fn sample_check_game<R: Rng>(rng: &mut R) -> GameParams {
    let matrix = |rng: &mut R| {
        let a: f64 = rng.gen_range(0.5..2.0);
        let b: f64 = rng.gen_range(0.5..2.0);
        let s = (a * b).sqrt();
        CostMatrix::new(a, b, rng.gen_range(-0.9 * s..1.5 * s))
    };
    let c0 = matrix(rng);
    let c1 = matrix(rng);
    GameParams::new(
        c0,
        c1,
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.1..0.9),
    )
}

/// Floors up to 1.5× the unregulated `β0` and 2× the unregulated `β1`.
pub fn sample_check_regulation<R: Rng>(rng: &mut R, params: &GameParams) -> Regulation {
    let base = crate::solver::solve_unregulated(params);
    Regulation::new(
        rng.gen_range(0.0..1.5) * base.gamma0.beta.max(0.1),
        rng.gen_range(0.0..2.0) * base.gamma1.beta.max(0.2),
    )
}
