//! Numerical probes for the backfiring and mutualism results.

use rand::Rng;

use super::SweepRecord;
use crate::model::{interior_condition, two_sided_condition, Player};
use crate::solver::{solve_spe, EquilibriumOutcome};
use crate::tolerance::CLASS;
use crate::{CostMatrix, GameParams, Regulation};

/// How the probe offset `ε` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonMode {
    Absolute(f64),
    /// `ε = factor · β1^A`.
    RelativeToBeta1(f64),
}

impl EpsilonMode {
    pub fn resolve(&self, beta1: f64) -> f64 {
        match *self {
            EpsilonMode::Absolute(e) => e,
            EpsilonMode::RelativeToBeta1(f) => f * beta1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeStatus {
    Pass,
    Fail,
    HypothesisNotMet,
    /// `ε = 0`: the probed regulation coincides with no regulation.
    Degenerate,
}

impl ProbeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeStatus::Pass => "pass",
            ProbeStatus::Fail => "fail",
            ProbeStatus::HypothesisNotMet => "hypothesis not met",
            ProbeStatus::Degenerate => "degenerate",
        }
    }
}

/// A probed floor `θ_D` at `θ_G = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeCell {
    pub theta_d: f64,
    pub beta1: f64,
    pub backfire: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackfireReport {
    pub status: ProbeStatus,
    pub epsilon: f64,
    pub beta0_a: f64,
    pub beta1_a: f64,
    /// `θ_D = β0^A − ε` and `θ_D = β1^A − ε`, when positive.
    pub named: Vec<ProbeCell>,
    /// Number of backfiring floors `θ_D = kε < β1^A`.
    pub scan_backfires: usize,
    pub scan_cells: usize,
    pub first_backfire: Option<f64>,
}

/// Searches `θ_G = 0`, `θ_D < β1^A` for a floor that lowers final safety.
///
/// Evaluates `θ_D = β0^A − ε` and `θ_D = β1^A − ε`, then scans `θ_D = kε`.
/// Passes iff any probed floor backfires.
pub fn backfire_probe(params: &GameParams, epsilon: EpsilonMode) -> BackfireReport {
    let hypothesis = [Player::Generalist, Player::Specialist]
        .iter()
        .all(|&p| interior_condition(params, p) == Ok(true));
    let baseline = solve_spe(params, &Regulation::none());
    let (beta0_a, beta1_a) = (baseline.gamma0.beta, baseline.gamma1.beta);
    let eps = epsilon.resolve(beta1_a);
    let mut report = BackfireReport {
        status: ProbeStatus::HypothesisNotMet,
        epsilon: eps,
        beta0_a,
        beta1_a,
        named: Vec::new(),
        scan_backfires: 0,
        scan_cells: 0,
        first_backfire: None,
    };
    if !hypothesis {
        return report;
    }
    if !(eps > 0.0) {
        report.status = ProbeStatus::Degenerate;
        return report;
    }
    let cell = |td: f64| {
        let reg = Regulation::new(0.0, td);
        let r = SweepRecord::new(reg, params.delta, solve_spe(params, &reg), baseline);
        ProbeCell {
            theta_d: td,
            beta1: r.outcome.final_safety(),
            backfire: r.flags.backfire,
        }
    };
    for td in [beta0_a - eps, beta1_a - eps] {
        if td > 0.0 {
            report.named.push(cell(td));
        }
    }
    let mut k = 1usize;
    while (k as f64) * eps < beta1_a {
        let c = cell(k as f64 * eps);
        report.scan_cells += 1;
        if c.backfire {
            report.scan_backfires += 1;
            report.first_backfire.get_or_insert(c.theta_d);
        }
        k += 1;
    }
    let any = report.scan_backfires > 0 || report.named.iter().any(|c| c.backfire);
    report.status = if any {
        ProbeStatus::Pass
    } else {
        ProbeStatus::Fail
    };
    report
}

#[derive(Debug, Clone, PartialEq)]
pub struct MutualismReport {
    pub status: ProbeStatus,
    pub epsilon: f64,
    pub beta0_a: f64,
    pub beta1_a: f64,
    pub regulation: Regulation,
    pub baseline: EquilibriumOutcome,
    pub regulated: EquilibriumOutcome,
    pub d_ug: f64,
    pub d_ud: f64,
}

/// Solves the game at `(β0^A + ε, β1^A + 2ε)`; passes iff both utilities
/// rise above the unregulated ones by more than `ε_class`.
pub fn mutualism_probe(params: &GameParams, epsilon: EpsilonMode) -> MutualismReport {
    let baseline = solve_spe(params, &Regulation::none());
    let (beta0_a, beta1_a) = (baseline.gamma0.beta, baseline.gamma1.beta);
    let eps = epsilon.resolve(beta1_a);
    let regulation = Regulation::new(beta0_a + eps, beta1_a + 2.0 * eps);
    let mut report = MutualismReport {
        status: ProbeStatus::HypothesisNotMet,
        epsilon: eps,
        beta0_a,
        beta1_a,
        regulation,
        baseline,
        regulated: baseline,
        d_ug: 0.0,
        d_ud: 0.0,
    };
    if two_sided_condition(params) != Ok(true) {
        return report;
    }
    let regulated = solve_spe(params, &regulation);
    report.regulated = regulated;
    report.d_ug = regulated.u_g - baseline.u_g;
    report.d_ud = regulated.u_d - baseline.u_d;
    report.status = if eps == 0.0 {
        ProbeStatus::Degenerate
    } else if !regulated.abstained && report.d_ug > CLASS && report.d_ud > CLASS {
        ProbeStatus::Pass
    } else {
        ProbeStatus::Fail
    };
    report
}

/// `min(sqrt(c_aa·c_bb), c_aa·r_b/r_a, c_bb·r_a/r_b)` for positive weights.
fn cross_bound(c_aa: f64, c_bb: f64, r_a: f64, r_b: f64) -> f64 {
    (c_aa * c_bb)
        .sqrt()
        .min(c_aa * r_b / r_a)
        .min(c_bb * r_a / r_b)
}

/// Diagonals and revenue weights uniform on `[0.5, 2]`, `δ` uniform on
/// `[0.2, 0.8]`; cross-terms drawn by `cross`.
fn sample_game<R: Rng>(
    rng: &mut R,
    cross: impl Fn(&mut R, f64, f64, f64, f64) -> f64,
) -> GameParams {
    let r_a = rng.gen_range(0.5..=2.0);
    let r_b = rng.gen_range(0.5..=2.0);
    let matrix = |rng: &mut R| {
        let c_aa = rng.gen_range(0.5..=2.0);
        let c_bb = rng.gen_range(0.5..=2.0);
        let c_ab = cross(rng, c_aa, c_bb, r_a, r_b);
        CostMatrix::new(c_aa, c_bb, c_ab)
    };
    let c0 = matrix(rng);
    let c1 = matrix(rng);
    let delta = rng.gen_range(0.2..=0.8);
    GameParams::new(c0, c1, r_a, r_b, delta)
}

/// Random game meeting the one-sided interior condition for both players:
/// `c_ab` uniform on `(−0.9·sqrt(c_aa·c_bb), 0.9·bound)`.
pub fn sample_interior_game<R: Rng>(rng: &mut R) -> GameParams {
    sample_game(rng, |rng, c_aa, c_bb, r_a, r_b| {
        let lo = -0.9 * (c_aa * c_bb).sqrt();
        let hi = 0.9 * cross_bound(c_aa, c_bb, r_a, r_b);
        rng.gen_range(lo..hi)
    })
}

/// Random game meeting the two-sided condition: `c_ab` uniform on
/// `(−0.9·bound, 0.9·bound)`.
pub fn sample_two_sided_game<R: Rng>(rng: &mut R) -> GameParams {
    sample_game(rng, |rng, c_aa, c_bb, r_a, r_b| {
        let b = 0.9 * cross_bound(c_aa, c_bb, r_a, r_b);
        rng.gen_range(-b..b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_backfire_probe() {
        let r = backfire_probe(&GameParams::canonical(), EpsilonMode::Absolute(1e-3));
        assert_eq!(r.status, ProbeStatus::Pass);
        // θ_D = kε for k = 376..=499 backfire.
        assert_eq!(r.scan_backfires, 124);
        let named: Vec<bool> = r.named.iter().map(|c| c.backfire).collect();
        assert_eq!(named, vec![false, true]);
    }

    #[test]
    fn full_share_fails_hypothesis() {
        let p = GameParams::canonical().with_delta(1.0);
        assert_eq!(
            backfire_probe(&p, EpsilonMode::Absolute(1e-3)).status,
            ProbeStatus::HypothesisNotMet
        );
    }

    #[test]
    fn canonical_mutualism_probe() {
        let r = mutualism_probe(&GameParams::canonical(), EpsilonMode::Absolute(0.01));
        assert_eq!(r.status, ProbeStatus::Pass);
        assert!((r.regulated.u_g - 0.3799).abs() < 1e-12);
        assert!((r.regulated.u_d - 0.3799).abs() < 1e-12);
        assert!((r.d_ug - 0.0049).abs() < 1e-12 && (r.d_ud - 0.0049).abs() < 1e-12);
    }

    #[test]
    fn zero_epsilon_is_degenerate() {
        let r = mutualism_probe(&GameParams::canonical(), EpsilonMode::Absolute(0.0));
        assert_eq!(r.status, ProbeStatus::Degenerate);
        assert!(r.d_ug.abs() < 1e-12 && r.d_ud.abs() < 1e-12);
    }

    #[test]
    fn samplers_meet_their_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = sample_interior_game(&mut rng);
            assert!(crate::validate(&p).is_ok());
            assert_eq!(interior_condition(&p, Player::Generalist), Ok(true));
            assert_eq!(interior_condition(&p, Player::Specialist), Ok(true));
            let p = sample_two_sided_game(&mut rng);
            assert_eq!(two_sided_condition(&p), Ok(true));
        }
    }
}
