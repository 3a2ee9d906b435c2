//! Choice of the revenue share `δ` by bargaining over a grid.

use std::fmt;

use rayon::prelude::*;

use crate::solver::{solve_spe, EquilibriumOutcome};
use crate::sweep::{enumerate_grid, SweepGrid, SweepRecord};
use crate::tolerance::TIE;
use crate::{GameParams, Regulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// Sum of utilities.
    Utilitarian,
    /// Product of utilities, zero on exit.
    Nash,
    /// Smaller of the two utilities.
    Egalitarian,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [
        Criterion::Utilitarian,
        Criterion::Nash,
        Criterion::Egalitarian,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::Utilitarian => "utilitarian",
            Criterion::Nash => "nash",
            Criterion::Egalitarian => "egalitarian",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn score(&self, o: &EquilibriumOutcome) -> f64 {
        if o.abstained {
            return 0.0;
        }
        match self {
            Criterion::Utilitarian => o.u_g + o.u_d,
            Criterion::Nash => o.u_g * o.u_d,
            Criterion::Egalitarian => o.u_g.min(o.u_d),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargainSpec {
    pub criterion: Criterion,
    /// Strictly increasing shares in `(0, 1)`.
    pub delta_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BargainError {
    #[error("delta values must be nonempty")]
    Empty,
    #[error("delta value {0} outside (0, 1)")]
    OutOfRange(f64),
    #[error("delta values must be strictly increasing")]
    NotIncreasing,
}

/// `0.01, 0.02, …, 0.98`: 98 shares.
pub fn default_deltas() -> Vec<f64> {
    (1..=98).map(|i| i as f64 / 100.0).collect()
}

impl BargainSpec {
    pub fn new(criterion: Criterion) -> Self {
        Self {
            criterion,
            delta_values: default_deltas(),
        }
    }

    pub fn validate(&self) -> Result<(), BargainError> {
        if self.delta_values.is_empty() {
            return Err(BargainError::Empty);
        }
        if let Some(&d) = self.delta_values.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
            return Err(BargainError::OutOfRange(d));
        }
        if self.delta_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(BargainError::NotIncreasing);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargainResult {
    pub delta_star: f64,
    pub outcome: EquilibriumOutcome,
    pub score: f64,
    /// False when every share leads to exit.
    pub viable: bool,
    /// `(δ, score)` for every share on the grid.
    pub scores: Vec<(f64, f64)>,
}

/// Argmax of the criterion over precomputed outcomes, ties toward `δ`
/// closest to 1/2, then the smaller `δ`.
pub fn select_delta(
    criterion: Criterion,
    deltas: &[f64],
    outcomes: &[EquilibriumOutcome],
) -> BargainResult {
    let scores: Vec<(f64, f64)> = deltas
        .iter()
        .zip(outcomes)
        .map(|(&d, o)| (d, criterion.score(o)))
        .collect();
    let mut best = 0;
    for (i, &(d, s)) in scores.iter().enumerate().skip(1) {
        let (bd, bs) = scores[best];
        let better = if s > bs + TIE {
            true
        } else if s < bs - TIE {
            false
        } else {
            let (dist, bdist) = ((d - 0.5).abs(), (bd - 0.5).abs());
            dist < bdist - TIE || ((dist - bdist).abs() <= TIE && d < bd)
        };
        if better {
            best = i;
        }
    }
    let viable = outcomes.iter().any(|o| !o.abstained);
    let outcome = if viable {
        outcomes[best]
    } else {
        EquilibriumOutcome::abstain()
    };
    BargainResult {
        delta_star: scores[best].0,
        score: if viable { scores[best].1 } else { 0.0 },
        outcome,
        viable,
        scores,
    }
}

/// Solves the game at every share on the spec's grid and picks the best.
pub fn bargain(
    params_base: &GameParams,
    reg: &Regulation,
    spec: &BargainSpec,
) -> Result<BargainResult, BargainError> {
    spec.validate()?;
    let outcomes: Vec<EquilibriumOutcome> = spec
        .delta_values
        .iter()
        .map(|&d| solve_spe(&params_base.with_delta(d), reg))
        .collect();
    Ok(select_delta(spec.criterion, &spec.delta_values, &outcomes))
}

/// Outcomes for every `(cell, δ)`, cell-major.
pub fn outcome_table(
    params_base: &GameParams,
    cells: &[Regulation],
    deltas: &[f64],
) -> Vec<EquilibriumOutcome> {
    let m = deltas.len();
    (0..cells.len() * m)
        .into_par_iter()
        .map(|idx| solve_spe(&params_base.with_delta(deltas[idx % m]), &cells[idx / m]))
        .collect()
}

/// Bargained records from a table built by [`outcome_table`]. The baseline
/// of every cell is the bargained unregulated game.
pub fn bargained_records(
    criterion: Criterion,
    cells: &[Regulation],
    deltas: &[f64],
    table: &[EquilibriumOutcome],
    baseline: &BargainResult,
) -> Vec<SweepRecord> {
    let m = deltas.len();
    cells
        .iter()
        .enumerate()
        .map(|(i, reg)| {
            let r = select_delta(criterion, deltas, &table[i * m..(i + 1) * m]);
            SweepRecord::new(*reg, r.delta_star, r.outcome, baseline.outcome)
        })
        .collect()
}

/// One bargained record per grid cell.
pub fn bargained_sweep(
    params_base: &GameParams,
    grid: &SweepGrid,
    spec: &BargainSpec,
) -> Result<Vec<SweepRecord>, BargainError> {
    spec.validate()?;
    let cells = enumerate_grid(grid);
    let table = outcome_table(params_base, &cells, &spec.delta_values);
    let baseline = bargain(params_base, &Regulation::none(), spec)?;
    Ok(bargained_records(
        spec.criterion,
        &cells,
        &spec.delta_values,
        &table,
        &baseline,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let d = default_deltas();
        assert_eq!(d.len(), 98);
        assert_eq!(d[0], 0.01);
        assert_eq!(d[49], 0.5);
        assert!(BargainSpec::new(Criterion::Nash).validate().is_ok());
    }

    #[test]
    fn invalid_specs() {
        let mut s = BargainSpec::new(Criterion::Nash);
        s.delta_values = vec![0.2, 0.1];
        assert_eq!(s.validate(), Err(BargainError::NotIncreasing));
        s.delta_values = vec![0.0, 0.5];
        assert_eq!(s.validate(), Err(BargainError::OutOfRange(0.0)));
        s.delta_values.clear();
        assert_eq!(s.validate(), Err(BargainError::Empty));
    }

    #[test]
    fn nash_scores_zero_with_zero_utility() {
        let mut o = EquilibriumOutcome::abstain();
        o.abstained = false;
        o.u_g = 0.3;
        o.u_d = 0.0;
        assert_eq!(Criterion::Nash.score(&o), 0.0);
    }

    #[test]
    fn ties_go_toward_one_half() {
        let mut a = EquilibriumOutcome::abstain();
        a.abstained = false;
        a.u_g = 1.0;
        a.u_d = 1.0;
        let r = select_delta(Criterion::Utilitarian, &[0.3, 0.6, 0.7], &[a, a, a]);
        assert_eq!(r.delta_star, 0.6);
        let r = select_delta(Criterion::Utilitarian, &[0.4, 0.6], &[a, a]);
        assert_eq!(r.delta_star, 0.4);
    }

    #[test]
    fn all_exit_is_not_viable() {
        let spec = BargainSpec {
            criterion: Criterion::Egalitarian,
            delta_values: vec![0.3, 0.5],
        };
        let r = bargain(&GameParams::canonical(), &Regulation::new(0.0, 10.0), &spec).unwrap();
        assert!(!r.viable && r.outcome.abstained && r.score == 0.0);
    }

    #[test]
    fn utilitarian_at_paired_floors_peaks_at_half() {
        let r = bargain(
            &GameParams::canonical(),
            &Regulation::new(0.5, 1.0),
            &BargainSpec::new(Criterion::Utilitarian),
        )
        .unwrap();
        assert_eq!(r.delta_star, 0.5);
        assert!((r.score - 0.875).abs() < 1e-12);
    }
}
