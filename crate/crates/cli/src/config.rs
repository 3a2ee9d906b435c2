//! JSON run configuration. Every section is optional and defaults to the
//! canonical game; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use regulation_game::bargaining::{default_deltas, BargainSpec, Criterion};
use regulation_game::oracle::DEFAULT_CAP;
use regulation_game::sweep::SweepGrid;
use regulation_game::{validate, CostMatrix, GameParams};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub c_aa: f64,
    pub c_bb: f64,
    pub c_ab: f64,
}

impl MatrixConfig {
    fn identity() -> Self {
        Self {
            c_aa: 1.0,
            c_bb: 1.0,
            c_ab: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GameConfig {
    pub c0: MatrixConfig,
    pub c1: MatrixConfig,
    pub r_a: f64,
    pub r_b: f64,
    pub delta: f64,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            c0: MatrixConfig::identity(),
            c1: MatrixConfig::identity(),
            r_a: 1.0,
            r_b: 1.0,
            delta: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub theta_g: AxisConfig,
    pub theta_d: AxisConfig,
    pub constrain_td_ge_tg: bool,
    /// Shares solved per cell; `null` uses the game's `delta` alone.
    pub deltas: Option<Vec<f64>>,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = SweepGrid::bargaining_default();
        Self {
            theta_g: AxisConfig {
                min: g.theta_g_min,
                max: g.theta_g_max,
                step: g.theta_g_step,
            },
            theta_d: AxisConfig {
                min: g.theta_d_min,
                max: g.theta_d_max,
                step: g.theta_d_step,
            },
            constrain_td_ge_tg: g.constrain_td_ge_tg,
            deltas: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub step: f64,
    /// Box size; `null` sizes the box to each checked game.
    pub gamma_max: Option<f64>,
    pub cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            step: 0.005,
            gamma_max: None,
            cap: 25 * DEFAULT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BargainConfig {
    pub criterion: String,
    pub delta_values: Option<Vec<f64>>,
}

impl Default for BargainConfig {
    fn default() -> Self {
        Self {
            criterion: "utilitarian".into(),
            delta_values: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub sweep_csv: Option<PathBuf>,
    pub bargain_csv: Option<PathBuf>,
    pub pareto_csv: Option<PathBuf>,
    pub heatmap_svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub game: GameConfig,
    pub grid: GridConfig,
    pub oracle: OracleConfig,
    pub bargaining: BargainConfig,
    pub output: OutputConfig,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Reads `path`, or the defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                Self::parse(&text).map_err(|e| match e {
                    CliError::Config(m) => CliError::Config(format!("{}: {m}", p.display())),
                    other => other,
                })
            }
        }
    }

    fn check(&self) -> Result<(), CliError> {
        let report = validate(&self.params());
        if !report.is_ok() {
            return Err(CliError::Config(format!("game: {report}")));
        }
        self.sweep_grid()
            .validate()
            .map_err(|e| CliError::Config(format!("grid: {e}")))?;
        if let Some(d) = &self.grid.deltas {
            if d.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(CliError::Config(
                    "grid.deltas: values must lie in [0, 1]".into(),
                ));
            }
        }
        if !(self.oracle.step > 0.0 && self.oracle.step.is_finite()) {
            return Err(CliError::Config("oracle.step must be positive".into()));
        }
        self.bargain_spec(None)?;
        Ok(())
    }

    pub fn params(&self) -> GameParams {
        let g = &self.game;
        let m = |c: &MatrixConfig| CostMatrix::new(c.c_aa, c.c_bb, c.c_ab);
        GameParams::new(m(&g.c0), m(&g.c1), g.r_a, g.r_b, g.delta)
    }

    pub fn sweep_grid(&self) -> SweepGrid {
        let g = &self.grid;
        SweepGrid {
            theta_g_min: g.theta_g.min,
            theta_g_max: g.theta_g.max,
            theta_g_step: g.theta_g.step,
            theta_d_min: g.theta_d.min,
            theta_d_max: g.theta_d.max,
            theta_d_step: g.theta_d.step,
            constrain_td_ge_tg: g.constrain_td_ge_tg,
        }
    }

    pub fn sweep_deltas(&self) -> Vec<f64> {
        self.grid
            .deltas
            .clone()
            .unwrap_or_else(|| vec![self.game.delta])
    }

    /// Bargaining spec with the criterion overridden by `criterion` if given.
    pub fn bargain_spec(&self, criterion: Option<&str>) -> Result<BargainSpec, CliError> {
        let name = criterion.unwrap_or(&self.bargaining.criterion);
        let criterion = Criterion::parse(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown criterion {name:?}; expected utilitarian, nash or egalitarian"
            ))
        })?;
        let spec = BargainSpec {
            criterion,
            delta_values: self
                .bargaining
                .delta_values
                .clone()
                .unwrap_or_else(default_deltas),
        };
        spec.validate()
            .map_err(|e| CliError::Config(format!("bargaining.delta_values: {e}")))?;
        Ok(spec)
    }
}
