//! Subcommand bodies. Each returns what goes to standard output plus an
//! exit status; files named by `--out` or the config are written here.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use regulation_game::analysis::{regime_hulls, Regime, UtilityPoint};
use regulation_game::bargaining::{bargain, bargained_records, outcome_table, BargainResult};
use regulation_game::oracle::{
    compare, oracle_spe, sample_check_game, sample_check_regulation, GridSpec,
};
use regulation_game::sweep::{
    backfire_probe, enumerate_grid, mutualism_probe, run_sweep, sample_interior_game,
    sample_two_sided_game, EpsilonMode, ProbeStatus,
};
use regulation_game::{EquilibriumOutcome, GameParams, Regulation, SolvedGame};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::format::{json_num, num};
use crate::heatmap::{render, Metric};
use crate::records::{read_rows, to_bytes};

/// Result of a subcommand that ran to completion.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
    /// 0, or 1 when a check ran and failed.
    pub status: i32,
}

impl Output {
    fn text(stdout: String) -> Self {
        Self {
            stdout,
            ..Self::default()
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(f);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

fn read_file(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

fn outcome_fields(m: &mut Map<String, Value>, o: &EquilibriumOutcome) {
    m.insert("abstained".into(), Value::Bool(o.abstained));
    m.insert("alpha0".into(), json_num(o.gamma0.alpha));
    m.insert("beta0".into(), json_num(o.gamma0.beta));
    m.insert("alpha1".into(), json_num(o.gamma1.alpha));
    m.insert("beta1".into(), json_num(o.gamma1.beta));
    m.insert("u_g".into(), json_num(o.u_g));
    m.insert("u_d".into(), json_num(o.u_d));
    m.insert(
        "g_candidate".into(),
        Value::String(o.g_candidate.as_str().into()),
    );
    m.insert(
        "d_candidate".into(),
        Value::String(o.d_candidate.as_str().into()),
    );
}

fn outcome_json(o: &EquilibriumOutcome) -> Value {
    let mut m = Map::new();
    outcome_fields(&mut m, o);
    Value::Object(m)
}

fn params_json(p: &GameParams) -> Value {
    let m = |c: &regulation_game::CostMatrix| json!({"c_aa": json_num(c.c_aa), "c_bb": json_num(c.c_bb), "c_ab": json_num(c.c_ab)});
    json!({
        "c0": m(&p.c0),
        "c1": m(&p.c1),
        "r_a": json_num(p.r_a),
        "r_b": json_num(p.r_b),
        "delta": json_num(p.delta),
    })
}

fn regulation_from(theta_g: Option<f64>, theta_d: Option<f64>) -> Result<Regulation, CliError> {
    let reg = Regulation::new(theta_g.unwrap_or(0.0), theta_d.unwrap_or(0.0));
    if !(reg.theta_g.is_finite()
        && reg.theta_d.is_finite()
        && reg.theta_g >= 0.0
        && reg.theta_d >= 0.0)
    {
        return Err(CliError::Usage(
            "floors must be finite and nonnegative".into(),
        ));
    }
    Ok(reg)
}

pub fn solve(
    cfg: &RunConfig,
    theta_g: Option<f64>,
    theta_d: Option<f64>,
) -> Result<Output, CliError> {
    let reg = regulation_from(theta_g, theta_d)?;
    let p = cfg.params();
    let o = regulation_game::solve_spe(&p, &reg);
    let mut m = Map::new();
    m.insert("theta_g".into(), json_num(reg.theta_g));
    m.insert("theta_d".into(), json_num(reg.theta_d));
    m.insert("delta".into(), json_num(p.delta));
    outcome_fields(&mut m, &o);
    Ok(Output::text(pretty(&Value::Object(m))))
}

/// Bytes of the sweep CSV for the configured grid and shares.
pub fn sweep_csv(cfg: &RunConfig) -> Vec<u8> {
    to_bytes(&run_sweep(
        &cfg.params(),
        &cfg.sweep_grid(),
        &cfg.sweep_deltas(),
    ))
}

fn emit(bytes: Vec<u8>, out: Option<PathBuf>, mut output: Output) -> Result<Output, CliError> {
    match out {
        Some(path) => write_file(&path, &bytes)?,
        None => output.stdout = String::from_utf8(bytes).expect("CSV is UTF-8"),
    }
    Ok(output)
}

pub fn sweep(cfg: &RunConfig, out: Option<PathBuf>) -> Result<Output, CliError> {
    let mut output = Output::default();
    if enumerate_grid(&cfg.sweep_grid()).is_empty() {
        output
            .warnings
            .push("grid has no cells; writing header only".into());
    }
    emit(
        sweep_csv(cfg),
        out.or_else(|| cfg.output.sweep_csv.clone()),
        output,
    )
}

fn bargain_json(criterion: &str, reg: &Regulation, r: &BargainResult) -> Value {
    let mut m = Map::new();
    m.insert("criterion".into(), Value::String(criterion.into()));
    m.insert("theta_g".into(), json_num(reg.theta_g));
    m.insert("theta_d".into(), json_num(reg.theta_d));
    m.insert("viable".into(), Value::Bool(r.viable));
    m.insert("delta_star".into(), json_num(r.delta_star));
    m.insert("score".into(), json_num(r.score));
    m.insert("outcome".into(), outcome_json(&r.outcome));
    Value::Object(m)
}

/// Bargains at one regulation; with an output path, also bargains every
/// grid cell and writes the records as CSV.
pub fn bargain_cmd(
    cfg: &RunConfig,
    criterion: Option<&str>,
    theta_g: Option<f64>,
    theta_d: Option<f64>,
    out: Option<PathBuf>,
) -> Result<Output, CliError> {
    let spec = cfg.bargain_spec(criterion)?;
    let reg = regulation_from(theta_g, theta_d)?;
    let p = cfg.params();
    let bad = |e: regulation_game::bargaining::BargainError| CliError::Config(e.to_string());
    let single = bargain(&p, &reg, &spec).map_err(bad)?;
    let mut doc = bargain_json(spec.criterion.as_str(), &reg, &single);

    let mut output = Output::default();
    if let Some(path) = out.or_else(|| cfg.output.bargain_csv.clone()) {
        let cells = enumerate_grid(&cfg.sweep_grid());
        let table = outcome_table(&p, &cells, &spec.delta_values);
        let baseline = bargain(&p, &Regulation::none(), &spec).map_err(bad)?;
        let records = bargained_records(
            spec.criterion,
            &cells,
            &spec.delta_values,
            &table,
            &baseline,
        );
        write_file(&path, &to_bytes(&records))?;
        if let Value::Object(m) = &mut doc {
            m.insert("cells".into(), json!(records.len()));
            m.insert("solved_games".into(), json!(table.len()));
            m.insert(
                "mutualism_cells".into(),
                json!(records.iter().filter(|r| r.flags.mutualism).count()),
            );
            m.insert(
                "backfire_cells".into(),
                json!(records.iter().filter(|r| r.flags.backfire).count()),
            );
        }
    }
    output.stdout = pretty(&doc);
    Ok(output)
}

pub fn probe(
    cfg: &RunConfig,
    theorem: u8,
    epsilon: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
) -> Result<Output, CliError> {
    if theorem != 1 && theorem != 2 {
        return Err(CliError::Usage(format!(
            "unknown theorem {theorem}; expected 1 or 2"
        )));
    }
    let factor = epsilon.unwrap_or(1e-3);
    if !(factor >= 0.0 && factor.is_finite()) {
        return Err(CliError::Usage(
            "epsilon must be finite and nonnegative".into(),
        ));
    }
    let mode = EpsilonMode::RelativeToBeta1(factor);
    let seed = seed.unwrap_or(cfg.seed);
    let games: Vec<GameParams> = match trials {
        None => vec![cfg.params()],
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    if theorem == 1 {
                        sample_interior_game(&mut rng)
                    } else {
                        sample_two_sided_game(&mut rng)
                    }
                })
                .collect()
        }
    };
    let results: Vec<(ProbeStatus, Value)> = games
        .par_iter()
        .map(|p| {
            if theorem == 1 {
                let r = backfire_probe(p, mode);
                let named: Vec<Value> = r
                    .named
                    .iter()
                    .map(|c| json!({"theta_d": json_num(c.theta_d), "beta1": json_num(c.beta1), "backfire": c.backfire}))
                    .collect();
                let v = json!({
                    "status": r.status.as_str(),
                    "params": params_json(p),
                    "epsilon": json_num(r.epsilon),
                    "beta0_a": json_num(r.beta0_a),
                    "beta1_a": json_num(r.beta1_a),
                    "named": named,
                    "scan_cells": r.scan_cells,
                    "scan_backfires": r.scan_backfires,
                    "first_backfire": r.first_backfire.map(json_num),
                });
                (r.status, v)
            } else {
                let r = mutualism_probe(p, mode);
                let v = json!({
                    "status": r.status.as_str(),
                    "params": params_json(p),
                    "epsilon": json_num(r.epsilon),
                    "beta0_a": json_num(r.beta0_a),
                    "beta1_a": json_num(r.beta1_a),
                    "theta_g": json_num(r.regulation.theta_g),
                    "theta_d": json_num(r.regulation.theta_d),
                    "d_ug": json_num(r.d_ug),
                    "d_ud": json_num(r.d_ud),
                    "regulated": outcome_json(&r.regulated),
                });
                (r.status, v)
            }
        })
        .collect();
    let count = |s: ProbeStatus| results.iter().filter(|r| r.0 == s).count();
    let failed = count(ProbeStatus::Fail);
    let doc = json!({
        "theorem": theorem,
        "epsilon_factor": json_num(factor),
        "seed": seed,
        "trials": results.len(),
        "passed": count(ProbeStatus::Pass),
        "failed": failed,
        "hypothesis_not_met": count(ProbeStatus::HypothesisNotMet),
        "degenerate": count(ProbeStatus::Degenerate),
        "results": results.into_iter().enumerate().map(|(i, (_, mut v))| {
            v.as_object_mut().unwrap().insert("trial".into(), json!(i));
            v
        }).collect::<Vec<_>>(),
    });
    Ok(Output {
        stdout: pretty(&doc),
        warnings: Vec::new(),
        status: i32::from(failed > 0),
    })
}

/// Regulations per sampled game in an oracle check.
pub const CHECKS_PER_GAME: usize = 3;

/// Analytic-vs-grid comparisons. With a floor flag, checks the configured
/// game at that regulation; otherwise `trials` seeded random games with
/// three regulations each.
pub fn oracle_check(
    cfg: &RunConfig,
    theta_g: Option<f64>,
    theta_d: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
) -> Result<Output, CliError> {
    let seed = seed.unwrap_or(cfg.seed);
    let cases: Vec<(GameParams, Regulation)> = if theta_g.is_some() || theta_d.is_some() {
        vec![(cfg.params(), regulation_from(theta_g, theta_d)?)]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = Vec::new();
        for _ in 0..trials.unwrap_or(20) {
            let p = sample_check_game(&mut rng);
            for _ in 0..CHECKS_PER_GAME {
                v.push((p, sample_check_regulation(&mut rng, &p)));
            }
        }
        v
    };
    let oc = &cfg.oracle;
    let results: Vec<Result<Value, CliError>> = cases
        .par_iter()
        .map(|(p, reg)| {
            let grid = match oc.gamma_max {
                Some(g) => GridSpec::new(g, oc.step),
                None => GridSpec::for_game(p, reg, oc.step),
            }
            .map_err(|e| CliError::Config(format!("oracle: {e}")))?
            .with_cap(oc.cap);
            let analytic = SolvedGame::solve(*p, *reg);
            let outcome =
                oracle_spe(p, reg, &grid).map_err(|e| CliError::Config(format!("oracle: {e}")))?;
            let oracle = SolvedGame {
                params: *p,
                regulation: *reg,
                outcome,
            };
            let c = compare(&analytic, &oracle, &grid).expect("same game");
            Ok(json!({
                "pass": c.pass,
                "params": params_json(p),
                "theta_g": json_num(reg.theta_g),
                "theta_d": json_num(reg.theta_d),
                "step": json_num(grid.step),
                "gamma_max": json_num(grid.gamma_max),
                "tol_u": json_num(c.tol_u),
                "du_g": json_num(c.du_g),
                "du_d": json_num(c.du_d),
                "gamma0_distance": json_num(c.gamma0_distance),
                "gamma1_distance": json_num(c.gamma1_distance),
                "strategies_close": c.strategies_close,
                "analytic": outcome_json(&analytic.outcome),
                "oracle": outcome_json(&oracle.outcome),
            }))
        })
        .collect();
    let results: Vec<Value> = results.into_iter().collect::<Result<_, _>>()?;
    let passed = results
        .iter()
        .filter(|r| r["pass"] == Value::Bool(true))
        .count();
    let failed = results.len() - passed;
    let doc = json!({
        "seed": seed,
        "checks": results.len(),
        "passed": passed,
        "failed": failed,
        "results": results,
    });
    Ok(Output {
        stdout: pretty(&doc),
        warnings: Vec::new(),
        status: i32::from(failed > 0),
    })
}

pub const PARETO_HEADER: &str = "regime,u_g,u_d,theta_g,theta_d,delta";

pub fn pareto(input: &Path, out: Option<PathBuf>, cfg: &RunConfig) -> Result<Output, CliError> {
    let rows = read_rows(read_file(input)?)?;
    let points: Vec<UtilityPoint> = rows
        .iter()
        .map(|r| UtilityPoint {
            u_g: r.u_g,
            u_d: r.u_d,
            theta_g: r.theta_g,
            theta_d: r.theta_d,
            delta: r.delta,
        })
        .collect();
    let hulls = regime_hulls(&points);
    let mut s = String::from(PARETO_HEADER);
    s.push('\n');
    for regime in Regime::ALL {
        for v in hulls.get(regime) {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                regime.as_str(),
                num(v.u_g),
                num(v.u_d),
                num(v.theta_g),
                num(v.theta_d),
                num(v.delta)
            ));
        }
    }
    let output = Output {
        warnings: hulls
            .empty_regimes()
            .iter()
            .map(|r| format!("regime {} has no points", r.as_str()))
            .collect(),
        ..Output::default()
    };
    emit(
        s.into_bytes(),
        out.or_else(|| cfg.output.pareto_csv.clone()),
        output,
    )
}

pub fn heatmap(
    input: &Path,
    metric: &str,
    out: Option<PathBuf>,
    cfg: &RunConfig,
) -> Result<Output, CliError> {
    let metric = Metric::parse(metric)?;
    let rows = read_rows(read_file(input)?)?;
    let (svg, skipped) = render(&rows, metric);
    let mut output = Output::default();
    if skipped > 0 {
        output.warnings.push(format!(
            "{skipped} rows with other delta values not drawn (delta = {})",
            num(rows[0].delta)
        ));
    }
    emit(
        svg.into_bytes(),
        out.or_else(|| cfg.output.heatmap_svg.clone()),
        output,
    )
}
