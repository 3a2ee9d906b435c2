mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regulation_game::analysis::summarize;
use regulation_game::sweep::{
    classify, find_backfire_onset, run_sweep, sample_interior_game, Class, SweepGrid,
};
use regulation_game::{solve_unregulated, GameParams};

#[test]
fn canonical_line_backfires_between_onset_and_unregulated_safety() {
    let p = GameParams::canonical();
    let records = run_sweep(&p, &SweepGrid::line(0.0, 0.0, 2.5, 0.005), &[0.5]);
    assert_eq!(records.len(), 501);
    let backfire: Vec<f64> = records
        .iter()
        .filter(|r| r.flags.backfire)
        .map(|r| r.regulation.theta_d)
        .collect();
    assert_eq!(backfire.len(), 24);
    assert!(backfire.iter().all(|&t| t > 0.375 && t < 0.5));
    let s = summarize(&records);
    assert_eq!(s.class_counts[&Class::Backfire], 24);

    let onset = find_backfire_onset(&p).unwrap();
    assert!((onset.theta_d_star - 0.375).abs() < 1e-6);
}

#[test]
fn large_floors_cause_exit() {
    let records = run_sweep(
        &GameParams::canonical(),
        &SweepGrid::line(0.0, 0.0, 25.0, 0.5),
        &[0.5],
    );
    let s = summarize(&records);
    assert!(s.class_counts[&Class::Abstain] > 0);
    assert!(records
        .iter()
        .filter(|r| r.flags.abstain)
        .all(|r| !r.flags.backfire && !r.flags.mutualism));
}

#[test]
fn sweep_invariants_on_random_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..20 {
        let p = sample_interior_game(&mut rng);
        let b = solve_unregulated(&p);
        let top = 2.0 * b.gamma1.beta;
        let grid = SweepGrid {
            theta_g_min: 0.0,
            theta_g_max: b.gamma0.beta * 1.5,
            theta_g_step: b.gamma0.beta / 4.0,
            theta_d_min: 0.0,
            theta_d_max: top,
            theta_d_step: top / 40.0,
            constrain_td_ge_tg: false,
        };
        for r in run_sweep(&p, &grid, &[0.3, p.delta, 0.7]) {
            // Classification is a pure function of the stored outcomes.
            assert_eq!(
                classify(&r.outcome, &r.baseline),
                (r.classification, r.flags)
            );
            if r.regulation.theta_d >= r.baseline.final_safety() {
                assert!(!r.flags.backfire, "{r:?}");
            }
            if r.flags.backfire {
                assert_ne!(r.outcome.g_candidate, r.baseline.g_candidate);
            }
        }
    }
}
