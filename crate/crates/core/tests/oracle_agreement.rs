mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regulation_game::oracle::{compare, oracle_spe, GridSpec};
use regulation_game::{GameParams, Regulation, SolvedGame};

fn grid(p: &GameParams, reg: &Regulation, h: f64) -> GridSpec {
    GridSpec::for_game(p, reg, h).unwrap().with_cap(50_000_000)
}

#[test]
fn analytic_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..15 {
        let p = common::game(&mut rng);
        for _ in 0..3 {
            let reg = common::regulation(&mut rng, &p);
            let g = grid(&p, &reg, 0.01);
            let a = SolvedGame::solve(p, reg);
            let o = SolvedGame {
                params: p,
                regulation: reg,
                outcome: oracle_spe(&p, &reg, &g).unwrap(),
            };
            let c = compare(&a, &o, &g).unwrap();
            assert!(
                c.pass,
                "{p:?} {reg:?}\n{:?}\n{:?}\n{c:?}",
                a.outcome, o.outcome
            );
        }
    }
}

#[test]
fn refinement_does_not_lose_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..5 {
        let p = common::game(&mut rng);
        let reg = common::regulation(&mut rng, &p);
        let coarse = grid(&p, &reg, 0.02);
        let fine = GridSpec::new(coarse.gamma_max, 0.01)
            .unwrap()
            .with_cap(50_000_000);
        let uc = oracle_spe(&p, &reg, &coarse).unwrap().u_g;
        let uf = oracle_spe(&p, &reg, &fine).unwrap().u_g;
        let a = SolvedGame::solve(p, reg);
        let tol = compare(
            &a,
            &SolvedGame {
                params: p,
                regulation: reg,
                outcome: a.outcome,
            },
            &fine,
        )
        .unwrap()
        .tol_u;
        assert!(uf >= uc - tol, "{uc} {uf}");
    }
}

#[test]
fn canonical_floor_confirmed_on_fine_grid() {
    let p = GameParams::canonical();
    let reg = Regulation::new(0.0, 0.45);
    let g = GridSpec::new(1.0, 0.005).unwrap();
    let o = oracle_spe(&p, &reg, &g).unwrap();
    assert!((o.gamma0.beta - 0.0).abs() < 1e-12 && (o.gamma1.beta - 0.45).abs() < 1e-9);
    assert!((o.u_g - 0.4125).abs() < 1e-9 && (o.u_d - 0.21).abs() < 1e-9);
}
