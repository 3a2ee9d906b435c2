mod common;

use proptest::prelude::{prop_assert, prop_assume, proptest};
use proptest::strategy::Strategy as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regulation_game::model::{is_negative_definite, own_utility_hessian};
use regulation_game::{
    cost_d, cost_g, is_positive_definite, utilities, validate, CostMatrix, GameParams, Player,
    Strategy,
};

fn matrix() -> impl proptest::strategy::Strategy<Value = CostMatrix> {
    (0.0..3.0f64, 0.0..3.0f64, -0.999..3.0f64)
        .prop_map(|(a, b, t)| CostMatrix::new(a, b, t * (a * b).sqrt()))
}

fn params() -> impl proptest::strategy::Strategy<Value = GameParams> {
    (matrix(), matrix(), 0.0..3.0f64, 0.0..3.0f64, 0.0..=1.0f64)
        .prop_map(|(c0, c1, ra, rb, d)| GameParams::new(c0, c1, ra, rb, d))
}

fn point() -> impl proptest::strategy::Strategy<Value = (f64, f64)> {
    (0.0..5.0f64, 0.0..5.0f64)
}

proptest! {
    #[test]
    fn costs_nonnegative(p in params(), g0 in point(), inc in point()) {
        prop_assume!(validate(&p).is_ok());
        let g0 = Strategy::new(g0.0, g0.1);
        let g1 = Strategy::new(g0.alpha + inc.0, g0.beta + inc.1);
        prop_assert!(cost_g(&p, &g0) >= -1e-12);
        prop_assert!(cost_d(&p, &g1, &g0) >= -1e-12);
    }

    #[test]
    fn accounting_identity(p in params(), g0 in point(), inc in point()) {
        let g0 = Strategy::new(g0.0, g0.1);
        let g1 = Strategy::new(g0.alpha + inc.0, g0.beta + inc.1);
        let (ug, ud) = utilities(&p, &g0, &g1);
        let lhs = ug + ud + cost_g(&p, &g0) + cost_d(&p, &g1, &g0);
        let rev = p.revenue(&g1);
        prop_assert!((lhs - rev).abs() <= 1e-12 * (1.0 + rev.abs()));
    }

    #[test]
    fn generic_scalar_agrees(p in params(), g0 in point(), inc in point()) {
        let q = regulation_game::model::GameParams::<f32>::new(
            regulation_game::model::CostMatrix::new(p.c0.c_aa as f32, p.c0.c_bb as f32, p.c0.c_ab as f32),
            regulation_game::model::CostMatrix::new(p.c1.c_aa as f32, p.c1.c_bb as f32, p.c1.c_ab as f32),
            p.r_a as f32, p.r_b as f32, p.delta as f32,
        );
        let (ug, ud) = utilities(&p, &Strategy::new(g0.0, g0.1), &Strategy::new(g0.0 + inc.0, g0.1 + inc.1));
        let g0f = regulation_game::model::Strategy::new(g0.0 as f32, g0.1 as f32);
        let g1f = regulation_game::model::Strategy::new((g0.0 + inc.0) as f32, (g0.1 + inc.1) as f32);
        let (ugf, udf) = utilities(&q, &g0f, &g1f);
        prop_assert!((ug - ugf as f64).abs() <= 1e-3 * (1.0 + ug.abs()));
        prop_assert!((ud - udf as f64).abs() <= 1e-3 * (1.0 + ud.abs()));
    }
}

/// Both eigenvalues positive, from the roots of `λ² − tr·λ + det`.
fn eigen_pd(c: &CostMatrix) -> bool {
    let tr = c.c_aa + c.c_bb;
    let det = c.c_aa * c.c_bb - c.c_ab * c.c_ab;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (tr - disc) / 2.0 > 0.0
}

#[test]
fn positive_definite_matches_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut agree = 0;
    for _ in 0..1000 {
        let c = CostMatrix::new(
            rng.gen_range(-1.0..2.0),
            rng.gen_range(-1.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        // Skip matrices whose smallest eigenvalue is within rounding of zero.
        let tr = c.c_aa + c.c_bb;
        let disc = (tr * tr - 4.0 * (c.c_aa * c.c_bb - c.c_ab * c.c_ab))
            .max(0.0)
            .sqrt();
        if ((tr - disc) / 2.0).abs() < 1e-9 {
            continue;
        }
        assert_eq!(is_positive_definite(&c), eigen_pd(&c), "{c:?}");
        agree += 1;
    }
    assert!(agree > 990);
}

#[test]
fn concavity_matches_positive_definiteness() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let p = common::game(&mut rng);
        for player in [Player::Generalist, Player::Specialist] {
            let c = p.cost_matrix(player);
            let h = own_utility_hessian(&p, player);
            assert_eq!(
                h,
                [
                    [-2.0 * c.c_aa, -2.0 * c.c_ab],
                    [-2.0 * c.c_ab, -2.0 * c.c_bb]
                ]
            );
            assert_eq!(is_negative_definite(&h), is_positive_definite(c));
        }
    }
}
