use proptest::prelude::{prop_assert_eq, proptest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regulation_game::analysis::{pareto_hull, UtilityPoint};

/// Points that uniquely maximise `u_g + u·u_d` for a nondegenerate range of
/// `u = tan t ∈ [0, ∞]`, in `u_g`-descending order. Quadratic time.
fn frontier_oracle(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    let mut out: Vec<(f64, f64)> = pts
        .iter()
        .filter(|p| {
            let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
            for q in pts.iter().filter(|q| q != p) {
                let (dg, dd) = (p.0 - q.0, p.1 - q.1);
                if dd > 0.0 {
                    lo = lo.max(-dg / dd);
                } else if dd < 0.0 {
                    hi = hi.min(dg / -dd);
                } else if dg < 0.0 {
                    return false;
                }
            }
            hi > lo
        })
        .copied()
        .collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}

fn hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let pts: Vec<UtilityPoint> = points
        .iter()
        .map(|&(g, d)| UtilityPoint::new(g, d))
        .collect();
    pareto_hull(&pts)
        .unwrap()
        .iter()
        .map(|p| (p.u_g, p.u_d))
        .collect()
}

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    match rng.gen_range(0..3) {
        0 => (0..n)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
        // Near a quarter circle, so most points are frontier candidates.
        1 => (0..n)
            .map(|_| {
                let t: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
                let r = 1.0 - rng.gen_range(0.0..0.05);
                (r * t.cos(), r * t.sin())
            })
            .collect(),
        // Coarse lattice: exact ties and duplicates.
        _ => (0..n)
            .map(|_| (rng.gen_range(0..6) as f64, rng.gen_range(0..6) as f64))
            .collect(),
    }
}

#[test]
fn matches_quadratic_oracle_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..60);
        let pts = random_set(&mut rng, n);
        assert_eq!(hull(&pts), frontier_oracle(&pts), "{pts:?}");
    }
}

#[test]
fn matches_quadratic_oracle_on_large_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let pts: Vec<(f64, f64)> = (0..10_000)
        .map(|_| {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
            let r = 1.0 - rng.gen_range(0.0..0.5f64).powi(3);
            (r * t.cos(), r * t.sin())
        })
        .collect();
    let h = hull(&pts);
    assert!(h.len() > 10);
    assert_eq!(h, frontier_oracle(&pts));
}

#[test]
fn frontier_example() {
    let pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.7, 0.7)];
    assert_eq!(hull(&pts), vec![(1.0, 0.0), (0.7, 0.7), (0.0, 1.0)]);
}

proptest! {
    #[test]
    fn vertices_are_input_points(pts in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..40)) {
        for v in hull(&pts) {
            prop_assert_eq!(pts.contains(&v), true);
        }
    }

    #[test]
    fn dominated_insertion_is_idempotent(
        pts in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..40),
        pick in 0usize..40,
        shrink in (0.0..2.0f64, 0.0..2.0f64),
    ) {
        let base = pts[pick % pts.len()];
        let mut more = pts.clone();
        more.push((base.0 - shrink.0, base.1 - shrink.1));
        prop_assert_eq!(hull(&more), hull(&pts));
    }
}
