use proptest::prelude::{prop_assert, proptest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regulation_game::poly::{real_roots, Polynomial};

fn separated_roots(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut r: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        r.sort_by(f64::total_cmp);
        if r.windows(2).all(|w| w[1] - w[0] > 0.05) {
            return r;
        }
    }
}

#[test]
fn recovers_planted_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..5000 {
        let n = rng.gen_range(1..=4);
        let planted = separated_roots(&mut rng, n);
        let lead = rng.gen_range(0.1..10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let p = Polynomial::from_roots(&planted).scale(lead);
        let found: Vec<f64> = real_roots(&p).unwrap().iter().map(|r| r.value).collect();
        assert_eq!(found.len(), n, "{planted:?} {found:?}");
        for (a, b) in planted.iter().zip(&found) {
            assert!((a - b).abs() < 1e-7, "{planted:?} {found:?}");
        }
    }
}

#[test]
fn complex_pair_contributes_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..2000 {
        let planted = separated_roots(&mut rng, 2);
        let (re, im) = (rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0));
        // (x − re)² + im²
        let pair = Polynomial::new(vec![re * re + im * im, -2.0 * re, 1.0]);
        let p = Polynomial::from_roots(&planted) * pair;
        let found: Vec<f64> = real_roots(&p).unwrap().iter().map(|r| r.value).collect();
        assert_eq!(found.len(), 2, "{planted:?} {re} {im} {found:?}");
        for (a, b) in planted.iter().zip(&found) {
            assert!((a - b).abs() < 1e-7);
        }
    }
}

#[test]
fn double_root_has_multiplicity_two() {
    let p = Polynomial::from_roots(&[0.5, 0.5, -1.0]);
    let r = real_roots(&p).unwrap();
    assert_eq!(r.len(), 2);
    assert!((r[0].value + 1.0).abs() < 1e-9 && r[0].multiplicity == 1);
    assert!((r[1].value - 0.5).abs() < 1e-6 && r[1].multiplicity == 2);
}

proptest! {
    #[test]
    fn roots_have_small_residual(c in proptest::collection::vec(-5.0..5.0f64, 2..=5)) {
        let p = Polynomial::new(c);
        let scale = p.max_abs_coeff().max(1.0);
        if let Ok(roots) = real_roots(&p) {
            let mut last = f64::NEG_INFINITY;
            for r in roots {
                prop_assert!(r.value > last);
                last = r.value;
                prop_assert!(p.eval(r.value).abs() <= 1e-9 * scale);
            }
        }
    }
}
