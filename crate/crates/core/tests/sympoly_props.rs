mod common;

use common::{c, in_disc, roots_in_disc};
use proptest::prelude::*;
use symprod::sympoly::{match_roots, monic_eval, roots_of_point, symmetrize, ComplexPoint, RootMultiset};

proptest! {
    #[test]
    fn symmetrize_ignores_root_order(roots in (2usize..=6).prop_flat_map(|n| roots_in_disc(n, 1.5)), k in 0usize..6) {
        let mut shuffled = roots.clone();
        shuffled.rotate_left(k % roots.len());
        shuffled.swap(0, roots.len() - 1);
        prop_assert_eq!(symmetrize(&roots).unwrap(), symmetrize(&shuffled).unwrap());
    }

    #[test]
    fn roots_round_trip(roots in (2usize..=6).prop_flat_map(|n| roots_in_disc(n, 1.0))) {
        let target = RootMultiset::new(roots.clone());
        prop_assume!(target.collision_gap() > 1e-3);
        let found = roots_of_point(&symmetrize(&roots).unwrap()).unwrap();
        prop_assert!(match_roots(&target, &found).unwrap().max_error < 1e-8);
    }

    #[test]
    fn monic_eval_vanishes_at_roots(roots in roots_in_disc(4, 1.0)) {
        let z = symmetrize(&roots).unwrap();
        for r in &roots {
            prop_assert!(monic_eval(&z, *r).norm() < 1e-12);
        }
    }

    #[test]
    fn monic_eval_is_affine_in_the_point(
        a in roots_in_disc(3, 2.0),
        b in roots_in_disc(3, 2.0),
        mu in in_disc(2.0),
        t in 0.0..1.0f64,
    ) {
        let za = ComplexPoint::new(a).unwrap();
        let zb = ComplexPoint::new(b).unwrap();
        let mix: Vec<_> = za.coords().iter().zip(zb.coords()).map(|(x, y)| x * t + y * (1.0 - t)).collect();
        let lhs = monic_eval(&ComplexPoint::new(mix).unwrap(), mu);
        let rhs = monic_eval(&za, mu) * t + monic_eval(&zb, mu) * (1.0 - t);
        let mu_n = mu.norm().powi(3).max(1.0);
        prop_assert!((lhs - rhs).norm() < 1e-12 * 64.0 * mu_n);
    }

    #[test]
    fn match_roots_is_symmetric_in_error(roots in roots_in_disc(4, 1.0), k in 1usize..4) {
        let a = RootMultiset::new(roots.clone());
        let mut perm = roots;
        perm.rotate_left(k);
        let b = RootMultiset::new(perm);
        prop_assert_eq!(match_roots(&a, &b).unwrap().max_error, 0.0);
    }
}

#[test]
fn json_round_trip_of_points() {
    let z = ComplexPoint::new(vec![c(3.0, 0.0), c(1.0, -2.0)]).unwrap();
    let text = serde_json::to_string(&z).unwrap();
    assert_eq!(text, "[[3.0,0.0],[1.0,-2.0]]");
    let back: ComplexPoint = serde_json::from_str(&text).unwrap();
    assert_eq!(back, z);
    assert!(serde_json::from_str::<ComplexPoint>("[]").is_err());
}

#[test]
fn degree_above_limit_is_unsupported() {
    let z = ComplexPoint::new(vec![c(0.0, 0.0); 17]).unwrap();
    assert!(matches!(roots_of_point(&z), Err(symprod::Error::Unsupported(_))));
}
