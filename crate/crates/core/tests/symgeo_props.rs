mod common;

use common::{c, in_disc, roots_in_disc};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use symprod::domains::{Membership, Mobius, PlanarDomain};
use symprod::rng;
use symprod::symgeo::{
    arrangement, intersection_space, push_forward, push_forward_roots, separating_hyperplane, Hyperplane,
    SymProduct,
};
use symprod::sympoly::{monic_eval, symmetrize, ComplexPoint};
use symprod::Complex64;

/// Numerical rank by singular values, independent of the elimination
/// used in the library.
fn svd_rank(rows: &[Vec<Complex64>], tol: f64) -> usize {
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > tol * top.max(1.0)).count()
}

proptest! {
    #[test]
    fn push_forward_is_functorial(
        roots in roots_in_disc(3, 0.8),
        a in in_disc(0.7),
        b in in_disc(0.7),
        t in 0.0..std::f64::consts::TAU,
    ) {
        let f = Mobius::unit_disc_automorphism(a, t).unwrap();
        let g = Mobius::unit_disc_automorphism(b, 0.0).unwrap();
        let z = symmetrize(&roots).unwrap();
        let composed = push_forward(&f.compose(&g), &z).unwrap();
        let stepwise = push_forward(&f, &push_forward(&g, &z).unwrap()).unwrap();
        prop_assert!(composed.max_distance(&stepwise) < 1e-9);
    }

    #[test]
    fn identity_push_forward_is_exact_on_roots(roots in roots_in_disc(4, 1.0)) {
        let z = symmetrize(&roots).unwrap();
        prop_assert_eq!(push_forward_roots(&Mobius::identity(), &roots).unwrap(), z);
    }

    #[test]
    fn interior_fibres_are_in(roots in roots_in_disc(3, 0.999)) {
        let s = SymProduct::symmetrized_polydisc(3).unwrap();
        let z = symmetrize(&roots).unwrap();
        prop_assert_eq!(s.member(&z).unwrap().state, Membership::In);
    }

    #[test]
    fn separating_hyperplane_contains_point_and_misses_domain(
        inner in in_disc(1.0),
        outer in (1.01..3.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, a)| Complex64::from_polar(r, a)),
        seed in any::<u64>(),
    ) {
        let s = SymProduct::symmetrized_polydisc(2).unwrap();
        let w = symmetrize(&[inner, outer]).unwrap();
        let h = separating_hyperplane(&s, &w).unwrap();
        prop_assert!(h.eval(&w).norm() < 1e-9);
        let mut r = rng::stream(seed, 0);
        for _ in 0..20 {
            let roots = [rng::in_disc(&mut r, c(0.0, 0.0), 1.0), rng::in_disc(&mut r, c(0.0, 0.0), 1.0)];
            prop_assert!(h.eval(&symmetrize(&roots).unwrap()).norm() > 0.0);
        }
    }

    #[test]
    fn arrangement_matches_root_membership(mu in proptest::collection::vec(in_disc(2.0), 3), seed in any::<u64>()) {
        let d = match PlanarDomain::complement_finite(mu.clone()) {
            Ok(d) => d,
            Err(_) => return Ok(()),
        };
        let s = SymProduct::new(d, 2).unwrap();
        let arr = arrangement(&mu, 2).unwrap();
        let mut r = rng::stream(seed, 1);
        for _ in 0..50 {
            let z = ComplexPoint::new(vec![rng::in_square(&mut r, 3.0), rng::in_square(&mut r, 3.0)]).unwrap();
            if mu.iter().any(|m| { let v = monic_eval(&z, *m).norm(); v > 0.0 && v <= 1e-6 }) {
                continue;
            }
            prop_assert_eq!(arr.complement_contains(&z), s.member(&z).unwrap().state == Membership::In);
        }
    }
}

#[test]
fn general_position_agrees_with_svd_rank() {
    for n in [2usize, 3] {
        let mut r = rng::stream(99, n as u64);
        let punctures: Vec<Complex64> = (0..2 * n + 3).map(|_| rng::in_square(&mut r, 2.0)).collect();
        let arr = arrangement(&punctures, n).unwrap();
        assert!(arr.report.general_position, "{:?}", arr.report.failures);
        for k in 1..=n {
            let subset: Vec<_> = punctures[..k].to_vec();
            let rows: Vec<Vec<Complex64>> = subset.iter().map(|m| Hyperplane::new(*m, n).unwrap().coeffs()).collect();
            assert_eq!(svd_rank(&rows, 1e-8), k);
            let space = intersection_space(&subset, n).unwrap();
            assert_eq!(space.dimension(), n - k);
            for _ in 0..10 {
                let z = space.sample(&mut r, 1.0).unwrap();
                for m in &subset {
                    assert!(monic_eval(&z, *m).norm() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn coincident_witness_coefficients_lose_rank() {
    let rows: Vec<Vec<Complex64>> = [c(0.5, 0.0), c(0.5, 0.0)]
        .iter()
        .map(|m| Hyperplane::new(*m, 2).unwrap().coeffs())
        .collect();
    assert_eq!(svd_rank(&rows, 1e-8), 1);
    assert!(intersection_space(&[c(0.5, 0.0), c(0.5, 0.0)], 2).is_err());
}

#[test]
fn sampled_exterior_points_get_certificates() {
    let d = PlanarDomain::complement_finite(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let s = SymProduct::new(d, 2).unwrap();
    let mut r = rng::stream(5, 0);
    for _ in 0..100 {
        let mu = if r.gen::<bool>() { c(0.0, 0.0) } else { c(1.0, 0.0) };
        let w = symmetrize(&[mu, rng::in_square(&mut r, 3.0)]).unwrap();
        let h = separating_hyperplane(&s, &w).unwrap();
        assert!(h.eval(&w).norm() < 1e-9);
    }
}
