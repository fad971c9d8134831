mod common;

use ladderlab::fermat::{
    convergence_trace, equivalence_report, fermat_rationals, functional_raabe, functional_zeta,
    ray_height, zeta_window, FermatRational, Flag, Variant,
};
use ladderlab::quadrature::hli_reference;
use ladderlab::raabe::raabe_integral;
use proptest::prelude::*;

const GRID: [f64; 3] = [1e3, 1e4, 1e5];

#[test]
fn zeta_functional_near_target() {
    let ladder = common::shared_ladder();
    for x in [0.5, 1.0, 2.0] {
        let v = functional_zeta(ladder, x, 1e4).unwrap();
        assert!((v / x - 1.0).abs() < 0.01, "x = {x}: {v}");
    }
    let (rho, upper) = zeta_window(ladder, 1.0, 1e4).unwrap();
    assert!(upper > rho);
}

/// τ·residual = κ·(ρ − φ₁(ρ)) − E(ρ) exactly when c₀ = 0, with E the HLI remainder.
fn remainder_free_residual(ladder: &ladderlab::Ladder, x: f64, tau: f64) -> (f64, f64) {
    let rho = ray_height(ladder, x, tau).unwrap();
    let kappa = ladderlab::Constants::default().rectangle_coefficient();
    let gap = rho - ladder.phi1(rho).unwrap();
    let e = ladder.j(rho).unwrap() - hli_reference(rho).unwrap();
    (kappa * gap / tau, e / tau)
}

#[test]
fn raabe_functional_converges() {
    let ladder = common::shared_ladder();
    for x in [0.5, 1.0, 2.0] {
        let v = functional_raabe(ladder, x, 1e5).unwrap();
        assert!((v / x - 1.0).abs() < 0.05, "x = {x}: {v}");
    }
    for x in [1.0, 2.0] {
        let trace = convergence_trace(ladder, x, &GRID, Variant::RaabeDifference).unwrap();
        for w in trace.points.windows(2) {
            assert!(w[1].residual.abs() < w[0].residual.abs(), "x = {x}");
        }
        assert!((0.0..=1.0).contains(&trace.fit.quality));
    }
}

#[test]
fn raabe_residual_identity() {
    let ladder = common::shared_ladder();
    for x in [0.5, 1.0, 2.0] {
        for tau in GRID {
            let residual = functional_raabe(ladder, x, tau).unwrap() - x;
            let (linear, remainder) = remainder_free_residual(ladder, x, tau);
            let rho = ray_height(ladder, x, tau).unwrap();
            let scale = raabe_integral(rho).unwrap() / tau;
            assert!((residual - (linear - remainder)).abs() <= 1e-9 * scale, "x = {x}, tau = {tau}");
        }
    }
}

#[test]
fn remainder_free_residual_scales_with_x() {
    let ladder = common::shared_ladder();
    for tau in GRID {
        let (half, _) = remainder_free_residual(ladder, 0.5, tau);
        let (two, _) = remainder_free_residual(ladder, 2.0, tau);
        let ratio = two / half / 4.0;
        assert!((0.7..=1.4).contains(&ratio), "tau = {tau}: {ratio}");
    }
}

#[test]
fn preconditions() {
    let ladder = common::shared_ladder();
    assert!(functional_raabe(ladder, 0.0, 1e4).is_err());
    assert!(functional_zeta(ladder, -1.0, 1e4).is_err());
    assert!(functional_zeta(ladder, 1.0, 10.0).is_err());
    assert!(convergence_trace(ladder, 1.0, &[1e3, 1e4], Variant::RaabeDifference).is_err());
    let r = FermatRational::new(6, 8, 9, 3).unwrap();
    assert!(equivalence_report(ladder, &[r], &[], Variant::RaabeDifference).is_err());
    assert!(equivalence_report(ladder, &[], &GRID, Variant::RaabeDifference).is_err());
}

#[test]
fn equivalence_flags_and_substitution() {
    let ladder = common::shared_ladder();
    let near = FermatRational::new(6, 8, 9, 3).unwrap();
    let far = FermatRational::new(1, 1, 1, 3).unwrap();
    let rep = equivalence_report(ladder, &[near.clone(), far], &GRID, Variant::RaabeDifference).unwrap();
    assert_eq!(rep.entries[0].flag, Flag::Indistinguishable);
    assert_eq!(rep.entries[1].flag, Flag::Distinguishable);
    let direct = convergence_trace(ladder, near.value(), &GRID, Variant::RaabeDifference).unwrap();
    assert_eq!(rep.entries[0].trace(), direct);
}

#[test]
fn ray_height_increasing() {
    let ladder = common::shared_ladder();
    let base = ray_height(ladder, 1.0, 1e3).unwrap();
    assert!(ray_height(ladder, 1.5, 1e3).unwrap() > base);
    assert!(ray_height(ladder, 1.0, 2e3).unwrap() > base);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn enumeration_invariants(eps in 0.001f64..0.2, n_max in 3u32..5, z_max in 1u32..30) {
        let list = fermat_rationals(eps, n_max, z_max).unwrap();
        for (i, r) in list.iter().enumerate() {
            prop_assert!(r.is_not_fermat_triple());
            prop_assert!(list.contains(&r.mirrored()));
            prop_assert!(!list[i + 1..].contains(r));
            prop_assert!((r.value() - 1.0).abs() < eps);
            prop_assert!(r.n >= 3 && r.n <= n_max && r.z <= z_max);
        }
        for w in list.windows(2) {
            prop_assert!(w[0].distance_from_one() <= w[1].distance_from_one());
        }
    }
}
