mod common;

use ladderlab::raabe::{
    almost_linear_increment_check, raabe_integral, raabe_integral_quadrature,
    verify_corollary_sum, verify_increment_decomposition,
};
use ladderlab::quadrature::hli_reference;
use proptest::prelude::*;

#[test]
fn decomposition_at_1e4() {
    let ladder = common::shared_ladder();
    let t = 1e4;
    let rep = verify_increment_decomposition(ladder, t, 3).unwrap();
    assert_eq!(rep.rows.len(), 3);
    for row in &rep.rows {
        assert!(row.residual.abs() <= 1e-6 * t, "row {}: {:e}", row.r, row.residual);
        assert!(row.gap > 0.0);
    }
    let sum_lhs: f64 = rep.rows.iter().map(|r| r.lhs).sum();
    let bounds: f64 = rep.lhs_err_bounds.iter().sum::<f64>() + rep.corollary_lhs.err_bound;
    assert!((sum_lhs - rep.corollary_lhs.value).abs() <= bounds);
    let scale = rep.corollary_lhs.value.abs();
    assert!((rep.corollary_residual - rep.row_residual_sum()).abs() <= 1e-12 * scale);
    assert_eq!(verify_corollary_sum(ladder, t, 3).unwrap(), rep.corollary_residual);
}

#[test]
fn increments_almost_linear() {
    let ladder = common::shared_ladder();
    for t in [1e4, 1e5] {
        let rep = almost_linear_increment_check(ladder, t, 2).unwrap();
        assert!(rep.rows.iter().all(|r| r.rel_dev < 0.05), "{rep:?}");
    }
}

/// Row r deviates from (1 − c)·T^{r−1} by exactly −E(T^{r−1}), the HLI remainder.
#[test]
fn increment_deviation_is_hli_remainder() {
    let ladder = common::shared_ladder();
    for t in [1e4, 1e5] {
        let rep = almost_linear_increment_check(ladder, t, 2).unwrap();
        let tower = ladder.reverse_tower(t, 2).unwrap();
        for row in &rep.rows {
            let lower = tower.levels[row.r - 1];
            let remainder = ladder.j(lower).unwrap() - hli_reference(lower).unwrap();
            let dev = row.increment - row.linear_term + remainder;
            assert!(dev.abs() <= 1e-6 * lower, "T = {t}, r = {}: {dev:e}", row.r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quadrature_agrees_with_closed_form(a in 1.0f64..1e5) {
        let q = raabe_integral_quadrature(a, 1e-11).unwrap();
        prop_assert!((q.value - raabe_integral(a).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn closed_form_increasing(a in 1.0f64..1e6, d in 1e-3f64..10.0) {
        prop_assert!(raabe_integral(a + d).unwrap() > raabe_integral(a).unwrap());
    }
}
