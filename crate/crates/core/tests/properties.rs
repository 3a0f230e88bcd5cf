mod common;

use common::*;
use linform_core::dimension::{template_rates, theta_lower_bounds, TemplateSpec};
use linform_core::lattice::tools::{
    fractional_combination_counterexample, mat_vec, normalizing_automorphism, primitive_pair_check,
    span_dimension, LatticeBasis,
};
use linform_core::minkowski::{successive_minima, BoxSpec};
use linform_core::numeric::{rat, rat_to_f64};
use linform_core::real_enclosure::LinearFormTarget;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enclosures_are_nested(src in source(), k in 1u32..80, extra in 1u32..80) {
        nested_refinement(&src, k, extra)?;
    }

    #[test]
    fn linear_form_matches_interval_arithmetic(t in surd_pair(), q in small_vector(2), k in 4u32..120) {
        linearity(&t, &q, k)?;
    }

    #[test]
    fn compare_abs_is_antisymmetric(t in surd_pair(), qa in small_vector(2), qb in small_vector(2)) {
        antisymmetry(&t, &qa, &qb)?;
    }

    #[test]
    fn primitive_pairs_have_no_fractional_points(u in small_vector(2), v in small_vector(2)) {
        prop_assume!(span_dimension(&[u.clone(), v.clone()]).unwrap() == 2);
        if primitive_pair_check(&u, &v).unwrap() {
            prop_assert!(fractional_combination_counterexample(&u, &v, 12).is_none());
        }
    }

    #[test]
    fn normalization_sends_basis_to_coordinate_plane(rows in prop::collection::vec(prop::collection::vec(-6i64..6, 4), 3)) {
        let vs: Vec<Vec<BigInt>> = rows.iter().map(|r| big(r)).collect();
        prop_assume!(span_dimension(&vs).unwrap() == 3);
        let l = LatticeBasis::new(vs).unwrap();
        let norm = normalizing_automorphism(&l).unwrap();
        let targets = [0usize, 1, 3];
        for (u, &axis) in norm.basis.iter().zip(&targets) {
            let image = mat_vec(&norm.matrix, u);
            for (i, x) in image.iter().enumerate() {
                if i == axis {
                    prop_assert_eq!(x, &norm.d);
                } else {
                    prop_assert!(x.is_zero());
                }
            }
            prop_assert!(l.contains(u));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sequences_are_monotone_and_match_brute_force(t in surd_pair(), q in 5i64..30) {
        monotone_and_oracle(&t, q)?;
    }

    #[test]
    fn record_exponents_are_ordered(t in surd_pair()) {
        o_dominates_u(&t, 20_000)?;
    }

    #[test]
    fn lemur_count_is_monotone_in_c(t in surd_pair(), q in 2u64..40, h in 1u32..6) {
        lemur_monotone(&t, q, h)?;
    }

    #[test]
    fn minima_product_within_constants(t in surd_pair(), q in 2i64..40) {
        let bx = BoxSpec::new(rat(q, 1), rat(2, 1), rat(1, 1)).unwrap();
        let m = successive_minima(&t, &bx, 4 * q as u64, DEPTH).unwrap();
        prop_assert_ne!(m.within_bounds, Some(false));
        if m.witnesses.len() == 3 {
            prop_assert_eq!(span_dimension(&m.witnesses).unwrap(), 3);
        }
    }

    #[test]
    fn template_scan_matches_closed_forms(n in 2usize..5, tau_tenths in 0i64..60, k in 4u32..10) {
        let tau = rat(10 * n as i64 + 5 + tau_tenths, 10);
        let spec = TemplateSpec { n, tau, eps: rat(1, 10i64.pow(k)) };
        let r = template_rates(&spec).unwrap();
        prop_assert!((r.delta_upper - rat_to_f64(&r.closed_upper)).abs() < 1e-3);
        prop_assert!((r.delta_lower - rat_to_f64(&r.closed_lower)).abs() < 1e-3);
    }
}

#[test]
fn reports_are_deterministic() {
    reports_deterministic(6).unwrap();
}

#[test]
fn taurin_beats_simple_bound() {
    for n in 2..=8 {
        let t = theta_lower_bounds(n, n as f64).unwrap();
        assert!(t.taurin.value > t.simple, "n = {n}");
        assert!(t.tail_checked);
    }
}

#[test]
fn delta_upper_tends_to_one() {
    let spec = TemplateSpec {
        n: 2,
        tau: rat(1000, 1),
        eps: rat(1, 1_000_000),
    };
    let r = template_rates(&spec).unwrap();
    assert!(
        r.delta_upper > 0.99 && r.delta_upper <= 1.0,
        "{}",
        r.delta_upper
    );
}

#[test]
fn long_sequences_span_at_least_three() {
    use linform_core::bestapprox::best_approximations;
    use linform_core::lattice::tools::r_estimate;
    use linform_core::real_enclosure::RealSource;
    for (a, b) in [(2, 3), (5, 7), (11, 13)] {
        let t = LinearFormTarget::new(vec![
            RealSource::quadratic(0, a, 1).unwrap(),
            RealSource::quadratic(0, b, 1).unwrap(),
        ])
        .unwrap();
        let seq = best_approximations(&t, &BigInt::from(10u64.pow(9)), DEPTH).unwrap();
        assert!(seq.len() >= 10, "{} records", seq.len());
        let r = r_estimate(&seq.vectors(), seq.len() - 3).unwrap();
        assert!(r.spanned_dim >= 3);
    }
}
