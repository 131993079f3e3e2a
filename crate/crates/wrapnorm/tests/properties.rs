//! Structural invariants of the library, checked over randomized inputs
//! (proptest) and dense deterministic grids.

use proptest::prelude::*;
use std::f64::consts::TAU;
use wrapnorm::{
    builtin_table, pdf_f, pdf_g, pdf_reference, plan_theoretical, theta_sum_error_bound,
    truncation_error, worst_case_error, wrap, wrapped_sum_error_bound, AccuracyTarget,
    SeriesKind, WnError, WrappedNormal,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wrap_lands_in_range_and_is_idempotent(x in any::<f64>()) {
        prop_assume!(x.is_finite());
        let w = wrap(x).unwrap();
        prop_assert!(w.radians() >= 0.0 && w.radians() < TAU);
        prop_assert!(!w.radians().is_sign_negative());
        let again = wrap(w.radians()).unwrap();
        prop_assert_eq!(w.radians().to_bits(), again.radians().to_bits());
    }

    #[test]
    fn wrapped_sum_is_nonnegative(
        x in 0.0..TAU,
        mu in 0.0..TAU,
        sigma in 0.05f64..30.0,
        n in 0u32..20,
    ) {
        let wn = WrappedNormal::new(mu, sigma).unwrap();
        let v = pdf_f(wrap(x).unwrap(), &wn, n);
        prop_assert!(v >= 0.0 && v.is_finite(), "pdf_f = {v}");
    }

    #[test]
    fn theta_sum_peaks_at_the_mode(
        x in 0.0..TAU,
        mu in 0.0..TAU,
        sigma in 0.05f64..30.0,
        n in 0u32..20,
    ) {
        // Every harmonic is largest at the mode (all cosines crest there), so
        // no truncation exceeds its mode value; a few ulps of slack absorb
        // accumulation rounding.
        let wn = WrappedNormal::new(mu, sigma).unwrap();
        let at_x = pdf_g(wrap(x).unwrap(), &wn, n);
        let at_mode = pdf_g(wrap(mu).unwrap(), &wn, n);
        prop_assert!(
            at_x <= at_mode * (1.0 + 4.0 * f64::EPSILON) + 1e-300,
            "pdf_g({x}) = {at_x} exceeds mode value {at_mode}"
        );
    }

    #[test]
    fn reference_converges_finite_and_nonnegative(
        x in 0.0..TAU,
        mu in 0.0..TAU,
        sigma in 0.02f64..40.0,
    ) {
        let wn = WrappedNormal::new(mu, sigma).unwrap();
        let r = pdf_reference(wrap(x).unwrap(), &wn).unwrap();
        prop_assert!(r.density.is_finite() && r.density >= 0.0, "density {}", r.density);
        prop_assert!(r.terms_used >= 1);
    }

    #[test]
    fn boundary_error_never_increases_with_order(
        sigma in 0.05f64..10.0,
        n in 0u32..10,
        theta in any::<bool>(),
    ) {
        // Measured errors are quantized at the density value's ulp (largest
        // near sigma = 0.05, where the mode density approaches 8), so the
        // comparison carries an absolute floor of that size.
        let kind = if theta { SeriesKind::ThetaSum } else { SeriesKind::WrappedSum };
        let coarse = truncation_error(kind, n, sigma).unwrap();
        let fine = truncation_error(kind, n + 1, sigma).unwrap();
        prop_assert!(
            fine <= coarse * (1.0 + 1e-9) + 2e-15,
            "{kind:?}: order {n} error {coarse} < order {} error {fine}",
            n + 1
        );
    }

    #[test]
    fn certified_plans_meet_their_target_at_the_wrap_point(
        sigma in 0.02f64..30.0,
        log_acc in -15.0f64..-0.31,
    ) {
        let target = AccuracyTarget::new(10f64.powf(log_acc)).unwrap();
        let plan = plan_theoretical(sigma, target).unwrap();
        let err = truncation_error(plan.kind(), plan.order(), sigma).unwrap();
        prop_assert!(
            err <= target.value() + 2e-16,
            "plan {:?} order {} at sigma {sigma}: error {err} vs target {}",
            plan.kind(), plan.order(), target.value()
        );
    }

    #[test]
    fn bounds_dominate_on_random_valid_inputs(
        sigma in 0.3f64..6.0,
        n in 2u32..8,
    ) {
        // Spot version of the dense domination sweep in the acceptance
        // suite, on a coarser grid for speed.
        if let Ok(bound) = wrapped_sum_error_bound(n, sigma) {
            let measured = worst_case_error(SeriesKind::WrappedSum, n, sigma, 512)
                .unwrap()
                .error;
            prop_assert!(measured <= bound, "f: {measured} > {bound}");
        }
        if let Ok(bound) = theta_sum_error_bound(n, sigma) {
            let measured = worst_case_error(SeriesKind::ThetaSum, n, sigma, 512)
                .unwrap()
                .error;
            prop_assert!(measured <= bound, "g: {measured} > {bound}");
        }
    }

    #[test]
    fn non_finite_inputs_are_rejected_everywhere(bits in any::<u64>()) {
        // Forcing the exponent field to all ones makes every sample an
        // infinity or a NaN (any payload, either sign).
        let x = f64::from_bits(bits | 0x7ff0_0000_0000_0000);
        prop_assert!(!x.is_finite());
        prop_assert!(matches!(wrap(x), Err(WnError::InvalidArgument(_))));
        prop_assert!(matches!(
            WrappedNormal::new(x, 1.0),
            Err(WnError::InvalidParameter(_))
        ));
        prop_assert!(matches!(
            WrappedNormal::new(0.0, x),
            Err(WnError::InvalidParameter(_))
        ));
    }
}

/// The three shipped tables stay within their accuracy across a dense σ grid,
/// measured by the boundary (wrap-point) error the tables control. Published
/// breakpoints are rounded to two decimals, so grid points within half a
/// rounding quantum of a breakpoint get a 1.1× slack factor.
#[test]
fn builtin_tables_are_sound_on_a_dense_grid() {
    for accuracy in [1e-5, 1e-10, 1e-15] {
        let table = builtin_table(accuracy).unwrap();
        let breakpoints: Vec<f64> = table
            .rows()
            .iter()
            .filter(|r| r.sigma_upper.is_finite())
            .map(|r| r.sigma_upper)
            .collect();
        for k in 1..=1200u32 {
            let sigma = f64::from(k) / 100.0;
            let plan = table.lookup(sigma).unwrap();
            let err = truncation_error(plan.kind(), plan.order(), sigma).unwrap();
            let near_breakpoint = breakpoints.iter().any(|b| (sigma - b).abs() <= 0.0051);
            let allowed = if near_breakpoint {
                accuracy * 1.1
            } else {
                accuracy
            } + 2e-16;
            assert!(
                err <= allowed,
                "table {accuracy}: plan {:?}/{} at sigma {sigma} has error {err} > {allowed}",
                plan.kind(),
                plan.order()
            );
        }
    }
}

/// No shipped row is wastefully conservative: dropping one order makes the
/// plan miss the accuracy somewhere inside the row's σ range.
#[test]
fn builtin_table_rows_are_minimal() {
    for accuracy in [1e-5, 1e-10, 1e-15] {
        let table = builtin_table(accuracy).unwrap();
        let mut lower = 0.01;
        for row in table.rows() {
            let upper = if row.sigma_upper.is_finite() {
                row.sigma_upper
            } else {
                lower + 2.0
            };
            let n = row.plan.order();
            if n >= 1 {
                // The wrapped sum degrades toward the top of its range, the
                // theta sum toward the bottom; probe both ends and the middle.
                let probes = [lower + 1e-3, 0.5 * (lower + upper), upper - 1e-3];
                let weaker_fails = probes.iter().any(|&s| {
                    truncation_error(row.plan.kind(), n - 1, s).unwrap() > accuracy
                });
                assert!(
                    weaker_fails,
                    "table {accuracy}: row up to {} with plan {:?}/{n} \
                     would also hold at order {}",
                    row.sigma_upper,
                    row.plan.kind(),
                    n - 1
                );
            }
            lower = upper;
        }
    }
}

/// Shape of the error landscape that makes the crossover structure work:
/// at fixed σ the wrapped sum improves with order; at fixed order it
/// degrades as σ grows while the theta sum improves.
#[test]
fn error_landscape_has_the_crossover_shape() {
    let sigmas = [0.5, 1.0, 2.0, 4.0, 8.0];
    for n in 1..=3u32 {
        for pair in sigmas.windows(2) {
            let f_lo = worst_case_error(SeriesKind::WrappedSum, n, pair[0], 512)
                .unwrap()
                .error;
            let f_hi = worst_case_error(SeriesKind::WrappedSum, n, pair[1], 512)
                .unwrap()
                .error;
            if f_lo > 1e-300 {
                assert!(
                    f_hi >= f_lo,
                    "wrapped-sum error not increasing in sigma at n={n}: \
                     {f_lo} at {} vs {f_hi} at {}",
                    pair[0],
                    pair[1]
                );
            }
            let g_lo = worst_case_error(SeriesKind::ThetaSum, n, pair[0], 512)
                .unwrap()
                .error;
            let g_hi = worst_case_error(SeriesKind::ThetaSum, n, pair[1], 512)
                .unwrap()
                .error;
            if g_hi > 1e-300 {
                assert!(
                    g_hi <= g_lo,
                    "theta-sum error not decreasing in sigma at n={n}: \
                     {g_lo} at {} vs {g_hi} at {}",
                    pair[0],
                    pair[1]
                );
            }
        }
    }
}
