//! Piecewise evaluation plans keyed on σ, and the crossover search that
//! derives them.
//!
//! For a fixed accuracy target the cheapest sufficient plan changes with σ:
//! the wrapped sum wins at small σ, the theta sum at large σ, and within
//! each series the required order steps down as its terms decay faster. A
//! [`ThresholdTable`] stores the resulting breakpoints. Three tables for the
//! common targets `1e-5`, `1e-10`, `1e-15` ship built in;
//! [`crossover_search`] regenerates such a table for any target by bisecting
//! each order's sufficiency boundary and keeping, per σ-region, the minimal
//! sufficient order with ties going to the theta sum.
//!
//! Sufficiency here is measured by [`truncation_error`]: the series' error
//! at the wrap point, where omitted wrapped-sum replicas and omitted theta
//! harmonics both contribute maximally.

use crate::bounds::{plan_theoretical, AccuracyTarget};
use crate::series::{truncation_error, EvalPlan, SeriesKind};
use crate::{Result, WnError};

/// Lower edge of the σ search range; below it every wrapped-sum plan's
/// boundary error is far beyond any representable target.
const SEARCH_SIGMA_LO: f64 = 0.01;

/// Hard ceiling on bisection steps (the tolerance is reached long before).
const MAX_BISECTION_STEPS: u32 = 200;

/// One σ-region of a threshold table: `plan` applies for σ from the previous
/// row's bound (exclusive at lookup time via strict comparison) up to but
/// not including `sigma_upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    /// Exclusive upper σ bound of this region; infinity on the final row.
    pub sigma_upper: f64,
    /// The plan used throughout the region.
    pub plan: EvalPlan,
    /// Optional provenance remark surfaced alongside lookups of this row.
    pub note: Option<&'static str>,
}

/// An ordered, gap-free partition of `(0, ∞)` into σ-regions with one
/// evaluation plan each, all meeting one accuracy target.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTable {
    accuracy: AccuracyTarget,
    rows: Vec<TableRow>,
}

impl ThresholdTable {
    /// Assemble a table, enforcing its shape: at least one row, strictly
    /// increasing finite bounds, and a final bound of infinity.
    pub fn new(accuracy: AccuracyTarget, rows: Vec<TableRow>) -> Result<Self> {
        let Some(last) = rows.last() else {
            return Err(WnError::TableConstruction(
                "a threshold table needs at least one row".to_string(),
            ));
        };
        if last.sigma_upper != f64::INFINITY {
            return Err(WnError::TableConstruction(format!(
                "the final row must cover all remaining sigma (bound infinity), got {}",
                last.sigma_upper
            )));
        }
        for pair in rows.windows(2) {
            let (a, b) = (pair[0].sigma_upper, pair[1].sigma_upper);
            if !(a > 0.0 && a < b) {
                return Err(WnError::TableConstruction(format!(
                    "sigma bounds must be positive and strictly increasing; got {a} before {b}"
                )));
            }
        }
        Ok(ThresholdTable { accuracy, rows })
    }

    /// The accuracy target every row of this table meets.
    pub fn accuracy(&self) -> AccuracyTarget {
        self.accuracy
    }

    /// The rows in σ order.
    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    /// The row covering `sigma`; exactly one exists for any valid σ.
    pub fn lookup_row(&self, sigma: f64) -> Result<&TableRow> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(WnError::InvalidParameter(format!(
                "sigma must be finite and positive, got {sigma}"
            )));
        }
        Ok(self
            .rows
            .iter()
            .find(|row| sigma < row.sigma_upper)
            .expect("the final row bound is infinity, so some row matches"))
    }

    /// The plan covering `sigma`.
    pub fn lookup(&self, sigma: f64) -> Result<EvalPlan> {
        Ok(self.lookup_row(sigma)?.plan)
    }

    /// Serialize as CSV with header `sigma_upper,kind,n`; the final row's
    /// bound is written as the literal `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sigma_upper,kind,n\n");
        for row in &self.rows {
            if row.sigma_upper == f64::INFINITY {
                out.push_str("inf");
            } else {
                out.push_str(&row.sigma_upper.to_string());
            }
            out.push(',');
            out.push_str(row.plan.kind().label());
            out.push(',');
            out.push_str(&row.plan.order().to_string());
            out.push('\n');
        }
        out
    }
}

fn builtin_row(sigma_upper: f64, kind: SeriesKind, n: u32, note: Option<&'static str>) -> TableRow {
    TableRow {
        sigma_upper,
        plan: EvalPlan::new(kind, n).expect("builtin rows use valid kind/order pairs"),
        note,
    }
}

/// The shipped threshold table for one of the accuracies `1e-5`, `1e-10`,
/// or `1e-15` (matched exactly).
///
/// The `1e-15` table's final row carries a note: its source listing shows
/// order 1 there, which would duplicate the previous row, and regenerating
/// the table via [`crossover_search`] yields order 0, so order 0 is stored.
///
/// # Errors
///
/// [`WnError::NoTable`] for any other accuracy; use [`crossover_search`] or
/// `plan_theoretical` instead.
pub fn builtin_table(accuracy: f64) -> Result<ThresholdTable> {
    use SeriesKind::{ThetaSum, WrappedSum};
    const LAST_ROW_1E15_NOTE: &str = "stored with order 0: an order-1 row here would duplicate \
         the previous row, and crossover regeneration gives order 0";
    let rows = if accuracy == 1e-5 {
        vec![
            builtin_row(1.34, WrappedSum, 0, None),
            builtin_row(2.28, WrappedSum, 1, None),
            builtin_row(4.56, ThetaSum, 1, None),
            builtin_row(f64::INFINITY, ThetaSum, 0, None),
        ]
    } else if accuracy == 1e-10 {
        vec![
            builtin_row(0.93, WrappedSum, 0, None),
            builtin_row(1.89, WrappedSum, 1, None),
            builtin_row(2.21, WrappedSum, 2, None),
            builtin_row(3.31, ThetaSum, 2, None),
            builtin_row(6.62, ThetaSum, 1, None),
            builtin_row(f64::INFINITY, ThetaSum, 0, None),
        ]
    } else if accuracy == 1e-15 {
        vec![
            builtin_row(0.76, WrappedSum, 0, None),
            builtin_row(1.53, WrappedSum, 1, None),
            builtin_row(2.31, WrappedSum, 2, None),
            builtin_row(2.73, ThetaSum, 3, None),
            builtin_row(4.09, ThetaSum, 2, None),
            builtin_row(8.17, ThetaSum, 1, None),
            builtin_row(f64::INFINITY, ThetaSum, 0, Some(LAST_ROW_1E15_NOTE)),
        ]
    } else {
        return Err(WnError::NoTable(format!(
            "no builtin threshold table for accuracy {accuracy}; \
             supported: 1e-5, 1e-10, 1e-15"
        )));
    };
    ThresholdTable::new(AccuracyTarget::new(accuracy)?, rows)
}

/// Plan lookup preferring the measured tables: a builtin table when the
/// target matches one, otherwise the certified fallback `plan_theoretical`.
pub fn plan_empirical(sigma: f64, target: AccuracyTarget) -> Result<EvalPlan> {
    match builtin_table(target.value()) {
        Ok(table) => table.lookup(sigma),
        Err(WnError::NoTable(_)) => plan_theoretical(sigma, target),
        Err(other) => Err(other),
    }
}

/// Whether `(kind, n)` meets the target's boundary error at `sigma`.
fn is_sufficient(kind: SeriesKind, n: u32, sigma: f64, target: f64) -> Result<bool> {
    Ok(truncation_error(kind, n, sigma)? <= target)
}

/// Bisect the σ at which `(kind, n)` stops meeting `target`, given one
/// sufficient endpoint (`suff`) and one insufficient endpoint (`insuff`),
/// in either order.
fn bisect_boundary(
    kind: SeriesKind,
    n: u32,
    target: f64,
    mut suff: f64,
    mut insuff: f64,
    tol: f64,
) -> Result<f64> {
    for _ in 0..MAX_BISECTION_STEPS {
        if (insuff - suff).abs() <= tol {
            break;
        }
        let mid = 0.5 * (suff + insuff);
        if is_sufficient(kind, n, mid, target)? {
            suff = mid;
        } else {
            insuff = mid;
        }
    }
    Ok(0.5 * (suff + insuff))
}

/// The minimal sufficient plan at one σ: the lowest order whose error meets
/// the target, with the theta sum preferred when both series manage the same
/// order.
fn minimal_plan(sigma: f64, target: f64, n_max: u32) -> Result<EvalPlan> {
    for n in 0..=n_max {
        if is_sufficient(SeriesKind::ThetaSum, n, sigma, target)? {
            return EvalPlan::new(SeriesKind::ThetaSum, n);
        }
        if is_sufficient(SeriesKind::WrappedSum, n, sigma, target)? {
            return EvalPlan::new(SeriesKind::WrappedSum, n);
        }
    }
    Err(WnError::TableConstruction(format!(
        "no series of order <= {n_max} meets the target near sigma = {sigma}; \
         raise the order limit"
    )))
}

/// Regenerate a threshold table for an arbitrary target by measurement.
///
/// For each order `n ≤ n_max`, the σ at which each series' boundary error
/// crosses the target is located by bisection to within `tol` over
/// `[0.01, sigma_max]` (the wrapped sum's error grows with σ, the theta
/// sum's shrinks). Those crossings partition the range into regions of
/// constant minimal plan; each region is probed at its midpoint, adjacent
/// regions with equal plans are merged, and the boundaries are rounded to
/// two decimals for presentation.
///
/// # Errors
///
/// [`WnError::TableConstruction`] when no order ≤ `n_max` suffices somewhere
/// in range, or when the plan at `sigma_max` is a wrapped sum (whose error
/// keeps growing, so the table could not honestly extend to infinity —
/// raise `sigma_max`). [`WnError::InvalidArgument`] for a non-positive
/// `tol` or a `sigma_max` not comfortably above the 0.01 search floor.
pub fn crossover_search(
    target: AccuracyTarget,
    n_max: u32,
    sigma_max: f64,
    tol: f64,
) -> Result<ThresholdTable> {
    if !sigma_max.is_finite() || sigma_max <= 2.0 * SEARCH_SIGMA_LO {
        return Err(WnError::InvalidArgument(format!(
            "sigma_max must exceed {}, got {sigma_max}",
            2.0 * SEARCH_SIGMA_LO
        )));
    }
    if !tol.is_finite() || tol <= 0.0 || tol > 1.0 {
        return Err(WnError::InvalidArgument(format!(
            "bisection tolerance must lie in (0, 1], got {tol}"
        )));
    }
    let e = target.value();
    let lo = SEARCH_SIGMA_LO;

    // Candidate region boundaries: each order's sufficiency crossing for
    // each series, wherever the crossing lies inside the range.
    let mut boundaries: Vec<f64> = Vec::new();
    for n in 0..=n_max {
        let f_lo = is_sufficient(SeriesKind::WrappedSum, n, lo, e)?;
        let f_hi = is_sufficient(SeriesKind::WrappedSum, n, sigma_max, e)?;
        if f_lo && !f_hi {
            boundaries.push(bisect_boundary(
                SeriesKind::WrappedSum,
                n,
                e,
                lo,
                sigma_max,
                tol,
            )?);
        }
        let g_lo = is_sufficient(SeriesKind::ThetaSum, n, lo, e)?;
        let g_hi = is_sufficient(SeriesKind::ThetaSum, n, sigma_max, e)?;
        if g_hi && !g_lo {
            boundaries.push(bisect_boundary(
                SeriesKind::ThetaSum,
                n,
                e,
                sigma_max,
                lo,
                tol,
            )?);
        }
    }
    boundaries.sort_by(f64::total_cmp);

    // Probe the minimal plan on each region between consecutive boundaries.
    let mut edges = vec![lo];
    edges.extend(boundaries);
    edges.push(sigma_max);
    let mut regions: Vec<(f64, EvalPlan)> = Vec::new();
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a <= 1e-9 {
            continue; // coincident boundaries
        }
        let plan = minimal_plan(0.5 * (a + b), e, n_max)?;
        match regions.last_mut() {
            Some((upper, last)) if *last == plan => *upper = b,
            _ => regions.push((b, plan)),
        }
    }

    let (_, last_plan) = *regions.last().expect("the range is non-empty");
    if last_plan.kind() == SeriesKind::WrappedSum {
        return Err(WnError::TableConstruction(format!(
            "the minimal plan at sigma_max = {sigma_max} is the wrapped sum (order {}), \
             whose error keeps growing with sigma; raise sigma_max until a theta-sum \
             plan takes over",
            last_plan.order()
        )));
    }

    let rows = regions
        .iter()
        .enumerate()
        .map(|(i, &(upper, plan))| TableRow {
            sigma_upper: if i + 1 == regions.len() {
                f64::INFINITY
            } else {
                // Present breakpoints at two decimals, as threshold tables
                // are conventionally quoted.
                (upper * 100.0).round() / 100.0
            },
            plan,
            note: None,
        })
        .collect();
    ThresholdTable::new(target, rows)
}
