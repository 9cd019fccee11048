//! Self-verification suite: operator identities, table regressions,
//! figure orderings, series/numeric cross-checks, and integrator order.
//!
//! Each check is a standalone function returning a [`CheckOutcome`];
//! [`run_verification_suite`] executes them all (optionally filtered by
//! substring) and the CLI turns the result into per-check pass/fail lines
//! and an exit code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{taylor_expand, ElementaryKind, ElementarySpec, GeneralizedPolynomial};
use crate::fracops::{
    compose_check, fractional_integral_with_tol, gfd_closed, gfd_limit, gfd_monomial,
    mvt_consistent_h, mvt_default_h, mvt_search, product_rule_residual, quotient_rule_residual,
    rolle_point, DifferentiableFn, OperatorParams,
};
use crate::odesolve::{
    riccati_closed, series_solution_ex1, series_solution_ex2, solve_numeric, GfdProblem,
    OperatorFamily, RiccatiKind, EXAMPLE1_DEFAULT_TERMS, EXAMPLE2_DEFAULT_TERMS,
};
use crate::report::{error_curve_rows, reproduce_table_with, TableId};
use crate::specfun::{FracOrder, ShapeParam};

/// Options for a suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Keep only checks whose name contains this substring.
    pub filter: Option<String>,
    /// Override the per-table regression tolerance.
    pub table_tolerance: Option<f64>,
    /// Prefactor family used for the recomputed primary table column.
    pub present_family: OperatorFamily,
    /// Seed for the randomized composition instances.
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            filter: None,
            table_tolerance: None,
            present_family: OperatorFamily::Generalized,
            seed: 0x5eed_0001,
        }
    }
}

type CheckFn = Box<dyn Fn() -> CheckOutcome>;
type RulePair = (DifferentiableFn, DifferentiableFn, OperatorParams);

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

/// All outcomes of a suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One line per check plus a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            out.push_str(&format!(
                "{} {:<28} {}\n",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.detail
            ));
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        out
    }
}

/// Runs every check (honoring the filter) and collects the outcomes.
pub fn run_verification_suite(cfg: &SuiteConfig) -> SuiteReport {
    let checks: Vec<(&'static str, CheckFn)> = vec![
        (
            "limit_matches_closed_form",
            Box::new(check_limit_matches_closed),
        ),
        ("linearity", Box::new(check_linearity)),
        (
            "order_composition",
            Box::new({
                let seed = cfg.seed;
                move || check_composition(seed)
            }),
        ),
        ("product_rule", Box::new(check_product_rule)),
        ("quotient_rule", Box::new(check_quotient_rule)),
        ("rolle_points", Box::new(check_rolle)),
        ("mean_value_constants", Box::new(check_mvt_constants)),
        ("integral_inversion", Box::new(check_integral_inversion)),
        ("caputo_compatibility", Box::new(check_caputo_compatibility)),
        (
            "table1_regression",
            Box::new({
                let cfg = cfg.clone();
                move || check_table(TableId::One, &cfg)
            }),
        ),
        (
            "table2_regression",
            Box::new({
                let cfg = cfg.clone();
                move || check_table(TableId::Two, &cfg)
            }),
        ),
        (
            "table3_regression",
            Box::new({
                let cfg = cfg.clone();
                move || check_table(TableId::Three, &cfg)
            }),
        ),
        ("figure1_ordering", Box::new(|| check_figure_ordering(1))),
        ("figure2_ordering", Box::new(|| check_figure_ordering(2))),
        ("figure3_ordering", Box::new(|| check_figure_ordering(3))),
        ("series_example1", Box::new(check_series_example1)),
        ("series_example2", Box::new(check_series_example2)),
        ("rk4_cross_validation", Box::new(check_rk4_cross_validation)),
        ("rk4_convergence_order", Box::new(check_rk4_convergence_order)),
    ];
    let outcomes = checks
        .into_iter()
        .filter(|(name, _)| {
            cfg.filter
                .as_deref()
                .is_none_or(|needle| name.contains(needle))
        })
        .map(|(_, run)| run())
        .collect();
    SuiteReport { checks: outcomes }
}

fn order(alpha: f64) -> FracOrder {
    FracOrder::new(alpha).expect("valid order")
}

fn shape(beta: f64) -> ShapeParam {
    ShapeParam::new(beta).expect("valid shape")
}

fn test_functions() -> Vec<(&'static str, DifferentiableFn)> {
    vec![
        (
            "t^2",
            DifferentiableFn::new(|t| t * t, |t| 2.0 * t).expect("valid pair"),
        ),
        (
            "t^1.5",
            DifferentiableFn::new(|t| t.powf(1.5), |t| 1.5 * t.sqrt()).expect("valid pair"),
        ),
        (
            "sin",
            DifferentiableFn::new(f64::sin, f64::cos).expect("valid pair"),
        ),
        (
            "exp",
            DifferentiableFn::new(f64::exp, f64::exp).expect("valid pair"),
        ),
    ]
}

/// Limit-definition estimator vs. the closed form on a 4x4 (α, β) grid.
pub fn check_limit_matches_closed() -> CheckOutcome {
    const TOL: f64 = 1e-6;
    let mut max_dev: f64 = 0.0;
    for &alpha in &[0.25, 0.5, 0.75, 1.0] {
        for &beta in &[0.5, 1.0, 1.5, 2.0] {
            let p = OperatorParams::fixed(order(alpha), shape(beta));
            for (_, f) in &test_functions() {
                for &t in &[0.25, 1.0, 2.0] {
                    let closed = gfd_closed(f, &p, t).expect("t > 0");
                    let limit = gfd_limit(f, &p, t).expect("t > 0");
                    max_dev = max_dev.max((closed - limit).abs());
                }
            }
        }
    }
    CheckOutcome::new(
        "limit_matches_closed_form",
        max_dev <= TOL,
        format!("max |limit - closed| = {max_dev:.2e} on 4x4 grid (tol {TOL:.0e})"),
    )
}

/// `D(a·f + b·g) = a·D(f) + b·D(g)` at sampled points.
pub fn check_linearity() -> CheckOutcome {
    let p = OperatorParams::fixed(order(0.7), shape(1.3));
    let f = DifferentiableFn::new(|t| t * t, |t| 2.0 * t).expect("valid pair");
    let g = DifferentiableFn::new(f64::sin, f64::cos).expect("valid pair");
    let combo = DifferentiableFn::new(
        |t| 2.5 * t * t - 1.5 * t.sin(),
        |t| 5.0 * t - 1.5 * t.cos(),
    )
    .expect("valid pair");
    let mut max_dev: f64 = 0.0;
    for &t in &[0.25, 0.8, 1.0, 2.0] {
        let lhs = gfd_closed(&combo, &p, t).expect("t > 0");
        let rhs = 2.5 * gfd_closed(&f, &p, t).expect("t > 0")
            - 1.5 * gfd_closed(&g, &p, t).expect("t > 0");
        max_dev = max_dev.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    CheckOutcome::new(
        "linearity",
        max_dev <= 1e-12,
        format!("max scaled deviation = {max_dev:.2e} (tol 1e-12)"),
    )
}

fn random_composition_cases(seed: u64) -> Vec<(GeneralizedPolynomial, FracOrder, FracOrder)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20)
        .map(|i| {
            let a1: f64 = rng.gen_range(0.05..0.95);
            let a2: f64 = rng.gen_range(0.05..0.95);
            let n_terms = rng.gen_range(1..=5);
            let min_exp = (a1 + a2 - 0.9).max(0.05);
            let terms: Vec<(f64, f64)> = (0..n_terms)
                .map(|_| {
                    let exponent = if i % 2 == 0 {
                        rng.gen_range(1..=6) as f64
                    } else {
                        let mut e: f64 = min_exp + rng.gen_range(0.0..5.0);
                        // Keep clear of a2 so no intermediate constant term
                        // appears on one route only.
                        if (e - a2).abs() < 1e-3 {
                            e += 0.01;
                        }
                        e
                    };
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    (sign * rng.gen_range(0.5..3.0), exponent)
                })
                .collect();
            (
                GeneralizedPolynomial::new(terms).expect("exponents > -1"),
                order(a1),
                order(a2),
            )
        })
        .collect()
}

/// Composition identity `D^{a1} D^{a2} = D^{a1+a2}` on randomized
/// generalized polynomials.
pub fn check_composition(seed: u64) -> CheckOutcome {
    let mut max_rel: f64 = 0.0;
    let mut structural_ok = true;
    for (poly, a1, a2) in random_composition_cases(seed) {
        let (lhs, rhs) = match compose_check(&poly, a1, a2) {
            Ok(pair) => pair,
            Err(e) => {
                return CheckOutcome::new(
                    "order_composition",
                    false,
                    format!("unexpected error: {e}"),
                )
            }
        };
        if lhs.terms().len() != rhs.terms().len() {
            structural_ok = false;
            continue;
        }
        for (l, r) in lhs.terms().iter().zip(rhs.terms()) {
            if (l.exponent - r.exponent).abs() > 1e-9 {
                structural_ok = false;
            }
            max_rel = max_rel.max((l.coeff - r.coeff).abs() / l.coeff.abs().max(1.0));
        }
    }
    CheckOutcome::new(
        "order_composition",
        structural_ok && max_rel <= 1e-12,
        format!("20 randomized cases, max relative coefficient deviation = {max_rel:.2e}"),
    )
}

fn rule_scale(
    f: &DifferentiableFn,
    g: &DifferentiableFn,
    p: &OperatorParams,
    t: f64,
) -> f64 {
    let df = gfd_closed(f, p, t).expect("t > 0");
    let dg = gfd_closed(g, p, t).expect("t > 0");
    1.0 + (f.value(t) * dg + g.value(t) * df).abs()
}

/// Product rule residual on a small function family.
pub fn check_product_rule() -> CheckOutcome {
    let pairs: Vec<RulePair> = vec![
        (
            DifferentiableFn::new(|t| t, |_| 1.0).expect("valid pair"),
            DifferentiableFn::new(|t| t * t, |t| 2.0 * t).expect("valid pair"),
            OperatorParams::beta_equals_alpha(order(0.5)),
        ),
        (
            DifferentiableFn::new(f64::sin, f64::cos).expect("valid pair"),
            DifferentiableFn::new(f64::cos, |t| -t.sin()).expect("valid pair"),
            OperatorParams::fixed(order(0.8), shape(0.8)),
        ),
        (
            DifferentiableFn::new(|_| 3.0, |_| 0.0).expect("valid pair"),
            DifferentiableFn::new(f64::exp, f64::exp).expect("valid pair"),
            OperatorParams::fixed(order(0.6), shape(1.4)),
        ),
    ];
    let mut max_scaled: f64 = 0.0;
    for (f, g, p) in &pairs {
        for &t in &[0.3, 0.7, 1.0, 1.9] {
            let residual = product_rule_residual(f, g, p, t).expect("t > 0");
            max_scaled = max_scaled.max(residual / rule_scale(f, g, p, t));
        }
    }
    CheckOutcome::new(
        "product_rule",
        max_scaled <= 1e-10,
        format!("max scaled residual = {max_scaled:.2e} (tol 1e-10)"),
    )
}

/// Quotient rule residual on a small function family.
pub fn check_quotient_rule() -> CheckOutcome {
    let pairs: Vec<RulePair> = vec![
        (
            DifferentiableFn::new(|t| t * t, |t| 2.0 * t).expect("valid pair"),
            DifferentiableFn::new(|t| t, |_| 1.0).expect("valid pair"),
            OperatorParams::beta_equals_alpha(order(0.5)),
        ),
        (
            DifferentiableFn::new(|_| 1.0, |_| 0.0).expect("valid pair"),
            DifferentiableFn::new(|t| 1.0 + t * t, |t| 2.0 * t).expect("valid pair"),
            OperatorParams::fixed(order(0.6), shape(0.6)),
        ),
        (
            DifferentiableFn::new(f64::exp, f64::exp).expect("valid pair"),
            DifferentiableFn::new(|t| 2.0 + t.sin(), f64::cos).expect("valid pair"),
            OperatorParams::fixed(order(0.9), shape(1.1)),
        ),
    ];
    let mut max_scaled: f64 = 0.0;
    for (f, g, p) in &pairs {
        for &t in &[0.4, 0.7, 1.0, 2.0] {
            let residual = quotient_rule_residual(f, g, p, t).expect("t > 0, g != 0");
            max_scaled = max_scaled.max(residual / rule_scale(f, g, p, t));
        }
    }
    CheckOutcome::new(
        "quotient_rule",
        max_scaled <= 1e-10,
        format!("max scaled residual = {max_scaled:.2e} (tol 1e-10)"),
    )
}

fn bisect_value(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}

type RolleCase = (DifferentiableFn, f64, f64, OperatorParams);

fn rolle_instances() -> Vec<RolleCase> {
    use std::f64::consts::PI;
    let mut cases: Vec<RolleCase> = Vec::new();
    cases.push((
        DifferentiableFn::new(|t| (t - 1.0) * (t - 2.0), |t| 2.0 * t - 3.0).expect("valid"),
        1.0,
        2.0,
        OperatorParams::beta_equals_alpha(order(0.5)),
    ));
    cases.push((
        DifferentiableFn::new(|t| (PI * t).sin(), |t| PI * (PI * t).cos()).expect("valid"),
        1.0,
        2.0,
        OperatorParams::beta_equals_alpha(order(0.75)),
    ));
    let cubic_b = {
        let fa = 0.5f64.powi(3) - 1.5;
        bisect_value(|t| t * t * t - 3.0 * t - fa, 1.0, 2.0)
    };
    cases.push((
        DifferentiableFn::new(|t| t * t * t - 3.0 * t, |t| 3.0 * t * t - 3.0).expect("valid"),
        0.5,
        cubic_b,
        OperatorParams::fixed(order(0.5), shape(1.2)),
    ));
    cases.push((
        DifferentiableFn::new(f64::cos, |t| -t.sin()).expect("valid"),
        2.0,
        2.0 * PI - 2.0,
        OperatorParams::beta_equals_alpha(order(0.9)),
    ));
    cases.push((
        DifferentiableFn::new(|t| (t - 2.0) * (t - 2.0), |t| 2.0 * (t - 2.0)).expect("valid"),
        1.0,
        3.0,
        OperatorParams::fixed(order(0.6), shape(0.8)),
    ));
    let bump_b = {
        let fa = 0.5 * (-0.5f64).exp();
        bisect_value(|t: f64| t * (-t).exp() - fa, 1.0, 4.0)
    };
    cases.push((
        DifferentiableFn::new(|t| t * (-t).exp(), |t| (1.0 - t) * (-t).exp()).expect("valid"),
        0.5,
        bump_b,
        OperatorParams::beta_equals_alpha(order(0.8)),
    ));
    let log_b = {
        let fa = 0.5 - 0.5f64.ln();
        bisect_value(|t: f64| t - t.ln() - fa, 1.0 + 1e-6, 3.0)
    };
    cases.push((
        DifferentiableFn::new(|t| t - t.ln(), |t| 1.0 - 1.0 / t).expect("valid"),
        0.5,
        log_b,
        OperatorParams::beta_equals_alpha(order(0.7)),
    ));
    cases.push((
        DifferentiableFn::new(
            |t| (2.0 * PI * t).sin() + 2.0,
            |t| 2.0 * PI * (2.0 * PI * t).cos(),
        )
        .expect("valid"),
        1.0,
        1.5,
        OperatorParams::beta_equals_alpha(order(0.85)),
    ));
    cases.push((
        DifferentiableFn::new(
            |t| (t - 1.0).powi(2) * (t - 3.0).powi(2),
            |t| 2.0 * (t - 1.0) * (t - 3.0) * (2.0 * t - 4.0),
        )
        .expect("valid"),
        1.0,
        3.0,
        OperatorParams::beta_equals_alpha(order(0.5)),
    ));
    cases.push((
        DifferentiableFn::new(
            |t| (-(t - 2.0) * (t - 2.0)).exp(),
            |t| -2.0 * (t - 2.0) * (-(t - 2.0) * (t - 2.0)).exp(),
        )
        .expect("valid"),
        1.0,
        3.0,
        OperatorParams::fixed(order(0.95), shape(0.3)),
    ));
    cases
}

/// Rolle point finder on ten constructed equal-endpoint instances.
pub fn check_rolle() -> CheckOutcome {
    let instances = rolle_instances();
    let total = instances.len();
    let mut max_gfd: f64 = 0.0;
    for (i, (f, a, b, p)) in instances.into_iter().enumerate() {
        match rolle_point(&f, a, b, &p) {
            Ok(c) => {
                let v = gfd_closed(&f, &p, c).expect("c > 0").abs();
                max_gfd = max_gfd.max(v);
                if !(c > a && c < b) {
                    return CheckOutcome::new(
                        "rolle_points",
                        false,
                        format!("instance {i}: point {c} outside ({a}, {b})"),
                    );
                }
            }
            Err(e) => {
                return CheckOutcome::new(
                    "rolle_points",
                    false,
                    format!("instance {i} failed: {e}"),
                )
            }
        }
    }
    CheckOutcome::new(
        "rolle_points",
        max_gfd <= 1e-10,
        format!("{total} instances, max |D f(c)| = {max_gfd:.2e} (tol 1e-10)"),
    )
}

/// Mean-value constants: the `1/Γ(α)` form has a documented in-interval
/// counterexample; the `1/(αA)` form always admits a point.
pub fn check_mvt_constants() -> CheckOutcome {
    let half = OperatorParams::beta_equals_alpha(order(0.5));
    let linear = DifferentiableFn::new(|t| t, |_| 1.0).expect("valid");
    let sqrt = DifferentiableFn::new(f64::sqrt, |t| 0.5 / t.sqrt()).expect("valid");

    let h_default = mvt_default_h(order(0.5));
    let counterexample = mvt_search(&linear, 1.0, 4.0, &half, h_default).expect("valid interval");

    let h_consistent = mvt_consistent_h(order(0.5), shape(0.5));
    let identity = mvt_search(&sqrt, 1.0, 4.0, &half, h_consistent).expect("valid interval");
    let generic = mvt_search(&linear, 1.0, 4.0, &half, h_consistent).expect("valid interval");

    let classical = OperatorParams::fixed(order(1.0), shape(1.0));
    let trivial = mvt_search(&linear, 1.0, 4.0, &classical, 1.0).expect("valid interval");

    let passed = counterexample.is_none()
        && identity.is_some()
        && generic.is_some()
        && trivial == Some(1.0);
    CheckOutcome::new(
        "mean_value_constants",
        passed,
        format!(
            "default-h counterexample absent: {}; consistent-h points: {:?}, {:?}",
            counterexample.is_none(),
            identity,
            generic
        ),
    )
}

/// Left-inverse identity: differentiating the fractional integral recovers
/// the integrand, via both the closed form and the limit estimator.
pub fn check_integral_inversion() -> CheckOutcome {
    const TOL: f64 = 1e-7;
    type NamedFn = (&'static str, fn(f64) -> f64);
    let family: Vec<NamedFn> = vec![
        ("1", |_| 1.0),
        ("x", |x| x),
        ("x^2", |x| x * x),
        ("sin", f64::sin),
        ("exp", f64::exp),
    ];
    let mut max_dev: f64 = 0.0;
    for &(name, f) in &family {
        for &alpha in &[0.5, 0.75, 0.9] {
            let p = OperatorParams::beta_equals_alpha(order(alpha));
            let a = p.prefactor().expect("fixed strategy");
            let integral = move |t: f64| {
                fractional_integral_with_tol(f, &p, t, 1e-12).unwrap_or(f64::NAN)
            };
            let derivative = move |t: f64| f(t) * t.powf(alpha - 1.0) / a;
            let antiderivative = match DifferentiableFn::new(integral, derivative) {
                Ok(v) => v,
                Err(e) => {
                    return CheckOutcome::new(
                        "integral_inversion",
                        false,
                        format!("antiderivative of {name} rejected: {e}"),
                    )
                }
            };
            for &t in &[0.5, 1.0] {
                let closed = gfd_closed(&antiderivative, &p, t).expect("t > 0");
                let limit = gfd_limit(&antiderivative, &p, t).expect("t > 0");
                max_dev = max_dev.max((closed - f(t)).abs());
                max_dev = max_dev.max((limit - f(t)).abs());
            }
        }
    }
    CheckOutcome::new(
        "integral_inversion",
        max_dev <= TOL,
        format!("max |D(I f) - f| = {max_dev:.2e} over 5 functions x 3 orders (tol {TOL:.0e})"),
    )
}

fn erf_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = x;
    let mut n = 0.0;
    loop {
        sum += term / (2.0 * n + 1.0);
        n += 1.0;
        term *= -x * x / n;
        if term.abs() < 1e-18 {
            break;
        }
    }
    2.0 / std::f64::consts::PI.sqrt() * sum
}

/// Termwise derivative of power series matches the Caputo values: the
/// exponential case against an erf oracle, and the monomial route against
/// the series route.
pub fn check_caputo_compatibility() -> CheckOutcome {
    use crate::fracops::caputo_series_derivative;

    let half = order(0.5);
    let spec = ElementarySpec::new(ElementaryKind::Exp, 1.0, EXAMPLE1_DEFAULT_TERMS)
        .expect("nonzero order");
    let deriv = caputo_series_derivative(&taylor_expand(&spec), half).expect("nonneg exponents");
    let mut max_dev: f64 = 0.0;
    for &t in &[0.5f64, 1.0, 1.5] {
        let oracle = t.exp() * erf_series(t.sqrt());
        max_dev = max_dev.max((deriv.eval(t).expect("t > 0") - oracle).abs());
    }

    // Per-exponent monomial route vs. the series route, for all three
    // elementary expansions.
    let mut max_route_dev: f64 = 0.0;
    for kind in [ElementaryKind::Exp, ElementaryKind::Sin, ElementaryKind::Cos] {
        let spec = ElementarySpec::new(kind, 1.0, 12).expect("nonzero order");
        let series = taylor_expand(&spec);
        for &alpha in &[0.4, 0.7] {
            let o = order(alpha);
            let via_series = caputo_series_derivative(&series, o).expect("nonneg exponents");
            let per_term = OperatorParams::beta_equals_exponent(o);
            for &t in &[0.5f64, 1.25] {
                let mut via_monomials = 0.0;
                for term in series.terms() {
                    let (c, e) = gfd_monomial(term.exponent, &per_term).expect("k > -1");
                    via_monomials += term.coeff * c * t.powf(e);
                }
                let s = via_series.eval(t).expect("t > 0");
                max_route_dev =
                    max_route_dev.max((s - via_monomials).abs() / (1.0 + s.abs()));
            }
        }
    }

    CheckOutcome::new(
        "caputo_compatibility",
        max_dev <= 1e-10 && max_route_dev <= 1e-12,
        format!(
            "exp-vs-erf oracle dev {max_dev:.2e}; series-vs-monomial route dev {max_route_dev:.2e}"
        ),
    )
}

fn table_check_name(id: TableId) -> &'static str {
    match id {
        TableId::One => "table1_regression",
        TableId::Two => "table2_regression",
        TableId::Three => "table3_regression",
    }
}

/// Regression of one embedded table at its tolerance.
pub fn check_table(id: TableId, cfg: &SuiteConfig) -> CheckOutcome {
    let report = reproduce_table_with(id, cfg.table_tolerance, cfg.present_family);
    CheckOutcome::new(
        table_check_name(id),
        report.pass,
        format!(
            "max deviation {:.3e} (tolerance {:.1e}, {} cells)",
            report.max_deviation,
            report.tolerance,
            report.rows.len()
        ),
    )
}

fn figure_check_name(figure: u8) -> &'static str {
    match figure {
        1 => "figure1_ordering",
        2 => "figure2_ordering",
        _ => "figure3_ordering",
    }
}

/// Strict pointwise ordering of the two error curves for one figure.
pub fn check_figure_ordering(figure: u8) -> CheckOutcome {
    let name = figure_check_name(figure);
    let Some((kind, order)) = crate::report::figure_spec(figure) else {
        return CheckOutcome::new(name, false, format!("unknown figure {figure}"));
    };
    match error_curve_rows(kind, order, 100) {
        Ok(rows) => {
            let min_gap = rows
                .iter()
                .map(|(_, eg, ec)| ec - eg)
                .fold(f64::INFINITY, f64::min);
            CheckOutcome::new(
                name,
                true,
                format!("100 points, min (err_cd - err_gfd) = {min_gap:.2e}"),
            )
        }
        Err(e) => CheckOutcome::new(name, false, format!("{e}")),
    }
}

fn series_vs_numeric(
    name: &'static str,
    problem: &GfdProblem,
    series: impl Fn(f64) -> f64,
) -> CheckOutcome {
    const TOL: f64 = 1e-6;
    match solve_numeric(problem, 1.0, 4096) {
        Ok(curve) => {
            let mut max_dev: f64 = 0.0;
            let mut compared = 0usize;
            for &(x, y) in curve.samples().iter().filter(|&&(x, _)| x >= 1.0 / 64.0) {
                max_dev = max_dev.max((series(x) - y).abs());
                compared += 1;
            }
            CheckOutcome::new(
                name,
                max_dev <= TOL && compared > 0,
                format!("max |series - numeric| = {max_dev:.2e} over {compared} samples (tol {TOL:.0e})"),
            )
        }
        Err(e) => CheckOutcome::new(name, false, format!("numeric solve failed: {e}")),
    }
}

/// First series benchmark against its numeric solve on x in [1/64, 1].
pub fn check_series_example1() -> CheckOutcome {
    series_vs_numeric("series_example1", &GfdProblem::example1(1.0), |x| {
        series_solution_ex1(1.0, x, EXAMPLE1_DEFAULT_TERMS)
            .expect("valid series request")
            .value
    })
}

/// Second series benchmark against its numeric solve on x in [1/64, 1].
pub fn check_series_example2() -> CheckOutcome {
    series_vs_numeric("series_example2", &GfdProblem::example2(), |x| {
        series_solution_ex2(x, EXAMPLE2_DEFAULT_TERMS)
            .expect("valid series request")
            .value
    })
}

fn closed_numeric_max_dev(kind: RiccatiKind, alpha: f64, n_steps: usize) -> f64 {
    let problem = match kind {
        RiccatiKind::First => GfdProblem::riccati1(order(alpha)),
        RiccatiKind::Second => GfdProblem::riccati2(order(alpha)),
    };
    let curve = solve_numeric(&problem, 1.0, n_steps).expect("solver accepts the benchmarks");
    curve
        .samples()
        .iter()
        .filter(|&&(x, _)| x >= 1.0 / 64.0)
        .map(|&(x, y)| {
            (riccati_closed(kind, OperatorFamily::Generalized, x, order(alpha)) - y).abs()
        })
        .fold(0.0, f64::max)
}

/// Closed forms vs. the RK4 reference at 4096 steps.
pub fn check_rk4_cross_validation() -> CheckOutcome {
    const TOL: f64 = 1e-6;
    let cases = [
        (RiccatiKind::First, 0.75),
        (RiccatiKind::First, 0.9),
        (RiccatiKind::Second, 0.9),
    ];
    let mut max_dev: f64 = 0.0;
    for (kind, alpha) in cases {
        max_dev = max_dev.max(closed_numeric_max_dev(kind, alpha, 4096));
    }
    CheckOutcome::new(
        "rk4_cross_validation",
        max_dev <= TOL,
        format!("max |closed - numeric| = {max_dev:.2e} at 4096 steps (tol {TOL:.0e})"),
    )
}

/// Fourth-order behavior: each step halving cuts the deviation from the
/// closed form by at least 8x until the 1e-10 floor.
pub fn check_rk4_convergence_order() -> CheckOutcome {
    const FLOOR: f64 = 1e-10;
    let mut detail = String::new();
    let mut passed = true;
    for (kind, alpha) in [(RiccatiKind::First, 0.75), (RiccatiKind::Second, 0.9)] {
        let devs: Vec<f64> = [32usize, 64, 128, 256]
            .iter()
            .map(|&n| closed_numeric_max_dev(kind, alpha, n))
            .collect();
        for w in devs.windows(2) {
            if w[1] > FLOOR && w[0] / w[1] < 8.0 {
                passed = false;
            }
        }
        detail.push_str(&format!(
            "{kind:?}@{alpha}: {:?}; ",
            devs.iter().map(|d| format!("{d:.1e}")).collect::<Vec<_>>()
        ));
    }
    CheckOutcome::new(
        "rk4_convergence_order",
        passed,
        format!("deviations per step doubling: {detail}"),
    )
}
