//! Fractional initial value problems `D^α y = f(x, y)`, `y(0) = y0`.
//!
//! The closed form of the operator turns such a problem into the classical
//! ODE `dy/dx = (1/A) x^(α−1) f(x, y)`. The `x^(α−1)` kernel is singular at
//! the origin for `α < 1`, so the solver integrates in `u = x^α` where the
//! right-hand side is bounded and fixed-step RK4 applies.
//!
//! Two of the built-in problems (the series benchmarks) instead use the
//! per-exponent shape convention: their forcing is expanded into a
//! generalized polynomial and each monomial is transformed with its own
//! gamma ratio, which is what makes the numeric solution agree with the
//! closed series solutions.

use std::sync::Arc;

use thiserror::Error;

use crate::expr::{taylor_expand, ElementaryKind, ElementarySpec, GeneralizedPolynomial, Term};
use crate::specfun::{gfd_prefactor, ln_gamma_pos, FracOrder, ShapeParam};

/// Default forcing/series truncation for the first series benchmark.
pub const EXAMPLE1_DEFAULT_TERMS: usize = 40;
/// Default forcing/series truncation for the second series benchmark.
pub const EXAMPLE2_DEFAULT_TERMS: usize = 20;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_1P_SQRT2: f64 = 0.8813735870195429;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("need at least 16 integration steps, got {n_steps}")]
    TooFewSteps { n_steps: usize },
    #[error("integration endpoint must be positive, got {x}")]
    NonPositiveEnd { x: f64 },
    #[error("solution diverged; last finite state at x = {last_x}")]
    Diverged { last_x: f64 },
    #[error("series needs at least one term")]
    EmptySeries,
    #[error("series point must be nonnegative, got {x}")]
    NegativeSeriesPoint { x: f64 },
    #[error("solution samples must have strictly increasing x and finite y")]
    InvalidCurve,
}

/// Which of the two Riccati benchmark equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiccatiKind {
    /// `D^α y = 1 − y²`, `y(0) = 0`.
    First,
    /// `D^α y = 2y − y² + 1`, `y(0) = 0`.
    Second,
}

/// Which prefactor family a closed form uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorFamily {
    /// Gamma-ratio prefactor `A = Γ(β)/Γ(β−α+1)`.
    Generalized,
    /// Conformable derivative: prefactor 1.
    Conformable,
}

/// Identifies the built-in problems; `Custom` covers everything else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemLabel {
    Example1 { k: f64 },
    Example2,
    Example3,
    Example4 { lambda: f64 },
    Riccati1,
    Riccati2,
    Custom,
}

/// A first-order fractional initial value problem.
pub struct GfdProblem {
    rhs: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    order: FracOrder,
    shape: ShapeParam,
    y0: f64,
    label: ProblemLabel,
}

impl GfdProblem {
    /// `D^α y = 1 − y²`, `y(0) = 0`, with the `β = α` convention.
    pub fn riccati1(order: FracOrder) -> Self {
        Self {
            rhs: Arc::new(|_, y| 1.0 - y * y),
            order,
            shape: ShapeParam::equal_to_order(order),
            y0: 0.0,
            label: ProblemLabel::Riccati1,
        }
    }

    /// `D^α y = 2y − y² + 1`, `y(0) = 0`, with the `β = α` convention.
    pub fn riccati2(order: FracOrder) -> Self {
        Self {
            rhs: Arc::new(|_, y| 2.0 * y - y * y + 1.0),
            order,
            shape: ShapeParam::equal_to_order(order),
            y0: 0.0,
            label: ProblemLabel::Riccati2,
        }
    }

    /// `D^(1/2) y = e^(kx)`, `y(0) = 0`, solved with the per-exponent shape
    /// convention (Caputo-matching).
    pub fn example1(k: f64) -> Self {
        let half = FracOrder::new(0.5).expect("0.5 is a valid order");
        Self {
            rhs: Arc::new(move |x, _| (k * x).exp()),
            order: half,
            shape: ShapeParam::equal_to_order(half),
            y0: 0.0,
            label: ProblemLabel::Example1 { k },
        }
    }

    /// `D^(1/2) y = x² sin x`, `y(0) = 0`, per-exponent shape convention.
    pub fn example2() -> Self {
        let half = FracOrder::new(0.5).expect("0.5 is a valid order");
        Self {
            rhs: Arc::new(|x, _| x * x * x.sin()),
            order: half,
            shape: ShapeParam::equal_to_order(half),
            y0: 0.0,
            label: ProblemLabel::Example2,
        }
    }

    /// `D^(1/2) y + y = x² + (2/Γ(5/2)) x^(3/2)`, `y(0) = 0`, fixed
    /// `β = α = 1/2`.
    pub fn example3() -> Self {
        let half = FracOrder::new(0.5).expect("0.5 is a valid order");
        let c = 2.0 * (-ln_gamma_pos(2.5)).exp();
        Self {
            rhs: Arc::new(move |x, y| x * x + c * x.powf(1.5) - y),
            order: half,
            shape: ShapeParam::equal_to_order(half),
            y0: 0.0,
            label: ProblemLabel::Example3,
        }
    }

    /// Mixed equation `d/dx{(1 − √x)(y + 1)} + λ D^(1/2) y = 0`, `y(0) = 0`,
    /// rewritten as `D^(1/2) y = A (y + 1) / (2 (1 − √x + λ A √x))` with
    /// `A = √π` (fixed `β = α = 1/2`).
    pub fn example4(lambda: f64) -> Self {
        let half = FracOrder::new(0.5).expect("0.5 is a valid order");
        let a = ln_gamma_pos(0.5).exp();
        Self {
            rhs: Arc::new(move |x, y| {
                let s = x.sqrt();
                a * (y + 1.0) / (2.0 * (1.0 - s + lambda * a * s))
            }),
            order: half,
            shape: ShapeParam::equal_to_order(half),
            y0: 0.0,
            label: ProblemLabel::Example4 { lambda },
        }
    }

    pub fn custom(
        rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        order: FracOrder,
        shape: ShapeParam,
        y0: f64,
    ) -> Self {
        Self {
            rhs: Arc::new(rhs),
            order,
            shape,
            y0,
            label: ProblemLabel::Custom,
        }
    }

    #[inline]
    pub fn order(&self) -> FracOrder {
        self.order
    }

    #[inline]
    pub fn shape(&self) -> ShapeParam {
        self.shape
    }

    #[inline]
    pub fn y0(&self) -> f64 {
        self.y0
    }

    #[inline]
    pub fn label(&self) -> ProblemLabel {
        self.label
    }

    #[inline]
    pub fn rhs(&self, x: f64, y: f64) -> f64 {
        (self.rhs)(x, y)
    }
}

/// The classical transform of a fractional problem: `dy/dx` on the original
/// axis plus the regularized form `dy/du` in `u = x^α`.
pub struct ClassicalIvp {
    order: FracOrder,
    y0: f64,
    rhs_x: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    rhs_u: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl ClassicalIvp {
    #[inline]
    pub fn order(&self) -> FracOrder {
        self.order
    }

    #[inline]
    pub fn y0(&self) -> f64 {
        self.y0
    }

    /// `dy/dx` at `(x, y)`; singular at `x = 0` when `α < 1`.
    #[inline]
    pub fn rhs_x(&self, x: f64, y: f64) -> f64 {
        (self.rhs_x)(x, y)
    }

    /// `dy/du` at `(u, y)` with `u = x^α`; bounded at `u = 0`.
    #[inline]
    pub fn rhs_u(&self, u: f64, y: f64) -> f64 {
        (self.rhs_u)(u, y)
    }
}

/// Maps each forcing monomial `c x^p` to the derivative of its
/// per-exponent-shape solution: `dy/dx` gains `c Γ(p+1)/Γ(p+α) x^(p+α−1)`
/// and `dy/du` gains the same coefficient over `α` at exponent `p/α`.
fn termwise_transform(
    forcing: &GeneralizedPolynomial,
    alpha: f64,
) -> (GeneralizedPolynomial, GeneralizedPolynomial) {
    let mut dx_terms = Vec::with_capacity(forcing.terms().len());
    let mut du_terms = Vec::with_capacity(forcing.terms().len());
    for term in forcing.terms() {
        let p = term.exponent;
        let factor = (ln_gamma_pos(p + 1.0) - ln_gamma_pos(p + alpha)).exp();
        dx_terms.push(Term {
            coeff: term.coeff * factor,
            exponent: p + alpha - 1.0,
        });
        du_terms.push(Term {
            coeff: term.coeff * factor / alpha,
            exponent: p / alpha,
        });
    }
    (
        GeneralizedPolynomial::from_terms_unchecked(dx_terms),
        GeneralizedPolynomial::from_terms_unchecked(du_terms),
    )
}

/// Rewrites a fractional problem as a classical first-order IVP.
///
/// The generic form is `dy/dx = (1/A) x^(α−1) f(x, y)` and, in `u = x^α`,
/// `dy/du = (1/(αA)) f(u^(1/α), y)` with `y(u = 0) = y0`. The two series
/// benchmarks are transformed termwise instead (see module docs).
pub fn transform_to_classical(problem: &GfdProblem) -> ClassicalIvp {
    let alpha = problem.order().value();
    match problem.label() {
        ProblemLabel::Example1 { k } => {
            let spec = ElementarySpec::new(ElementaryKind::Exp, k, EXAMPLE1_DEFAULT_TERMS)
                .expect("truncation order is nonzero");
            termwise_ivp(&taylor_expand(&spec), problem, alpha)
        }
        ProblemLabel::Example2 => {
            let spec = ElementarySpec::new(ElementaryKind::Sin, 1.0, EXAMPLE2_DEFAULT_TERMS)
                .expect("truncation order is nonzero");
            let shifted: Vec<Term> = taylor_expand(&spec)
                .terms()
                .iter()
                .map(|t| Term {
                    coeff: t.coeff,
                    exponent: t.exponent + 2.0,
                })
                .collect();
            let forcing = GeneralizedPolynomial::from_terms_unchecked(shifted);
            termwise_ivp(&forcing, problem, alpha)
        }
        _ => {
            let a = gfd_prefactor(problem.order(), problem.shape());
            let rhs1 = Arc::clone(&problem.rhs);
            let rhs2 = Arc::clone(&problem.rhs);
            ClassicalIvp {
                order: problem.order(),
                y0: problem.y0(),
                rhs_x: Box::new(move |x, y| rhs1(x, y) * x.powf(alpha - 1.0) / a),
                rhs_u: Box::new(move |u, y| rhs2(u.powf(1.0 / alpha), y) / (alpha * a)),
            }
        }
    }
}

fn termwise_ivp(forcing: &GeneralizedPolynomial, problem: &GfdProblem, alpha: f64) -> ClassicalIvp {
    let (poly_x, poly_u) = termwise_transform(forcing, alpha);
    ClassicalIvp {
        order: problem.order(),
        y0: problem.y0(),
        rhs_x: Box::new(move |x, _| poly_x.eval(x).unwrap_or(f64::NAN)),
        rhs_u: Box::new(move |u, _| poly_u.eval(u).unwrap_or(f64::NAN)),
    }
}

/// How a [`SolutionCurve`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedForm,
    Series { terms: usize },
    NumericRk { n_steps: usize },
}

/// Sampled `(x, y)` pairs with strictly increasing `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCurve {
    samples: Vec<(f64, f64)>,
    method: SolveMethod,
}

impl SolutionCurve {
    pub fn new(samples: Vec<(f64, f64)>, method: SolveMethod) -> Result<Self, OdeError> {
        let increasing = samples.windows(2).all(|w| w[0].0 < w[1].0);
        let finite = samples.iter().all(|&(x, y)| x.is_finite() && y.is_finite());
        if increasing && finite {
            Ok(Self { samples, method })
        } else {
            Err(OdeError::InvalidCurve)
        }
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn method(&self) -> SolveMethod {
        self.method
    }
}

/// Integrates the `u`-regularized ODE with classical fixed-step RK4 over
/// `[0, x_end^α]` and reports samples back on the `x` axis.
///
/// Global error is `O(h⁴)`, verifiable by step halving.
pub fn solve_numeric(
    problem: &GfdProblem,
    x_end: f64,
    n_steps: usize,
) -> Result<SolutionCurve, OdeError> {
    if n_steps < 16 {
        return Err(OdeError::TooFewSteps { n_steps });
    }
    if x_end <= 0.0 || x_end.is_nan() {
        return Err(OdeError::NonPositiveEnd { x: x_end });
    }
    let ivp = transform_to_classical(problem);
    let alpha = ivp.order().value();
    let u_end = x_end.powf(alpha);
    let h = u_end / n_steps as f64;

    let mut samples = Vec::with_capacity(n_steps + 1);
    let mut y = ivp.y0();
    samples.push((0.0, y));
    for i in 0..n_steps {
        let u = i as f64 * h;
        let k1 = ivp.rhs_u(u, y);
        let k2 = ivp.rhs_u(u + 0.5 * h, y + 0.5 * h * k1);
        let k3 = ivp.rhs_u(u + 0.5 * h, y + 0.5 * h * k2);
        let k4 = ivp.rhs_u(u + h, y + h * k3);
        let update = h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        if !update.is_finite() || !(y + update).is_finite() {
            return Err(OdeError::Diverged {
                last_x: u.powf(1.0 / alpha),
            });
        }
        y += update;
        let x = if i + 1 == n_steps {
            x_end
        } else {
            ((i + 1) as f64 * h).powf(1.0 / alpha)
        };
        samples.push((x, y));
    }
    SolutionCurve::new(samples, SolveMethod::NumericRk { n_steps })
}

fn riccati_first_core(x: f64, alpha: f64, a: f64) -> f64 {
    (x.powf(alpha) / (alpha * a)).tanh()
}

fn riccati_second_core(x: f64, alpha: f64, a: f64) -> f64 {
    1.0 + SQRT_2 * (SQRT_2 * x.powf(alpha) / (alpha * a) - LN_1P_SQRT2).tanh()
}

/// Closed-form solution of the first Riccati benchmark,
/// `y(x) = tanh(x^α / (α A))` with `A = Γ(β)/Γ(β−α+1)`.
pub fn riccati1_closed(x: f64, order: FracOrder, shape: ShapeParam) -> f64 {
    riccati_first_core(x, order.value(), gfd_prefactor(order, shape))
}

/// Closed-form solution of the second Riccati benchmark,
/// `y(x) = 1 + √2 · tanh(√2 x^α / (α A) − ln(1 + √2))`.
pub fn riccati2_closed(x: f64, order: FracOrder, shape: ShapeParam) -> f64 {
    riccati_second_core(x, order.value(), gfd_prefactor(order, shape))
}

/// The same closed forms under the conformable derivative (prefactor 1).
pub fn conformable_closed(kind: RiccatiKind, x: f64, order: FracOrder) -> f64 {
    match kind {
        RiccatiKind::First => riccati_first_core(x, order.value(), 1.0),
        RiccatiKind::Second => riccati_second_core(x, order.value(), 1.0),
    }
}

/// Closed form for either family, with the `β = α` convention for the
/// generalized one.
pub fn riccati_closed(kind: RiccatiKind, family: OperatorFamily, x: f64, order: FracOrder) -> f64 {
    match family {
        OperatorFamily::Generalized => {
            let shape = ShapeParam::equal_to_order(order);
            match kind {
                RiccatiKind::First => riccati1_closed(x, order, shape),
                RiccatiKind::Second => riccati2_closed(x, order, shape),
            }
        }
        OperatorFamily::Conformable => conformable_closed(kind, x, order),
    }
}

/// Exact classical (`α = 1`) solutions used as the error baseline.
pub fn exact_alpha1(kind: RiccatiKind, x: f64) -> f64 {
    match kind {
        RiccatiKind::First => x.tanh(),
        RiccatiKind::Second => 1.0 + SQRT_2 * (SQRT_2 * x - LN_1P_SQRT2).tanh(),
    }
}

/// A truncated series value together with its first-omitted-term tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub tail_bound: f64,
}

/// Series solution of the first benchmark,
/// `y(x) = Σ_{n≥0} k^n x^(n+1/2) / Γ(n+3/2)`, truncated to `n_terms`.
pub fn series_solution_ex1(k: f64, x: f64, n_terms: usize) -> Result<SeriesSum, OdeError> {
    if n_terms == 0 {
        return Err(OdeError::EmptySeries);
    }
    if x < 0.0 || x.is_nan() {
        return Err(OdeError::NegativeSeriesPoint { x });
    }
    if x == 0.0 {
        return Ok(SeriesSum {
            value: 0.0,
            tail_bound: 0.0,
        });
    }
    let mut term = x.sqrt() * (-ln_gamma_pos(1.5)).exp();
    let mut value = 0.0;
    for n in 0..n_terms {
        value += term;
        term *= k * x / (n as f64 + 1.5);
    }
    Ok(SeriesSum {
        value,
        tail_bound: term.abs(),
    })
}

/// Series solution of the second benchmark,
/// `y(x) = Σ_{n≥0} (−1)^n (2n+3)(2n+2) x^(2n+7/2) / Γ(2n+9/2)`.
///
/// The signs follow the real sine series of the forcing `x² sin x`.
pub fn series_solution_ex2(x: f64, n_terms: usize) -> Result<SeriesSum, OdeError> {
    if n_terms == 0 {
        return Err(OdeError::EmptySeries);
    }
    if x < 0.0 || x.is_nan() {
        return Err(OdeError::NegativeSeriesPoint { x });
    }
    if x == 0.0 {
        return Ok(SeriesSum {
            value: 0.0,
            tail_bound: 0.0,
        });
    }
    let mut term = 6.0 * x.powf(3.5) * (-ln_gamma_pos(4.5)).exp();
    let mut value = 0.0;
    for n in 0..n_terms {
        value += term;
        let m = 2.0 * n as f64;
        term *= -x * x * (m + 5.0) * (m + 4.0) / ((m + 3.0) * (m + 2.0) * (m + 4.5) * (m + 5.5));
    }
    Ok(SeriesSum {
        value,
        tail_bound: term.abs(),
    })
}

/// Pointwise absolute relative error against the `α = 1` exact solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    /// `(x, |y_method(x) − y_exact(x)| / |y_exact(x)|)` pairs.
    pub points: Vec<(f64, f64)>,
    /// Grid points skipped because the exact baseline vanishes there.
    pub excluded: Vec<f64>,
}

/// Absolute relative error of a closed-form family on a grid of positive
/// points. Points where the exact solution is zero are excluded.
pub fn abs_rel_error_curve(
    kind: RiccatiKind,
    family: OperatorFamily,
    order: FracOrder,
    grid: &[f64],
) -> ErrorCurve {
    let mut points = Vec::with_capacity(grid.len());
    let mut excluded = Vec::new();
    for &x in grid {
        if x <= 0.0 || x.is_nan() {
            excluded.push(x);
            continue;
        }
        let exact = exact_alpha1(kind, x);
        if exact == 0.0 {
            excluded.push(x);
            continue;
        }
        let y = riccati_closed(kind, family, x, order);
        points.push((x, (y - exact).abs() / exact.abs()));
    }
    ErrorCurve { points, excluded }
}

#[cfg(test)]
mod tests {
    #![allow(clippy::excessive_precision)]

    use super::*;
    use crate::specfun::gamma;
    use approx::assert_abs_diff_eq;

    fn order(alpha: f64) -> FracOrder {
        FracOrder::new(alpha).unwrap()
    }

    #[test]
    fn transform_riccati1_regularized_rhs() {
        let problem = GfdProblem::riccati1(order(0.75));
        let ivp = transform_to_classical(&problem);
        // dy/du = (1 − y²) / (α Γ(α)) at β = α = 3/4
        let expected = 1.0 / (0.75 * gamma(0.75).unwrap());
        assert_abs_diff_eq!(ivp.rhs_u(0.0, 0.0), expected, epsilon = 1e-13);
        assert_abs_diff_eq!(ivp.rhs_u(0.3, 0.5), 0.75 * expected, epsilon = 1e-13);
        // On the x axis the kernel is explicit.
        assert_abs_diff_eq!(
            ivp.rhs_x(0.5, 0.0),
            0.5f64.powf(-0.25) / gamma(0.75).unwrap(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn transform_is_identity_at_order_one() {
        let problem = GfdProblem::custom(|x, y| x + 2.0 * y, order(1.0), ShapeParam::new(1.0).unwrap(), 1.0);
        let ivp = transform_to_classical(&problem);
        assert_abs_diff_eq!(ivp.rhs_u(0.3, 2.0), 0.3 + 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ivp.rhs_x(0.3, 2.0), 0.3 + 4.0, epsilon = 1e-14);
    }

    #[test]
    fn transform_example4_expanded_form() {
        let lambda = 1.0;
        let problem = GfdProblem::example4(lambda);
        let ivp = transform_to_classical(&problem);
        let a = std::f64::consts::PI.sqrt();
        for (u, y) in [(0.0, 0.0), (0.3, 0.2), (0.8, -0.4)] {
            let expected = (y + 1.0) / (1.0 - u + lambda * a * u);
            assert_abs_diff_eq!(ivp.rhs_u(u, y), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn numeric_solution_hits_reference_points() {
        let curve = solve_numeric(&GfdProblem::riccati1(order(0.75)), 0.2, 4096).unwrap();
        let (x_last, y_last) = *curve.samples().last().unwrap();
        assert_abs_diff_eq!(x_last, 0.2);
        assert_abs_diff_eq!(y_last, 0.31439, epsilon = 1e-5);
        let closed = riccati1_closed(0.2, order(0.75), ShapeParam::new(0.75).unwrap());
        assert_abs_diff_eq!(y_last, closed, epsilon = 1e-9);

        let curve = solve_numeric(&GfdProblem::riccati1(order(1.0)), 1.0, 4096).unwrap();
        assert_abs_diff_eq!(
            curve.samples().last().unwrap().1,
            0.76159415595576489,
            epsilon = 1e-6
        );

        let curve = solve_numeric(&GfdProblem::riccati2(order(0.9)), 1.0, 4096).unwrap();
        assert_abs_diff_eq!(curve.samples().last().unwrap().1, 1.7485, epsilon = 1e-4);
    }

    #[test]
    fn numeric_solver_validates_input_and_detects_divergence() {
        let problem = GfdProblem::riccati1(order(0.75));
        assert!(matches!(
            solve_numeric(&problem, 1.0, 8),
            Err(OdeError::TooFewSteps { .. })
        ));
        assert!(matches!(
            solve_numeric(&problem, 0.0, 64),
            Err(OdeError::NonPositiveEnd { .. })
        ));

        // Finite-time blow-up of dy/dx = y² with y(0) = 1.5 at x = 2/3.
        let blowup = GfdProblem::custom(
            |_, y| y * y,
            order(1.0),
            ShapeParam::new(1.0).unwrap(),
            1.5,
        );
        assert!(matches!(
            solve_numeric(&blowup, 1.0, 64),
            Err(OdeError::Diverged { .. })
        ));
    }

    #[test]
    fn closed_forms_match_frozen_oracle_values() {
        let s75 = ShapeParam::new(0.75).unwrap();
        let s90 = ShapeParam::new(0.9).unwrap();
        assert_abs_diff_eq!(
            riccati1_closed(0.2, order(0.75), s75),
            0.31438811375902263,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            riccati1_closed(0.2, order(0.9), s90),
            0.23951824997126233,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            riccati2_closed(0.2, order(0.9), s90),
            0.30717159697202699,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            riccati2_closed(1.0, order(0.9), s90),
            1.7484298142373767,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            conformable_closed(RiccatiKind::First, 0.2, order(0.75)),
            0.37888719224584343,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            conformable_closed(RiccatiKind::First, 1.0, order(0.9)),
            0.80445480029840136,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            conformable_closed(RiccatiKind::Second, 1.0, order(0.9)),
            1.8456513744119154,
            epsilon = 1e-13
        );
    }

    #[test]
    fn closed_forms_vanish_at_origin() {
        for alpha in [0.5, 0.75, 0.9, 1.0] {
            let o = order(alpha);
            let s = ShapeParam::equal_to_order(o);
            assert_abs_diff_eq!(riccati1_closed(0.0, o, s), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(riccati2_closed(0.0, o, s), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(
                conformable_closed(RiccatiKind::Second, 0.0, o),
                0.0,
                epsilon = 1e-14
            );
        }
        assert_abs_diff_eq!(exact_alpha1(RiccatiKind::First, 0.0), 0.0);
        assert_abs_diff_eq!(exact_alpha1(RiccatiKind::Second, 0.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            exact_alpha1(RiccatiKind::First, 1.0),
            0.76159415595576489,
            epsilon = 1e-15
        );
    }

    #[test]
    fn series_first_benchmark() {
        assert_abs_diff_eq!(series_solution_ex1(3.0, 0.0, 5).unwrap().value, 0.0);
        // Single term at x = 1: 1/Γ(3/2).
        let one = series_solution_ex1(1.0, 1.0, 1).unwrap();
        assert_abs_diff_eq!(one.value, std::f64::consts::FRAC_2_SQRT_PI, epsilon = 1e-13);
        // Converged sum equals e·erf(1).
        let full = series_solution_ex1(1.0, 1.0, 40).unwrap();
        assert_abs_diff_eq!(full.value, 2.2906982523032382, epsilon = 1e-12);
        assert!(full.tail_bound < 1e-12);
        assert!(series_solution_ex1(1.0, 1.0, 0).is_err());
        assert!(series_solution_ex1(1.0, -0.5, 3).is_err());
    }

    #[test]
    fn series_second_benchmark() {
        assert_abs_diff_eq!(series_solution_ex2(0.0, 5).unwrap().value, 0.0);
        let one = series_solution_ex2(1.0, 1).unwrap();
        assert_abs_diff_eq!(one.value, 0.51583047638652003, epsilon = 1e-13);
        let full = series_solution_ex2(1.0, 20).unwrap();
        assert_abs_diff_eq!(full.value, 0.44928826807081252, epsilon = 1e-12);
        assert!(full.tail_bound < 1e-12);
    }

    #[test]
    fn series_agree_with_numeric_solves() {
        let curve = solve_numeric(&GfdProblem::example1(1.0), 1.0, 4096).unwrap();
        for &(x, y) in curve.samples().iter().filter(|&&(x, _)| x >= 1.0 / 64.0) {
            let series = series_solution_ex1(1.0, x, EXAMPLE1_DEFAULT_TERMS).unwrap();
            assert_abs_diff_eq!(series.value, y, epsilon = 1e-6);
        }
        let curve = solve_numeric(&GfdProblem::example2(), 1.0, 4096).unwrap();
        for &(x, y) in curve.samples().iter().filter(|&&(x, _)| x >= 1.0 / 64.0) {
            let series = series_solution_ex2(x, EXAMPLE2_DEFAULT_TERMS).unwrap();
            assert_abs_diff_eq!(series.value, y, epsilon = 1e-6);
        }
    }

    #[test]
    fn error_curve_excludes_zero_baseline_points() {
        let grid = [0.0, 0.2, 1.0];
        let curve = abs_rel_error_curve(
            RiccatiKind::First,
            OperatorFamily::Generalized,
            order(0.75),
            &grid,
        );
        assert_eq!(curve.excluded, vec![0.0]);
        assert_eq!(curve.points.len(), 2);
        assert_abs_diff_eq!(curve.points[0].1, 0.59284409722950983, epsilon = 1e-12);

        let cd = abs_rel_error_curve(
            RiccatiKind::First,
            OperatorFamily::Conformable,
            order(0.75),
            &grid,
        );
        assert_abs_diff_eq!(cd.points[0].1, 0.91962800523445086, epsilon = 1e-12);

        // Classical limit: both families coincide with the baseline.
        let flat = abs_rel_error_curve(
            RiccatiKind::First,
            OperatorFamily::Generalized,
            order(1.0),
            &[0.25, 0.5, 1.0],
        );
        for &(_, e) in &flat.points {
            assert!(e <= 1e-12);
        }
    }

    #[test]
    fn families_coincide_at_order_one() {
        for kind in [RiccatiKind::First, RiccatiKind::Second] {
            for x in [0.1, 0.4, 0.7, 1.0] {
                let gfd = riccati_closed(kind, OperatorFamily::Generalized, x, order(1.0));
                let cd = riccati_closed(kind, OperatorFamily::Conformable, x, order(1.0));
                assert_abs_diff_eq!(gfd, cd, epsilon = 1e-12);
                assert_abs_diff_eq!(gfd, exact_alpha1(kind, x), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn curve_construction_rejects_disorder() {
        assert!(SolutionCurve::new(
            vec![(0.0, 0.0), (0.5, 1.0), (0.5, 2.0)],
            SolveMethod::ClosedForm
        )
        .is_err());
        assert!(SolutionCurve::new(vec![(0.0, f64::NAN)], SolveMethod::ClosedForm).is_err());
    }
}
