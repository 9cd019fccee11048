//! The fractional operators: closed form and limit definition, termwise
//! Caputo-matching derivatives on generalized polynomials, product/quotient
//! rules, the fractional integral, and Rolle / mean-value point finders.
//!
//! Everything reduces through `D^α f(t) = A(α, β) · t^(1−α) · f′(t)` with
//! `A(α, β) = Γ(β)/Γ(β − α + 1)`.

use std::sync::Arc;

use thiserror::Error;

use crate::expr::{GeneralizedPolynomial, Term, EXPONENT_MERGE_TOL};
use crate::specfun::{gfd_prefactor, ln_gamma_pos, FracOrder, ShapeParam};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracOpsError {
    #[error("operator point must be positive, got t = {t}")]
    NonPositivePoint { t: f64 },
    #[error("monomial exponent must exceed -1, got {exponent}")]
    ExponentOutOfRange { exponent: f64 },
    #[error("termwise derivative requires nonnegative exponents, got {exponent}")]
    NegativeExponent { exponent: f64 },
    #[error("exponent {exponent} underflows below -1 under order {order}")]
    ExponentUnderflow { exponent: f64, order: f64 },
    #[error("per-exponent shape strategy has no single prefactor; supply an exponent")]
    StrategyNeedsExponent,
    #[error("per-exponent shape requires a positive exponent, got {exponent}")]
    ShapeFromExponent { exponent: f64 },
    #[error("derivative closure disagrees with finite differences at t = {at}: df = {claimed}, finite-difference = {observed}")]
    DerivativeMismatch {
        at: f64,
        claimed: f64,
        observed: f64,
    },
    #[error("division by zero: g({at}) = 0")]
    DivisionByZero { at: f64 },
    #[error("non-finite sample at x = {at}")]
    NonFiniteSample { at: f64 },
    #[error("adaptive quadrature exceeded maximum subdivision depth")]
    QuadratureDepth,
    #[error("invalid interval [{a}, {b}]: need 0 < a < b")]
    InvalidInterval { a: f64, b: f64 },
    #[error("endpoint values differ: f(a) = {fa}, f(b) = {fb}")]
    EndpointsDiffer { fa: f64, fb: f64 },
    #[error("no stationary point located in the interval")]
    NoStationaryPoint,
    #[error("mean-value constant must be positive, got h = {h}")]
    NonPositiveConstant { h: f64 },
}

/// A function together with its first derivative, both defined on the
/// positive reals.
///
/// Construction cross-checks the claimed derivative against central finite
/// differences at a few sample points, so a mismatched pair is rejected up
/// front.
pub struct DifferentiableFn {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    df: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl DifferentiableFn {
    const DEFAULT_SAMPLES: [f64; 3] = [0.5, 1.0, 1.7];

    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, FracOpsError> {
        Self::with_samples(f, df, &Self::DEFAULT_SAMPLES)
    }

    /// Like [`new`](Self::new) but validates at caller-chosen points, for
    /// functions whose domain excludes the defaults.
    pub fn with_samples(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
        samples: &[f64],
    ) -> Result<Self, FracOpsError> {
        let value = Self {
            f: Arc::new(f),
            df: Arc::new(df),
        };
        for &t in samples {
            let h = 1e-5 * t.abs().max(1.0);
            let observed = ((value.f)(t + h) - (value.f)(t - h)) / (2.0 * h);
            let claimed = (value.df)(t);
            if (observed - claimed).abs() > 1e-6 * claimed.abs().max(1.0) {
                return Err(FracOpsError::DerivativeMismatch {
                    at: t,
                    claimed,
                    observed,
                });
            }
        }
        Ok(value)
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    #[inline]
    pub fn derivative(&self, t: f64) -> f64 {
        (self.df)(t)
    }
}

/// How the shape parameter `β` is chosen when applying an operator.
///
/// `Fixed` keeps one explicit `β`; `EqualsAlpha` is the `β = α` convention
/// used by the benchmark problems; `EqualsExponent` re-chooses `β = k` per
/// monomial, which makes the operator agree with the Caputo derivative on
/// power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaStrategy {
    Fixed(ShapeParam),
    EqualsAlpha,
    EqualsExponent,
}

/// Order `α` plus the shape-selection strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    order: FracOrder,
    strategy: BetaStrategy,
}

impl OperatorParams {
    pub fn fixed(order: FracOrder, shape: ShapeParam) -> Self {
        Self {
            order,
            strategy: BetaStrategy::Fixed(shape),
        }
    }

    pub fn beta_equals_alpha(order: FracOrder) -> Self {
        Self {
            order,
            strategy: BetaStrategy::EqualsAlpha,
        }
    }

    pub fn beta_equals_exponent(order: FracOrder) -> Self {
        Self {
            order,
            strategy: BetaStrategy::EqualsExponent,
        }
    }

    #[inline]
    pub fn order(&self) -> FracOrder {
        self.order
    }

    #[inline]
    pub fn strategy(&self) -> BetaStrategy {
        self.strategy
    }

    /// The prefactor `A(α, β)` for strategies that pin a single `β`.
    pub fn prefactor(&self) -> Result<f64, FracOpsError> {
        match self.strategy {
            BetaStrategy::Fixed(shape) => Ok(gfd_prefactor(self.order, shape)),
            BetaStrategy::EqualsAlpha => Ok(gfd_prefactor(
                self.order,
                ShapeParam::equal_to_order(self.order),
            )),
            BetaStrategy::EqualsExponent => Err(FracOpsError::StrategyNeedsExponent),
        }
    }
}

/// Closed-form derivative `A(α, β) · t^(1−α) · f′(t)` for `t > 0`.
pub fn gfd_closed(func: &DifferentiableFn, p: &OperatorParams, t: f64) -> Result<f64, FracOpsError> {
    if t <= 0.0 || t.is_nan() {
        return Err(FracOpsError::NonPositivePoint { t });
    }
    let a = p.prefactor()?;
    Ok(a * t.powf(1.0 - p.order().value()) * func.derivative(t))
}

/// Difference-quotient estimate of the limit definition.
///
/// The limit substitutes `h = A ε t^(1−α)` and reduces to a classical
/// derivative, so the estimator uses symmetric differences in `h` with
/// Richardson extrapolation over `h, h/2, h/4`. Agrees with [`gfd_closed`]
/// within 1e-6 for smooth functions.
pub fn gfd_limit(func: &DifferentiableFn, p: &OperatorParams, t: f64) -> Result<f64, FracOpsError> {
    if t <= 0.0 || t.is_nan() {
        return Err(FracOpsError::NonPositivePoint { t });
    }
    let a = p.prefactor()?;
    let h = (1e-4 * t.max(1.0)).min(0.5 * t);
    let quotient = |h: f64| (func.value(t + h) - func.value(t - h)) / (2.0 * h);
    let d1 = quotient(h);
    let d2 = quotient(0.5 * h);
    let d3 = quotient(0.25 * h);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    let extrapolated = (16.0 * r2 - r1) / 15.0;
    Ok(a * t.powf(1.0 - p.order().value()) * extrapolated)
}

/// Outcome of the right-limit estimate at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroLimit {
    Finite(f64),
    Divergent,
}

const ZERO_LIMIT_MAX_HALVINGS: i32 = 320;
const ZERO_LIMIT_DIVERGENCE_BOUND: f64 = 1e12;

/// Right-limit of the closed form as `t → 0⁺`, sampled on the geometric
/// grid `t = 2^(−j)`.
///
/// Reports [`ZeroLimit::Divergent`] when magnitudes grow without bound.
/// This is an estimator: sequences that drift slower than the grid can
/// resolve are classified by comparing the first and last magnitudes.
pub fn gfd_at_zero(func: &DifferentiableFn, p: &OperatorParams) -> Result<ZeroLimit, FracOpsError> {
    let a = p.prefactor()?;
    let alpha = p.order().value();
    let mut prev: Option<f64> = None;
    let mut first_mag = 0.0;
    let mut g = 0.0;
    for j in 1..=ZERO_LIMIT_MAX_HALVINGS {
        let t = 2f64.powi(-j);
        g = a * t.powf(1.0 - alpha) * func.derivative(t);
        if !g.is_finite() || g.abs() > ZERO_LIMIT_DIVERGENCE_BOUND {
            return Ok(ZeroLimit::Divergent);
        }
        if j == 1 {
            first_mag = g.abs();
        }
        if let Some(pg) = prev {
            if (g - pg).abs() <= 1e-12 * (1.0 + g.abs()) {
                return Ok(ZeroLimit::Finite(g));
            }
        }
        prev = Some(g);
    }
    if g.abs() > 10.0 * first_mag.max(f64::MIN_POSITIVE) {
        Ok(ZeroLimit::Divergent)
    } else {
        Ok(ZeroLimit::Finite(g))
    }
}

/// Derivative of the monomial `t^k` as a `(coefficient, exponent)` pair.
///
/// Under the fixed-shape strategies the coefficient is `k · A(α, β)`; under
/// the per-exponent strategy (`β = k`) it telescopes to
/// `Γ(k+1)/Γ(k−α+1)`, the Caputo value. A zero exponent maps to
/// coefficient 0 (derivative of a constant).
pub fn gfd_monomial(k: f64, p: &OperatorParams) -> Result<(f64, f64), FracOpsError> {
    if k <= -1.0 || k.is_nan() {
        return Err(FracOpsError::ExponentOutOfRange { exponent: k });
    }
    let alpha = p.order().value();
    let coeff = match p.strategy() {
        BetaStrategy::Fixed(_) | BetaStrategy::EqualsAlpha => k * p.prefactor()?,
        BetaStrategy::EqualsExponent => {
            if k.abs() <= EXPONENT_MERGE_TOL {
                0.0
            } else if k < 0.0 {
                return Err(FracOpsError::ShapeFromExponent { exponent: k });
            } else {
                (ln_gamma_pos(k + 1.0) - ln_gamma_pos(k - alpha + 1.0)).exp()
            }
        }
    };
    Ok((coeff, k - alpha))
}

/// Termwise map `c · t^k → c · Γ(k+1)/Γ(k−μ+1) · t^(k−μ)` for a raw order
/// `μ`, dropping constants. Used for composed orders that may exceed 1.
pub(crate) fn caputo_term_map(
    poly: &GeneralizedPolynomial,
    mu: f64,
) -> Result<GeneralizedPolynomial, FracOpsError> {
    let mut out = Vec::with_capacity(poly.terms().len());
    for term in poly.terms() {
        let k = term.exponent;
        if k.abs() <= EXPONENT_MERGE_TOL {
            continue;
        }
        if k - mu <= -1.0 {
            return Err(FracOpsError::ExponentUnderflow {
                exponent: k,
                order: mu,
            });
        }
        let coeff = term.coeff * (ln_gamma_pos(k + 1.0) - ln_gamma_pos(k - mu + 1.0)).exp();
        out.push(Term {
            coeff,
            exponent: k - mu,
        });
    }
    Ok(GeneralizedPolynomial::from_terms_unchecked(out))
}

/// Caputo-compatible derivative of a generalized polynomial with
/// nonnegative exponents: termwise `c·t^k → c·Γ(k+1)/Γ(k−α+1)·t^(k−α)`,
/// constants to zero.
pub fn caputo_series_derivative(
    poly: &GeneralizedPolynomial,
    order: FracOrder,
) -> Result<GeneralizedPolynomial, FracOpsError> {
    for term in poly.terms() {
        if term.exponent < -EXPONENT_MERGE_TOL {
            return Err(FracOpsError::NegativeExponent {
                exponent: term.exponent,
            });
        }
    }
    caputo_term_map(poly, order.value())
}

/// Both routes of the composition identity `D^{a1} D^{a2} = D^{a1+a2}` on a
/// generalized polynomial, returned as `(lhs, rhs)` for comparison.
pub fn compose_check(
    poly: &GeneralizedPolynomial,
    a1: FracOrder,
    a2: FracOrder,
) -> Result<(GeneralizedPolynomial, GeneralizedPolynomial), FracOpsError> {
    let mu = a1.value() + a2.value();
    for term in poly.terms() {
        if term.exponent > EXPONENT_MERGE_TOL && term.exponent - mu <= -1.0 {
            return Err(FracOpsError::ExponentUnderflow {
                exponent: term.exponent,
                order: mu,
            });
        }
    }
    let inner = caputo_term_map(poly, a2.value())?;
    let lhs = caputo_term_map(&inner, a1.value())?;
    let rhs = caputo_term_map(poly, mu)?;
    Ok((lhs, rhs))
}

/// Residual of the product rule `D(fg) = f·D(g) + g·D(f)` at `t`.
pub fn product_rule_residual(
    f: &DifferentiableFn,
    g: &DifferentiableFn,
    p: &OperatorParams,
    t: f64,
) -> Result<f64, FracOpsError> {
    if t <= 0.0 || t.is_nan() {
        return Err(FracOpsError::NonPositivePoint { t });
    }
    let w = p.prefactor()? * t.powf(1.0 - p.order().value());
    let (ft, gt) = (f.value(t), g.value(t));
    let (dft, dgt) = (f.derivative(t), g.derivative(t));
    let lhs = w * (dft * gt + ft * dgt);
    let rhs = ft * (w * dgt) + gt * (w * dft);
    Ok((lhs - rhs).abs())
}

/// Residual of the quotient rule `D(f/g) = (g·D(f) − f·D(g))/g²` at `t`.
pub fn quotient_rule_residual(
    f: &DifferentiableFn,
    g: &DifferentiableFn,
    p: &OperatorParams,
    t: f64,
) -> Result<f64, FracOpsError> {
    if t <= 0.0 || t.is_nan() {
        return Err(FracOpsError::NonPositivePoint { t });
    }
    let gt = g.value(t);
    if gt == 0.0 {
        return Err(FracOpsError::DivisionByZero { at: t });
    }
    let w = p.prefactor()? * t.powf(1.0 - p.order().value());
    let ft = f.value(t);
    let (dft, dgt) = (f.derivative(t), g.derivative(t));
    let lhs = w * (dft * gt - ft * dgt) / (gt * gt);
    let rhs = (gt * (w * dft) - ft * (w * dgt)) / (gt * gt);
    Ok((lhs - rhs).abs())
}

pub const INTEGRAL_DEFAULT_TOL: f64 = 1e-10;

/// Fractional integral `(1/A) ∫₀ᵗ f(x) x^(α−1) dx`.
///
/// The substitution `u = x^α` turns the kernel into a constant Jacobian,
/// so the integrand is bounded and plain adaptive quadrature applies:
/// the value is `(1/(αA)) ∫₀^(t^α) f(u^(1/α)) du`.
pub fn fractional_integral(
    f: impl Fn(f64) -> f64,
    p: &OperatorParams,
    t: f64,
) -> Result<f64, FracOpsError> {
    fractional_integral_with_tol(f, p, t, INTEGRAL_DEFAULT_TOL)
}

/// [`fractional_integral`] with a caller-chosen absolute tolerance.
pub fn fractional_integral_with_tol(
    f: impl Fn(f64) -> f64,
    p: &OperatorParams,
    t: f64,
    tol: f64,
) -> Result<f64, FracOpsError> {
    if t <= 0.0 || t.is_nan() {
        return Err(FracOpsError::NonPositivePoint { t });
    }
    let a = p.prefactor()?;
    let alpha = p.order().value();
    let upper = t.powf(alpha);
    let integrand = |u: f64| f(u.powf(1.0 / alpha));
    let total = adaptive_simpson(&integrand, 0.0, upper, tol)?;
    Ok(total / (a * alpha))
}

fn sample(g: &impl Fn(f64) -> f64, x: f64) -> Result<f64, FracOpsError> {
    let v = g(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(FracOpsError::NonFiniteSample { at: x })
    }
}

fn adaptive_simpson(
    g: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, FracOpsError> {
    let fa = sample(g, a)?;
    let fb = sample(g, b)?;
    let m = 0.5 * (a + b);
    let fm = sample(g, m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(g, a, fa, b, fb, m, fm, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    g: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, FracOpsError> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = sample(g, lm)?;
    let frm = sample(g, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(FracOpsError::QuadratureDepth);
    }
    let half_tol = 0.5 * tol;
    Ok(
        simpson_step(g, a, fa, m, fm, lm, flm, left, half_tol, depth - 1)?
            + simpson_step(g, m, fm, b, fb, rm, frm, right, half_tol, depth - 1)?,
    )
}

const SCAN_CELLS: usize = 2048;
const ROLLE_GFD_TOL: f64 = 1e-10;

/// Rolle point: a `c ∈ (a, b)` where the fractional derivative vanishes,
/// given `f(a) = f(b)`.
///
/// Since `A · t^(1−α) > 0` on `(a, b)`, the derivative vanishes exactly
/// where `f′` does; the search bisects a sign change of `f′`.
pub fn rolle_point(
    func: &DifferentiableFn,
    a: f64,
    b: f64,
    p: &OperatorParams,
) -> Result<f64, FracOpsError> {
    if a <= 0.0 || b <= a || a.is_nan() || b.is_nan() {
        return Err(FracOpsError::InvalidInterval { a, b });
    }
    let (fa, fb) = (func.value(a), func.value(b));
    if (fa - fb).abs() > 1e-12 * fa.abs().max(1.0) {
        return Err(FracOpsError::EndpointsDiffer { fa, fb });
    }
    let width_tol = 1e-12 * (b - a);
    let step = (b - a) / SCAN_CELLS as f64;
    let mut x0 = a;
    let mut d0 = func.derivative(x0);
    for i in 1..=SCAN_CELLS {
        let x1 = a + i as f64 * step;
        let d1 = func.derivative(x1);
        let candidate = if d0 == 0.0 {
            Some(x0)
        } else if d0 * d1 < 0.0 {
            Some(bisect(|t| func.derivative(t), x0, x1, width_tol))
        } else {
            None
        };
        if let Some(c) = candidate {
            if c > a && c < b {
                let value = gfd_closed(func, p, c)?;
                if value.abs() <= ROLLE_GFD_TOL {
                    return Ok(c);
                }
            }
        }
        x0 = x1;
        d0 = d1;
    }
    Err(FracOpsError::NoStationaryPoint)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width_tol: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > width_tol {
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

/// The mean-value constant `h = 1/Γ(α)`.
pub fn mvt_default_h(order: FracOrder) -> f64 {
    (-ln_gamma_pos(order.value())).exp()
}

/// The mean-value constant `h = Γ(β−α+1)/(α Γ(β)) = 1/(α A)` under which
/// the mean-value identity always admits a point (it is the classical mean
/// value theorem after the substitution `u = t^α`).
pub fn mvt_consistent_h(order: FracOrder, shape: ShapeParam) -> f64 {
    1.0 / (order.value() * gfd_prefactor(order, shape))
}

const MVT_TOL: f64 = 1e-8;

/// Searches `[a, b]` for a point `c` where the fractional derivative equals
/// `(f(b) − f(a)) / (h (b^α − a^α))`.
///
/// Scans densely and refines sign changes by bisection. `None` means no
/// such point exists in the interval, which is a legitimate outcome for
/// some choices of `h`.
pub fn mvt_search(
    func: &DifferentiableFn,
    a: f64,
    b: f64,
    p: &OperatorParams,
    h: f64,
) -> Result<Option<f64>, FracOpsError> {
    if a <= 0.0 || b <= a || a.is_nan() || b.is_nan() {
        return Err(FracOpsError::InvalidInterval { a, b });
    }
    if h <= 0.0 || h.is_nan() {
        return Err(FracOpsError::NonPositiveConstant { h });
    }
    let alpha = p.order().value();
    let a_pref = p.prefactor()?;
    let target = (func.value(b) - func.value(a)) / (h * (b.powf(alpha) - a.powf(alpha)));
    let tol = MVT_TOL * (1.0 + target.abs());
    let phi = |x: f64| a_pref * x.powf(1.0 - alpha) * func.derivative(x) - target;

    let step = (b - a) / SCAN_CELLS as f64;
    let width_tol = 1e-12 * (b - a);
    let mut x0 = a;
    let mut p0 = phi(x0);
    if p0.abs() <= tol {
        return Ok(Some(a));
    }
    for i in 1..=SCAN_CELLS {
        let x1 = a + i as f64 * step;
        let p1 = phi(x1);
        if p1.abs() <= tol {
            return Ok(Some(x1));
        }
        if p0 * p1 < 0.0 {
            let c = bisect(phi, x0, x1, width_tol);
            if phi(c).abs() <= tol {
                return Ok(Some(c));
            }
        }
        x0 = x1;
        p0 = p1;
    }
    Ok(None)
}
