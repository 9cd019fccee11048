//! Fractional-calculus toolkit built around a gamma-prefactored local
//! fractional derivative.
//!
//! The central operator is `D^α f(t) = A(α, β) · t^(1−α) · f′(t)` with the
//! prefactor `A(α, β) = Γ(β)/Γ(β − α + 1)`. Setting `A = 1` recovers the
//! conformable derivative; choosing `β` equal to a monomial's exponent
//! recovers the Caputo derivative termwise on power series.
//!
//! Modules:
//!
//! - [`specfun`] — log-gamma kernel and the prefactor `A(α, β)`
//! - [`expr`] — generalized polynomials (real exponents) and Maclaurin
//!   expansions of exp/sin/cos into that form
//! - [`fracops`] — the fractional operators: closed form, limit estimator,
//!   termwise Caputo-matching derivative, product/quotient rules, fractional
//!   integral, Rolle and mean-value point finders
//! - [`odesolve`] — fractional initial value problems: classical-ODE
//!   transform, singularity-free RK4 reference solver, closed-form and
//!   series solutions for the built-in benchmark problems
//! - [`report`] — embedded reference tables, regression comparison,
//!   error-curve emission, and the self-verification suite

pub mod expr;
pub mod fracops;
pub mod odesolve;
pub mod report;
pub mod specfun;
