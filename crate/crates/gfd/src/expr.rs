//! Function representation: finite sums of `c · t^k` with real exponents
//! `k > −1`, plus Maclaurin expansion of exp/sin/cos into that form.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Exponents closer than this are treated as the same power when merging.
/// Exponents arise from exact arithmetic (`k − α`), so near-collisions are
/// rounding noise.
pub const EXPONENT_MERGE_TOL: f64 = 1e-12;

/// Library default truncation order for the elementary expansions.
pub const DEFAULT_TRUNCATION_ORDER: usize = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("exponent {exponent} out of range: exponents must exceed -1")]
    ExponentOutOfRange { exponent: f64 },
    #[error("non-finite coefficient or exponent in term ({coeff}, {exponent})")]
    NonFiniteTerm { coeff: f64, exponent: f64 },
    #[error("evaluation point {t} is negative")]
    NegativePoint { t: f64 },
    #[error("cannot evaluate at t = 0: term with negative exponent {exponent}")]
    NegativeExponentAtZero { exponent: f64 },
    #[error("truncation order must be at least 1")]
    ZeroTruncation,
    #[error("cannot parse polynomial literal: {0}")]
    Parse(String),
}

/// One `coeff · t^exponent` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub exponent: f64,
}

/// Finite sum of `c · t^k` terms with real exponents `k > −1`.
///
/// Canonical form: exponents strictly increasing, duplicates merged, zero
/// coefficients dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPolynomial {
    terms: Vec<Term>,
}

impl GeneralizedPolynomial {
    /// Builds the canonical form, rejecting exponents `≤ −1`.
    pub fn new(terms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self, ExprError> {
        let mut collected = Vec::new();
        for (coeff, exponent) in terms {
            if !coeff.is_finite() || !exponent.is_finite() {
                return Err(ExprError::NonFiniteTerm { coeff, exponent });
            }
            if exponent <= -1.0 {
                return Err(ExprError::ExponentOutOfRange { exponent });
            }
            collected.push(Term { coeff, exponent });
        }
        Ok(Self::normalize(collected))
    }

    /// Canonicalizes terms whose exponents the caller has already proven
    /// to be `> −1` and finite.
    pub(crate) fn from_terms_unchecked(terms: Vec<Term>) -> Self {
        debug_assert!(terms.iter().all(|t| t.exponent > -1.0 && t.coeff.is_finite()));
        Self::normalize(terms)
    }

    fn normalize(mut terms: Vec<Term>) -> Self {
        terms.retain(|t| t.coeff != 0.0);
        terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if (term.exponent - last.exponent).abs() <= EXPONENT_MERGE_TOL => {
                    last.coeff += term.coeff;
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        Self { terms: merged }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn monomial(coeff: f64, exponent: f64) -> Result<Self, ExprError> {
        Self::new([(coeff, exponent)])
    }

    pub fn constant(value: f64) -> Self {
        Self::new([(value, 0.0)]).expect("exponent 0 is always valid")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates `Σ c · t^k`, summing in increasing-exponent order.
    ///
    /// `t = 0` is allowed only when every exponent is nonnegative; negative
    /// `t` is outside the domain of real powers.
    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        if t < 0.0 || t.is_nan() {
            return Err(ExprError::NegativePoint { t });
        }
        if t == 0.0 {
            if let Some(term) = self.terms.iter().find(|term| term.exponent < 0.0) {
                return Err(ExprError::NegativeExponentAtZero {
                    exponent: term.exponent,
                });
            }
            return Ok(self
                .terms
                .iter()
                .map(|term| {
                    if term.exponent == 0.0 || term.exponent.abs() <= EXPONENT_MERGE_TOL {
                        term.coeff
                    } else {
                        0.0
                    }
                })
                .sum());
        }
        Ok(self
            .terms
            .iter()
            .map(|term| term.coeff * t.powf(term.exponent))
            .sum())
    }

    /// Sum of two polynomials in canonical form.
    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::normalize(terms)
    }

    /// Scalar multiple in canonical form.
    pub fn scale(&self, factor: f64) -> Self {
        Self::normalize(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * factor,
                    exponent: t.exponent,
                })
                .collect(),
        )
    }
}

impl fmt::Display for GeneralizedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let coeff = if i == 0 {
                term.coeff
            } else if term.coeff < 0.0 {
                write!(f, " - ")?;
                -term.coeff
            } else {
                write!(f, " + ")?;
                term.coeff
            };
            if term.exponent == 0.0 {
                write!(f, "{coeff}")?;
            } else if term.exponent == 1.0 {
                write!(f, "{coeff}*t")?;
            } else {
                write!(f, "{coeff}*t^{}", term.exponent)?;
            }
        }
        Ok(())
    }
}

/// Parses literals of the form `c1*t^k1 + c2*t^k2`.
///
/// Whitespace-insensitive. Exponents may be decimals or fractions `p/q`
/// (e.g. `t^1/2`, `t^-1/4`); coefficients are decimals and may be omitted
/// (`t^2`, `-t`).
impl FromStr for GeneralizedPolynomial {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ExprError::Parse("empty expression".into()));
        }
        let mut chunks: Vec<String> = Vec::new();
        let mut current = String::new();
        let mut prev: Option<char> = None;
        for c in compact.chars() {
            let splits = (c == '+' || c == '-')
                && !matches!(prev, None | Some('e') | Some('E') | Some('^') | Some('*') | Some('/') | Some('+') | Some('-'));
            if splits {
                chunks.push(std::mem::take(&mut current));
                current.push(c);
            } else {
                current.push(c);
            }
            prev = Some(c);
        }
        chunks.push(current);

        let mut terms = Vec::new();
        for chunk in &chunks {
            terms.push(parse_term(chunk)?);
        }
        GeneralizedPolynomial::new(terms)
    }
}

fn parse_term(chunk: &str) -> Result<(f64, f64), ExprError> {
    if chunk.is_empty() {
        return Err(ExprError::Parse("empty term".into()));
    }
    let Some(tpos) = chunk.find('t') else {
        let coeff = parse_decimal(chunk)?;
        return Ok((coeff, 0.0));
    };
    if chunk[tpos + 1..].contains('t') {
        return Err(ExprError::Parse(format!(
            "term '{chunk}' contains more than one 't'"
        )));
    }
    let coeff_part = &chunk[..tpos];
    let coeff = match coeff_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => {
            let s = s.strip_suffix('*').unwrap_or(s);
            parse_decimal(s)?
        }
    };
    let rest = &chunk[tpos + 1..];
    let exponent = if rest.is_empty() {
        1.0
    } else if let Some(exp_str) = rest.strip_prefix('^') {
        parse_exponent(exp_str)?
    } else {
        return Err(ExprError::Parse(format!(
            "unexpected '{rest}' after 't' in term '{chunk}'"
        )));
    };
    Ok((coeff, exponent))
}

fn parse_decimal(s: &str) -> Result<f64, ExprError> {
    let v: f64 = s
        .parse()
        .map_err(|_| ExprError::Parse(format!("invalid number '{s}'")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ExprError::Parse(format!("non-finite number '{s}'")))
    }
}

fn parse_exponent(s: &str) -> Result<f64, ExprError> {
    if s.is_empty() {
        return Err(ExprError::Parse("missing exponent after '^'".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let p = parse_decimal(num)?;
        let q = parse_decimal(den)?;
        if q == 0.0 {
            return Err(ExprError::Parse(format!("zero denominator in '{s}'")));
        }
        Ok(p / q)
    } else {
        parse_decimal(s)
    }
}

/// Which elementary function to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryKind {
    Exp,
    Sin,
    Cos,
}

/// A rate/frequency-parameterized elementary function together with the
/// truncation order of its Maclaurin expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementarySpec {
    pub kind: ElementaryKind,
    pub rate: f64,
    pub truncation_order: usize,
}

impl ElementarySpec {
    pub fn new(kind: ElementaryKind, rate: f64, truncation_order: usize) -> Result<Self, ExprError> {
        if truncation_order == 0 {
            return Err(ExprError::ZeroTruncation);
        }
        Ok(Self {
            kind,
            rate,
            truncation_order,
        })
    }
}

/// Degree-capped Maclaurin series as a generalized polynomial.
///
/// Exp gives integer exponents `0..=N`, Sin odd exponents up to `2N+1`,
/// Cos even exponents up to `2N`, all with the standard real-series
/// coefficients (signs included).
pub fn taylor_expand(spec: &ElementarySpec) -> GeneralizedPolynomial {
    let n = spec.truncation_order;
    let rate = spec.rate;
    let mut terms = Vec::new();
    match spec.kind {
        ElementaryKind::Exp => {
            let mut c = 1.0;
            for k in 0..=n {
                terms.push(Term {
                    coeff: c,
                    exponent: k as f64,
                });
                c *= rate / (k as f64 + 1.0);
            }
        }
        ElementaryKind::Sin => {
            let mut c = rate;
            for m in 0..=n {
                terms.push(Term {
                    coeff: c,
                    exponent: (2 * m + 1) as f64,
                });
                c *= -rate * rate / (((2 * m + 2) * (2 * m + 3)) as f64);
            }
        }
        ElementaryKind::Cos => {
            let mut c = 1.0;
            for m in 0..=n {
                terms.push(Term {
                    coeff: c,
                    exponent: (2 * m) as f64,
                });
                c *= -rate * rate / (((2 * m + 1) * (2 * m + 2)) as f64);
            }
        }
    }
    GeneralizedPolynomial::from_terms_unchecked(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn poly(pairs: &[(f64, f64)]) -> GeneralizedPolynomial {
        GeneralizedPolynomial::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn taylor_exp_low_order() {
        let spec = ElementarySpec::new(ElementaryKind::Exp, 1.0, 2).unwrap();
        let p = taylor_expand(&spec);
        let terms = p.terms();
        assert_eq!(terms.len(), 3);
        assert_abs_diff_eq!(terms[0].coeff, 1.0);
        assert_abs_diff_eq!(terms[1].coeff, 1.0);
        assert_abs_diff_eq!(terms[2].coeff, 0.5);
        assert_abs_diff_eq!(terms[2].exponent, 2.0);
    }

    #[test]
    fn taylor_sin_low_order() {
        let spec = ElementarySpec::new(ElementaryKind::Sin, 2.0, 1).unwrap();
        let p = taylor_expand(&spec);
        let terms = p.terms();
        assert_eq!(terms.len(), 2);
        assert_abs_diff_eq!(terms[0].coeff, 2.0);
        assert_abs_diff_eq!(terms[0].exponent, 1.0);
        assert_abs_diff_eq!(terms[1].coeff, -8.0 / 6.0);
        assert_abs_diff_eq!(terms[1].exponent, 3.0);
    }

    #[test]
    fn taylor_cos_low_order() {
        let spec = ElementarySpec::new(ElementaryKind::Cos, 1.0, 1).unwrap();
        let p = taylor_expand(&spec);
        let terms = p.terms();
        assert_eq!(terms.len(), 2);
        assert_abs_diff_eq!(terms[0].coeff, 1.0);
        assert_abs_diff_eq!(terms[0].exponent, 0.0);
        assert_abs_diff_eq!(terms[1].coeff, -0.5);
        assert_abs_diff_eq!(terms[1].exponent, 2.0);
    }

    #[test]
    fn eval_basics() {
        let p = poly(&[(1.0, 0.0), (1.0, 1.0), (0.5, 2.0)]);
        assert_abs_diff_eq!(p.eval(1.0).unwrap(), 2.5, epsilon = 1e-15);

        let root = poly(&[(1.0, 0.5)]);
        assert_abs_diff_eq!(root.eval(4.0).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn eval_exp_series_converges_to_e() {
        let spec = ElementarySpec::new(ElementaryKind::Exp, 1.0, 20).unwrap();
        let p = taylor_expand(&spec);
        assert_abs_diff_eq!(p.eval(1.0).unwrap(), std::f64::consts::E, epsilon = 1e-12);
    }

    #[test]
    fn eval_convergence_is_monotone_in_truncation() {
        let mut prev_err = f64::INFINITY;
        for n in 3..=18 {
            let spec = ElementarySpec::new(ElementaryKind::Exp, 1.0, n).unwrap();
            let err = (taylor_expand(&spec).eval(1.0).unwrap() - std::f64::consts::E).abs();
            assert!(
                err <= prev_err + 1e-16,
                "error grew at N = {n}: {err} > {prev_err}"
            );
            prev_err = err;
        }
    }

    #[test]
    fn eval_domain_errors() {
        let p = poly(&[(1.0, -0.5)]);
        assert!(matches!(p.eval(-1.0), Err(ExprError::NegativePoint { .. })));
        assert!(matches!(
            p.eval(0.0),
            Err(ExprError::NegativeExponentAtZero { .. })
        ));
        // Nonnegative exponents are fine at zero.
        let q = poly(&[(3.0, 0.0), (2.0, 1.5)]);
        assert_abs_diff_eq!(q.eval(0.0).unwrap(), 3.0);
    }

    #[test]
    fn construction_rejects_bad_exponents() {
        assert!(GeneralizedPolynomial::new([(1.0, -1.0)]).is_err());
        assert!(GeneralizedPolynomial::new([(1.0, -1.5)]).is_err());
        assert!(GeneralizedPolynomial::new([(f64::NAN, 1.0)]).is_err());
        assert!(GeneralizedPolynomial::new([(1.0, -0.999)]).is_ok());
    }

    #[test]
    fn canonical_form_merges_and_drops() {
        let p = poly(&[(2.0, 1.0), (0.0, 3.0), (3.0, 1.0 + 1e-13), (1.0, 0.5)]);
        let terms = p.terms();
        assert_eq!(terms.len(), 2);
        assert_abs_diff_eq!(terms[0].exponent, 0.5);
        assert_abs_diff_eq!(terms[1].coeff, 5.0);
        // Exact cancellation drops the term.
        let q = poly(&[(2.0, 1.0), (-2.0, 1.0)]);
        assert!(q.is_zero());
    }

    #[test]
    fn parser_accepts_spec_forms() {
        let p: GeneralizedPolynomial = "1.5*t^2 + 0.5*t^1/2 - 3".parse().unwrap();
        let terms = p.terms();
        assert_eq!(terms.len(), 3);
        assert_abs_diff_eq!(terms[0].coeff, -3.0);
        assert_abs_diff_eq!(terms[0].exponent, 0.0);
        assert_abs_diff_eq!(terms[1].coeff, 0.5);
        assert_abs_diff_eq!(terms[1].exponent, 0.5);
        assert_abs_diff_eq!(terms[2].coeff, 1.5);

        let q: GeneralizedPolynomial = " t ^ 3/4 + 2 * t".parse().unwrap();
        assert_eq!(q.terms().len(), 2);
        assert_abs_diff_eq!(q.terms()[0].exponent, 0.75);

        let r: GeneralizedPolynomial = "-t^-1/4".parse().unwrap();
        assert_abs_diff_eq!(r.terms()[0].exponent, -0.25);
        assert_abs_diff_eq!(r.terms()[0].coeff, -1.0);

        let sci: GeneralizedPolynomial = "1e-2*t^2".parse().unwrap();
        assert_abs_diff_eq!(sci.terms()[0].coeff, 0.01);
    }

    #[test]
    fn parser_rejects_malformed() {
        assert!("".parse::<GeneralizedPolynomial>().is_err());
        assert!("t^".parse::<GeneralizedPolynomial>().is_err());
        assert!("2*t^1/0".parse::<GeneralizedPolynomial>().is_err());
        assert!("t*t".parse::<GeneralizedPolynomial>().is_err());
        assert!("t^-2".parse::<GeneralizedPolynomial>().is_err());
        assert!("abc".parse::<GeneralizedPolynomial>().is_err());
    }

    #[test]
    fn display_parse_roundtrip() {
        let p = poly(&[(1.5, 2.0), (-0.25, 0.5), (3.0, 0.0)]);
        let back: GeneralizedPolynomial = p.to_string().parse().unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn linear_ops() {
        let p = poly(&[(1.0, 1.0)]);
        let q = poly(&[(2.0, 1.0), (1.0, 2.0)]);
        let sum = p.add(&q);
        assert_eq!(sum.terms().len(), 2);
        assert_abs_diff_eq!(sum.terms()[0].coeff, 3.0);
        let scaled = q.scale(-0.5);
        assert_relative_eq!(scaled.terms()[0].coeff, -1.0);
        assert!(q.scale(0.0).is_zero());
    }
}
