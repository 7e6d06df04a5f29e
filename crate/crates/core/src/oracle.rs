//! Closed-form reference values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Direction;
use crate::special::{gamma, reciprocal_gamma};

/// `coeff · d^exponent`, with `d = x − a` (left) or `b − x` (right).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub coeff: f64,
    pub exponent: f64,
    pub direction: Direction,
}

impl PowerLaw {
    pub fn eval(&self, x: f64, a: f64, b: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        let d = match self.direction {
            Direction::Left => x - a,
            Direction::Right => b - x,
        };
        self.coeff * d.powf(self.exponent)
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > -1.0 {
        Ok(())
    } else {
        Err(Error::pre(format!("power law needs mu > -1 for integrability, got {mu}")))
    }
}

/// `D^α d^μ = Γ(μ+1)/Γ(μ+1−α) · d^{μ−α}`; identically zero for μ = α − 1.
pub fn power_law_derivative(mu: f64, alpha: f64, direction: Direction) -> Result<PowerLaw> {
    check_mu(mu)?;
    // μ = α − 1 computed as (α − 1) + 1 − α may miss the pole by an ulp.
    let q = mu + 1.0 - alpha;
    let q = if q.abs() < 1e-13 { 0.0 } else { q };
    Ok(PowerLaw { coeff: gamma(mu + 1.0)? * reciprocal_gamma(q), exponent: mu - alpha, direction })
}

/// `I^σ d^μ = Γ(μ+1)/Γ(μ+1+σ) · d^{μ+σ}`.
pub fn power_law_integral(mu: f64, sigma: f64, direction: Direction) -> Result<PowerLaw> {
    check_mu(mu)?;
    if !(sigma > 0.0) {
        return Err(Error::pre(format!("integral order must be positive, got {sigma}")));
    }
    Ok(PowerLaw { coeff: gamma(mu + 1.0)? * reciprocal_gamma(mu + 1.0 + sigma), exponent: mu + sigma, direction })
}

/// Left weak derivative of the step function equal to λ on (−1, 0) and μ on (0, 1).
pub fn step_weak_derivative(lambda: f64, mu: f64, alpha: f64, x: f64) -> f64 {
    let r = reciprocal_gamma(1.0 - alpha);
    let base = lambda * (x + 1.0).powf(-alpha);
    if x > 0.0 {
        (base + (mu - lambda) * x.powf(-alpha)) * r
    } else {
        base * r
    }
}

/// A closed-form test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OracleCase {
    /// (x − a)^μ on (a, b).
    PowerLaw { mu: f64, a: f64, b: f64 },
    /// c on (a, b).
    Constant { c: f64, a: f64, b: f64 },
    /// λ on (−1, 0), μ on (0, 1), mean value at 0.
    StepFunction { lambda: f64, mu: f64 },
    /// (x − a)^{α−1} on (a, b).
    KernelFunction { alpha: f64, a: f64, b: f64 },
    /// exp(−x²/(2s²)) on ℝ.
    GaussianLine { s: f64 },
}

/// What to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Query {
    Value,
    RLIntegral,
    RLDerivative,
}

/// An exact value, or the declaration that none is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Reference {
    Exact(f64),
    NoClosedForm,
}

impl Reference {
    pub fn value(self) -> Option<f64> {
        match self {
            Reference::Exact(v) => Some(v),
            Reference::NoClosedForm => None,
        }
    }
}

impl OracleCase {
    /// Closed interval on which the case is defined.
    pub fn domain(&self) -> (f64, f64) {
        match *self {
            OracleCase::PowerLaw { a, b, .. }
            | OracleCase::Constant { a, b, .. }
            | OracleCase::KernelFunction { a, b, .. } => (a, b),
            OracleCase::StepFunction { .. } => (-1.0, 1.0),
            OracleCase::GaussianLine { .. } => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OracleCase::PowerLaw { .. } => "PowerLaw",
            OracleCase::Constant { .. } => "Constant",
            OracleCase::StepFunction { .. } => "StepFunction",
            OracleCase::KernelFunction { .. } => "KernelFunction",
            OracleCase::GaussianLine { .. } => "GaussianLine",
        }
    }

    /// Sample value at `x` (NaN where the function is singular).
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            OracleCase::PowerLaw { mu, a, .. } => (x - a).powf(mu),
            OracleCase::Constant { c, .. } => c,
            OracleCase::StepFunction { lambda, mu } => {
                if x < 0.0 {
                    lambda
                } else if x > 0.0 {
                    mu
                } else {
                    0.5 * (lambda + mu)
                }
            }
            OracleCase::KernelFunction { alpha, a, .. } => (x - a).powf(alpha - 1.0),
            OracleCase::GaussianLine { s } => (-x * x / (2.0 * s * s)).exp(),
        }
    }
}

/// Exact left-sided value, integral or derivative of `case` at `point`.
pub fn reference(case: &OracleCase, query: Query, point: f64, order: f64) -> Result<Reference> {
    let (lo, hi) = case.domain();
    if !(point >= lo && point <= hi) {
        return Err(Error::OutsideDomain(point));
    }
    if query != Query::Value && !(order > 0.0) {
        return Err(Error::pre(format!("order must be positive, got {order}")));
    }
    let left = Direction::Left;
    let v = match (*case, query) {
        (_, Query::Value) => case.value(point),
        (OracleCase::PowerLaw { mu, a, b }, Query::RLIntegral) => {
            power_law_integral(mu, order, left)?.eval(point, a, b)
        }
        (OracleCase::PowerLaw { mu, a, b }, Query::RLDerivative) => {
            power_law_derivative(mu, order, left)?.eval(point, a, b)
        }
        (OracleCase::Constant { c, a, b }, Query::RLIntegral) => {
            c * power_law_integral(0.0, order, left)?.eval(point, a, b)
        }
        (OracleCase::Constant { c, a, b }, Query::RLDerivative) => {
            c * power_law_derivative(0.0, order, left)?.eval(point, a, b)
        }
        (OracleCase::StepFunction { lambda, mu }, Query::RLIntegral) => {
            let r = reciprocal_gamma(order + 1.0);
            (lambda * (point + 1.0).powf(order) + (mu - lambda) * point.max(0.0).powf(order)) * r
        }
        (OracleCase::StepFunction { lambda, mu }, Query::RLDerivative) => {
            if order >= 1.0 {
                return Ok(Reference::NoClosedForm);
            }
            step_weak_derivative(lambda, mu, order, point)
        }
        (OracleCase::KernelFunction { alpha, a, b }, Query::RLIntegral) => {
            power_law_integral(alpha - 1.0, order, left)?.eval(point, a, b)
        }
        (OracleCase::KernelFunction { alpha, a, b }, Query::RLDerivative) => {
            power_law_derivative(alpha - 1.0, order, left)?.eval(point, a, b)
        }
        (OracleCase::GaussianLine { .. }, _) => return Ok(Reference::NoClosedForm),
    };
    Ok(Reference::Exact(v))
}

/// One documented oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub case: OracleCase,
    pub value: String,
    pub rl_integral: String,
    pub rl_derivative: String,
    pub validity: String,
}

/// The oracle catalogue with formulas, for documentation dumps.
pub fn catalog() -> Vec<CatalogEntry> {
    let e = |case, value: &str, int: &str, der: &str, validity: &str| CatalogEntry {
        case,
        value: value.into(),
        rl_integral: int.into(),
        rl_derivative: der.into(),
        validity: validity.into(),
    };
    vec![
        e(
            OracleCase::PowerLaw { mu: 0.5, a: 0.0, b: 1.0 },
            "(x-a)^mu",
            "Gamma(mu+1)/Gamma(mu+1+s) (x-a)^(mu+s)",
            "Gamma(mu+1)/Gamma(mu+1-alpha) (x-a)^(mu-alpha)",
            "mu > -1, x in (a,b]",
        ),
        e(
            OracleCase::Constant { c: 1.0, a: 0.0, b: 1.0 },
            "c",
            "c (x-a)^s / Gamma(s+1)",
            "c (x-a)^(-alpha) / Gamma(1-alpha)",
            "x in (a,b]",
        ),
        e(
            OracleCase::StepFunction { lambda: 0.0, mu: 1.0 },
            "lambda on (-1,0), mu on (0,1)",
            "[lambda (x+1)^s + (mu-lambda) max(x,0)^s] / Gamma(s+1)",
            "[lambda (x+1)^(-alpha) + (mu-lambda) x^(-alpha) 1{x>0}] / Gamma(1-alpha)",
            "x in (-1,1), 0 < alpha < 1, derivative in the weak sense",
        ),
        e(
            OracleCase::KernelFunction { alpha: 0.5, a: 0.0, b: 1.0 },
            "(x-a)^(alpha-1)",
            "Gamma(alpha)/Gamma(alpha+s) (x-a)^(alpha-1+s)",
            "0 for order alpha; Gamma(alpha)/Gamma(alpha-beta) (x-a)^(alpha-1-beta) for order beta",
            "0 < alpha < 1, x in (a,b]",
        ),
        e(OracleCase::GaussianLine { s: 1.0 }, "exp(-x^2/(2 s^2))", "no closed form", "no closed form", "x in R"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_examples() {
        let k = power_law_derivative(-0.5, 0.5, Direction::Left).unwrap();
        assert_eq!(k.coeff, 0.0);
        let c = power_law_derivative(0.0, 0.5, Direction::Left).unwrap();
        assert!((c.coeff - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert_eq!(c.exponent, -0.5);
        let s = power_law_derivative(0.5, 0.5, Direction::Left).unwrap();
        assert!((s.coeff - 0.886_226_925_452_758).abs() < 1e-13);
        assert!(power_law_derivative(-1.0, 0.5, Direction::Left).is_err());
    }

    #[test]
    fn integral_examples() {
        let p = power_law_integral(0.0, 0.5, Direction::Left).unwrap();
        assert!((p.eval(1.0, 0.0, 1.0) - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-13);
        let k = power_law_integral(0.3 - 1.0, 0.7, Direction::Left).unwrap();
        assert!((k.coeff - gamma(0.3).unwrap()).abs() < 1e-12);
        assert_eq!(k.exponent, 0.0);
        let r = power_law_integral(1.0, 1.0, Direction::Right).unwrap();
        assert!((r.eval(0.25, 0.0, 1.0) - 0.75f64.powi(2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn reference_dispatch() {
        let c = OracleCase::Constant { c: 2.0, a: 0.0, b: 1.0 };
        let v = reference(&c, Query::RLDerivative, 0.5, 0.5).unwrap().value().unwrap();
        assert!((v - 1.595_769_121_605_731).abs() < 1e-12);
        let k = OracleCase::KernelFunction { alpha: 0.3, a: 0.0, b: 1.0 };
        assert_eq!(reference(&k, Query::RLDerivative, 0.7, 0.3).unwrap(), Reference::Exact(0.0));
        let g = OracleCase::GaussianLine { s: 1.0 };
        assert_eq!(reference(&g, Query::RLDerivative, 0.0, 0.5).unwrap(), Reference::NoClosedForm);
        assert!(matches!(reference(&c, Query::Value, 1.5, 0.0), Err(Error::OutsideDomain(_))));
        let s = OracleCase::StepFunction { lambda: 0.0, mu: 1.0 };
        let v = reference(&s, Query::RLDerivative, 0.25, 0.5).unwrap().value().unwrap();
        assert!((v - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-12);
    }

    #[test]
    fn step_reduces_to_constant_without_jump() {
        for &x in &[-0.5, 0.3, 0.9] {
            let v = step_weak_derivative(2.0, 2.0, 0.4, x);
            let c = 2.0 * (x + 1.0f64).powf(-0.4) * reciprocal_gamma(0.6);
            assert!((v - c).abs() < 1e-14);
        }
    }

    #[test]
    fn catalog_serializes() {
        let s = serde_json::to_string(&catalog()).unwrap();
        assert!(s.contains("\"kind\":\"GaussianLine\""));
        assert_eq!(catalog().len(), 5);
    }
}
