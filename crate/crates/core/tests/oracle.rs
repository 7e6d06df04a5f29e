use fracalc_core::oracle::{
    catalog, power_law_derivative, power_law_integral, reference, step_weak_derivative, OracleCase, Query, Reference,
};
use fracalc_core::{gamma, Direction};

/// `I^σ x^μ` at `x` by direct quadrature: with `x − y = x·s^{1/σ}` the
/// integral becomes `x^{μ+σ}/Γ(σ+1)·∫₀¹ (1 − s^{1/σ})^μ ds`, which has no
/// singular weight; composite midpoint rule.
fn quadrature_integral(mu: f64, sigma: f64, x: f64) -> f64 {
    let m = 2_000_000;
    let h = 1.0 / m as f64;
    let sum: f64 = (0..m).map(|k| (1.0 - ((k as f64 + 0.5) * h).powf(1.0 / sigma)).powf(mu)).sum();
    x.powf(mu + sigma) / gamma(sigma + 1.0).unwrap() * sum * h
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn gamma_ratios_match_direct_quadrature() {
    for (mu, sigma) in [(0.0, 0.5), (0.5, 0.25), (1.0, 0.75), (2.0, 0.5)] {
        let exact = power_law_integral(mu, sigma, Direction::Left).unwrap().eval(0.7, 0.0, 1.0);
        let quad = quadrature_integral(mu, sigma, 0.7);
        assert!(rel(exact, quad) < 1e-5, "μ={mu} σ={sigma}: {exact} vs {quad}");
    }
}

#[test]
fn derivative_matches_differentiated_quadrature() {
    for (mu, alpha) in [(0.5, 0.5), (1.0, 0.25), (2.0, 0.75)] {
        let x = 0.6;
        let dx = 1e-4;
        let fd =
            (quadrature_integral(mu, 1.0 - alpha, x + dx) - quadrature_integral(mu, 1.0 - alpha, x - dx)) / (2.0 * dx);
        let exact = power_law_derivative(mu, alpha, Direction::Left).unwrap().eval(x, 0.0, 1.0);
        assert!(rel(exact, fd) < 1e-5, "μ={mu} α={alpha}: {exact} vs {fd}");
    }
}

#[test]
fn documented_values() {
    let half = power_law_derivative(0.5, 0.5, Direction::Left).unwrap();
    assert_eq!(half.exponent, 0.0);
    assert!((half.coeff - 0.886_226_925_5).abs() < 1e-10);
    let k = power_law_derivative(0.3 - 1.0, 0.3, Direction::Left).unwrap();
    assert_eq!(k.eval(0.4, 0.0, 1.0), 0.0);
    let c = power_law_derivative(0.0, 0.5, Direction::Left).unwrap();
    assert!(rel(c.eval(0.25, 0.0, 1.0), 2.0 / std::f64::consts::PI.sqrt()) < 1e-14);
    let i = power_law_integral(0.0, 0.5, Direction::Left).unwrap();
    assert!(rel(i.eval(0.49, 0.0, 1.0), 0.7 / gamma(1.5).unwrap()) < 1e-14);
    let kern = power_law_integral(0.4 - 1.0, 0.6, Direction::Left).unwrap();
    assert_eq!(kern.exponent, 0.0);
    assert!(rel(kern.coeff, gamma(0.4).unwrap()) < 1e-14);
    let one = power_law_integral(1.0, 1.0, Direction::Left).unwrap();
    assert!(rel(one.eval(0.8, 0.0, 1.0), 0.32) < 1e-14);
    assert!((step_weak_derivative(0.0, 1.0, 0.5, 0.25) - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-12);
    let flat = step_weak_derivative(2.0, 2.0, 0.3, 0.5);
    assert!(rel(flat, 2.0 * 1.5f64.powf(-0.3) / gamma(0.7).unwrap()) < 1e-14);
}

#[test]
fn right_sided_laws_mirror_left() {
    let l = power_law_derivative(1.5, 0.4, Direction::Left).unwrap();
    let r = power_law_derivative(1.5, 0.4, Direction::Right).unwrap();
    assert_eq!(l.eval(0.25, 0.0, 1.0), r.eval(0.75, 0.0, 1.0));
}

#[test]
fn reference_dispatch() {
    let c = OracleCase::Constant { c: 2.0, a: 0.0, b: 1.0 };
    let v = reference(&c, Query::RLDerivative, 0.5, 0.5).unwrap().value().unwrap();
    assert!((v - 1.595_769).abs() < 1e-6);
    let k = OracleCase::KernelFunction { alpha: 0.3, a: 0.0, b: 1.0 };
    for x in [0.1, 0.5, 0.9] {
        assert_eq!(reference(&k, Query::RLDerivative, x, 0.3).unwrap(), Reference::Exact(0.0));
    }
    let g = OracleCase::GaussianLine { s: 1.0 };
    assert_eq!(reference(&g, Query::RLDerivative, 0.0, 0.5).unwrap(), Reference::NoClosedForm);
    assert_eq!(reference(&c, Query::Value, 2.0, 0.5).unwrap_err().code(), "E_OUTSIDE_DOMAIN");
    let step = OracleCase::StepFunction { lambda: 0.0, mu: 1.0 };
    assert_eq!(reference(&step, Query::RLDerivative, 0.5, 1.5).unwrap(), Reference::NoClosedForm);
}

#[test]
fn rejects_non_integrable_exponent() {
    assert!(power_law_derivative(-1.0, 0.5, Direction::Left).is_err());
    assert!(power_law_integral(-1.5, 0.5, Direction::Left).is_err());
}

#[test]
fn semigroup_and_inverse_on_laws() {
    for (mu, s1, s2) in [(0.0, 0.25, 0.5), (0.5, 0.3, 0.3), (2.0, 0.75, 0.1)] {
        let a = power_law_integral(mu, s1, Direction::Left).unwrap();
        let ab = power_law_integral(a.exponent, s2, Direction::Left).unwrap();
        let direct = power_law_integral(mu, s1 + s2, Direction::Left).unwrap();
        assert!(rel(a.coeff * ab.coeff, direct.coeff) < 1e-13);
        assert!((ab.exponent - direct.exponent).abs() < 1e-15);
        let back = power_law_derivative(a.exponent, s1, Direction::Left).unwrap();
        assert!(rel(a.coeff * back.coeff, 1.0) < 1e-13);
        assert!((back.exponent - mu).abs() < 1e-15);
    }
}

#[test]
fn order_one_limit_is_ordinary_derivative() {
    for mu in [0.5, 1.0, 2.0, 3.5] {
        let d = power_law_derivative(mu, 1.0 - 1e-6, Direction::Left).unwrap();
        assert!(rel(d.coeff, mu) < 1e-4, "μ={mu}: {}", d.coeff);
    }
}

#[test]
fn catalog_serializes() {
    let entries = catalog();
    assert_eq!(entries.len(), 5);
    let json = serde_json::to_string(&entries).unwrap();
    assert!(json.contains("\"kind\":\"StepFunction\""));
}
