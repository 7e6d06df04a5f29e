//! Product and chain rules with remainder.

use rayon::prelude::*;

use super::{interior_l2, ResidualReport};
use crate::error::{Error, Result};
use crate::grid::{Direction, SampledFunction};
use crate::operators::kernels::ProductWeights;
use crate::operators::{check_order, rl_derivative, rl_integral, stencil};
use crate::quadrature::Compensated;
use crate::special::{gamma_ok, reciprocal_gamma};

/// Default relative tolerance of the product and chain rule checks.
const RULE_TOLERANCE: f64 = 1e-3;

/// RL integral of any positive order, reducing orders ≥ 2 by repeated
/// first-order integration.
pub fn integral_any(f: &SampledFunction, sigma: f64, direction: Direction) -> Result<SampledFunction> {
    if sigma < 2.0 {
        return Ok(rl_integral(f, sigma, direction)?.output);
    }
    let once = rl_integral(f, 1.0, direction)?.output;
    integral_any(&once, sigma - 1.0, direction)
}

fn require_complete(f: &SampledFunction, what: &str) -> Result<()> {
    match f.excluded().iter().next() {
        None => Ok(()),
        Some(i) => Err(Error::pre(format!("{what} has an excluded node {i}; the product rule needs every sample"))),
    }
}

/// `ψ, ψ′, …, ψ^{(m)}` by repeated finite differences.
fn stencil_derivatives(psi: &SampledFunction, m: usize) -> Vec<SampledFunction> {
    let mut out = vec![psi.clone()];
    for _ in 0..m {
        let next = stencil::derivative(out.last().expect("non-empty"));
        out.push(next);
    }
    out
}

/// Left remainder
/// `R_m(x) = 1/Γ(−α) ∫_a^x f(y)(x−y)^{−1−α}[ψ(y) − Σ_{k≤m} ψ^{(k)}(x)(y−x)^k/k!] dy`.
///
/// The bracket over `x − y` is integrated against `(x−y)^{−α}` with the
/// product-trapezoid weights of order `1 − α`.
fn remainder_left(f: &[f64], d: &[Vec<f64>], alpha: f64, m: usize, h: f64) -> Vec<f64> {
    let n = f.len() - 1;
    let sigma = 1.0 - alpha;
    let w = ProductWeights::new(sigma, h, n);
    // Γ(1−α)/Γ(−α) = −α
    let coef = -alpha * w.scale();
    let fact: Vec<f64> = (0..=m).map(|k| gamma_ok(k as f64 + 1.0)).collect();
    (0..=n)
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                return 0.0;
            }
            let mut acc = Compensated::new();
            for j in 0..i {
                let delta = (i - j) as f64 * h;
                let mut taylor = 0.0;
                let mut pw = 1.0;
                for k in 0..=m {
                    taylor += d[k][i] * pw / fact[k];
                    pw *= -delta;
                }
                let g = f[j] * (d[0][j] - taylor) / delta;
                acc.add(w.weight(i, j) * g);
            }
            let diag = if m == 0 { -f[i] * d[1][i] } else { 0.0 };
            acc.add(diag);
            coef * acc.value()
        })
        .collect()
}

/// Right-hand side `Σ_k C_{k,α} D^{α−k}f·D^kψ + R_m` for the left rule.
fn product_rhs_left(f: &SampledFunction, d: &[SampledFunction], alpha: f64, m: usize) -> Result<SampledFunction> {
    let grid = *f.grid();
    let mut rhs = rl_derivative(f, alpha, Direction::Left, None)?.output.mul(&d[0])?;
    let g1a = gamma_ok(1.0 + alpha);
    for (k, dk) in d.iter().enumerate().take(m + 1).skip(1) {
        let c = g1a * reciprocal_gamma(1.0 - k as f64 + alpha) / gamma_ok(k as f64 + 1.0);
        let term = integral_any(f, k as f64 - alpha, Direction::Left)?.mul(dk)?.scale(c);
        rhs = rhs.add(&term)?;
    }
    let vals: Vec<Vec<f64>> = d.iter().map(|s| s.values().to_vec()).collect();
    let r = remainder_left(f.values(), &vals, alpha, m, grid.h());
    rhs.add(&SampledFunction::new(grid, r, [])?)
}

fn oriented(
    f: &SampledFunction,
    d: &[SampledFunction],
    direction: Direction,
) -> (SampledFunction, Vec<SampledFunction>) {
    match direction {
        Direction::Left => (f.clone(), d.to_vec()),
        Direction::Right => {
            let dr =
                d.iter().enumerate().map(|(k, s)| s.reflect().scale(if k % 2 == 0 { 1.0 } else { -1.0 })).collect();
            (f.reflect(), dr)
        }
    }
}

fn rule_report(name: &str, lhs: &SampledFunction, rhs: &SampledFunction) -> Result<ResidualReport> {
    let residual = interior_l2(&lhs.sub(rhs)?)?;
    let lhs_norm = interior_l2(lhs)?;
    let relative = if lhs_norm > 0.0 { residual / lhs_norm } else { residual };
    Ok(ResidualReport::new(name, residual, RULE_TOLERANCE * lhs_norm)
        .with("lhs_norm", lhs_norm)
        .with("relative", relative))
}

/// Product rule `D^α(fψ) = Σ_{k≤m} C_{k,α} D^{α−k}f·D^kψ + R_m(f,ψ)` with
/// `C_{k,α} = Γ(1+α)/(Γ(k+1)Γ(1−k+α))` and `D^{α−k} = I^{k−α}` for k ≥ 1.
///
/// Derivatives of ψ come from finite differences. The right-sided rule is
/// the mirror image of the left one, so its k-th term carries `(−1)^k`.
/// The residual is the interior L² norm of LHS − RHS; the tolerance is
/// 1e-3 times the interior L² norm of the LHS.
pub fn product_rule_check(
    f: &SampledFunction,
    psi: &SampledFunction,
    alpha: f64,
    direction: Direction,
    m: usize,
) -> Result<ResidualReport> {
    let d = stencil_derivatives(psi, m.max(1));
    product_rule_check_with(f, &d, alpha, direction, m)
}

/// [`product_rule_check`] with `psi_derivatives[k] = ψ^{(k)}` supplied by
/// the caller (at least `max(m, 1) + 1` entries).
pub fn product_rule_check_with(
    f: &SampledFunction,
    psi_derivatives: &[SampledFunction],
    alpha: f64,
    direction: Direction,
    m: usize,
) -> Result<ResidualReport> {
    check_order(alpha, "product rule")?;
    let need = m.max(1) + 1;
    if psi_derivatives.len() < need {
        return Err(Error::pre(format!("product rule with m={m} needs {need} derivatives of ψ")));
    }
    require_complete(f, "f")?;
    for (k, s) in psi_derivatives.iter().take(need).enumerate() {
        require_complete(s, &format!("derivative {k} of ψ"))?;
    }
    let (f, d) = oriented(f, &psi_derivatives[..need], direction);
    let lhs = rl_derivative(&f.mul(&d[0])?, alpha, Direction::Left, None)?.output;
    let rhs = product_rhs_left(&f, &d, alpha, m)?;
    Ok(rule_report("product_rule", &lhs, &rhs)?.with("m", m as f64))
}

/// Chain rule `D^α φ(f) = φ(f)/f·D^α f + R_0(f, φ(f)/f)`.
///
/// Where `f = 0` the ratio is replaced by its limit `φ′(0)`; the number of
/// such nodes is reported as `limit_nodes`.
pub fn chain_rule_check(
    f: &SampledFunction,
    phi: impl Fn(f64) -> f64,
    dphi: impl Fn(f64) -> f64,
    alpha: f64,
    direction: Direction,
) -> Result<ResidualReport> {
    check_order(alpha, "chain rule")?;
    if phi(0.0).abs() > 1e-14 {
        return Err(Error::pre(format!("chain rule needs φ(0) = 0, got {}", phi(0.0))));
    }
    require_complete(f, "f")?;
    let slope0 = dphi(0.0);
    let mut limit_nodes = 0usize;
    let ratio: Vec<f64> = f
        .values()
        .iter()
        .map(|&v| {
            if v == 0.0 {
                limit_nodes += 1;
                slope0
            } else {
                phi(v) / v
            }
        })
        .collect();
    let psi = SampledFunction::new(*f.grid(), ratio, [])?;
    let d = stencil_derivatives(&psi, 1);
    let composed = f.map(&phi);
    let (f, d) = oriented(f, &d, direction);
    let composed = match direction {
        Direction::Left => composed,
        Direction::Right => composed.reflect(),
    };
    let lhs = rl_derivative(&composed, alpha, Direction::Left, None)?.output;
    let rhs = product_rhs_left(&f, &d, alpha, 0)?;
    Ok(rule_report("chain_rule", &lhs, &rhs)?.with("limit_nodes", limit_nodes as f64))
}
