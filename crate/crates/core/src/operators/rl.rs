//! Riemann-Liouville integral and derivative, Caputo derivative.

use std::collections::BTreeSet;

use super::kernels::{L1Weights, ProductWeights};
use super::{check_order, OperatorResult, Scheme};
use crate::error::{Error, Result};
use crate::grid::{Direction, DomainKind, SampledFunction};
use crate::quadrature::{extrapolate_quadratic, PowerSingularity};
use crate::special::{gamma_ok, reciprocal_gamma};

/// Samples prepared for a left-sided scheme: every entry finite, with the
/// initial-endpoint singularity (if any) split off.
struct LeftSamples {
    regular: Vec<f64>,
    singular: Option<PowerSingularity>,
    terminal_excluded: bool,
}

enum MissingStart {
    Extrapolate,
    Fail,
}

fn prepare_left(f: &SampledFunction, boundary: Option<f64>, missing: MissingStart) -> Result<LeftSamples> {
    let n = f.grid().n();
    let h = f.grid().h();
    if let Some(&i) = f.excluded().iter().find(|&&i| i != 0 && i != n) {
        return Err(Error::pre(format!("interior node {i} is excluded; operators need interior samples")));
    }
    let start_missing = f.is_excluded(0);
    let terminal_excluded = f.is_excluded(n);
    if (start_missing || terminal_excluded) && n < 6 {
        return Err(Error::pre("too few nodes to model an excluded endpoint"));
    }
    let mut regular = f.values().to_vec();
    let mut singular = None;
    if start_missing {
        if let Some(b) = boundary {
            regular[0] = b;
        } else {
            let fit = PowerSingularity::fit(|k| regular.get(k).copied(), h);
            match (fit, missing) {
                (Some(m), _) => {
                    for (j, v) in regular.iter_mut().enumerate().skip(1) {
                        *v -= m.singular_part(j as f64 * h);
                    }
                    regular[0] = m.offset;
                    singular = Some(m);
                }
                (None, MissingStart::Extrapolate) => {
                    regular[0] = extrapolate_quadratic(regular[1], regular[2], regular[3]);
                }
                (None, MissingStart::Fail) => return Err(Error::MissingBoundaryValue { node: 0 }),
            }
        }
    }
    if terminal_excluded {
        regular[n] = extrapolate_quadratic(regular[n - 1], regular[n - 2], regular[n - 3]);
    }
    Ok(LeftSamples { regular, singular, terminal_excluded })
}

fn reflect_result(r: OperatorResult) -> OperatorResult {
    OperatorResult { output: r.output.reflect(), ..r }
}

/// Riemann-Liouville integral of order σ ∈ (0, 2).
///
/// The piecewise-linear interpolant of `f` is integrated exactly against
/// `(x − y)^{σ−1}/Γ(σ)`. An excluded initial endpoint is modelled as a power
/// singularity `C·(x−a)^{−γ}` when the samples show one, and integrated in
/// closed form; otherwise its value is extrapolated.
pub fn rl_integral(f: &SampledFunction, sigma: f64, direction: Direction) -> Result<OperatorResult> {
    if !(sigma > 0.0 && sigma < 2.0) {
        return Err(Error::pre(format!("RL integral requires 0<σ<2, got {sigma}")));
    }
    f.check_truncation()?;
    if direction == Direction::Right {
        return rl_integral(&f.reflect(), sigma, Direction::Left).map(reflect_result);
    }
    let grid = *f.grid();
    let (n, h) = (grid.n(), grid.h());
    let prep = prepare_left(f, None, MissingStart::Extrapolate)?;
    let mut out = ProductWeights::new(sigma, h, n).apply_left(&prep.regular);
    let mut excluded = BTreeSet::new();
    if let Some(m) = prep.singular {
        for (c, beta) in m.terms() {
            let k = c * gamma_ok(1.0 + beta) * reciprocal_gamma(1.0 + beta + sigma);
            for (i, v) in out.iter_mut().enumerate().skip(1) {
                *v += k * (i as f64 * h).powf(beta + sigma);
            }
            if (beta + sigma).abs() <= 1e-9 {
                out[0] += k;
            } else if beta + sigma < 0.0 {
                excluded.insert(0);
            }
        }
    }
    if prep.terminal_excluded {
        excluded.insert(n);
    }
    Ok(OperatorResult::new(SampledFunction::from_parts(grid, out, excluded), Scheme::ProductTrapezoid, Some(2.0)))
}

fn derivative_left(
    f: &SampledFunction,
    alpha: f64,
    boundary: Option<f64>,
    boundary_term: bool,
) -> Result<OperatorResult> {
    let grid = *f.grid();
    let (n, h) = (grid.n(), grid.h());
    let line = grid.kind() == DomainKind::TruncatedLine;
    let prep = prepare_left(f, boundary, MissingStart::Fail)?;
    if prep.singular.is_some() && !boundary_term {
        return Err(Error::MissingBoundaryValue { node: 0 });
    }
    let mut out = L1Weights::new(alpha, h, n).apply_left(&prep.regular);
    let mut excluded = BTreeSet::new();
    if !line {
        excluded.insert(0);
        if boundary_term {
            let c0 = prep.regular[0] * reciprocal_gamma(1.0 - alpha);
            for (i, v) in out.iter_mut().enumerate().skip(1) {
                *v += c0 * (i as f64 * h).powf(-alpha);
            }
        }
        if let Some(m) = prep.singular {
            for (c, beta) in m.terms() {
                let k = c * gamma_ok(1.0 + beta) * reciprocal_gamma(1.0 + beta - alpha);
                for (i, v) in out.iter_mut().enumerate().skip(1) {
                    *v += k * (i as f64 * h).powf(beta - alpha);
                }
            }
        }
    }
    if prep.terminal_excluded {
        excluded.insert(n);
    }
    Ok(OperatorResult::new(
        SampledFunction::from_parts(grid, out, excluded),
        Scheme::CompositeCaputo,
        Some(2.0 - alpha),
    ))
}

/// Riemann-Liouville derivative of order α ∈ (0, 1).
///
/// Uses the absolutely-continuous representation
/// `D^α f = f(a)(x−a)^{−α}/Γ(1−α) + I^{1−α} f′`, with `f′` the exact slope
/// of the piecewise-linear interpolant (L1 rule). The singular endpoint node
/// is excluded. `boundary_value` replaces an excluded endpoint sample; without
/// it, an excluded endpoint must show an integrable power singularity, which
/// is then differentiated in closed form.
///
/// On a truncated line the window stands for ℝ: there is no boundary term
/// and no node is excluded.
pub fn rl_derivative(
    f: &SampledFunction,
    alpha: f64,
    direction: Direction,
    boundary_value: Option<f64>,
) -> Result<OperatorResult> {
    check_order(alpha, "RL derivative")?;
    f.check_truncation()?;
    match direction {
        Direction::Left => derivative_left(f, alpha, boundary_value, true),
        Direction::Right => derivative_left(&f.reflect(), alpha, boundary_value, true).map(reflect_result),
    }
}

/// Caputo derivative `I^{1−α} f′` (left) or `−I^{1−α}_b f′` (right).
///
/// Shares the L1 sum with [`rl_derivative`], so the two differ by exactly the
/// boundary kernel term.
pub fn caputo_derivative(f: &SampledFunction, alpha: f64, direction: Direction) -> Result<OperatorResult> {
    check_order(alpha, "Caputo derivative")?;
    f.check_truncation()?;
    match direction {
        Direction::Left => derivative_left(f, alpha, None, false),
        Direction::Right => derivative_left(&f.reflect(), alpha, None, false).map(reflect_result),
    }
}

/// Weak Caputo derivative: `I^{1−α}` of the weak derivative of the
/// interpolant. The weak derivative of a piecewise-linear function is its
/// piecewise-constant slope, so this coincides with [`caputo_derivative`].
pub fn weak_caputo(f: &SampledFunction, alpha: f64, direction: Direction) -> Result<OperatorResult> {
    caputo_derivative(f, alpha, direction)
}

/// The kernel term `f(a)(x−a)^{−α}/Γ(1−α)` (left) or its mirror, sampled on
/// the grid with the singular endpoint excluded.
pub fn boundary_term(f: &SampledFunction, alpha: f64, direction: Direction) -> Result<SampledFunction> {
    let grid = *f.grid();
    let n = grid.n();
    let (node, end) = match direction {
        Direction::Left => (0, grid.a()),
        Direction::Right => (n, grid.b()),
    };
    let fa = f.value(node).ok_or(Error::MissingBoundaryValue { node })?;
    let c = fa * reciprocal_gamma(1.0 - alpha);
    Ok(SampledFunction::from_fn(grid, |x| c * (x - end).abs().powf(-alpha)).with_excluded([node]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn unit(n: usize) -> Grid {
        Grid::finite(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn integral_of_constant() {
        let f = SampledFunction::from_fn(unit(256), |_| 1.0);
        let r = rl_integral(&f, 0.5, Direction::Left).unwrap();
        assert_eq!(r.output.value(0), Some(0.0));
        assert!((r.output.value(256).unwrap() - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-12);
    }

    #[test]
    fn integral_of_kernel_is_constant() {
        let alpha = 0.3;
        let f = SampledFunction::from_fn(unit(512), |x| x.powf(alpha - 1.0));
        assert!(f.is_excluded(0));
        let r = rl_integral(&f, 1.0 - alpha, Direction::Left).unwrap();
        let g = gamma_ok(alpha);
        for (_, v) in r.output.defined() {
            assert!((v - g).abs() < 1e-10 * g);
        }
    }

    #[test]
    fn derivative_of_kernel_vanishes() {
        let alpha = 0.6;
        let f = SampledFunction::from_fn(unit(512), |x| x.powf(alpha - 1.0));
        let r = rl_derivative(&f, alpha, Direction::Left, None).unwrap();
        assert!(r.output.max_abs() < 1e-9);
    }

    #[test]
    fn missing_boundary_value() {
        let f = SampledFunction::from_fn(unit(64), |x| 1.0 + x).with_excluded([0]);
        let e = rl_derivative(&f, 0.5, Direction::Left, None).unwrap_err();
        assert!(matches!(e, Error::MissingBoundaryValue { node: 0 }));
        let r = rl_derivative(&f, 0.5, Direction::Left, Some(1.0)).unwrap();
        let full = SampledFunction::from_fn(unit(64), |x| 1.0 + x);
        let s = rl_derivative(&full, 0.5, Direction::Left, None).unwrap();
        assert_eq!(r.output.values()[10], s.output.values()[10]);
    }

    #[test]
    fn caputo_of_constant_is_zero() {
        let f = SampledFunction::from_fn(unit(64), |_| 3.0);
        let r = caputo_derivative(&f, 0.5, Direction::Right).unwrap();
        assert_eq!(r.output.max_abs(), 0.0);
        assert!(r.output.is_excluded(64));
    }
}
