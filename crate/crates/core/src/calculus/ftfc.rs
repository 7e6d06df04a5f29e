//! Kernel coefficient and reconstruction `f = c·κ + I^α D^α f`.

use super::interior_l2;
use crate::error::{Error, Result};
use crate::grid::{Direction, DomainKind, Grid, SampledFunction};
use crate::operators::{check_order, rl_derivative, rl_integral};
use crate::quadrature::extrapolate_with_exponents;
use crate::special::gamma_ok;

/// Kernel function `(x−a)^{α−1}` (left) or `(b−x)^{α−1}` (right), with the
/// singular endpoint excluded.
pub fn kernel_function(grid: Grid, alpha: f64, direction: Direction) -> SampledFunction {
    let (a, b) = (grid.a(), grid.b());
    let end = match direction {
        Direction::Left => 0,
        Direction::Right => grid.n(),
    };
    SampledFunction::from_fn(grid, |x| {
        let d = match direction {
            Direction::Left => x - a,
            Direction::Right => b - x,
        };
        d.powf(alpha - 1.0)
    })
    .with_excluded([end])
}

/// Coefficient `c` of the kernel function in `f = c·κ + I^α D^α f`.
///
/// `c = lim I^{1−α} f / Γ(α)` at the initial endpoint. The limit is
/// extrapolated with the model `v0 + A·d^{1−α} + B·d^{2−α}` from the nodes
/// at distances h, 2h, 3h and again from 2h, 4h, 6h; estimates that differ
/// by more than 1e-3 relative to max |I^{1−α} f| are rejected. A finite
/// sample at the endpoint means f is bounded there, so the limit is 0; on a
/// truncated line the coefficient is 0 as well.
pub fn ftfc_constant(f: &SampledFunction, alpha: f64, direction: Direction) -> Result<f64> {
    check_order(alpha, "kernel coefficient")?;
    if f.grid().kind() == DomainKind::TruncatedLine {
        return Ok(0.0);
    }
    let g = match direction {
        Direction::Left => f.clone(),
        Direction::Right => f.reflect(),
    };
    if !g.is_excluded(0) {
        return Ok(0.0);
    }
    let h = g.grid().h();
    if g.grid().n() < 6 {
        return Err(Error::pre("kernel coefficient needs at least 6 intervals"));
    }
    let big = rl_integral(&g, 1.0 - alpha, Direction::Left)?.output;
    let v = |k: usize| big.value(k).ok_or(Error::MissingBoundaryValue { node: k });
    let (e1, e2) = (1.0 - alpha, 2.0 - alpha);
    let d = |k: f64| k * h;
    let first = extrapolate_with_exponents([d(1.0), d(2.0), d(3.0)], [v(1)?, v(2)?, v(3)?], e1, e2);
    let second = extrapolate_with_exponents([d(2.0), d(4.0), d(6.0)], [v(2)?, v(4)?, v(6)?], e1, e2);
    let scale = big.max_abs().max(first.abs());
    if scale == 0.0 {
        return Ok(0.0);
    }
    if !((first - second).abs() <= 1e-3 * scale) {
        return Err(Error::UnstableExtrapolation { first, second });
    }
    Ok(first / gamma_ok(alpha))
}

/// The two parts of `f = c·κ + I^α D^α f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FtfcDecomposition {
    pub c: f64,
    pub kernel_part: SampledFunction,
    pub integral_part: SampledFunction,
    /// Interior L² norm of `f − kernel_part − integral_part`.
    pub residual: f64,
    /// `residual` divided by the interior L² norm of `f`.
    pub relative_residual: f64,
}

impl FtfcDecomposition {
    pub fn reconstruction(&self) -> Result<SampledFunction> {
        self.kernel_part.add(&self.integral_part)
    }
}

/// Splits `f` into its kernel part and `I^α D^α f`.
pub fn ftfc_reconstruct(f: &SampledFunction, alpha: f64, direction: Direction) -> Result<FtfcDecomposition> {
    let c = ftfc_constant(f, alpha, direction)?;
    let grid = *f.grid();
    let kernel_part =
        if c == 0.0 { SampledFunction::zeros(grid) } else { kernel_function(grid, alpha, direction).scale(c) };
    let d = rl_derivative(f, alpha, direction, None)?.output;
    let integral_part = rl_integral(&d, alpha, direction)?.output;
    let diff = f.sub(&kernel_part)?.sub(&integral_part)?;
    let residual = interior_l2(&diff)?;
    let norm = interior_l2(f)?;
    let relative_residual = if norm > 0.0 { residual / norm } else { residual };
    Ok(FtfcDecomposition { c, kernel_part, integral_part, residual, relative_residual })
}
