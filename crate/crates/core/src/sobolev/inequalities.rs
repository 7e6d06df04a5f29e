//! Sobolev-conjugate scaling and the piecewise-constant regime test.

use serde::{Deserialize, Serialize};

use super::{frac_sobolev_norm, line_derivative_norm, lp, SobolevSpec};
use crate::calculus::ResidualReport;
use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};
use crate::operators::require_line;

/// Tolerance on the relative spread of the conjugate ratio across dilations.
const CONJUGATE_TOLERANCE: f64 = 0.05;

/// Dilations used by [`sobolev_conjugate_check`].
const DILATIONS: [f64; 3] = [0.5, 1.0, 2.0];

/// `x ↦ u(c + λ(x − c))` about the window center `c`, by linear
/// interpolation; zero where the argument leaves the window.
pub fn dilate(u: &SampledFunction, lambda: f64) -> SampledFunction {
    let g = *u.grid();
    let c = 0.5 * (g.a() + g.b());
    SampledFunction::from_fn(g, |x| u.interpolate(c + lambda * (x - c)).unwrap_or(0.0))
}

/// Scale invariance of `‖u‖_{p*} / ‖D^α u‖_p` with `p* = p/(1 − αp)`.
///
/// The ratio is computed for the dilations `u(λ·)`, λ ∈ {0.5, 1, 2}, with
/// the left RL derivative on a truncated line including its tail beyond
/// the window. The residual is the largest
/// relative deviation from the λ = 1 ratio; the tolerance is 5%.
pub fn sobolev_conjugate_check(u: &SampledFunction, alpha: f64, p: f64) -> Result<ResidualReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::pre(format!("conjugate check needs 0<α<1, got {alpha}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::pre(format!("conjugate check needs finite p >= 1, got {p}")));
    }
    let ap = alpha * p;
    if !(ap < 1.0) {
        return Err(Error::AlphaPTooLarge(ap));
    }
    require_line(u, "Sobolev conjugate check")?;
    if u.max_abs() == 0.0 {
        return Err(Error::pre("Sobolev conjugate check needs a nonzero u"));
    }
    let p_star = p / (1.0 - ap);
    let ratio = |lambda: f64| -> Result<f64> {
        let v = if lambda == 1.0 { u.clone() } else { dilate(u, lambda) };
        require_line(&v, "dilated function")?;
        Ok(lp(&v, p_star)? / line_derivative_norm(&v, alpha, p)?)
    };
    let ratios = DILATIONS.iter().map(|&l| ratio(l)).collect::<Result<Vec<_>>>()?;
    let base = ratios[1];
    let residual = ratios.iter().map(|r| (r / base - 1.0).abs()).fold(0.0, f64::max);
    Ok(ResidualReport::new("sobolev_conjugate", residual, CONJUGATE_TOLERANCE)
        .with("p_star", p_star)
        .with("ratio_half", ratios[0])
        .with("ratio_one", ratios[1])
        .with("ratio_two", ratios[2]))
}

/// Behavior of a norm sequence under grid doubling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// The last doubling changed the norm by less than 5%.
    Stable,
    /// Each of the last three doublings grew the norm by at least 10%.
    Divergent,
    Inconclusive,
}

/// Classifies a sequence of norms at successive grid doublings.
pub fn classify_refinement(norms: &[f64]) -> Regime {
    let growth: Vec<f64> = norms.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
    if growth.len() >= 3 && growth[growth.len() - 3..].iter().all(|&g| g >= 0.1) {
        return Regime::Divergent;
    }
    match growth.last() {
        Some(g) if g.abs() < 0.05 => Regime::Stable,
        _ => Regime::Inconclusive,
    }
}

/// Unit step on `grid`: 0 left of `jump`, 1 from `jump` on.
pub fn step_function(grid: Grid, jump: f64) -> SampledFunction {
    SampledFunction::from_fn(grid, |x| if x >= jump { 1.0 } else { 0.0 })
}

/// Sobolev norms of the step at the midpoint of `(a, b)` on grids with
/// `n0·2^k` cells, `k = 0..=doublings`.
pub fn step_norm_sequence(a: f64, b: f64, n0: usize, doublings: usize, spec: &SobolevSpec) -> Result<Vec<f64>> {
    let jump = 0.5 * (a + b);
    (0..=doublings)
        .map(|k| {
            let g = Grid::finite(a, b, n0 << k)?;
            frac_sobolev_norm(&step_function(g, jump), spec)
        })
        .collect()
}
