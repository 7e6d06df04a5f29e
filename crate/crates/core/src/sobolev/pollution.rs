//! Tails of fractional derivatives outside the support.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::loglog_slope;
use crate::grid::{Direction, SampledFunction};
use crate::operators::check_order;
use crate::quadrature::Compensated;
use crate::special::reciprocal_gamma;

/// Smallest node interval `[x_lo, x_hi]` holding every sample above
/// 1e-10·max|φ|; `None` for φ ≡ 0.
pub fn support(phi: &SampledFunction) -> Option<(f64, f64)> {
    let cut = 1e-10 * phi.max_abs();
    let mut idx = phi.defined().filter(|&(_, v)| v.abs() > cut).map(|(i, _)| i);
    let first = idx.next()?;
    let last = idx.last().unwrap_or(first);
    let g = phi.grid();
    Some((g.node(first), g.node(last)))
}

/// `D^α φ(x)` at points outside the support of φ:
/// `1/Γ(−α)·∫ φ(y)|x−y|^{−1−α} dy`, nonzero only on the polluted side
/// (right of the support for the left derivative, left of it for the right
/// one). The kernel is regular there, so the integral is a plain trapezoid
/// sum over the samples. Points may lie outside the grid.
pub fn pollution_tail(phi: &SampledFunction, alpha: f64, direction: Direction, x_eval: &[f64]) -> Result<Vec<f64>> {
    check_order(alpha, "pollution tail")?;
    if !phi.excluded().is_empty() {
        return Err(Error::pre("pollution tail needs a finite sample at every node"));
    }
    let Some((lo, hi)) = support(phi) else {
        return Ok(vec![0.0; x_eval.len()]);
    };
    if let Some(&x) = x_eval.iter().find(|&&x| x >= lo && x <= hi) {
        return Err(Error::InsideSupport(x));
    }
    let g = *phi.grid();
    let h = g.h();
    let coef = reciprocal_gamma(-alpha);
    let v = phi.values();
    let n = g.n();
    Ok(x_eval
        .par_iter()
        .map(|&x| {
            let polluted = match direction {
                Direction::Left => x > hi,
                Direction::Right => x < lo,
            };
            if !polluted {
                return 0.0;
            }
            let mut acc = Compensated::new();
            for (j, &fj) in v.iter().enumerate() {
                if fj == 0.0 {
                    continue;
                }
                let w = if j == 0 || j == n { 0.5 * h } else { h };
                acc.add(w * fj * (x - g.node(j)).abs().powf(-1.0 - alpha));
            }
            coef * acc.value()
        })
        .collect())
}

/// Points per unit of ln(distance) in [`tail_lp_power`].
const TAIL_POINTS_PER_E: f64 = 80.0;

/// `∫ |D^α φ|^p` over the polluted side beyond the grid, where the tail is
/// smooth: trapezoid in ln(distance) from h to 1e4·(b−a) past the window
/// end, the first cell as a rectangle, and the far-field power law beyond.
pub fn tail_lp_power(phi: &SampledFunction, alpha: f64, p: f64, direction: Direction) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::pre(format!("tail norm needs finite p >= 1, got {p}")));
    }
    let g = *phi.grid();
    let (end, sign) = match direction {
        Direction::Left => (g.b(), 1.0),
        Direction::Right => (g.a(), -1.0),
    };
    let (s0, s1) = (g.h(), 1e4 * g.length());
    let steps = ((s1 / s0).ln() * TAIL_POINTS_PER_E).ceil() as usize;
    let dl = (s1 / s0).ln() / steps as f64;
    let dist: Vec<f64> = (0..=steps).map(|k| s0 * (k as f64 * dl).exp()).collect();
    let xs: Vec<f64> = dist.iter().map(|s| end + sign * s).collect();
    let tail = pollution_tail(phi, alpha, direction, &xs)?;
    let pw: Vec<f64> = tail.iter().map(|t| t.abs().powf(p)).collect();
    let mut acc = Compensated::new();
    acc.add(s0 * pw[0]);
    for k in 0..steps {
        acc.add(0.5 * dl * (dist[k] * pw[k] + dist[k + 1] * pw[k + 1]));
    }
    let e = (1.0 + alpha) * p - 1.0;
    acc.add(pw[steps] * s1 / e);
    Ok(acc.value())
}

/// Log-log slope of |tail| against the distance from the support midpoint,
/// the variable of the far-field expansion `c·d^{−1−α}`.
pub fn far_field_slope(phi: &SampledFunction, alpha: f64, direction: Direction, x_eval: &[f64]) -> Result<Option<f64>> {
    let tail = pollution_tail(phi, alpha, direction, x_eval)?;
    let Some((lo, hi)) = support(phi) else {
        return Ok(None);
    };
    let mid = 0.5 * (lo + hi);
    let d: Vec<f64> = x_eval.iter().map(|x| (x - mid).abs()).collect();
    Ok(loglog_slope(&d, &tail))
}
