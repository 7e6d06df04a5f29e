//! Extensions beyond the original interval.

use serde::{Deserialize, Serialize};

use super::{frac_sobolev_norm, lp, Side, SobolevSpec};
use crate::error::{Error, Result};
use crate::grid::{Direction, SampledFunction};
use crate::testfn::smooth_step;

/// An extension together with its norm and the original norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionResult {
    pub extended: SampledFunction,
    /// `extended_norm / original_norm`, or 1 when both vanish.
    pub norm_ratio: f64,
    pub original_norm: f64,
    pub extended_norm: f64,
}

/// Scalar part of an [`ExtensionResult`] for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionSummary {
    pub norm_ratio: f64,
    pub original_norm: f64,
    pub extended_norm: f64,
}

impl ExtensionResult {
    fn new(extended: SampledFunction, original_norm: f64, extended_norm: f64) -> Result<Self> {
        let norm_ratio = if original_norm > 0.0 {
            extended_norm / original_norm
        } else if extended_norm == 0.0 {
            1.0
        } else {
            f64::INFINITY
        };
        if !norm_ratio.is_finite() {
            return Err(Error::pre("extension has a nonzero norm while the original norm vanishes"));
        }
        Ok(ExtensionResult { extended, norm_ratio, original_norm, extended_norm })
    }

    pub fn summary(&self) -> ExtensionSummary {
        ExtensionSummary {
            norm_ratio: self.norm_ratio,
            original_norm: self.original_norm,
            extended_norm: self.extended_norm,
        }
    }
}

/// Zero extension onto `[a − enlargement, b + enlargement]` (rounded to
/// whole cells) and the ratio of its Sobolev norm to the original one.
///
/// `u` must vanish (≤ 1e-10·max|u|) on the outer 5% of nodes at each end.
pub fn trivial_extension(u: &SampledFunction, enlargement: f64, spec: &SobolevSpec) -> Result<ExtensionResult> {
    if !(enlargement > 0.0 && enlargement.is_finite()) {
        return Err(Error::pre(format!("enlargement must be positive, got {enlargement}")));
    }
    let grid = *u.grid();
    let len = u.len();
    let m = ((len as f64) * 0.05).ceil() as usize;
    let max = u.max_abs();
    let edge = (0..m).chain(len - m..len).map(|i| u.value(i).map_or(f64::INFINITY, f64::abs)).fold(0.0, f64::max);
    if edge > 1e-10 * max {
        return Err(Error::SupportNotCompact(if max > 0.0 { edge / max } else { edge }));
    }
    let k = (enlargement / grid.h()).round().max(1.0) as usize;
    let big = grid.extended(k, k, grid.kind())?;
    let mut values = vec![0.0; k];
    values.extend_from_slice(u.values());
    values.resize(big.len(), 0.0);
    let extended = SampledFunction::new(big, values, [])?;
    let original = frac_sobolev_norm(u, spec)?;
    let ext = frac_sobolev_norm(&extended, spec)?;
    ExtensionResult::new(extended, original, ext)
}

/// Exterior extension of `u` from `(a, b)` to `(a − L, b + L)`, `L = b − a`.
///
/// Left variant: zero on `(a − L, a)`, `u` on `[a, b]` and the periodic copy
/// `u(x − L)` on `(b, b + L]`; the right variant is its mirror image. The
/// result is multiplied by a C^∞ cutoff equal to 1 on `[a, b]` that vanishes
/// beyond `0.75·L` from the interval. Requires `αp < 1` and
/// `μ > p/(1 − αp)`, and `‖u‖_{L^μ}` must be finite. The norms are those of
/// the space of `direction` with order α and exponent p.
pub fn exterior_extension(
    u: &SampledFunction,
    alpha: f64,
    p: f64,
    mu: f64,
    direction: Direction,
) -> Result<ExtensionResult> {
    let spec = SobolevSpec::new(alpha, p, Side::from(direction))?;
    let ap = alpha * p;
    if !(ap < 1.0) {
        return Err(Error::AlphaPTooLarge(ap));
    }
    let bound = p / (1.0 - ap);
    if !(mu > bound) {
        return Err(Error::MuTooSmall { mu, bound });
    }
    let lmu = lp(u, mu)?;
    if !lmu.is_finite() {
        return Err(Error::pre(format!("u is not in L^{mu}")));
    }
    let grid = *u.grid();
    let n = grid.n();
    let big = grid.extended(n, n, grid.kind())?;
    let (a, b, len) = (grid.a(), grid.b(), grid.length());
    let band = 0.75 * len;
    let cutoff = |x: f64| {
        if x < a {
            smooth_step((x - (a - band)) / band)
        } else if x > b {
            smooth_step(((b + band) - x) / band)
        } else {
            1.0
        }
    };
    // Source node of u for each extended node, if any.
    let source = |i: usize| -> Option<usize> {
        match direction {
            Direction::Left if i < n => None,
            Direction::Left if i <= 2 * n => Some(i - n),
            Direction::Left => Some(i - 2 * n),
            Direction::Right if i < n => Some(i),
            Direction::Right if i <= 2 * n => Some(i - n),
            Direction::Right => None,
        }
    };
    let mut values = Vec::with_capacity(big.len());
    let mut excluded = Vec::new();
    for i in 0..big.len() {
        match source(i) {
            None => values.push(0.0),
            Some(j) => match u.value(j) {
                Some(v) => values.push(v * cutoff(big.node(i))),
                None => {
                    values.push(f64::NAN);
                    excluded.push(i);
                }
            },
        }
    }
    let extended = SampledFunction::new(big, values, excluded)?;
    let original = frac_sobolev_norm(u, &spec)?;
    let ext = frac_sobolev_norm(&extended, &spec)?;
    ExtensionResult::new(extended, original, ext)
}
