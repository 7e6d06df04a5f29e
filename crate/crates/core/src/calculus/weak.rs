//! Weak fractional derivatives tested against a battery of bumps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ResidualReport;
use crate::error::{Error, Result};
use crate::grid::{Direction, DomainKind, Grid, SampledFunction};
use crate::operators::{check_order, rl_derivative, rl_integral};
use crate::quadrature::{integrate, integrate_product};
use crate::testfn::Bump;

/// Default relative tolerance of [`weak_derivative_verify`].
pub const WEAK_TOLERANCE: f64 = 1e-3;

/// Per-bump scales are floored at this fraction of the largest one, so a
/// bump that barely meets the support of `u` is not judged on rounding.
const SCALE_FLOOR: f64 = 1e-2;

/// Test bumps: `size` equispaced centers times support widths
/// {0.1, 0.2, 0.4}·(b−a), with centers clipped so every support stays at
/// least two cells and 2% of the length inside the domain.
pub fn battery(grid: &Grid, size: usize) -> Vec<Bump> {
    let (a, b, h) = (grid.a(), grid.b(), grid.h());
    let len = b - a;
    let mut out = Vec::new();
    for frac in [0.1, 0.2, 0.4] {
        let hw = 0.5 * frac * len;
        let margin = (2.0 * h).max(0.02 * len);
        let (lo, hi) = (a + hw + margin, b - hw - margin);
        if lo > hi {
            continue;
        }
        for k in 0..size {
            let c = a + (k as f64 + 0.5) * len / size as f64;
            out.push(Bump::new(c.clamp(lo, hi), hw));
        }
    }
    out
}

/// Smooth seeded field with max |ζ| = 1: a few random low cosine modes.
pub fn smooth_noise(grid: Grid, seed: u64) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64)> =
        (1..=4).map(|_| (rng.gen_range(0.5..1.0), rng.gen_range(0.0..std::f64::consts::TAU))).collect();
    let (a, len) = (grid.a(), grid.length());
    let raw = SampledFunction::from_fn(grid, |x| {
        let t = (x - a) / len;
        modes
            .iter()
            .enumerate()
            .map(|(k, &(amp, phase))| amp * (std::f64::consts::PI * (k + 1) as f64 * t + phase).cos())
            .sum()
    });
    let m = raw.max_abs();
    raw.scale(1.0 / m)
}

struct Outcome {
    residual: f64,
    scale: f64,
}

fn test_one(
    u: &SampledFunction,
    v: &SampledFunction,
    bump: &Bump,
    alpha: f64,
    direction: Direction,
) -> Result<Outcome> {
    let grid = *u.grid();
    let phi = SampledFunction::from_fn(grid, |x| bump.eval(x));
    let opp = direction.opposite();
    let dphi = rl_derivative(&phi, alpha, opp, None)?.output;
    let vphi = v.mul(&phi)?;
    let udphi = u.mul(&dphi)?;
    let lhs = integrate_product(v, &phi)?;
    let mut rhs = integrate(&udphi)?;
    if grid.kind() == DomainKind::TruncatedLine {
        // The pollution tail of D^α_opp φ beyond the window integrates to
        // −I^{1−α}_opp φ at the window end; u is taken as constant there.
        let end = match direction {
            Direction::Left => 0,
            Direction::Right => grid.n(),
        };
        let j = rl_integral(&phi, 1.0 - alpha, opp)?.output;
        let ue = u.value(end).ok_or(Error::MissingBoundaryValue { node: end })?;
        rhs -= ue * j.value(end).unwrap_or(0.0);
    }
    let scale = integrate(&vphi.map(f64::abs))?.max(integrate(&udphi.map(f64::abs))?);
    Ok(Outcome { residual: lhs - rhs, scale })
}

/// Checks that `v` is the weak fractional derivative of `u`:
/// `∫ v·φ = ∫ u·D^α_opp φ` for every bump φ of the [`battery`].
///
/// The opposite-side derivative of the zero extension is computed on the
/// whole window. On a truncated line the part of its tail beyond the window
/// is added in closed form with `u` frozen at the window end. The residual
/// is the largest per-bump `|∫vφ − ∫u·Dφ|` relative to
/// `max(∫|vφ|, ∫|u·Dφ|)`, floored at 1% of the largest such scale in the
/// battery; the tolerance is [`WEAK_TOLERANCE`].
pub fn weak_derivative_verify(
    u: &SampledFunction,
    v: &SampledFunction,
    alpha: f64,
    direction: Direction,
    battery_size: usize,
) -> Result<ResidualReport> {
    check_order(alpha, "weak derivative")?;
    if u.grid() != v.grid() {
        return Err(Error::pre("u and v live on different grids"));
    }
    if battery_size == 0 {
        return Err(Error::pre("battery size must be positive"));
    }
    let bumps = battery(u.grid(), battery_size);
    if bumps.is_empty() {
        return Err(Error::pre("grid too coarse for the test battery"));
    }
    let outcomes: Vec<Outcome> =
        bumps.par_iter().map(|b| test_one(u, v, b, alpha, direction)).collect::<Result<_>>()?;
    let mut worst = (0usize, 0.0f64);
    let mut max_abs = 0.0f64;
    let floor = SCALE_FLOOR * outcomes.iter().map(|o| o.scale).fold(0.0, f64::max);
    for (k, o) in outcomes.iter().enumerate() {
        let scale = o.scale.max(floor);
        let rel = if scale > 0.0 { o.residual.abs() / scale } else { o.residual.abs() };
        if rel > worst.1 || k == 0 {
            worst = (k, rel);
        }
        max_abs = max_abs.max(o.residual.abs());
    }
    let wb = bumps[worst.0];
    Ok(ResidualReport::new("weak_derivative", worst.1, WEAK_TOLERANCE)
        .with("tests", bumps.len() as f64)
        .with("worst_center", wb.center)
        .with("worst_half_width", wb.half_width)
        .with("max_abs_residual", max_abs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_interior() {
        let g = Grid::finite(-1.0, 1.0, 400).unwrap();
        let bs = battery(&g, 5);
        assert_eq!(bs.len(), 15);
        for b in bs {
            let (lo, hi) = b.support();
            assert!(lo > -1.0 && hi < 1.0);
        }
    }

    #[test]
    fn noise_is_seeded_and_normalized() {
        let g = Grid::finite(0.0, 1.0, 100).unwrap();
        let a = smooth_noise(g, 7);
        assert_eq!(a, smooth_noise(g, 7));
        assert_ne!(a, smooth_noise(g, 8));
        assert!((a.max_abs() - 1.0).abs() < 1e-15);
    }
}
