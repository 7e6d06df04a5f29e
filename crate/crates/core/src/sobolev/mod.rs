//! Fractional Sobolev norms, seminorms, traces and inequalities.

mod extension;
mod inequalities;
mod pollution;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use extension::{exterior_extension, trivial_extension, ExtensionResult, ExtensionSummary};
pub use inequalities::{
    classify_refinement, dilate, sobolev_conjugate_check, step_function, step_norm_sequence, Regime,
};
pub use pollution::{far_field_slope, pollution_tail, support, tail_lp_power};

use crate::calculus::{ftfc_constant, kernel_function};
use crate::error::{Error, Result};
use crate::grid::{Direction, SampledFunction};
use crate::norms::lp_norm;
use crate::operators::{apply, mode_frequency, padded_spectrum, require_line, rl_derivative, Family, FracSpec};
use crate::quadrature::{extrapolate_quadratic, integrate, integrate_power_singular, Compensated};
use crate::special::zeta;

/// Which one-sided space, or their intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    Symmetric,
}

impl Side {
    fn direction(self) -> Option<Direction> {
        match self {
            Side::Left => Some(Direction::Left),
            Side::Right => Some(Direction::Right),
            Side::Symmetric => None,
        }
    }
}

impl From<Direction> for Side {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Left => Side::Left,
            Direction::Right => Side::Right,
        }
    }
}

/// Order, integrability exponent and side of a fractional Sobolev space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevSpec {
    pub alpha: f64,
    pub p: f64,
    pub side: Side,
}

impl SobolevSpec {
    pub fn new(alpha: f64, p: f64, side: Side) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::pre(format!("Sobolev order must satisfy 0<α<2, got {alpha}")));
        }
        if !(p >= 1.0) {
            return Err(Error::pre(format!("Sobolev exponent must satisfy p >= 1, got {p}")));
        }
        Ok(SobolevSpec { alpha, p, side })
    }
}

/// L^p norm with the masked trapezoid rule, so integrable singularities at
/// excluded nodes are corrected rather than dropped; `p = ∞` is the max.
pub(crate) fn lp(f: &SampledFunction, p: f64) -> Result<f64> {
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let pow = f.map(|v| if p == 2.0 { v * v } else { v.abs().powf(p) });
    Ok(integrate(&pow)?.max(0.0).powf(1.0 / p))
}

fn rl(u: &SampledFunction, alpha: f64, direction: Direction) -> Result<SampledFunction> {
    Ok(apply(u, &FracSpec::new(alpha, direction, Family::RiemannLiouville)?)?.output)
}

/// `‖D^α u‖_p` with positive quadrature weights, so the Sobolev norm built
/// from it is exactly subadditive on every grid. A boundary value of `u`
/// makes `|D^α u|^p` blow up like `d^{−αp}`.
fn derivative_lp(u: &SampledFunction, alpha: f64, p: f64, direction: Direction) -> Result<f64> {
    let d = rl(u, alpha, direction)?;
    if p.is_infinite() {
        return Ok(d.max_abs());
    }
    let pow = d.map(|v| if p == 2.0 { v * v } else { v.abs().powf(p) });
    Ok(integrate_power_singular(&pow, alpha * p)?.max(0.0).powf(1.0 / p))
}

fn one_sided(u: &SampledFunction, alpha: f64, p: f64, direction: Direction) -> Result<f64> {
    let un = lp(u, p)?;
    let dn = derivative_lp(u, alpha, p, direction)?;
    Ok(if p.is_infinite() { un + dn } else { (un.powf(p) + dn.powf(p)).powf(1.0 / p) })
}

/// `(‖u‖_p^p + ‖D^α u‖_p^p)^{1/p}` for a one-sided space; the symmetric
/// space combines both one-sided norms the same way. For `p = ∞` the sums
/// are plain sums of maxima.
pub fn frac_sobolev_norm(u: &SampledFunction, spec: &SobolevSpec) -> Result<f64> {
    let (alpha, p) = (spec.alpha, spec.p);
    match spec.side.direction() {
        Some(d) => one_sided(u, alpha, p, d),
        None => {
            let l = one_sided(u, alpha, p, Direction::Left)?;
            let r = one_sided(u, alpha, p, Direction::Right)?;
            Ok(if p.is_infinite() { l + r } else { (l.powf(p) + r.powf(p)).powf(1.0 / p) })
        }
    }
}

/// Gagliardo seminorm `(∬ |u(x)−u(y)|^p / |x−y|^{1+σp} dx dy)^{1/p}`.
///
/// Cell pairs at least two cells apart use the midpoint rule on cell means.
/// On the diagonal band (same or adjacent cells) `u` is taken as linear
/// with the local slope `s`, so the integrand is `|s|^p·|x−y|^q` with
/// `q = p(1−σ) − 1` and integrates in closed form.
pub fn gagliardo_seminorm(u: &SampledFunction, sigma: f64, p: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::pre(format!("Gagliardo order must satisfy 0<σ<1, got {sigma}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::pre(format!("Gagliardo exponent must be finite and >= 1, got {p}")));
    }
    if !(p * (1.0 - sigma) > 0.0) {
        return Err(Error::BandCorrection(p * (1.0 - sigma)));
    }
    if let Some(i) = u.excluded().iter().next() {
        return Err(Error::pre(format!("Gagliardo seminorm needs every sample; node {i} is excluded")));
    }
    let h = u.grid().h();
    let v = u.values();
    let cells = v.len() - 1;
    let pw = |x: f64| if p == 2.0 { x * x } else { x.abs().powf(p) };
    let mean: Vec<f64> = v.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let slope: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let kern: Vec<f64> = (0..cells).map(|d| (d as f64 * h).powf(-1.0 - sigma * p)).collect();
    let rows: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|k| {
            let mut acc = Compensated::new();
            for l in k + 2..cells {
                acc.add(pw(mean[k] - mean[l]) * kern[l - k]);
            }
            acc.value()
        })
        .collect();
    let mut total = Compensated::new();
    for r in rows {
        total.add(2.0 * h * h * r);
    }
    let q = p * (1.0 - sigma) - 1.0;
    let denom = (q + 1.0) * (q + 2.0);
    let same = 2.0 * h.powf(q + 2.0) / denom;
    let adjacent = h.powf(q + 2.0) * (2f64.powf(q + 2.0) - 2.0) / denom;
    for k in 0..cells {
        total.add(pw(slope[k]) * same);
        if k + 1 < cells {
            total.add(2.0 * pw(0.5 * (slope[k] + slope[k + 1])) * adjacent);
        }
    }
    Ok(total.value().max(0.0).powf(1.0 / p))
}

/// `(∫ |ξ|^{2s} |û(ξ)|² dξ)^{1/2}` with `û(ξ) = ∫ e^{−iξx} u(x) dx`.
///
/// `û` is approximated on the zero-padded DFT grid by `h·U_k` and the ξ
/// integral by the rectangle rule with `dξ = 2π/(L·h)`, corrected for the
/// cusp of the weight at ξ = 0.
pub fn fourier_seminorm(u: &SampledFunction, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::pre(format!("Fourier seminorm order must satisfy 0<s<1, got {s}")));
    }
    require_line(u, "Fourier seminorm")?;
    let h = u.grid().h();
    let spec = padded_spectrum(u);
    let len = spec.len();
    let dxi = 2.0 * PI / (len as f64 * h);
    let mut acc = Compensated::new();
    for (k, z) in spec.iter().enumerate() {
        let xi = mode_frequency(k, len, h);
        if xi != 0.0 {
            acc.add(xi.abs().powf(2.0 * s) * z.norm_sqr() * h * h * dxi);
        }
    }
    // Cusp of |ξ|^{2s} at 0: the equispaced sum misses −2ζ(−2s)·|û(0)|²·dξ^{1+2s}.
    acc.add(-2.0 * zeta(-2.0 * s)? * spec[0].norm_sqr() * h * h * dxi.powf(1.0 + 2.0 * s));
    Ok(acc.value().max(0.0).sqrt())
}

/// `‖D^α u‖_{L^p(ℝ)}` for the left derivative of `u` on a truncated line:
/// the window part plus the pollution tail beyond the window.
pub fn line_derivative_norm(u: &SampledFunction, alpha: f64, p: f64) -> Result<f64> {
    require_line(u, "line derivative norm")?;
    let d = rl_derivative(u, alpha, Direction::Left, None)?.output;
    let inside = lp_norm(&d, p)?.powf(p);
    Ok((inside + tail_lp_power(u, alpha, p, Direction::Left)?).powf(1.0 / p))
}

/// `‖D^α u‖_{L²(ℝ)} / (fourier_seminorm(u, α)/√(2π))`, which Plancherel
/// makes 1. `D^α` is the left RL derivative on the window, with its tail
/// beyond the window from [`tail_lp_power`], independent of the DFT.
pub fn h_alpha_equivalence_ratio(u: &SampledFunction, alpha: f64) -> Result<f64> {
    let fs = fourier_seminorm(u, alpha)? / (2.0 * PI).sqrt();
    if fs == 0.0 {
        return Err(Error::pre("equivalence ratio is undefined for u = 0"));
    }
    Ok(line_derivative_norm(u, alpha, 2.0)? / fs)
}

/// Terminal-endpoint trace and its size relative to the Sobolev norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub value: f64,
    pub ratio: f64,
}

/// Trace at the terminal endpoint: `u(b)` for the left space, `u(a)` for
/// the right one, extrapolated quadratically from the three nearest
/// interior nodes. Requires `αp > 1` with finite `p`.
pub fn trace(u: &SampledFunction, spec: &SobolevSpec) -> Result<Trace> {
    let ap = spec.alpha * spec.p;
    if !spec.p.is_finite() || !(ap > 1.0) {
        return Err(Error::AlphaPTooSmall(ap));
    }
    let n = u.grid().n();
    let (i1, i2, i3) = match spec.side {
        Side::Left => (n - 1, n - 2, n - 3),
        Side::Right => (1, 2, 3),
        Side::Symmetric => return Err(Error::pre("trace is one-sided; choose Left or Right")),
    };
    let get = |i: usize| u.value(i).ok_or(Error::MissingBoundaryValue { node: i });
    let value = extrapolate_quadratic(get(i1)?, get(i2)?, get(i3)?);
    let norm = frac_sobolev_norm(u, spec)?;
    Ok(Trace { value, ratio: if norm > 0.0 { value.abs() / norm } else { 0.0 } })
}

/// Outcome of a Poincaré quotient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Poincare {
    /// `‖u − c·κ‖_p / ‖D^α u‖_p`.
    Ratio(f64),
    /// `D^α u` vanishes: `u` is a multiple of the kernel function.
    KernelElement { numerator: f64 },
}

/// Poincaré quotient `‖u − c·κ‖_{L^p} / ‖D^α u‖_{L^p}` with `c` from
/// [`ftfc_constant`]. A derivative norm at most 1e-8 of ‖u‖_p is reported
/// as a kernel element.
pub fn poincare_ratio(u: &SampledFunction, alpha: f64, p: f64, direction: Direction) -> Result<Poincare> {
    let c = ftfc_constant(u, alpha, direction)?;
    let shifted = if c == 0.0 { u.clone() } else { u.sub(&kernel_function(*u.grid(), alpha, direction).scale(c))? };
    let numerator = lp(&shifted, p)?;
    let den = lp(&rl(u, alpha, direction)?, p)?;
    if den <= 1e-8 * lp(u, p)? {
        return Ok(Poincare::KernelElement { numerator });
    }
    Ok(Poincare::Ratio(numerator / den))
}

/// Largest Hölder quotient `|u(x)−u(y)| / |x−y|^θ` over node pairs at
/// least `min_sep` cells apart.
pub fn holder_quotient(u: &SampledFunction, theta: f64, min_sep: usize) -> f64 {
    let g = *u.grid();
    let v: Vec<(usize, f64)> = u.defined().collect();
    v.par_iter()
        .map(|&(i, ui)| {
            v.iter()
                .filter(|&&(j, _)| j >= i + min_sep.max(1))
                .map(|&(j, uj)| (ui - uj).abs() / (g.node(j) - g.node(i)).powf(theta))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::special::gamma;

    #[test]
    fn sqrt_norm_example() {
        let g = Grid::finite(0.0, 1.0, 4096).unwrap();
        let u = SampledFunction::from_fn(g, f64::sqrt);
        let spec = SobolevSpec::new(0.5, 2.0, Side::Left).unwrap();
        let expected = (0.5 + gamma(1.5).unwrap().powi(2)).sqrt();
        assert!((expected - 1.133_754).abs() < 1e-6);
        let v = frac_sobolev_norm(&u, &spec).unwrap();
        assert!((v - expected).abs() < 1e-3 * expected, "{v}");
    }

    #[test]
    fn gagliardo_of_identity() {
        let g = Grid::finite(0.0, 1.0, 512).unwrap();
        let u = SampledFunction::from_fn(g, |x| x);
        let v = gagliardo_seminorm(&u, 0.25, 2.0).unwrap();
        assert!((v - (8.0f64 / 15.0).sqrt()).abs() < 1e-3, "{v}");
        let c = SampledFunction::from_fn(g, |_| 4.0);
        assert_eq!(gagliardo_seminorm(&c, 0.25, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_fourier_seminorm() {
        let g = Grid::line(-12.0, 12.0, 2048).unwrap();
        let u = SampledFunction::from_fn(g, |x| (-x * x / 2.0).exp());
        let v = fourier_seminorm(&u, 0.5).unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-3 * v, "{v}");
    }

    #[test]
    fn identity_trace() {
        let g = Grid::finite(0.0, 1.0, 256).unwrap();
        let u = SampledFunction::from_fn(g, |x| x);
        let t = trace(&u, &SobolevSpec::new(0.8, 2.0, Side::Left).unwrap()).unwrap();
        assert!((t.value - 1.0).abs() < 1e-12);
        let e = trace(&u, &SobolevSpec::new(0.4, 2.0, Side::Left).unwrap()).unwrap_err();
        assert_eq!(e.code(), "E_ALPHA_P_LE_1");
    }

    #[test]
    fn poincare_of_kernel_is_flagged() {
        let g = Grid::finite(0.0, 1.0, 1024).unwrap();
        let k = kernel_function(g, 0.5, Direction::Left).scale(3.0);
        match poincare_ratio(&k, 0.5, 2.0, Direction::Left).unwrap() {
            Poincare::KernelElement { numerator } => assert!(numerator < 1e-8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn holder_of_linear() {
        let g = Grid::finite(0.0, 1.0, 64).unwrap();
        let u = SampledFunction::from_fn(g, |x| 2.0 * x);
        assert!((holder_quotient(&u, 1.0, 4) - 2.0).abs() < 1e-12);
    }
}
