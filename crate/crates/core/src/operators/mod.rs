//! Discrete fractional integrals and derivatives.

mod fourier;
mod gl;
pub(crate) mod kernels;
mod rl;
pub mod stencil;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use fourier::fourier_derivative;
pub(crate) use fourier::{mode_frequency, padded_spectrum, require_line};
pub use gl::gl_derivative;
pub use rl::{boundary_term, caputo_derivative, rl_derivative, rl_integral, weak_caputo};

use crate::error::{Error, Result};
use crate::grid::{Direction, DomainKind, Grid, SampledFunction};

/// Derivative family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    RiemannLiouville,
    Caputo,
    GrunwaldLetnikov,
    Fourier,
    WeakCaputo,
}

/// Discretization that produced an [`OperatorResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    ProductTrapezoid,
    GLSum,
    FFTSpectral,
    CompositeCaputo,
}

/// Order, side and family of a fractional derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracSpec {
    pub alpha: f64,
    pub direction: Direction,
    pub family: Family,
}

impl FracSpec {
    pub fn new(alpha: f64, direction: Direction, family: Family) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::pre(format!("order must satisfy 0<α<2, got {alpha}")));
        }
        Ok(FracSpec { alpha, direction, family })
    }

    /// Integer part [α].
    pub fn integer_part(&self) -> usize {
        self.alpha.floor() as usize
    }

    pub fn validate_for(&self, grid: &Grid) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return Err(Error::pre(format!("order must satisfy 0<α<2, got {}", self.alpha)));
        }
        if self.family == Family::Fourier && grid.kind() != DomainKind::TruncatedLine {
            return Err(Error::pre("the Fourier family requires a TruncatedLine grid"));
        }
        Ok(())
    }
}

/// Output of an operator together with the scheme that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorResult {
    pub output: SampledFunction,
    pub scheme: Scheme,
    pub estimated_order: Option<f64>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl OperatorResult {
    pub fn new(output: SampledFunction, scheme: Scheme, estimated_order: Option<f64>) -> Self {
        OperatorResult { output, scheme, estimated_order, diagnostics: BTreeMap::new() }
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorResultJson {
    grid: Grid,
    values: Vec<Option<f64>>,
    excluded: Vec<usize>,
    scheme: Scheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    estimated_order: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    diagnostics: BTreeMap<String, f64>,
}

impl Serialize for OperatorResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let f = &self.output;
        OperatorResultJson {
            grid: *f.grid(),
            values: (0..f.len()).map(|i| f.value(i)).collect(),
            excluded: f.excluded().iter().copied().collect(),
            scheme: self.scheme,
            estimated_order: self.estimated_order,
            diagnostics: self.diagnostics.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = OperatorResultJson::deserialize(d)?;
        let mut excluded = raw.excluded;
        let values = raw
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.unwrap_or_else(|| {
                    excluded.push(i);
                    f64::NAN
                })
            })
            .collect();
        let output = SampledFunction::new(raw.grid, values, excluded).map_err(serde::de::Error::custom)?;
        Ok(OperatorResult {
            output,
            scheme: raw.scheme,
            estimated_order: raw.estimated_order,
            diagnostics: raw.diagnostics,
        })
    }
}

pub(crate) fn check_order(alpha: f64, what: &str) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::pre(format!("{what} requires 0<α<1, got {alpha}")))
    }
}

fn signed_derivative(f: &SampledFunction, direction: Direction) -> SampledFunction {
    let d = stencil::derivative(f);
    match direction {
        Direction::Left => d,
        Direction::Right => d.scale(-1.0),
    }
}

fn fractional(f: &SampledFunction, sigma: f64, spec: &FracSpec) -> Result<OperatorResult> {
    match spec.family {
        Family::RiemannLiouville => rl_derivative(f, sigma, spec.direction, None),
        Family::Caputo => caputo_derivative(f, sigma, spec.direction),
        Family::WeakCaputo => weak_caputo(f, sigma, spec.direction),
        Family::GrunwaldLetnikov => gl_derivative(f, sigma, spec.direction),
        Family::Fourier => fourier_derivative(f, sigma),
    }
}

fn scheme_of(family: Family) -> Scheme {
    match family {
        Family::RiemannLiouville | Family::Caputo | Family::WeakCaputo => Scheme::CompositeCaputo,
        Family::GrunwaldLetnikov => Scheme::GLSum,
        Family::Fourier => Scheme::FFTSpectral,
    }
}

/// Applies the derivative described by `spec`.
///
/// For α = m + σ with m = [α] ≥ 1, RL, GL and Fourier apply the σ-order
/// operator and then m derivatives; Caputo families differentiate first and
/// apply the σ-order Caputo operator to `f^{(m)}`. Right-sided integer
/// derivatives are `(−d/dx)^m`.
pub fn apply(f: &SampledFunction, spec: &FracSpec) -> Result<OperatorResult> {
    spec.validate_for(f.grid())?;
    let m = spec.integer_part();
    let sigma = spec.alpha - m as f64;
    if m == 0 {
        return fractional(f, sigma, spec);
    }
    let caputo_like = matches!(spec.family, Family::Caputo | Family::WeakCaputo);
    if caputo_like {
        let mut g = f.clone();
        for _ in 0..m {
            g = signed_derivative(&g, spec.direction);
        }
        if sigma == 0.0 {
            return Ok(OperatorResult::new(g, scheme_of(spec.family), Some(2.0)));
        }
        return fractional(&g, sigma, spec);
    }
    let mut r = if sigma == 0.0 {
        OperatorResult::new(f.clone(), scheme_of(spec.family), Some(2.0))
    } else {
        fractional(f, sigma, spec)?
    };
    for _ in 0..m {
        r.output = signed_derivative(&r.output, spec.direction);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_above_one_decomposes() {
        let g = Grid::finite(0.0, 1.0, 2048).unwrap();
        let f = SampledFunction::from_fn(g, |x| x * x);
        let spec = FracSpec::new(1.5, Direction::Left, Family::RiemannLiouville).unwrap();
        let r = apply(&f, &spec).unwrap();
        let c = 2.256_758_334_191_025;
        for i in [512usize, 1024, 2048] {
            let x = g.node(i);
            let v = r.output.value(i).unwrap();
            assert!(((v - c * x.sqrt()) / (c * x.sqrt())).abs() < 1e-3, "x={x}: {v}");
        }
    }

    #[test]
    fn fourier_needs_line() {
        let g = Grid::finite(0.0, 1.0, 16).unwrap();
        let spec = FracSpec::new(0.5, Direction::Left, Family::Fourier).unwrap();
        assert!(apply(&SampledFunction::zeros(g), &spec).is_err());
    }

    #[test]
    fn caputo_of_constant_via_apply() {
        let g = Grid::finite(0.0, 1.0, 16).unwrap();
        let spec = FracSpec::new(0.5, Direction::Left, Family::Caputo).unwrap();
        let r = apply(&SampledFunction::from_fn(g, |_| 1.0), &spec).unwrap();
        assert_eq!(r.output.max_abs(), 0.0);
    }

    #[test]
    fn result_json_carries_scheme() {
        let g = Grid::finite(0.0, 1.0, 4).unwrap();
        let r = rl_integral(&SampledFunction::from_fn(g, |_| 1.0), 0.5, Direction::Left).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"scheme\":\"ProductTrapezoid\""));
        let back: OperatorResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
