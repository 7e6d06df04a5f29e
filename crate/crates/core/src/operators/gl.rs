//! Grünwald-Letnikov derivative.

use std::collections::BTreeSet;

use super::kernels::gl_left;
use super::{OperatorResult, Scheme};
use crate::error::{Error, Result};
use crate::grid::{Direction, DomainKind, SampledFunction};
use crate::special::gl_weights;

/// GL derivative with step equal to the grid spacing.
///
/// Left: `h^{−α} Σ_{k=0}^{i} w_k f(x_{i−k})`. Right: the mirror sum
/// `h^{−α} Σ_k w_k f(x_{i+k})` with the same weights, which converges to the
/// right RL derivative (including its `f(b)` term).
pub fn gl_derivative(f: &SampledFunction, alpha: f64, direction: Direction) -> Result<OperatorResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::pre("GL requires 0<α<1"));
    }
    if !f.excluded().is_empty() {
        return Err(Error::pre("GL needs a finite sample at every node, including the initial endpoint"));
    }
    f.check_truncation()?;
    let grid = *f.grid();
    let n = grid.n();
    let w = gl_weights(alpha, n);
    let (vals, reflect) = match direction {
        Direction::Left => (f.values().to_vec(), false),
        Direction::Right => (f.reflect().values().to_vec(), true),
    };
    let out = gl_left(&vals, &w, grid.h(), alpha);
    let mut excluded = BTreeSet::new();
    if grid.kind() == DomainKind::FiniteInterval {
        excluded.insert(0);
    }
    let mut output = SampledFunction::from_parts(grid, out, excluded);
    if reflect {
        output = output.reflect();
    }
    Ok(OperatorResult::new(output, Scheme::GLSum, Some(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn rejects_order_outside_unit_interval() {
        let g = Grid::finite(0.0, 1.0, 16).unwrap();
        let f = SampledFunction::from_fn(g, |x| x);
        let e = gl_derivative(&f, 1.5, Direction::Left).unwrap_err();
        assert_eq!(e.to_string(), "GL requires 0<α<1");
    }

    #[test]
    fn zero_in_zero_out() {
        let g = Grid::finite(0.0, 1.0, 16).unwrap();
        let f = SampledFunction::zeros(g);
        let r = gl_derivative(&f, 0.5, Direction::Right).unwrap();
        assert_eq!(r.output.max_abs(), 0.0);
        assert!(r.output.is_excluded(16));
    }
}
