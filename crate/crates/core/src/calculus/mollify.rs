//! Mollification and its commutation with fractional derivatives.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::ResidualReport;
use crate::error::{Error, Result};
use crate::grid::{Direction, DomainKind, SampledFunction};
use crate::norms::lp_norm_where;
use crate::operators::rl_derivative;
use crate::quadrature::{compensated_sum, Compensated};
use crate::testfn::bump;

/// Stencil of `η_ε` at offsets `−r..=r`, scaled so that `h·Σ η = 1`.
fn kernel(h: f64, epsilon: f64) -> Vec<f64> {
    let r = (epsilon / h).floor() as isize;
    let raw: Vec<f64> = (-r..=r).map(|j| bump(j as f64 * h / epsilon)).collect();
    let mass = h * compensated_sum(raw.iter().copied());
    raw.into_iter().map(|v| v / mass).collect()
}

/// Convolution with the standard mollifier `η_ε`, normalized to unit
/// discrete mass. Samples beyond the grid count as zero; an output node is
/// excluded when its stencil touches an excluded sample.
pub fn mollify(f: &SampledFunction, epsilon: f64) -> Result<SampledFunction> {
    let grid = *f.grid();
    let h = grid.h();
    if !(epsilon >= 2.0 * h) {
        return Err(Error::pre(format!("mollifier radius {epsilon} is below two cells (2h = {})", 2.0 * h)));
    }
    let eta = kernel(h, epsilon);
    let r = (eta.len() / 2) as isize;
    let n = grid.n() as isize;
    let out: Vec<Option<f64>> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Compensated::new();
            for (k, &w) in eta.iter().enumerate() {
                let j = i - (k as isize - r);
                if j < 0 || j > n || w == 0.0 {
                    continue;
                }
                acc.add(h * w * f.value(j as usize)?);
            }
            Some(acc.value())
        })
        .collect();
    let excluded: BTreeSet<usize> = out.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| i).collect();
    let values = out.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect();
    SampledFunction::new(grid, values, excluded)
}

/// `‖D^α(f^ε) − (D^α f)^ε‖` on a truncated line, relative tolerance 1e-3.
///
/// The norm is taken over nodes at least ε from both window ends, where
/// the mollifier sees only samples inside the window.
pub fn mollifier_commutation(f: &SampledFunction, alpha: f64, epsilon: f64) -> Result<ResidualReport> {
    if f.grid().kind() != DomainKind::TruncatedLine {
        return Err(Error::pre("mollifier commutation is checked on a TruncatedLine grid"));
    }
    let lhs = rl_derivative(&mollify(f, epsilon)?, alpha, Direction::Left, None)?.output;
    let rhs = mollify(&rl_derivative(f, alpha, Direction::Left, None)?.output, epsilon)?;
    let r = (epsilon / f.grid().h()).ceil() as usize;
    let n = f.grid().n();
    let keep = |i: usize| i >= r && i + r <= n;
    let residual = lp_norm_where(&lhs.sub(&rhs)?, 2.0, keep)?;
    let norm = lp_norm_where(&lhs, 2.0, keep)?;
    Ok(ResidualReport::new("mollifier_commutation", residual, 1e-3 * norm)
        .with("lhs_norm", norm)
        .with("relative", if norm > 0.0 { residual / norm } else { residual }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn unit_mass() {
        for (h, eps) in [(0.01, 0.1), (0.003, 0.05), (0.1, 0.2)] {
            let k = kernel(h, eps);
            assert!((h * k.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn preserves_constants_inside() {
        let g = Grid::finite(0.0, 1.0, 200).unwrap();
        let f = SampledFunction::from_fn(g, |_| 1.0);
        let m = mollify(&f, 0.1).unwrap();
        for i in 25..=175 {
            assert!((m.value(i).unwrap() - 1.0).abs() < 1e-13);
        }
        assert!(m.value(0).unwrap() < 0.9);
    }

    #[test]
    fn rejects_tiny_radius() {
        let g = Grid::finite(0.0, 1.0, 10).unwrap();
        assert!(mollify(&SampledFunction::zeros(g), 0.15).is_err());
    }
}
