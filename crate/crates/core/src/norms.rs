//! L^p norms of sampled functions.

use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use crate::quadrature::Compensated;

/// Composite-trapezoid L^p norm, skipping excluded nodes; `p = ∞` gives
/// the max of |f| over defined nodes.
pub fn lp_norm(f: &SampledFunction, p: f64) -> Result<f64> {
    lp_norm_where(f, p, |_| true)
}

/// [`lp_norm`] restricted to the nodes accepted by `keep`.
///
/// Trapezoid weights are those of the full grid, so restricting to an
/// index range integrates over that range up to half a cell at each cut.
pub fn lp_norm_where(f: &SampledFunction, p: f64, keep: impl Fn(usize) -> bool) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::pre(format!("L^p norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.defined().filter(|(i, _)| keep(*i)).map(|(_, v)| v.abs()).fold(0.0, f64::max));
    }
    let h = f.grid().h();
    let n = f.grid().n();
    let mut acc = Compensated::new();
    for (i, v) in f.defined().filter(|(i, _)| keep(*i)) {
        let w = if i == 0 || i == n { 0.5 * h } else { h };
        let a = v.abs();
        acc.add(
            w * if p == 1.0 {
                a
            } else if p == 2.0 {
                a * a
            } else {
                a.powf(p)
            },
        );
    }
    let s = acc.value();
    Ok(if p == 1.0 {
        s
    } else if p == 2.0 {
        s.sqrt()
    } else {
        s.powf(1.0 / p)
    })
}

/// Index predicate for the interior `[a + δ(b−a), b − δ(b−a)]`.
pub fn interior(f: &SampledFunction, delta: f64) -> impl Fn(usize) -> bool {
    let n = f.grid().n();
    let lo = (delta * n as f64).ceil() as usize;
    let hi = n - lo.min(n);
    move |i| i >= lo && i <= hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn examples() {
        let g = Grid::finite(0.0, 1.0, 1000).unwrap();
        let one = SampledFunction::from_fn(g, |_| 1.0);
        assert!((lp_norm(&one, 2.0).unwrap() - 1.0).abs() < 1e-14);
        let x = SampledFunction::from_fn(g, |x| x);
        // trapezoid error for x^2 is h^2/6
        assert!((lp_norm(&x, 2.0).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-6);
        let z = SampledFunction::zeros(g);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(lp_norm(&z, p).unwrap(), 0.0);
        }
        assert_eq!(lp_norm(&x, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_norm(&x, 0.5).is_err());
    }
}
