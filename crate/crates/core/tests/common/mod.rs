#![allow(dead_code)]

use fracalc_core::testfn::{c1_bump, Bump};
use fracalc_core::{Grid, SampledFunction};

pub type Profile = (&'static str, fn(f64) -> f64);

/// Smooth functions on (0, 1) that do not vanish identically near either end.
pub fn smooth_family() -> Vec<Profile> {
    vec![
        ("x^2", |x| x * x),
        ("sin 3x", |x| (3.0 * x).sin()),
        ("e^x - 1", |x| x.exp() - 1.0),
        ("cos 2x", |x| (2.0 * x).cos()),
        ("1 + x", |x| 1.0 + x),
        ("bump", |x| Bump::new(0.5, 0.3).eval(x)),
    ]
}

/// Compactly supported profiles centred near 0 with support inside [-4, 4].
pub fn bump_profiles() -> Vec<Profile> {
    vec![
        ("bump", |x| Bump::new(0.0, 3.0).eval(x)),
        ("bump squared", |x| Bump::new(0.5, 2.0).eval(x).powi(2)),
        ("gaussian bump", |x| (-x * x).exp() * Bump::new(-0.5, 4.0).eval(x)),
        ("C1 bump", |x| c1_bump(x / 3.0)),
    ]
}

pub fn unit(n: usize) -> Grid {
    Grid::finite(0.0, 1.0, n).unwrap()
}

pub fn sample(grid: Grid, f: fn(f64) -> f64) -> SampledFunction {
    SampledFunction::from_fn(grid, f)
}

/// Largest relative error against `exact` over nodes with `x >= x_min`.
pub fn max_rel_error(f: &SampledFunction, exact: impl Fn(f64) -> f64, x_min: f64) -> f64 {
    let g = *f.grid();
    f.defined()
        .filter(|&(i, _)| g.node(i) >= x_min)
        .map(|(i, v)| {
            let e = exact(g.node(i));
            (v - e).abs() / e.abs()
        })
        .fold(0.0, f64::max)
}
