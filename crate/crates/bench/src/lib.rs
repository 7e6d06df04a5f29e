//! Fixtures for the criterion benchmarks.

use fracalc_core::testfn::Bump;
use fracalc_core::{Grid, SampledFunction};

/// x^{1/2} on (0, 1) with `n` intervals.
pub fn sqrt_on_unit(n: usize) -> SampledFunction {
    SampledFunction::from_fn(Grid::finite(0.0, 1.0, n).expect("valid grid"), f64::sqrt)
}

/// A unit bump centred in the window [−8, 8].
pub fn bump_on_line(n: usize) -> SampledFunction {
    let b = Bump::new(0.0, 1.0);
    SampledFunction::from_fn(Grid::line(-8.0, 8.0, n).expect("valid grid"), |x| b.eval(x))
}
