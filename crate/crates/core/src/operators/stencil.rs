//! Finite-difference first derivative on a uniform grid.

use std::collections::BTreeSet;

use crate::grid::SampledFunction;

/// Second-order first derivative: central differences in the interior,
/// one-sided three-point formulas where a neighbour is missing.
///
/// Nodes whose stencil cannot be completed from defined samples are
/// excluded in the output.
pub fn derivative(f: &SampledFunction) -> SampledFunction {
    let n = f.grid().n();
    let h = f.grid().h();
    let v = |i: isize| -> Option<f64> {
        if i < 0 || i as usize > n {
            None
        } else {
            f.value(i as usize)
        }
    };
    let mut out = vec![0.0; n + 1];
    let mut excluded = BTreeSet::new();
    for (i, slot) in out.iter_mut().enumerate() {
        let k = i as isize;
        let d = match (v(k - 1), v(k), v(k + 1)) {
            (Some(l), _, Some(r)) => Some((r - l) / (2.0 * h)),
            (_, Some(c), Some(r)) => v(k + 2).map(|r2| (-3.0 * c + 4.0 * r - r2) / (2.0 * h)),
            (Some(l), Some(c), _) => v(k - 2).map(|l2| (3.0 * c - 4.0 * l + l2) / (2.0 * h)),
            _ => None,
        };
        match d {
            Some(d) => *slot = d,
            None => {
                excluded.insert(i);
            }
        }
    }
    SampledFunction::from_parts(*f.grid(), out, excluded)
}
