//! Least-squares fits used by convergence and decay studies.

/// Slope of the least-squares line through `(ln x, ln |y|)`.
///
/// Pairs with a non-positive `x` or a zero `y` are skipped; `None` if fewer
/// than two remain or all `x` coincide.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(&a, &b)| a > 0.0 && b != 0.0 && a.is_finite() && b.is_finite())
        .map(|(&a, &b)| (a.ln(), b.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(sx, sy), (a, b)| (sx + a / m, sy + b / m));
    let (sxy, sxx) =
        pts.iter().fold((0.0, 0.0), |(sxy, sxx), (a, b)| (sxy + (a - mx) * (b - my), sxx + (a - mx) * (a - mx)));
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Empirical convergence order: the slope of log error against log h.
pub fn convergence_order(h: &[f64], errors: &[f64]) -> Option<f64> {
    loglog_slope(h, errors)
}

/// Geometrically spaced points from `lo` to `hi` inclusive.
pub fn geomspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![lo];
    }
    let r = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|k| lo * (r * k as f64).exp()).collect()
}
