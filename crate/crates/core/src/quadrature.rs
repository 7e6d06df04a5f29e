//! Summation, masked trapezoid integration and endpoint models.

use crate::error::Result;
use crate::grid::SampledFunction;
use crate::special::zeta;

/// Neumaier-compensated running sum.
///
/// Used wherever long sums feed a reported quantity, so results do not
/// depend on accumulation luck and stay bit-identical for a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Compensated::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Local model `C·d^{−γ} + E·d^{1−γ} + F·d^{2−γ} + D` of a function near
/// a node.
///
/// The later terms are the corrections for `d^{−γ}·g(d)` with smooth `g`;
/// without them the fitted exponent is biased by O(d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSingularity {
    pub coeff: f64,
    pub exponent: f64,
    pub next: f64,
    pub third: f64,
    pub offset: f64,
}

fn exponent_ok(gamma: f64) -> bool {
    gamma > 0.01 && gamma < 1.0
}

impl PowerSingularity {
    /// Fits the model from `sample(k)`, the value at distance `k·h`.
    ///
    /// Uses distances 1, 2, 4, 8, 16 for the model without `F` when
    /// available and falls back to the two-term model on 1, 2, 4. Returns
    /// `Some` only when the samples show an integrable blow-up, i.e. the
    /// fitted γ lies in (0.01, 1).
    pub fn fit(sample: impl Fn(usize) -> Option<f64>, h: f64) -> Option<Self> {
        let v1 = sample(1)?;
        let v2 = sample(2)?;
        let v4 = sample(4)?;
        let simple = Self::fit_simple(v1, v2, v4, h);
        match (sample(8), sample(16)) {
            (Some(v8), Some(v16)) => Self::fit_full([v1, v2, v4, v8, v16], h, simple).or(simple),
            _ => simple,
        }
    }

    /// [`PowerSingularity::fit`] with the `F` term, from distances 1 to 32.
    /// Meant for quadrature of `d^{−γ}·g(d)` with smooth `g`; functions with
    /// integer-power terms next to the singularity fit better without it.
    pub fn fit_extended(sample: impl Fn(usize) -> Option<f64>, h: f64) -> Option<Self> {
        let full = Self::fit(&sample, h);
        let v: Option<Vec<f64>> = [1, 2, 4, 8, 16, 32].iter().map(|&k| sample(k)).collect();
        match v {
            Some(v) => Self::fit_three([v[0], v[1], v[2], v[3], v[4], v[5]], h, full).or(full),
            None => full,
        }
    }

    /// Two-term model `C·d^{−γ} + D` through distances h, 2h, 4h.
    pub fn fit_simple(v1: f64, v2: f64, v4: f64, h: f64) -> Option<Self> {
        let r = (v1 - v2) / (v2 - v4);
        if !r.is_finite() || r <= 0.0 {
            return None;
        }
        let gamma = r.log2();
        if !exponent_ok(gamma) {
            return None;
        }
        let hg = h.powf(-gamma);
        let coeff = (v1 - v2) / (hg * (1.0 - 2f64.powf(-gamma)));
        let offset = v1 - coeff * hg;
        if !coeff.is_finite() || !offset.is_finite() {
            return None;
        }
        Some(PowerSingularity { coeff, exponent: gamma, next: 0.0, third: 0.0, offset })
    }

    // Differences Δ_k = v(2^k h) − v(2^{k+1} h) of the model are
    // A·u^k + B·(2u)^k with u = 2^{−γ}, so u solves 2Δ0·u² − 3Δ1·u + Δ2 = 0.
    // Of the admissible roots, the one that best predicts Δ3 wins.
    fn fit_full(v: [f64; 5], h: f64, hint: Option<Self>) -> Option<Self> {
        let d = [v[0] - v[1], v[1] - v[2], v[2] - v[3], v[3] - v[4]];
        let (qa, qb, qc) = (2.0 * d[0], -3.0 * d[1], d[2]);
        let disc = qb * qb - 4.0 * qa * qc;
        if !(disc >= 0.0) || qa == 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let q = -0.5 * (qb + qb.signum() * sq);
        let roots = [q / qa, if q != 0.0 { qc / q } else { f64::NAN }];
        let scale = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let misfit = |u: f64| (d[3] - 3.0 * u * d[2] + 2.0 * u * u * d[1]).abs() / scale;
        let hint_u = hint.map(|m| 2f64.powf(-m.exponent));
        let u = roots.iter().copied().filter(|&u| u.is_finite() && u > 0.0 && exponent_ok(-u.log2())).min_by(
            |&x, &y| {
                let key = |u: f64| misfit(u) + hint_u.map_or(0.0, |t| 1e-3 * (u - t).abs());
                key(x).total_cmp(&key(y))
            },
        )?;
        let gamma = -u.log2();
        let b = (d[1] - u * d[0]) / u;
        let a = d[0] - b;
        let coeff = a / (h.powf(-gamma) * (1.0 - u));
        let next = b / (h.powf(1.0 - gamma) * (1.0 - 2.0 * u));
        let m = PowerSingularity { coeff, exponent: gamma, next, third: 0.0, offset: 0.0 };
        m.with_offset(v[0], h)
    }

    // With three terms the differences are A·u^k + B·(2u)^k + C·(4u)^k, so
    // Δ_{k+3} − 7u·Δ_{k+2} + 14u²·Δ_{k+1} − 8u³·Δ_k = 0. The admissible
    // roots of that cubic at k = 0 are located by sign changes on a fine
    // grid in u and refined by bisection; the one that best satisfies the
    // recurrence at k = 1 wins.
    fn fit_three(v: [f64; 6], h: f64, hint: Option<Self>) -> Option<Self> {
        let d = [v[0] - v[1], v[1] - v[2], v[2] - v[3], v[3] - v[4], v[4] - v[5]];
        let rec = |u: f64, k: usize| d[k + 3] - 7.0 * u * d[k + 2] + 14.0 * u * u * d[k + 1] - 8.0 * u * u * u * d[k];
        let (lo, hi) = (0.5f64.powf(1.0 - 1e-9), 0.5f64.powf(0.01));
        let steps = 400;
        let at = |j: usize| lo + (hi - lo) * j as f64 / steps as f64;
        let mut roots = Vec::new();
        for j in 0..steps {
            let (mut a, mut b) = (at(j), at(j + 1));
            let (mut fa, fb) = (rec(a, 0), rec(b, 0));
            if fa == 0.0 {
                roots.push(a);
                continue;
            }
            if fa * fb > 0.0 {
                continue;
            }
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let fm = rec(m, 0);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        let scale = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let hint_u = hint.map(|m| 2f64.powf(-m.exponent));
        let u = roots.into_iter().min_by(|&x, &y| {
            let key = |u: f64| rec(u, 1).abs() / scale + hint_u.map_or(0.0, |t| 1e-3 * (u - t).abs());
            key(x).total_cmp(&key(y))
        })?;
        // Solve Σ_i amp_i·z_i^k = Δ_k, k = 0, 1, 2, by Lagrange interpolation.
        let z = [u, 2.0 * u, 4.0 * u];
        let amp: Vec<f64> = (0..3)
            .map(|i| {
                let (p, q) = (z[(i + 1) % 3], z[(i + 2) % 3]);
                (p * q * d[0] - (p + q) * d[1] + d[2]) / ((z[i] - p) * (z[i] - q))
            })
            .collect();
        let gamma = -u.log2();
        let coeff = amp[0] / (h.powf(-gamma) * (1.0 - u));
        let next = amp[1] / (h.powf(1.0 - gamma) * (1.0 - 2.0 * u));
        let third = amp[2] / (h.powf(2.0 - gamma) * (1.0 - 4.0 * u));
        let m = PowerSingularity { coeff, exponent: gamma, next, third, offset: 0.0 };
        m.with_offset(v[0], h)
    }

    fn with_offset(self, v1: f64, h: f64) -> Option<Self> {
        let offset = v1 - self.singular_part(h);
        let ok = [self.coeff, self.next, self.third, offset].iter().all(|x| x.is_finite());
        ok.then_some(PowerSingularity { offset, ..self })
    }

    /// `C·d^{−γ} + E·d^{1−γ} + F·d^{2−γ}`.
    pub fn singular_part(&self, d: f64) -> f64 {
        self.terms().iter().map(|&(c, p)| if c == 0.0 { 0.0 } else { c * d.powf(p) }).sum()
    }

    /// The singular terms as `(coefficient, power)` pairs.
    pub fn terms(&self) -> [(f64, f64); 3] {
        let g = self.exponent;
        [(self.coeff, -g), (self.next, 1.0 - g), (self.third, 2.0 - g)]
    }

    pub fn eval(&self, d: f64) -> f64 {
        self.singular_part(d) + self.offset
    }
}

/// Quadratic extrapolation to distance 0 from samples at distances 1, 2, 3.
pub fn extrapolate_quadratic(v1: f64, v2: f64, v3: f64) -> f64 {
    3.0 * v1 - 3.0 * v2 + v3
}

/// Value at d = 0 of the fit `v0 + A·d^{e1} + B·d^{e2}` through three points.
pub fn extrapolate_with_exponents(d: [f64; 3], v: [f64; 3], e1: f64, e2: f64) -> f64 {
    let m: [[f64; 3]; 3] =
        [[1.0, d[0].powf(e1), d[0].powf(e2)], [1.0, d[1].powf(e1), d[1].powf(e2)], [1.0, d[2].powf(e1), d[2].powf(e2)]];
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let det = det3(&m);
    let mut m0 = m;
    for r in 0..3 {
        m0[r][0] = v[r];
    }
    det3(&m0) / det
}

/// Sample at `k` nodes from `s` in direction `step`, if defined.
fn side_sample(f: &SampledFunction, s: usize, step: isize, k: usize) -> Option<f64> {
    let i = s as isize + step * k as isize;
    if i < 0 || i as usize >= f.len() {
        return None;
    }
    f.value(i as usize)
}

/// ∫ f over the grid by the composite trapezoid rule, treating excluded
/// nodes as integrable singularities.
///
/// At each excluded node the samples on either side are fitted with
/// `C·d^{−γ} + E·d^{1−γ} + F·d^{2−γ} + D`. When the fit shows a power singularity the
/// trapezoid sum (which drops the node) is corrected by
/// `−ζ(γ)·C·h^{1−γ} − ζ(γ−1)·E·h^{2−γ} − ζ(γ−2)·F·h^{3−γ} + D·h/2`;
/// otherwise the dropped half-weight is restored from a quadratic
/// extrapolation of the one-sided limit.
pub fn integrate(f: &SampledFunction) -> Result<f64> {
    let h = f.grid().h();
    let n = f.grid().n();
    let mut acc = Compensated::new();
    for (i, v) in f.defined() {
        let w = if i == 0 || i == n { 0.5 * h } else { h };
        acc.add(w * v);
    }
    for &s in f.excluded() {
        for step in [-1isize, 1] {
            let sample = |k| side_sample(f, s, step, k);
            match PowerSingularity::fit_extended(sample, h) {
                Some(m) => {
                    let g = m.exponent;
                    acc.add(-zeta(g)? * m.coeff * h.powf(1.0 - g));
                    acc.add(-zeta(g - 1.0)? * m.next * h.powf(2.0 - g));
                    acc.add(-zeta(g - 2.0)? * m.third * h.powf(3.0 - g));
                    acc.add(0.5 * h * m.offset);
                }
                None => {
                    if let (Some(v1), Some(v2), Some(v3)) = (sample(1), sample(2), sample(3)) {
                        acc.add(0.5 * h * extrapolate_quadratic(v1, v2, v3));
                    }
                }
            }
        }
    }
    Ok(acc.value())
}

/// ∫ f for `f ≥ 0` whose excluded nodes blow up like `d^{−γ}`.
///
/// The trapezoid sum drops each excluded node and adds `−ζ(γ)·h·f(h)` for
/// every neighbour, the leading term of the endpoint correction. Since
/// `ζ(γ) < 0` on (0, 1) all weights stay positive, so `(∫ |v|^p)^{1/p}`
/// computed this way is a weighted ℓ^p norm of the samples. For `γ ≥ 1` the
/// singularity is not integrable and the sum is left uncorrected: it stays
/// finite on each grid and grows under refinement.
pub fn integrate_power_singular(f: &SampledFunction, gamma: f64) -> Result<f64> {
    let h = f.grid().h();
    let mut acc = Compensated::new();
    acc.add(trapezoid(f));
    if gamma > 0.0 && gamma < 1.0 {
        let w = -zeta(gamma)? * h;
        for &s in f.excluded() {
            for step in [-1isize, 1] {
                if let Some(v1) = side_sample(f, s, step, 1) {
                    acc.add(w * v1);
                }
            }
        }
    }
    Ok(acc.value())
}

/// `(w, w′, w″/2)` in the distance along `step` at node `s`: central
/// differences when both neighbours exist, one-sided ones otherwise.
fn taylor(w: &SampledFunction, s: usize, step: isize, h: f64) -> Option<[f64; 3]> {
    let at = |k: isize| side_sample(w, s, step * k.signum(), k.unsigned_abs());
    let w0 = w.value(s)?;
    let (d1, d2) = match (at(1), at(-1)) {
        (Some(p), Some(m)) => ((p - m) / (2.0 * h), (p - 2.0 * w0 + m) / (h * h)),
        (Some(p), None) => {
            let p2 = at(2)?;
            ((-3.0 * w0 + 4.0 * p - p2) / (2.0 * h), (w0 - 2.0 * p + p2) / (h * h))
        }
        _ => return None,
    };
    Some([w0, d1, 0.5 * d2])
}

/// ∫ v·w where `v` may have integrable power singularities at its excluded
/// nodes and `w` is smooth and defined everywhere.
///
/// Like [`integrate`], but the local model is fitted to `v` alone and the
/// correction uses the Taylor coefficients of `w` at the node, so a rapidly
/// varying `w` does not spoil the fit. Falls back to [`integrate`] of the
/// product when `w` has excluded nodes.
pub fn integrate_product(v: &SampledFunction, w: &SampledFunction) -> Result<f64> {
    let prod = v.mul(w)?;
    if !w.excluded().is_empty() {
        return integrate(&prod);
    }
    let h = v.grid().h();
    let n = v.grid().n();
    let mut acc = Compensated::new();
    for (i, x) in prod.defined() {
        let wt = if i == 0 || i == n { 0.5 * h } else { h };
        acc.add(wt * x);
    }
    for &s in v.excluded() {
        for step in [-1isize, 1] {
            let fit = PowerSingularity::fit_extended(|k| side_sample(v, s, step, k), h);
            match (fit, taylor(w, s, step, h)) {
                (Some(m), Some(t)) => {
                    let g = m.exponent;
                    let c = [
                        m.coeff * t[0],
                        m.coeff * t[1] + m.next * t[0],
                        m.coeff * t[2] + m.next * t[1] + m.third * t[0],
                    ];
                    for (j, cj) in c.iter().enumerate() {
                        acc.add(-zeta(g - j as f64)? * cj * h.powf(1.0 + j as f64 - g));
                    }
                    acc.add(0.5 * h * m.offset * t[0]);
                }
                _ => {
                    let sample = |k| side_sample(&prod, s, step, k);
                    if let (Some(v1), Some(v2), Some(v3)) = (sample(1), sample(2), sample(3)) {
                        acc.add(0.5 * h * extrapolate_quadratic(v1, v2, v3));
                    }
                }
            }
        }
    }
    Ok(acc.value())
}

/// Plain composite trapezoid over defined nodes (excluded nodes skipped).
pub fn trapezoid(f: &SampledFunction) -> f64 {
    let h = f.grid().h();
    let n = f.grid().n();
    compensated_sum(f.defined().map(|(i, v)| if i == 0 || i == n { 0.5 * h * v } else { h * v }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn compensated_beats_naive() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn fit_recovers_exact_power() {
        let h = 1e-3;
        let f = |d: f64| 2.5 * d.powf(-0.4) + 0.75;
        let m = PowerSingularity::fit_simple(f(h), f(2.0 * h), f(4.0 * h), h).unwrap();
        assert!((m.exponent - 0.4).abs() < 1e-10);
        assert!((m.coeff - 2.5).abs() < 1e-8);
        assert!((m.offset - 0.75).abs() < 1e-6);
        assert!(PowerSingularity::fit_simple(1.0, 2.0, 4.0, h).is_none());
        assert!(PowerSingularity::fit_simple(1.0, 1.0, 1.0, h).is_none());
    }

    #[test]
    fn full_fit_recovers_next_term() {
        let h = 1e-3;
        let f = |d: f64| 2.5 * d.powf(-0.4) - 1.25 * d.powf(0.6) + 0.75;
        let m = PowerSingularity::fit(|k| Some(f(k as f64 * h)), h).unwrap();
        assert!((m.exponent - 0.4).abs() < 1e-9, "{m:?}");
        assert!((m.coeff - 2.5).abs() < 1e-7);
        assert!((m.next + 1.25).abs() < 1e-5);
        assert!((m.offset - 0.75).abs() < 1e-6);
        // a regular function has no admissible exponent
        assert!(PowerSingularity::fit(|k| Some(1.0 + k as f64 * h), h).is_none());
    }

    #[test]
    fn exponent_extrapolation_is_exact_on_model() {
        let f = |d: f64| 1.5 + 0.3 * d.powf(0.25) - 2.0 * d.powf(1.25);
        let d = [0.1, 0.2, 0.3];
        let v0 = extrapolate_with_exponents(d, [f(d[0]), f(d[1]), f(d[2])], 0.25, 1.25);
        assert!((v0 - 1.5).abs() < 1e-12);
    }

    #[test]
    fn integrate_endpoint_singularity() {
        let g = Grid::finite(0.0, 1.0, 1024).unwrap();
        let f = SampledFunction::from_fn(g, |x| x.powf(-0.5) * (1.0 + x));
        // ∫ x^{-1/2} + x^{1/2} = 2 + 2/3
        let exact = 2.0 + 2.0 / 3.0;
        let plain = trapezoid(&f);
        let corrected = integrate(&f).unwrap();
        assert!((plain - exact).abs() > 1e-2);
        assert!((corrected - exact).abs() < 1e-6, "{corrected}");
    }

    #[test]
    fn positive_weight_rule_on_known_exponent() {
        let g = Grid::finite(0.0, 1.0, 1024).unwrap();
        let f = SampledFunction::from_fn(g, |x| x.powf(-0.5) * (1.0 + x));
        let exact = 2.0 + 2.0 / 3.0;
        let r = integrate_power_singular(&f, 0.5).unwrap();
        assert!((r - exact).abs() < 1e-3 * exact, "{r}");
        let steep = SampledFunction::from_fn(g, |x| x.powf(-1.2));
        assert_eq!(integrate_power_singular(&steep, 1.2).unwrap(), trapezoid(&steep));
    }

    #[test]
    fn integrate_interior_singularity() {
        let g = Grid::finite(-1.0, 1.0, 2048).unwrap();
        let f = SampledFunction::from_fn(g, |x| {
            if x > 0.0 {
                x.powf(-0.5)
            } else if x < 0.0 {
                1.0
            } else {
                f64::NAN
            }
        });
        let exact = 1.0 + 2.0;
        let corrected = integrate(&f).unwrap();
        assert!((corrected - exact).abs() < 1e-5, "{corrected}");
    }

    #[test]
    fn extended_fit_recovers_third_term() {
        let h = 1e-3;
        let f = |d: f64| 2.5 * d.powf(-0.7) - 1.25 * d.powf(0.3) + 4.0 * d.powf(1.3) + 0.75;
        let m = PowerSingularity::fit_extended(|k| Some(f(k as f64 * h)), h).unwrap();
        assert!((m.exponent - 0.7).abs() < 1e-9, "{m:?}");
        assert!((m.coeff - 2.5).abs() < 1e-7);
        assert!((m.next + 1.25).abs() < 1e-5);
        assert!((m.third - 4.0).abs() < 1e-2);
    }

    #[test]
    fn product_quadrature_with_steep_weight() {
        // ∫₀¹ x^{-3/4}·e^{-40x} dx = 40^{-1/4}·γ(1/4, 40)
        let g = Grid::finite(0.0, 1.0, 2048).unwrap();
        let v = SampledFunction::from_fn(g, |x| x.powf(-0.75)).with_excluded([0]);
        let w = SampledFunction::from_fn(g, |x| (-40.0 * x).exp());
        let exact = 40f64.powf(-0.25) * crate::special::gamma(0.25).unwrap();
        let r = integrate_product(&v, &w).unwrap();
        assert!((r - exact).abs() < 1e-6 * exact, "{r} vs {exact}");
    }
}
