//! Convolution weights for the product-trapezoid and L1-2 rules.
//!
//! Both rules integrate a piecewise-linear interpolant exactly against a
//! power kernel on a uniform grid, so the weights depend only on the node
//! distance (plus a correction for the first node).

use rayon::prelude::*;

use crate::quadrature::Compensated;
use crate::special::gamma_ok;

/// (1+u)^s − 1 without cancellation for small u.
#[inline]
fn pow1p_m1(u: f64, s: f64) -> f64 {
    (s * u.ln_1p()).exp_m1()
}

/// Weights of `∫_a^{x_i} g(y)(x_i − y)^{σ−1} dy / Γ(σ)` for piecewise-linear `g`.
#[derive(Debug, Clone)]
pub struct ProductWeights {
    sigma: f64,
    scale: f64,
    interior: Vec<f64>,
}

impl ProductWeights {
    /// Weights for grids with up to `n` intervals.
    pub fn new(sigma: f64, h: f64, n: usize) -> Self {
        let s = sigma + 1.0;
        let mut interior = vec![0.0; n + 1];
        for (k, w) in interior.iter_mut().enumerate().skip(1) {
            *w = if k == 1 {
                2f64.powf(s) - 2.0
            } else {
                let kf = k as f64;
                let u = 1.0 / kf;
                kf.powf(s) * (pow1p_m1(u, s) + pow1p_m1(-u, s))
            };
        }
        ProductWeights { sigma, scale: h.powf(sigma) / gamma_ok(sigma + 2.0), interior }
    }

    /// Weight of node 0 in the sum for node i ≥ 1.
    #[inline]
    pub fn first(&self, i: usize) -> f64 {
        let fi = i as f64;
        let sg = self.sigma;
        fi.powf(sg) * ((fi - 1.0) * pow1p_m1(-1.0 / fi, sg) + sg)
    }

    /// Weight of node j in the sum for node i (0 ≤ j ≤ i, i ≥ 1), before scaling.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if j == 0 {
            self.first(i)
        } else if j == i {
            1.0
        } else {
            self.interior[i - j]
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Left product-trapezoid integral at every node.
    pub fn apply_left(&self, g: &[f64]) -> Vec<f64> {
        let n = g.len() - 1;
        (0..=n)
            .into_par_iter()
            .map(|i| {
                if i == 0 {
                    return 0.0;
                }
                let mut acc = Compensated::new();
                acc.add(self.first(i) * g[0]);
                for (j, gj) in g.iter().enumerate().take(i).skip(1) {
                    acc.add(self.interior[i - j] * gj);
                }
                acc.add(g[i]);
                self.scale * acc.value()
            })
            .collect()
    }
}

/// `∫_{−1/2}^{1/2} (−s)(m + s)^{−α} ds` with `m = k − 1/2`, the first moment
/// of the kernel over cell distance `k ≥ 1` in units of h.
fn cell_moment(k: usize, alpha: f64) -> f64 {
    let m = k as f64 - 0.5;
    if k < 12 {
        let (a, b) = (m - 0.5, m + 0.5);
        let e1 = 1.0 - alpha;
        let e2 = 2.0 - alpha;
        let lo1 = if a > 0.0 { a.powf(e1) } else { 0.0 };
        let lo2 = if a > 0.0 { a.powf(e2) } else { 0.0 };
        return m * (b.powf(e1) - lo1) / e1 - (b.powf(e2) - lo2) / e2;
    }
    // Odd terms of the binomial series of (1 + s/m)^{−α}.
    let mut acc = 0.0;
    let mut binom = 1.0;
    for r in 1..24 {
        binom *= (-alpha - (r as f64 - 1.0)) / r as f64;
        if r % 2 == 1 {
            acc += binom * m.powi(-r) * 0.5f64.powi(r + 1) / (r as f64 + 2.0);
        }
    }
    -m.powf(-alpha) * acc
}

/// Weights of the L1-2 rule for `∫_a^{x_i} g′(y)(x_i − y)^{−α} dy / Γ(1−α)`.
///
/// On every cell `g′` is the derivative of the quadratic through the cell
/// and its left neighbour (the right neighbour on the first cell): the
/// interpolant slope plus the second difference times the kernel's first
/// moment over the cell.
#[derive(Debug, Clone)]
pub struct L1Weights {
    scale: f64,
    c: Vec<f64>,
    d: Vec<f64>,
}

impl L1Weights {
    pub fn new(alpha: f64, h: f64, n: usize) -> Self {
        let e = 1.0 - alpha;
        let mut c = vec![0.0; n + 1];
        let mut d = vec![0.0; n + 1];
        for (k, w) in c.iter_mut().enumerate().skip(1) {
            *w = if k == 1 {
                1.0
            } else {
                let kf = k as f64;
                -kf.powf(e) * pow1p_m1(-1.0 / kf, e)
            };
        }
        for (k, w) in d.iter_mut().enumerate().skip(1) {
            *w = (1.0 - alpha) * cell_moment(k, alpha);
        }
        L1Weights { scale: h.powf(-alpha) / gamma_ok(2.0 - alpha), c, d }
    }

    /// `Σ_{j<i} (g_{j+1} − g_j)·c_{i−j} + δ²g_{max(j,1)}·d_{i−j}`, scaled, at
    /// every node.
    pub fn apply_left(&self, g: &[f64]) -> Vec<f64> {
        let n = g.len() - 1;
        (0..=n)
            .into_par_iter()
            .map(|i| {
                let mut acc = Compensated::new();
                for j in 0..i {
                    acc.add((g[j + 1] - g[j]) * self.c[i - j]);
                    if n >= 2 {
                        let m = j.max(1);
                        acc.add((g[m + 1] - 2.0 * g[m] + g[m - 1]) * self.d[i - j]);
                    }
                }
                self.scale * acc.value()
            })
            .collect()
    }
}

/// Left Grünwald-Letnikov sum h^{−α} Σ_k w_k g_{i−k} at every node.
pub fn gl_left(g: &[f64], w: &[f64], h: f64, alpha: f64) -> Vec<f64> {
    let n = g.len() - 1;
    let scale = h.powf(-alpha);
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Compensated::new();
            for k in 0..=i {
                acc.add(w[k] * g[i - k]);
            }
            scale * acc.value()
        })
        .collect()
}
