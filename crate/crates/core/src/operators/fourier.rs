//! Spectral fractional derivative on a truncated line.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::{check_order, OperatorResult, Scheme};
use crate::error::{Error, Result};
use crate::grid::{DomainKind, SampledFunction};
use crate::special::{reciprocal_gamma, zeta};

/// Padded length: next power of two at least four times the sample count.
pub(crate) fn padded_len(samples: usize) -> usize {
    (4 * samples).next_power_of_two()
}

/// Angular frequency of DFT mode `k` for `len` points at spacing `h`,
/// with modes above `len/2` mapped to negative frequencies.
pub(crate) fn mode_frequency(k: usize, len: usize, h: f64) -> f64 {
    let signed = if k <= len / 2 { k as f64 } else { k as f64 - len as f64 };
    2.0 * PI * signed / (len as f64 * h)
}

/// Forward DFT of the zero-padded samples.
pub(crate) fn padded_spectrum(f: &SampledFunction) -> Vec<Complex64> {
    let len = padded_len(f.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (slot, &v) in buf.iter_mut().zip(f.values()) {
        *slot = Complex64::new(v, 0.0);
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    buf
}

pub(crate) fn require_line(f: &SampledFunction, what: &str) -> Result<()> {
    if f.grid().kind() != DomainKind::TruncatedLine {
        return Err(Error::pre(format!("{what} requires a TruncatedLine grid")));
    }
    if !f.excluded().is_empty() {
        return Err(Error::pre(format!("{what} needs a finite sample at every node")));
    }
    f.check_truncation()
}

/// Multiplies DFT modes by `(iξ)^α`; the Nyquist mode gets the real part.
pub(crate) fn apply_multiplier(spec: &mut [Complex64], alpha: f64, h: f64) {
    let len = spec.len();
    let (c, s) = ((alpha * PI / 2.0).cos(), (alpha * PI / 2.0).sin());
    for (k, z) in spec.iter_mut().enumerate() {
        let xi = mode_frequency(k, len, h);
        let mag = xi.abs().powf(alpha);
        let m = if len.is_multiple_of(2) && k == len / 2 {
            Complex64::new(mag * c, 0.0)
        } else {
            Complex64::new(mag * c, mag * s * xi.signum())
        };
        *z *= m;
    }
}

/// Number of terms in the expansion of the image sum.
const ALIAS_TERMS: usize = 40;

/// Contribution of the periodic images to the spectral derivative.
///
/// The padded DFT differentiates the periodization of `f` with period
/// `P = len·h`. For the left derivative every image lies to the left of
/// the window and adds its tail `1/Γ(−α)·∫ f(z)(x − z + kP)^{−1−α} dz`,
/// k ≥ 1. Summed over k this is `P^{−1−α}/Γ(−α)·∫ f(z) ζ(1+α, 1+t) dz`
/// with `t = (x − z)/P`, |t| ≤ 1/4, expanded as
/// `ζ(s, 1+t) = Σ_j (s)_j/j!·ζ(s+j)·(−t)^j`.
fn alias_correction(f: &SampledFunction, alpha: f64, len: usize) -> Result<Vec<f64>> {
    let grid = *f.grid();
    let h = grid.h();
    let period = len as f64 * h;
    let c = 0.5 * (grid.a() + grid.b());
    let s = 1.0 + alpha;
    let mut coef = Vec::with_capacity(ALIAS_TERMS);
    let mut poch = 1.0;
    for j in 0..ALIAS_TERMS {
        if j > 0 {
            poch *= (s + j as f64 - 1.0) / j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coef.push(sign * poch * zeta(s + j as f64)?);
    }
    // Moments of f in the scaled variable v = (z − c)/P.
    let mut moments = vec![0.0; ALIAS_TERMS];
    for (k, &fz) in f.values().iter().enumerate() {
        let v = (grid.node(k) - c) / period;
        let mut pw = h * fz;
        for m in moments.iter_mut() {
            *m += pw;
            pw *= v;
        }
    }
    // Σ_j coef_j (u − v)^j integrated against f = Σ_i (−1)^i M_i Σ_{j≥i} coef_j C(j,i) u^{j−i}.
    let mut binom = vec![vec![0.0; ALIAS_TERMS]; ALIAS_TERMS];
    for j in 0..ALIAS_TERMS {
        binom[j][0] = 1.0;
        for i in 1..=j {
            binom[j][i] = binom[j - 1][i - 1] + if i < j { binom[j - 1][i] } else { 0.0 };
        }
    }
    let mut poly = vec![0.0; ALIAS_TERMS];
    for (j, &cj) in coef.iter().enumerate() {
        for i in 0..=j {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            poly[j - i] += cj * binom[j][i] * sign * moments[i];
        }
    }
    let scale = period.powf(-s) * reciprocal_gamma(-alpha);
    Ok(grid
        .nodes()
        .iter()
        .map(|&x| {
            let u = (x - c) / period;
            scale * poly.iter().rev().fold(0.0, |acc, &p| acc * u + p)
        })
        .collect())
}

/// Fourier fractional derivative: multiply each mode by the principal
/// branch `(iξ)^α = |ξ|^α e^{iαπ·sgn(ξ)/2}`.
///
/// The Nyquist mode, whose sign is ambiguous, gets the real part of the
/// multiplier. The relative imaginary residue of the inverse transform is
/// returned in the diagnostics and must stay below 1e-8. The slowly
/// decaying tails that the periodic images of `f` leave inside the window
/// are subtracted in closed form.
pub fn fourier_derivative(f: &SampledFunction, alpha: f64) -> Result<OperatorResult> {
    check_order(alpha, "Fourier derivative")?;
    require_line(f, "Fourier derivative")?;
    let grid = *f.grid();
    let h = grid.h();
    let mut spec = padded_spectrum(f);
    let len = spec.len();
    apply_multiplier(&mut spec, alpha, h);
    FftPlanner::new().plan_fft_inverse(len).process(&mut spec);
    let scale = 1.0 / len as f64;
    let re: Vec<f64> = spec.iter().take(grid.len()).map(|z| z.re * scale).collect();
    let alias = alias_correction(f, alpha, len)?;
    let im_max = spec.iter().take(grid.len()).map(|z| (z.im * scale).abs()).fold(0.0, f64::max);
    let re_max = re.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let residue = if re_max > 0.0 { im_max / re_max } else { im_max };
    if residue >= 1e-8 {
        return Err(Error::ImaginaryResidue(residue));
    }
    let alias_max = alias.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let out: Vec<f64> = re.iter().zip(&alias).map(|(r, a)| r - a).collect();
    let mut r = OperatorResult::new(SampledFunction::new(grid, out, [])?, Scheme::FFTSpectral, None);
    r.diagnostics = BTreeMap::from([
        ("imag_residue".to_string(), residue),
        ("padded_len".to_string(), len as f64),
        ("alias_correction".to_string(), alias_max),
    ]);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn zero_in_zero_out() {
        let g = Grid::line(-8.0, 8.0, 256).unwrap();
        let r = fourier_derivative(&SampledFunction::zeros(g), 0.5).unwrap();
        assert_eq!(r.output.max_abs(), 0.0);
    }

    #[test]
    fn single_mode_scaled_by_multiplier() {
        let (len, h, alpha) = (64usize, 0.1, 0.4);
        for k in [1usize, 5, 40] {
            let mut spec = vec![Complex64::new(0.0, 0.0); len];
            spec[k] = Complex64::new(1.0, 0.0);
            apply_multiplier(&mut spec, alpha, h);
            let xi = mode_frequency(k, len, h);
            let expected = Complex64::new(0.0, xi).powf(alpha);
            assert!((spec[k] - expected).norm() < 1e-12 * expected.norm());
            assert!(spec.iter().enumerate().all(|(j, z)| j == k || z.norm() == 0.0));
        }
    }

    #[test]
    fn rejects_finite_interval() {
        let g = Grid::finite(-1.0, 1.0, 32).unwrap();
        assert!(fourier_derivative(&SampledFunction::zeros(g), 0.5).is_err());
    }
}
