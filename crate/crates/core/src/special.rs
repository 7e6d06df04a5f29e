//! Gamma function, Grünwald-Letnikov weights and the Riemann zeta function.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument with a finite Γ in double precision.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Lanczos sum for x >= 0.5; returns Γ(x) without overflow checks.
fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // t^(x+0.5) split in two halves so it stays finite up to the overflow threshold.
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * acc
}

/// Γ(x) for real x, using the reflection formula below 1/2.
///
/// Poles at non-positive integers and arguments beyond
/// [`GAMMA_MAX_ARG`] are reported as errors rather than returned as
/// infinities.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::pre("gamma of NaN"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::GammaOverflow(x));
    }
    let g = if x < 0.5 { PI / ((PI * x).sin() * lanczos(1.0 - x)) } else { lanczos(x) };
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::GammaOverflow(x))
    }
}

/// 1/Γ(x), exactly 0 at the poles of Γ and for arguments where Γ overflows.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > GAMMA_MAX_ARG {
        return 0.0;
    }
    if x < 0.5 {
        let g = lanczos(1.0 - x);
        if !g.is_finite() {
            return f64::NAN;
        }
        (PI * x).sin() * g / PI
    } else {
        1.0 / lanczos(x)
    }
}

/// Γ(x) for arguments known to be valid; panics otherwise.
pub(crate) fn gamma_ok(x: f64) -> f64 {
    gamma(x).unwrap_or_else(|e| panic!("internal gamma evaluation failed: {e}"))
}

/// Γ(p)/Γ(q), with the reciprocal convention when q is a pole.
pub fn gamma_ratio(p: f64, q: f64) -> Result<f64> {
    Ok(gamma(p)? * reciprocal_gamma(q))
}

/// Grünwald-Letnikov weights w_k = (−1)^k binom(α, k), k = 0..=k_max.
///
/// Uses the recurrence w_0 = 1, w_k = w_{k−1}(k − 1 − α)/k, which is stable
/// for all k; for 0 < α < 1 every w_k with k ≥ 1 is negative.
pub fn gl_weights(alpha: f64, k_max: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(k_max + 1);
    w.push(1.0);
    for k in 1..=k_max {
        let prev = w[k - 1];
        w.push(prev * ((k as f64 - 1.0 - alpha) / k as f64));
    }
    w
}

/// Riemann ζ(s) for real s ≠ 1.
///
/// For s > 0 it is computed from the Dirichlet eta function with Borwein's
/// accelerated alternating series (40 terms), then ζ = η / (1 − 2^{1−s});
/// negative arguments go through the functional equation.
pub fn zeta(s: f64) -> Result<f64> {
    if s.is_nan() || s == 1.0 {
        return Err(Error::pre(format!("zeta needs s != 1; got {s}")));
    }
    if s == 0.0 {
        return Ok(-0.5);
    }
    if s < 0.0 {
        let refl = 2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(1.0 - s)?;
        return Ok(refl * zeta(1.0 - s)?);
    }
    const N: usize = 40;
    let n = N as f64;
    let mut d = [0.0f64; N + 1];
    let mut term = 1.0;
    let mut acc = term;
    d[0] = acc;
    for (i, di) in d.iter_mut().enumerate().skip(1) {
        let fi = i as f64;
        term *= 4.0 * (n + fi - 1.0) * (n - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        *di = acc;
    }
    let dn = d[N];
    let mut eta = 0.0;
    for (k, &dk) in d.iter().take(N).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += sign * (dk - dn) / ((k + 1) as f64).powf(s);
    }
    eta = -eta / dn;
    Ok(eta / (1.0 - 2f64.powf(1.0 - s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_known_values() {
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-13);
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-13);
        assert!(rel(gamma(1e-3).unwrap(), 999.423_772_484_595_5) < 1e-12);
        // 170! = Γ(171)
        assert!(rel(gamma(171.0).unwrap(), 7.257_415_615_307_994e306) < 1e-12);
    }

    #[test]
    fn gamma_errors() {
        assert!(matches!(gamma(0.0), Err(Error::GammaPole(_))));
        assert!(matches!(gamma(-3.0), Err(Error::GammaPole(_))));
        assert!(matches!(gamma(172.0), Err(Error::GammaOverflow(_))));
    }

    #[test]
    fn reciprocal_gamma_poles_are_zero() {
        assert_eq!(reciprocal_gamma(0.0), 0.0);
        assert_eq!(reciprocal_gamma(-1.0), 0.0);
        assert_eq!(reciprocal_gamma(-7.0), 0.0);
        assert!(rel(reciprocal_gamma(0.5), 1.0 / PI.sqrt()) < 1e-14);
        assert!(rel(reciprocal_gamma(-0.5), -0.5 / PI.sqrt()) < 1e-13);
    }

    #[test]
    fn gamma_functional_equation() {
        let mut x = 0.1;
        while x <= 50.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(((lhs - rhs) / lhs).abs() <= 1e-12, "x = {x}");
            x += 0.137;
        }
    }

    #[test]
    fn gl_weight_values() {
        assert_eq!(gl_weights(0.5, 0), vec![1.0]);
        let w = gl_weights(0.5, 2);
        assert_eq!(w, vec![1.0, -0.5, -0.125]);
        let w = gl_weights(0.3, 200);
        assert!((w[1] + 0.3).abs() < 1e-16);
        assert!(w[1..].iter().all(|&x| x < 0.0));
        // partial sums decrease towards 0 from above
        let mut s = 0.0;
        let mut prev = f64::INFINITY;
        for &x in &w {
            s += x;
            assert!(s > 0.0 && s < prev);
            prev = s;
        }
    }

    #[test]
    fn gl_weights_match_closed_form() {
        let alpha: f64 = 0.37;
        let w = gl_weights(alpha, 12);
        for (k, &wk) in w.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let exact = sign * gamma(1.0 + alpha).unwrap() / gamma(k as f64 + 1.0).unwrap()
                * reciprocal_gamma(alpha - k as f64 + 1.0);
            assert!((wk - exact).abs() <= 1e-14 * exact.abs().max(1e-3), "k = {k}");
        }
    }

    #[test]
    fn zeta_values() {
        assert!(rel(zeta(0.5).unwrap(), -1.460_354_508_809_586_8) < 1e-12);
        assert!(rel(zeta(2.0).unwrap(), PI * PI / 6.0) < 1e-12);
        assert!(rel(zeta(0.25).unwrap(), -0.813_278_405_261_891_7) < 1e-11);
        assert!(zeta(1.0).is_err());
        assert!(rel(zeta(-0.5).unwrap(), -0.207_886_224_977_354_57) < 1e-11);
        assert!(rel(zeta(-0.75).unwrap(), -0.133_642_774_436_585) < 1e-10);
    }
}
