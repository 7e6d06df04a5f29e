//! Smooth test functions shared by the identity checks and the tests.

/// exp(−1/(1−t²)) on |t| < 1, zero outside.
pub fn bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// d/dt of [`bump`].
pub fn bump_derivative(t: f64) -> f64 {
    if t.abs() < 1.0 {
        let q = 1.0 - t * t;
        -2.0 * t / (q * q) * (-1.0 / q).exp()
    } else {
        0.0
    }
}

/// C^∞ step: 0 for t ≤ 0, 1 for t ≥ 1.
pub fn smooth_step(t: f64) -> f64 {
    let g = |s: f64| if s > 0.0 { (-1.0 / s).exp() } else { 0.0 };
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        g(t) / (g(t) + g(1.0 - t))
    }
}

/// Translated and scaled [`bump`] supported in `(center − half_width, center + half_width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
}

impl Bump {
    pub fn new(center: f64, half_width: f64) -> Self {
        Bump { center, half_width }
    }

    pub fn eval(&self, x: f64) -> f64 {
        bump((x - self.center) / self.half_width)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        bump_derivative((x - self.center) / self.half_width) / self.half_width
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }
}

/// (1 − t²)² on |t| < 1: continuously differentiable, compactly supported.
pub fn c1_bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        let q = 1.0 - t * t;
        q * q
    } else {
        0.0
    }
}
