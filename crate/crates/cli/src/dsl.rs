//! Function specifications: a closed set of closed-form terms combined by
//! sums and scalar multiples, e.g. `2*power:0.5+constant:-1`.

use fracalc_core::testfn::Bump;
use fracalc_core::{DomainKind, Grid, SampledFunction};

use crate::error::CliError;

/// One closed-form building block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Term {
    /// `(x − a)^μ`; singular at `a` when μ < 0.
    Power {
        mu: f64,
    },
    Constant {
        c: f64,
    },
    /// λ left of the midpoint of the domain, μ right of it, their mean at it.
    Step {
        lambda: f64,
        mu: f64,
    },
    /// Smooth bump with the given centre and half-width.
    Bump {
        center: f64,
        half_width: f64,
    },
    /// `exp(−x²/(2s²))`.
    Gaussian {
        s: f64,
    },
}

/// `Σ coeff·term`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub terms: Vec<(f64, Term)>,
}

/// Interval, cell count and kind of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub a: f64,
    pub b: f64,
    pub n: Option<usize>,
    pub kind: DomainKind,
}

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::config(format!("{what}: '{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::config(format!("{what}: '{s}' is not finite")));
    }
    Ok(v)
}

fn numbers<const K: usize>(args: &str, name: &str) -> Result<[f64; K], CliError> {
    let parts: Vec<&str> = args.split(',').collect();
    if parts.len() != K {
        return Err(CliError::config(format!("{name} takes {K} argument(s), got '{args}'")));
    }
    let mut out = [0.0; K];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = number(p, name)?;
    }
    Ok(out)
}

/// Splits on `+` signs that are not part of an exponent such as `1e+3`.
fn split_terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &c) in bytes.iter().enumerate() {
        if c == b'+' && i > start && !matches!(bytes[i - 1], b'e' | b'E') {
            out.push(&s[start..i]);
            start = i + 1;
        }
    }
    out.push(&s[start..]);
    out
}

impl Term {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (name, args) =
            s.split_once(':').ok_or_else(|| CliError::config(format!("term '{s}' must look like name:arguments")))?;
        let term = match name.trim() {
            "power" => {
                let [mu] = numbers(args, "power")?;
                if mu <= -1.0 {
                    return Err(CliError::config(format!("power:{mu} is not integrable; need μ > -1")));
                }
                Term::Power { mu }
            }
            "constant" => {
                let [c] = numbers(args, "constant")?;
                Term::Constant { c }
            }
            "step" => {
                let [lambda, mu] = numbers(args, "step")?;
                Term::Step { lambda, mu }
            }
            "bump" => {
                let [center, half_width] = numbers(args, "bump")?;
                if half_width <= 0.0 {
                    return Err(CliError::config("bump width must be positive"));
                }
                Term::Bump { center, half_width }
            }
            "gaussian" => {
                let [s] = numbers(args, "gaussian")?;
                if s <= 0.0 {
                    return Err(CliError::config("gaussian width must be positive"));
                }
                Term::Gaussian { s }
            }
            other => {
                return Err(CliError::config(format!(
                    "unknown term '{other}'; expected power, constant, step, bump or gaussian"
                )))
            }
        };
        Ok(term)
    }

    /// Value at `x` on `(a, b)`; NaN where the term is singular.
    pub fn eval(&self, x: f64, a: f64, b: f64) -> f64 {
        match *self {
            Term::Power { mu } => {
                if mu == 0.0 {
                    1.0
                } else if x == a && mu < 0.0 {
                    f64::NAN
                } else {
                    (x - a).max(0.0).powf(mu)
                }
            }
            Term::Constant { c } => c,
            Term::Step { lambda, mu } => {
                let mid = 0.5 * (a + b);
                if x < mid {
                    lambda
                } else if x > mid {
                    mu
                } else {
                    0.5 * (lambda + mu)
                }
            }
            Term::Bump { center, half_width } => Bump::new(center, half_width).eval(x),
            Term::Gaussian { s } => (-x * x / (2.0 * s * s)).exp(),
        }
    }
}

impl FunctionSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        if s.trim().is_empty() {
            return Err(CliError::config("empty function specification"));
        }
        let terms = split_terms(s)
            .into_iter()
            .map(|t| {
                let t = t.trim();
                match t.split_once('*') {
                    Some((k, spec)) => Ok((number(k, "coefficient")?, Term::parse(spec.trim())?)),
                    None => Ok((1.0, Term::parse(t)?)),
                }
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(FunctionSpec { terms })
    }

    pub fn eval(&self, x: f64, a: f64, b: f64) -> f64 {
        self.terms.iter().map(|(k, t)| k * t.eval(x, a, b)).sum()
    }

    /// Samples on `grid`; singular nodes become excluded nodes.
    pub fn sample(&self, grid: Grid) -> SampledFunction {
        let (a, b) = (grid.a(), grid.b());
        SampledFunction::from_fn(grid, |x| self.eval(x, a, b))
    }
}

impl Domain {
    /// `a,b[,n][,line|finite]`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() < 2 || parts.len() > 4 {
            return Err(CliError::config(format!("domain '{s}' must be a,b[,n][,line|finite]")));
        }
        let a = number(parts[0], "domain start")?;
        let b = number(parts[1], "domain end")?;
        if a >= b {
            return Err(CliError::config(format!("domain needs a < b, got {a} and {b}")));
        }
        let mut n = None;
        let mut kind = DomainKind::FiniteInterval;
        for p in &parts[2..] {
            match *p {
                "line" => kind = DomainKind::TruncatedLine,
                "finite" => kind = DomainKind::FiniteInterval,
                other => {
                    let v: usize = other
                        .parse()
                        .map_err(|_| CliError::config(format!("domain cell count '{other}' is not a whole number")))?;
                    n = Some(v);
                }
            }
        }
        Ok(Domain { a, b, n, kind })
    }

    pub fn grid(&self, default_n: usize) -> Result<Grid, CliError> {
        Grid::new(self.a, self.b, self.n.unwrap_or(default_n), self.kind).map_err(|e| CliError::config(e.to_string()))
    }
}
