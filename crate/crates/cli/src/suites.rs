//! Verification suites: named collections of identity checks.

use std::collections::BTreeMap;

use fracalc_core::calculus::{
    chain_rule_check, ftfc_reconstruct, ibp_integral_residual, ibp_residual, interior_l2, kernel_function,
    mollifier_commutation, product_rule_check, product_rule_check_with, smooth_noise, weak_derivative_verify,
};
use fracalc_core::fit::{convergence_order, geomspace};
use fracalc_core::operators::{
    boundary_term, caputo_derivative, fourier_derivative, gl_derivative, rl_derivative, rl_integral,
};
use fracalc_core::oracle::{power_law_derivative, step_weak_derivative};
use fracalc_core::sobolev::{
    classify_refinement, exterior_extension, far_field_slope, h_alpha_equivalence_ratio, poincare_ratio,
    pollution_tail, sobolev_conjugate_check, step_norm_sequence, support, trivial_extension, Poincare, Regime, Side,
    SobolevSpec,
};
use fracalc_core::special::{gamma, reciprocal_gamma};
use fracalc_core::testfn::{c1_bump, Bump};
use fracalc_core::{Direction, Error, Grid, ResidualReport, Result, SampledFunction};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Suite;

/// How a residual is judged against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Criterion {
    /// Pass iff residual ≤ tolerance.
    #[serde(rename = "residual <= tolerance")]
    AtMost,
    /// Pass iff residual > tolerance: a rejection, or a lower bound.
    #[serde(rename = "residual > tolerance")]
    Exceeds,
}

/// Inputs shared by every suite.
#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    pub battery: usize,
}

type Run = Box<dyn Fn() -> Result<ResidualReport> + Send + Sync>;

/// One identity check, not yet run.
pub struct Check {
    pub suite: Suite,
    pub case: String,
    pub identity: String,
    pub alpha: f64,
    pub direction: Option<Direction>,
    pub criterion: Criterion,
    run: Run,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub code: &'static str,
    pub message: String,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub suite: Suite,
    pub case: String,
    pub identity: String,
    pub alpha: f64,
    pub direction: Option<&'static str>,
    pub criterion: Criterion,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub diagnostics: BTreeMap<String, f64>,
    pub error: Option<ErrorInfo>,
}

const DIRECTIONS: [Direction; 2] = [Direction::Left, Direction::Right];

fn dir_name(d: Direction) -> &'static str {
    match d {
        Direction::Left => "left",
        Direction::Right => "right",
    }
}

fn unit(n: usize) -> Result<Grid> {
    Grid::finite(0.0, 1.0, n)
}

fn line(n: usize) -> Result<Grid> {
    Grid::line(-8.0, 8.0, n)
}

fn pre(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

type Profile = fn(f64) -> f64;
type NamedProfile = (&'static str, Profile);
type SuiteBuilder = fn(Params) -> Vec<Check>;

fn smooth_family() -> [NamedProfile; 6] {
    [
        ("x2", |x| x * x),
        ("sin3x", |x| (3.0 * x).sin()),
        ("expm1", |x| x.exp() - 1.0),
        ("cos2x", |x| (2.0 * x).cos()),
        ("affine", |x| 1.0 + x),
        ("bump", |x| Bump::new(0.5, 0.3).eval(x)),
    ]
}

fn bump_profiles() -> [NamedProfile; 4] {
    [
        ("bump", |x| Bump::new(0.0, 3.0).eval(x)),
        ("bump-squared", |x| Bump::new(0.5, 2.0).eval(x).powi(2)),
        ("gaussian-bump", |x| (-x * x).exp() * Bump::new(-0.5, 4.0).eval(x)),
        ("c1-bump", |x| c1_bump(x / 3.0)),
    ]
}

struct Builder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Builder {
    fn new(suite: Suite) -> Self {
        Builder { suite, checks: Vec::new() }
    }

    fn push(
        &mut self,
        case: impl Into<String>,
        identity: impl Into<String>,
        alpha: f64,
        direction: Option<Direction>,
        criterion: Criterion,
        run: impl Fn() -> Result<ResidualReport> + Send + Sync + 'static,
    ) {
        self.checks.push(Check {
            suite: self.suite,
            case: case.into(),
            identity: identity.into(),
            alpha,
            direction,
            criterion,
            run: Box::new(run),
        });
    }

    fn at_most(
        &mut self,
        case: impl Into<String>,
        identity: impl Into<String>,
        alpha: f64,
        direction: Option<Direction>,
        run: impl Fn() -> Result<ResidualReport> + Send + Sync + 'static,
    ) {
        self.push(case, identity, alpha, direction, Criterion::AtMost, run);
    }
}

fn relative(r: &ResidualReport) -> f64 {
    r.diagnostics.get("relative").copied().unwrap_or(f64::NAN)
}

fn ftfc(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Ftfc);
    let (alpha, n) = (p.alpha, p.n);
    let smooth = move || Ok::<_, Error>(SampledFunction::from_fn(unit(n)?, |x| (2.0 * x).exp()));
    let with_kernel = move |dir| -> Result<SampledFunction> {
        let g = unit(n)?;
        kernel_function(g, alpha, dir).scale(-1.5).add(&SampledFunction::from_fn(g, |x| x * x))
    };
    for dir in DIRECTIONS {
        b.at_most("smooth", "ftfc_reconstruction", alpha, Some(dir), move || {
            let d = ftfc_reconstruct(&smooth()?, alpha, dir)?;
            Ok(ResidualReport::new("ftfc_reconstruction", d.relative_residual, 1e-3).with("c", d.c))
        });
        b.at_most("smooth", "derivative_of_integral", alpha, Some(dir), move || {
            let f = smooth()?;
            let i = rl_integral(&f, alpha, dir)?.output;
            let back = rl_derivative(&i, alpha, dir, None)?.output;
            let rel = interior_l2(&back.sub(&f)?)? / interior_l2(&f)?;
            Ok(ResidualReport::new("derivative_of_integral", rel, 1e-3))
        });
        b.at_most("kernel", "ftfc_reconstruction", alpha, Some(dir), move || {
            let d = ftfc_reconstruct(&with_kernel(dir)?, alpha, dir)?;
            Ok(ResidualReport::new("ftfc_reconstruction", d.relative_residual, 1e-3).with("c", d.c))
        });
        b.at_most("kernel", "kernel_coefficient", alpha, Some(dir), move || {
            let d = ftfc_reconstruct(&with_kernel(dir)?, alpha, dir)?;
            Ok(ResidualReport::new("kernel_coefficient", (d.c + 1.5).abs() / 1.5, 1e-2).with("c", d.c))
        });
    }
    b.checks
}

fn product(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Product);
    let (alpha, n) = (p.alpha, p.n);
    let pairs: [(&str, Profile, Profile); 2] = [
        ("bump", |x| Bump::new(0.45, 0.3).eval(x), |x| Bump::new(0.55, 0.35).eval(x)),
        ("exp-cos", |x| (2.0 * x).exp(), |x| (2.0 * x).cos()),
    ];
    for dir in DIRECTIONS {
        for (case, f, psi) in pairs {
            for m in [0usize, 1] {
                b.at_most(case, format!("product_rule_m{m}"), alpha, Some(dir), move || {
                    let g = unit(n)?;
                    let r = product_rule_check(
                        &SampledFunction::from_fn(g, f),
                        &SampledFunction::from_fn(g, psi),
                        alpha,
                        dir,
                        m,
                    )?;
                    Ok(r)
                });
            }
        }
        b.at_most("constant-factor", "product_rule_exact", alpha, Some(dir), move || {
            let g = unit(n)?;
            let f = SampledFunction::from_fn(g, |x| (2.0 * x).exp());
            let r = product_rule_check(&f, &SampledFunction::from_fn(g, |_| 3.0), alpha, dir, 0)?;
            Ok(ResidualReport::new("product_rule_exact", relative(&r), 1e-6))
        });
        b.at_most("linear-factor", "product_rule_exact", alpha, Some(dir), move || {
            let g = unit(n)?;
            let f = SampledFunction::from_fn(g, |x| (2.0 * x).exp());
            let psi = [SampledFunction::from_fn(g, |x| 2.0 * x - 1.0), SampledFunction::from_fn(g, |_| 2.0)];
            let r = product_rule_check_with(&f, &psi, alpha, dir, 1)?;
            Ok(ResidualReport::new("product_rule_exact", relative(&r), 1e-6))
        });
    }
    b.checks
}

fn chain(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Chain);
    let (alpha, n) = (p.alpha, p.n);
    for dir in DIRECTIONS {
        b.at_most("square-bump", "chain_rule", alpha, Some(dir), move || {
            let f = SampledFunction::from_fn(unit(n)?, |x| Bump::new(0.45, 0.3).eval(x));
            chain_rule_check(&f, |s| s * s, |s| 2.0 * s, alpha, dir)
        });
        b.at_most("cubic-sin", "chain_rule", alpha, Some(dir), move || {
            let f = SampledFunction::from_fn(unit(n)?, |x| (3.0 * x).sin());
            chain_rule_check(&f, |s| s * s * s - 2.0 * s, |s| 3.0 * s * s - 2.0, alpha, dir)
        });
        b.at_most("identity", "chain_rule_exact", alpha, Some(dir), move || {
            let f = SampledFunction::from_fn(unit(n)?, |x| (3.0 * x).sin());
            let r = chain_rule_check(&f, |s| s, |_| 1.0, alpha, dir)?;
            Ok(ResidualReport::new("chain_rule_exact", relative(&r), 1e-6))
        });
    }
    b.checks
}

fn ibp(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Ibp);
    let (alpha, n) = (p.alpha, p.n);
    let fs: [NamedProfile; 2] = [("x2", |x| x * x), ("exp", f64::exp)];
    for dir in DIRECTIONS {
        for (case, f) in fs {
            b.at_most(case, "integration_by_parts", alpha, Some(dir), move || {
                let g = unit(n)?;
                let psi = SampledFunction::from_fn(g, |x| Bump::new(0.55, 0.35).eval(x));
                ibp_residual(&SampledFunction::from_fn(g, f), &psi, alpha, dir)
            });
        }
        b.at_most("integral-form", "integration_by_parts_integral", alpha, Some(dir), move || {
            let g = unit(n)?;
            let f = SampledFunction::from_fn(g, |x| (2.0 * x).cos());
            let h = SampledFunction::from_fn(g, |x| Bump::new(0.6, 0.3).eval(x));
            ibp_integral_residual(&f, &h, alpha, dir)
        });
    }
    b.checks
}

fn noisy(v: &SampledFunction, seed: u64) -> Result<SampledFunction> {
    v.zip_with(&smooth_noise(*v.grid(), seed), |a, z| a * (1.0 + 0.1 * z))
}

type WeakPair = fn(usize, f64) -> Result<(SampledFunction, SampledFunction)>;

fn weak(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Weak);
    let Params { alpha, n, seed, battery } = p;
    let cases: [(&str, WeakPair); 3] = [
        ("line", |n, _| {
            let g = line(n)?;
            Ok((SampledFunction::from_fn(g, |_| 2.0), SampledFunction::zeros(g)))
        }),
        ("constant", |n, alpha| {
            let g = unit(n)?;
            let v = SampledFunction::from_fn(g, |x| 2.0 * x.powf(-alpha) * reciprocal_gamma(1.0 - alpha));
            Ok((SampledFunction::from_fn(g, |_| 2.0), v))
        }),
        ("step", |n, alpha| {
            let g = Grid::finite(-1.0, 1.0, n)?;
            let u = SampledFunction::from_fn(g, |x| {
                if x < 0.0 {
                    1.0
                } else if x > 0.0 {
                    2.0
                } else {
                    1.5
                }
            });
            let v = SampledFunction::from_fn(g, |x| step_weak_derivative(1.0, 2.0, alpha, x));
            let v = if n % 2 == 0 { v.with_excluded([n / 2]) } else { v };
            Ok((u, v))
        }),
    ];
    for (k, (case, pair)) in cases.into_iter().enumerate() {
        b.at_most(case, "weak_derivative", alpha, Some(Direction::Left), move || {
            let (u, v) = pair(n, alpha)?;
            weak_derivative_verify(&u, &v, alpha, Direction::Left, battery)
        });
        let noise_seed = seed.wrapping_mul(3).wrapping_add(k as u64 + 1);
        b.push(
            format!("{case}-noisy"),
            "weak_derivative_rejects_noise",
            alpha,
            Some(Direction::Left),
            Criterion::Exceeds,
            move || {
                let (u, v) = pair(n, alpha)?;
                let (u, v) = if v.max_abs() == 0.0 { (noisy(&u, noise_seed)?, v) } else { (u, noisy(&v, noise_seed)?) };
                Ok(weak_derivative_verify(&u, &v, alpha, Direction::Left, battery)?
                    .with("noise_seed", noise_seed as f64))
            },
        );
    }
    b.checks
}

fn mollify(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Mollify);
    let (alpha, n) = (p.alpha, p.n);
    let profiles: [NamedProfile; 2] =
        [("c1-bump", |x| c1_bump(x / 2.0)), ("c1-bump-wide", |x| c1_bump((x - 1.0) / 3.0))];
    for (case, f) in profiles {
        b.at_most(case, "mollifier_commutation", alpha, None, move || {
            mollifier_commutation(&SampledFunction::from_fn(line(n)?, f), alpha, 0.1)
        });
    }
    b.checks
}

fn equivalences(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Equivalences);
    let (alpha, n) = (p.alpha, p.n);
    for (case, f) in smooth_family().into_iter().take(3) {
        for dir in DIRECTIONS {
            b.at_most(format!("caputo-{case}"), "caputo_is_rl_minus_boundary", alpha, Some(dir), move || {
                let f = SampledFunction::from_fn(unit(n)?, f);
                let rl = rl_derivative(&f, alpha, dir, None)?.output;
                let c = caputo_derivative(&f, alpha, dir)?.output;
                let gap = rl.sub(&boundary_term(&f, alpha, dir)?)?.sub(&c)?.max_abs() / rl.max_abs().max(1.0);
                Ok(ResidualReport::new("caputo_is_rl_minus_boundary", gap, 1e-10))
            });
        }
    }
    b.push("gl-order", "gl_convergence_order", alpha, Some(Direction::Left), Criterion::Exceeds, move || {
        let oracle = power_law_derivative(2.0, alpha, Direction::Left)?;
        let ladder: Vec<usize> = (0..5).rev().map(|k| (n >> k).max(4)).collect();
        let (mut hs, mut errs) = (Vec::new(), Vec::new());
        for &m in &ladder {
            let g = unit(m)?;
            let d = gl_derivative(&SampledFunction::from_fn(g, |x| x * x), alpha, Direction::Left)?.output;
            let err = d
                .defined()
                .filter(|&(i, _)| g.node(i) >= 0.05)
                .map(|(i, v)| {
                    let e = oracle.eval(g.node(i), 0.0, 1.0);
                    (v - e).abs() / e.abs()
                })
                .fold(0.0, f64::max);
            hs.push(1.0 / m as f64);
            errs.push(err);
        }
        let order = convergence_order(&hs, &errs).ok_or_else(|| pre("GL convergence order is undefined"))?;
        Ok(ResidualReport::new("gl_convergence_order", order, 0.8)
            .with("coarsest_n", ladder[0] as f64)
            .with("finest_error", errs[errs.len() - 1]))
    });
    for (case, prof) in bump_profiles() {
        b.at_most(format!("fourier-{case}"), "fourier_is_left_rl", alpha, Some(Direction::Left), move || {
            let w = line(n)?;
            let f = SampledFunction::from_fn(w, prof);
            let fd = fourier_derivative(&f, alpha)?.output;
            let rd = rl_derivative(&f, alpha, Direction::Left, None)?.output;
            let (lo, hi) = support(&f).ok_or_else(|| pre("profile vanishes on the grid"))?;
            let (mut d, mut m) = (0.0f64, 0.0f64);
            for (i, x) in w.nodes().into_iter().enumerate() {
                if let (true, Some(a), Some(r)) = (x >= lo && x <= hi, fd.value(i), rd.value(i)) {
                    d = d.max((a - r).abs());
                    m = m.max(r.abs());
                }
            }
            Ok(ResidualReport::new("fourier_is_left_rl", if m > 0.0 { d / m } else { d }, 1e-3))
        });
        b.at_most(format!("plancherel-{case}"), "plancherel_ratio", alpha, None, move || {
            let r = h_alpha_equivalence_ratio(&SampledFunction::from_fn(line(n)?, prof), alpha)?;
            Ok(ResidualReport::new("plancherel_ratio", (r - 1.0).abs(), 0.02).with("ratio", r))
        });
    }
    b.checks
}

fn sobolev(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Sobolev);
    let n = p.n;
    let n0 = (n / 16).max(8);
    for (alpha, q, want) in [(0.25, 2.0, Regime::Stable), (0.5, 1.0, Regime::Stable), (0.75, 2.0, Regime::Divergent)] {
        let case = format!("step-ap{}", alpha * q);
        let run = move || {
            let spec = SobolevSpec::new(alpha, q, Side::Left)?;
            let s = step_norm_sequence(0.0, 1.0, n0, 4, &spec)?;
            let growth: Vec<f64> = s.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
            let got = classify_refinement(&s);
            let report = match want {
                Regime::Divergent => {
                    let least = growth.iter().rev().take(3).copied().fold(f64::INFINITY, f64::min);
                    ResidualReport::new("refinement_divergent", least, 0.1)
                }
                _ => ResidualReport::new("refinement_stable", growth.last().map_or(f64::NAN, |g| g.abs()), 0.05),
            };
            Ok(report
                .with("p", q)
                .with("finest_norm", s[s.len() - 1])
                .with("regime_matches", (got == want) as u8 as f64))
        };
        match want {
            Regime::Divergent => {
                b.push(case, "refinement_divergent", alpha, Some(Direction::Left), Criterion::Exceeds, run)
            }
            _ => b.at_most(case, "refinement_stable", alpha, Some(Direction::Left), run),
        }
    }
    let alpha = p.alpha;
    let q = if 2.0 * alpha < 1.0 { 2.0 } else { 1.0 };
    for (case, prof) in bump_profiles() {
        b.at_most(format!("conjugate-{case}"), "sobolev_conjugate", alpha, None, move || {
            let w = Grid::line(-40.0, 40.0, 2 * n)?;
            let r = sobolev_conjugate_check(&SampledFunction::from_fn(w, |x| prof(x / 3.0)), alpha, q)?;
            Ok(r.with("p", q))
        });
    }
    b.checks
}

fn poincare(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Poincare);
    let (alpha, n) = (p.alpha, p.n);
    let mut family = smooth_family().to_vec();
    family.push(("sqrt", f64::sqrt));
    for (case, f) in family {
        for q in [1.0, 2.0, 4.0] {
            for dir in DIRECTIONS {
                b.at_most(case, format!("poincare_p{q}"), alpha, Some(dir), move || {
                    let bound = 1.0 / (alpha * gamma(alpha)?);
                    let id = format!("poincare_p{q}");
                    Ok(match poincare_ratio(&SampledFunction::from_fn(unit(n)?, f), alpha, q, dir)? {
                        Poincare::Ratio(r) => ResidualReport::new(id, r / bound, 1.05).with("ratio", r),
                        Poincare::KernelElement { numerator } => {
                            ResidualReport::new(id, 0.0, 1.05).with("kernel_numerator", numerator)
                        }
                    }
                    .with("bound", bound))
                });
            }
        }
    }
    b.checks
}

fn pollution(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Pollution);
    let (alpha, n) = (p.alpha, p.n);
    let phi = move || Ok::<_, Error>(SampledFunction::from_fn(unit(n)?, |x| Bump::new(0.5, 0.25).eval(x)));
    for dir in DIRECTIONS {
        b.at_most("bump", "far_field_slope", alpha, Some(dir), move || {
            let right = geomspace(3.0, 101.0, 40);
            let xs: Vec<f64> = match dir {
                Direction::Left => right,
                Direction::Right => right.iter().map(|x| 1.0 - x).collect(),
            };
            let s = far_field_slope(&phi()?, alpha, dir, &xs)?.ok_or_else(|| pre("far field has no slope"))?;
            Ok(ResidualReport::new("far_field_slope", (s + 1.0 + alpha).abs() / (1.0 + alpha), 0.05).with("slope", s))
        });
    }
    b.at_most("bump-monotone", "tail_decreases", alpha, Some(Direction::Left), move || {
        let t = pollution_tail(&phi()?, alpha, Direction::Left, &geomspace(1.5, 200.0, 30))?;
        let rises =
            t.windows(2).filter(|w| w[1].abs().partial_cmp(&w[0].abs()) != Some(std::cmp::Ordering::Less)).count();
        Ok(ResidualReport::new("tail_decreases", rises as f64, 0.0))
    });
    b.checks
}

fn expect_code(r: Result<f64>, code: &'static str, identity: &str) -> Result<ResidualReport> {
    match r {
        Err(e) if e.code() == code => Ok(ResidualReport::new(identity, 0.0, 0.0)),
        Err(e) => Err(e),
        Ok(ratio) => Ok(ResidualReport::new(identity, 1.0, 0.0).with("accepted_norm_ratio", ratio)),
    }
}

fn extensions(p: Params) -> Vec<Check> {
    let mut b = Builder::new(Suite::Extensions);
    let n = p.n;
    let ones = move || Ok::<_, Error>(SampledFunction::from_fn(unit((n / 4).max(16))?, |_| 1.0));
    b.at_most("exterior-accept", "exterior_extension_accepts", 0.25, Some(Direction::Left), move || {
        let r = exterior_extension(&ones()?, 0.25, 2.0, 8.0, Direction::Left)?;
        Ok(ResidualReport::new("exterior_extension_accepts", 0.0, 0.0).with("norm_ratio", r.norm_ratio))
    });
    b.at_most("exterior-alpha-p", "exterior_extension_rejects", 0.6, Some(Direction::Left), move || {
        let r = exterior_extension(&ones()?, 0.6, 2.0, 8.0, Direction::Left).map(|r| r.norm_ratio);
        expect_code(r, "E_ALPHA_P_GE_1", "exterior_extension_rejects")
    });
    b.at_most("exterior-mu", "exterior_extension_rejects", 0.25, Some(Direction::Left), move || {
        let r = exterior_extension(&ones()?, 0.25, 2.0, 4.0, Direction::Left).map(|r| r.norm_ratio);
        expect_code(r, "E_MU_TOO_SMALL", "exterior_extension_rejects")
    });
    let alpha = p.alpha;
    b.at_most("trivial", "trivial_extension_stable", alpha, None, move || {
        let spec = SobolevSpec::new(alpha, 2.0, Side::Left)?;
        let ratio = |m: usize| -> Result<f64> {
            let u = SampledFunction::from_fn(unit(m)?, |x| Bump::new(0.5, 0.25).eval(x));
            Ok(trivial_extension(&u, 1.0, &spec)?.norm_ratio)
        };
        let (coarse, fine) = (ratio((n / 2).max(16))?, ratio(n.max(32))?);
        Ok(ResidualReport::new("trivial_extension_stable", (fine - coarse).abs() / coarse, 1e-2)
            .with("norm_ratio", fine))
    });
    b.checks
}

/// Checks of `suite` (every suite for [`Suite::All`]) in a fixed order.
pub fn checks(suite: Suite, p: Params) -> Vec<Check> {
    let builders: [(Suite, SuiteBuilder); 11] = [
        (Suite::Ftfc, ftfc),
        (Suite::Product, product),
        (Suite::Chain, chain),
        (Suite::Ibp, ibp),
        (Suite::Weak, weak),
        (Suite::Mollify, mollify),
        (Suite::Equivalences, equivalences),
        (Suite::Sobolev, sobolev),
        (Suite::Poincare, poincare),
        (Suite::Pollution, pollution),
        (Suite::Extensions, extensions),
    ];
    builders.iter().filter(|(s, _)| suite == Suite::All || *s == suite).flat_map(|(_, build)| build(p)).collect()
}

/// True when `case` is `filter` or one of its variants such as `step-noisy`.
pub fn case_matches(case: &str, filter: &str) -> bool {
    case == filter || case.strip_prefix(filter).is_some_and(|rest| rest.starts_with('-'))
}

fn judge(criterion: Criterion, residual: f64, tolerance: f64) -> bool {
    residual.is_finite()
        && match criterion {
            Criterion::AtMost => residual <= tolerance,
            Criterion::Exceeds => residual > tolerance,
        }
}

impl Check {
    /// Runs the check; errors become failing entries.
    pub fn run(&self, tolerances: &BTreeMap<String, f64>) -> Entry {
        let mut entry = Entry {
            suite: self.suite,
            case: self.case.clone(),
            identity: self.identity.clone(),
            alpha: self.alpha,
            direction: self.direction.map(dir_name),
            criterion: self.criterion,
            residual: None,
            tolerance: None,
            pass: false,
            diagnostics: BTreeMap::new(),
            error: None,
        };
        match (self.run)() {
            Ok(r) => {
                let tolerance = tolerances.get(&self.identity).copied().unwrap_or(r.tolerance);
                entry.pass = judge(self.criterion, r.residual, tolerance);
                entry.residual = Some(r.residual);
                entry.tolerance = Some(tolerance);
                entry.diagnostics = r.diagnostics;
            }
            Err(e) => entry.error = Some(ErrorInfo { code: e.code(), message: e.to_string() }),
        }
        entry
    }
}

/// Runs `checks` concurrently and returns entries in input order.
pub fn run_all(checks: &[Check], tolerances: &BTreeMap<String, f64>) -> Vec<Entry> {
    checks.par_iter().map(|c| c.run(tolerances)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_filter() {
        assert!(case_matches("step", "step"));
        assert!(case_matches("step-noisy", "step"));
        assert!(!case_matches("steps", "step"));
        assert!(!case_matches("line", "step"));
    }

    #[test]
    fn every_suite_has_checks() {
        let p = Params { alpha: 0.5, n: 64, seed: 0, battery: 4 };
        let all = checks(Suite::All, p).len();
        let mut sum = 0;
        for s in [
            Suite::Ftfc,
            Suite::Product,
            Suite::Chain,
            Suite::Ibp,
            Suite::Weak,
            Suite::Mollify,
            Suite::Equivalences,
            Suite::Sobolev,
            Suite::Poincare,
            Suite::Pollution,
            Suite::Extensions,
        ] {
            let k = checks(s, p).len();
            assert!(k > 0, "{s:?}");
            sum += k;
        }
        assert_eq!(sum, all);
    }

    #[test]
    fn rejection_criterion() {
        assert!(judge(Criterion::Exceeds, 2.0, 1.0));
        assert!(!judge(Criterion::Exceeds, 1.0, 1.0));
        assert!(!judge(Criterion::AtMost, f64::NAN, 1.0));
    }

    #[test]
    fn errors_become_failing_entries() {
        let p = Params { alpha: 1.5, n: 256, seed: 0, battery: 4 };
        let c = checks(Suite::Equivalences, p).into_iter().find(|c| c.case == "gl-order").unwrap();
        let e = c.run(&BTreeMap::new());
        assert!(!e.pass);
        assert_eq!(e.error.unwrap().code, "E_PRECONDITION");
    }
}
