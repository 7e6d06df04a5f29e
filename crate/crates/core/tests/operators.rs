mod common;

use common::{bump_profiles, max_rel_error, sample, unit};
use fracalc_core::fit::convergence_order;
use fracalc_core::operators::{caputo_derivative, fourier_derivative, gl_derivative, rl_derivative, rl_integral};
use fracalc_core::oracle::{power_law_derivative, power_law_integral};
use fracalc_core::{apply, Direction, Family, FracSpec, Grid, SampledFunction, Scheme};

fn order_against(n_ladder: &[usize], run: impl Fn(usize) -> f64) -> f64 {
    let hs: Vec<f64> = n_ladder.iter().map(|&n| 1.0 / n as f64).collect();
    let errs: Vec<f64> = n_ladder.iter().map(|&n| run(n)).collect();
    convergence_order(&hs, &errs).unwrap()
}

#[test]
fn sqrt_has_constant_half_derivative() {
    let f = SampledFunction::from_fn(unit(4096), f64::sqrt);
    let d = rl_derivative(&f, 0.5, Direction::Left, None).unwrap().output;
    for (i, v) in d.defined().filter(|&(i, _)| i > 200) {
        assert!((v - 0.886_226_925_5).abs() < 1e-4, "node {i}: {v}");
    }
}

#[test]
fn caputo_annihilates_constants() {
    let f = sample(unit(512), |_| 3.0);
    for dir in [Direction::Left, Direction::Right] {
        let d = caputo_derivative(&f, 0.4, dir).unwrap().output;
        assert_eq!(d.max_abs(), 0.0);
    }
}

#[test]
fn gl_rejects_orders_above_one() {
    let f = sample(unit(64), |x| x);
    let e = gl_derivative(&f, 1.5, Direction::Left).unwrap_err();
    assert_eq!(e.code(), "E_PRECONDITION");
    assert!(e.to_string().contains("GL requires 0<α<1"));
}

#[test]
fn fourier_requires_line() {
    let f = sample(unit(64), |x| x);
    assert!(fourier_derivative(&f, 0.5).is_err());
    let spec = FracSpec::new(0.5, Direction::Left, Family::Fourier).unwrap();
    assert!(apply(&f, &spec).is_err());
}

#[test]
fn integral_converges_at_least_three_halves() {
    let oracle = power_law_integral(2.0, 0.5, Direction::Left).unwrap();
    let order = order_against(&[256, 512, 1024, 2048], |n| {
        let f = sample(unit(n), |x| x * x);
        let i = rl_integral(&f, 0.5, Direction::Left).unwrap().output;
        max_rel_error(&i, |x| oracle.eval(x, 0.0, 1.0), 0.05)
    });
    assert!(order >= 1.5, "order {order}");
}

#[test]
fn gl_converges_at_first_order() {
    let oracle = power_law_derivative(1.0, 0.5, Direction::Left).unwrap();
    let order = order_against(&[256, 512, 1024, 2048], |n| {
        let f = sample(unit(n), |x| x);
        let d = gl_derivative(&f, 0.5, Direction::Left).unwrap().output;
        max_rel_error(&d, |x| oracle.eval(x, 0.0, 1.0), 0.05)
    });
    assert!(order >= 0.8, "order {order}");
}

#[test]
fn right_derivative_mirrors_left() {
    let g = unit(1024);
    let f = sample(g, |x| (2.0 * x).exp());
    let r = rl_derivative(&f, 0.3, Direction::Right, None).unwrap().output;
    let l = rl_derivative(&f.reflect(), 0.3, Direction::Left, None).unwrap().output.reflect();
    for i in 0..1024 {
        assert_eq!(r.value(i), l.value(i));
    }
}

#[test]
fn orders_above_one_compose() {
    let g = unit(2048);
    let f = sample(g, |x| x * x * x);
    let spec = FracSpec::new(1.5, Direction::Left, Family::RiemannLiouville).unwrap();
    let d = apply(&f, &spec).unwrap();
    assert_eq!(d.scheme, Scheme::CompositeCaputo);
    let oracle = power_law_derivative(3.0, 1.5, Direction::Left).unwrap();
    let err = max_rel_error(&d.output, |x| oracle.eval(x, 0.0, 1.0), 0.1);
    assert!(err < 1e-2, "{err}");
}

#[test]
fn fourier_matches_left_rl_on_bumps() {
    let w = Grid::line(-8.0, 8.0, 4096).unwrap();
    for (name, p) in bump_profiles() {
        let f = sample(w, p);
        let fd = fourier_derivative(&f, 0.5).unwrap().output;
        let rd = rl_derivative(&f, 0.5, Direction::Left, None).unwrap().output;
        let gap = fd.sub(&rd).unwrap().max_abs() / rd.max_abs();
        assert!(gap < 1e-3, "{name}: {gap}");
    }
}

#[test]
fn integral_then_derivative_is_identity_on_smooth_data() {
    let f = sample(unit(4096), |x| (3.0 * x).sin() + 1.0);
    let i = rl_integral(&f, 0.25, Direction::Left).unwrap().output;
    let back = rl_derivative(&i, 0.25, Direction::Left, None).unwrap().output;
    let gap = back.sub(&f).unwrap().defined().filter(|&(i, _)| i > 40).map(|(_, v)| v.abs()).fold(0.0, f64::max);
    assert!(gap < 1e-3, "{gap}");
}
