mod common;

use common::{sample, unit};
use fracalc_core::calculus::{
    battery, ftfc_constant, ftfc_reconstruct, ibp_integral_residual, ibp_residual, kernel_function,
    mollifier_commutation, mollify, product_rule_check, smooth_noise, weak_derivative_verify,
};
use fracalc_core::oracle::step_weak_derivative;
use fracalc_core::testfn::{c1_bump, Bump};
use fracalc_core::{Direction, Grid, SampledFunction};

#[test]
fn reconstruction_of_smooth_function() {
    let f = sample(unit(4096), |x| (2.0 * x).exp());
    let d = ftfc_reconstruct(&f, 0.5, Direction::Left).unwrap();
    assert_eq!(d.c, 0.0);
    assert!(d.relative_residual < 1e-3, "{}", d.relative_residual);
}

#[test]
fn reconstruction_recovers_kernel_coefficient() {
    let g = unit(4096);
    for dir in [Direction::Left, Direction::Right] {
        let f = kernel_function(g, 0.5, dir).scale(-1.5).add(&sample(g, |x| x * x)).unwrap();
        let d = ftfc_reconstruct(&f, 0.5, dir).unwrap();
        assert!((d.c + 1.5).abs() < 1.5e-4, "{dir:?}: {}", d.c);
        assert!(d.relative_residual < 1e-3);
    }
}

#[test]
fn kernel_coefficient_is_linear() {
    let g = unit(2048);
    let k = kernel_function(g, 0.25, Direction::Left);
    let c1 = ftfc_constant(&k.scale(3.0), 0.25, Direction::Left).unwrap();
    assert!((c1 - 3.0).abs() < 1e-9);
}

#[test]
fn step_function_weak_derivative() {
    let n = 4096;
    let g = Grid::finite(-1.0, 1.0, n).unwrap();
    for alpha in [0.25, 0.5, 0.75] {
        let u = SampledFunction::from_fn(g, |x| {
            if x < 0.0 {
                0.0
            } else if x > 0.0 {
                1.0
            } else {
                0.5
            }
        });
        let v = SampledFunction::from_fn(g, |x| step_weak_derivative(0.0, 1.0, alpha, x)).with_excluded([n / 2]);
        let r = weak_derivative_verify(&u, &v, alpha, Direction::Left, 8).unwrap();
        assert!(r.pass, "α={alpha}: {r:?}");
        let smooth_only = SampledFunction::from_fn(g, |x| step_weak_derivative(0.0, 0.0, alpha, x));
        let wrong = weak_derivative_verify(&u, &smooth_only, alpha, Direction::Left, 8).unwrap();
        assert!(!wrong.pass);
    }
}

#[test]
fn noisy_candidate_is_rejected() {
    let g = unit(4096);
    let u = sample(g, |_| 1.0);
    let v = SampledFunction::from_fn(g, |x| x.powf(-0.5) / std::f64::consts::PI.sqrt());
    let noisy = v.zip_with(&smooth_noise(g, 7), |a, z| a * (1.0 + 0.1 * z)).unwrap();
    assert!(weak_derivative_verify(&u, &v, 0.5, Direction::Left, 8).unwrap().pass);
    assert!(!weak_derivative_verify(&u, &noisy, 0.5, Direction::Left, 8).unwrap().pass);
}

#[test]
fn battery_stays_inside() {
    let g = unit(1000);
    let bs = battery(&g, 6);
    assert_eq!(bs.len(), 18);
    for b in bs {
        assert!(b.center - b.half_width > 0.0 && b.center + b.half_width < 1.0);
    }
}

#[test]
fn noise_is_seeded_and_normalized() {
    let g = unit(256);
    assert_eq!(smooth_noise(g, 3), smooth_noise(g, 3));
    assert_ne!(smooth_noise(g, 3), smooth_noise(g, 4));
    assert!((smooth_noise(g, 3).max_abs() - 1.0).abs() < 1e-15);
}

#[test]
fn product_rule_with_constant_factor_is_exact() {
    let g = unit(2048);
    let f = sample(g, |x| (3.0 * x).sin() + 0.5);
    let c = sample(g, |_| 2.0);
    for dir in [Direction::Left, Direction::Right] {
        let r = product_rule_check(&f, &c, 0.4, dir, 0).unwrap();
        assert!(r.diagnostics["relative"] < 1e-12, "{r:?}");
    }
}

#[test]
fn integration_by_parts_sign_flips_under_swap() {
    let g = unit(2048);
    let f = sample(g, |x| Bump::new(0.4, 0.3).eval(x));
    let h = sample(g, |x| x * x + 1.0);
    let a = ibp_residual(&f, &h, 0.5, Direction::Left).unwrap();
    let b = ibp_residual(&h, &f, 0.5, Direction::Right).unwrap();
    assert!(a.pass && b.pass);
    assert!((a.diagnostics["signed"] + b.diagnostics["signed"]).abs() < 1e-15);
}

#[test]
fn integral_form_of_integration_by_parts() {
    let g = unit(4096);
    let f = sample(g, |x| (2.0 * x).cos());
    let h = sample(g, |x| Bump::new(0.6, 0.3).eval(x));
    for dir in [Direction::Left, Direction::Right] {
        let r = ibp_integral_residual(&f, &h, 0.3, dir).unwrap();
        assert!(r.pass, "{dir:?}: {r:?}");
    }
}

#[test]
fn mollification_commutes_on_the_line() {
    let w = Grid::line(-8.0, 8.0, 4096).unwrap();
    let f = sample(w, |x| c1_bump(x / 2.0));
    let r = mollifier_commutation(&f, 0.5, 0.1).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(mollifier_commutation(&sample(unit(512), |x| x), 0.5, 0.1).is_err());
}

#[test]
fn mollifier_keeps_constants_away_from_the_ends() {
    let g = unit(1000);
    let m = mollify(&sample(g, |_| 2.5), 0.05).unwrap();
    for i in 60..=940 {
        assert!((m.value(i).unwrap() - 2.5).abs() < 1e-12);
    }
}
