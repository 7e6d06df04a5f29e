use proptest::prelude::*;

use fracalc_core::calculus::ibp_residual;
use fracalc_core::operators::{rl_derivative, rl_integral};
use fracalc_core::sobolev::{frac_sobolev_norm, gagliardo_seminorm, Side, SobolevSpec};
use fracalc_core::{lp_norm, Direction, Grid, SampledFunction};

const N: usize = 128;

fn grid() -> Grid {
    Grid::finite(0.0, 1.0, N).unwrap()
}

/// `c0 + c1·x + c2·sin(k·x + φ)` with bounded random coefficients.
fn smooth() -> impl Strategy<Value = SampledFunction> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, 0.5..6.0f64, 0.0..6.3f64).prop_map(|(c0, c1, c2, k, ph)| {
        SampledFunction::from_fn(grid(), move |x| c0 + c1 * x + c2 * (k * x + ph).sin())
    })
}

fn alpha() -> impl Strategy<Value = f64> {
    0.05..0.95f64
}

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Left), Just(Direction::Right)]
}

fn close(a: &SampledFunction, b: &SampledFunction, tol: f64) -> bool {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    a.sub(b).unwrap().max_abs() <= tol * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_is_linear(f in smooth(), g in smooth(), a in -3.0..3.0f64, b in -3.0..3.0f64,
                            al in alpha(), dir in direction()) {
        let comb = f.scale(a).add(&g.scale(b)).unwrap();
        let lhs = rl_derivative(&comb, al, dir, None).unwrap().output;
        let df = rl_derivative(&f, al, dir, None).unwrap().output;
        let dg = rl_derivative(&g, al, dir, None).unwrap().output;
        let rhs = df.scale(a).add(&dg.scale(b)).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn integral_is_linear(f in smooth(), g in smooth(), a in -3.0..3.0f64, s in 0.05..1.95f64, dir in direction()) {
        let lhs = rl_integral(&f.scale(a).add(&g).unwrap(), s, dir).unwrap().output;
        let rhs = rl_integral(&f, s, dir).unwrap().output.scale(a)
            .add(&rl_integral(&g, s, dir).unwrap().output).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn right_operator_is_mirrored_left(f in smooth(), al in alpha()) {
        let r = rl_derivative(&f, al, Direction::Right, None).unwrap().output;
        let l = rl_derivative(&f.reflect(), al, Direction::Left, None).unwrap().output.reflect();
        prop_assert_eq!(r.excluded(), l.excluded());
        for i in 0..=N {
            prop_assert_eq!(r.value(i), l.value(i));
        }
    }

    #[test]
    fn lp_norm_is_a_norm(f in smooth(), g in smooth(), c in -4.0..4.0f64, p in 1.0..6.0f64) {
        let nf = lp_norm(&f, p).unwrap();
        prop_assert!((lp_norm(&f.scale(c), p).unwrap() - c.abs() * nf).abs() <= 1e-12 * (1.0 + nf));
        let sum = lp_norm(&f.add(&g).unwrap(), p).unwrap();
        prop_assert!(sum <= nf + lp_norm(&g, p).unwrap() + 1e-12);
    }

    #[test]
    fn sobolev_norm_is_a_norm(f in smooth(), g in smooth(), c in -4.0..4.0f64, al in alpha(), p in 1.0..4.0f64) {
        let spec = SobolevSpec::new(al, p, Side::Left).unwrap();
        let nf = frac_sobolev_norm(&f, &spec).unwrap();
        let scaled = frac_sobolev_norm(&f.scale(c), &spec).unwrap();
        prop_assert!((scaled - c.abs() * nf).abs() <= 1e-10 * (1.0 + nf));
        let sum = frac_sobolev_norm(&f.add(&g).unwrap(), &spec).unwrap();
        prop_assert!(sum <= nf + frac_sobolev_norm(&g, &spec).unwrap() + 1e-10);
    }

    #[test]
    fn gagliardo_ignores_constants(f in smooth(), c in -5.0..5.0f64, s in 0.05..0.95f64, p in 1.0..3.0f64) {
        let a = gagliardo_seminorm(&f, s, p).unwrap();
        let shifted = f.map(|v| v + c);
        let b = gagliardo_seminorm(&shifted, s, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn integration_by_parts_is_antisymmetric(f in smooth(), g in smooth(), al in alpha()) {
        let a = ibp_residual(&f, &g, al, Direction::Left).unwrap();
        let b = ibp_residual(&g, &f, al, Direction::Right).unwrap();
        prop_assert!((a.diagnostics["signed"] + b.diagnostics["signed"]).abs() <= 1e-12 * (1.0 + a.diagnostics["scale"]));
    }
}
