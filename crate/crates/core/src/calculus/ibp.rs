//! Fractional integration by parts.

use super::ResidualReport;
use crate::error::Result;
use crate::grid::{Direction, SampledFunction};
use crate::norms::lp_norm;
use crate::operators::{check_order, rl_derivative, rl_integral};
use crate::quadrature::integrate;

fn pairing(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    integrate(&f.mul(g)?)
}

fn report(
    name: &str,
    lhs: f64,
    rhs: f64,
    f: &SampledFunction,
    g: &SampledFunction,
    rel: f64,
) -> Result<ResidualReport> {
    let scale = lp_norm(f, 2.0)? * lp_norm(g, 2.0)?;
    let signed = lhs - rhs;
    Ok(ResidualReport::new(name, signed.abs(), rel * scale)
        .with("lhs", lhs)
        .with("rhs", rhs)
        .with("signed", signed)
        .with("scale", scale))
}

/// Integration by parts `∫ f·D^α_opp g = ∫ (D^α_dir f)·g`, where `dir` is
/// `direction` and `opp` the other side.
///
/// The diagnostic `signed` is LHS − RHS, so swapping `(f, g)` together
/// with the direction flips its sign exactly. Tolerance: 1e-3·‖f‖₂‖g‖₂.
/// The integral form at order α is recorded as `integral_signed`.
pub fn ibp_residual(
    f: &SampledFunction,
    g: &SampledFunction,
    alpha: f64,
    direction: Direction,
) -> Result<ResidualReport> {
    check_order(alpha, "integration by parts")?;
    let dg = rl_derivative(g, alpha, direction.opposite(), None)?.output;
    let df = rl_derivative(f, alpha, direction, None)?.output;
    let lhs = pairing(f, &dg)?;
    let rhs = pairing(&df, g)?;
    let integral = ibp_integral_residual(f, g, alpha, direction)?;
    Ok(report("integration_by_parts", lhs, rhs, f, g, 1e-3)?.with("integral_signed", integral.diagnostics["signed"]))
}

/// Integral form `∫ f·I^σ_opp g = ∫ (I^σ_dir f)·g`; tolerance 1e-6·‖f‖₂‖g‖₂.
pub fn ibp_integral_residual(
    f: &SampledFunction,
    g: &SampledFunction,
    sigma: f64,
    direction: Direction,
) -> Result<ResidualReport> {
    let ig = rl_integral(g, sigma, direction.opposite())?.output;
    let i_f = rl_integral(f, sigma, direction)?.output;
    report("integration_by_parts_integral", pairing(f, &ig)?, pairing(&i_f, g)?, f, g, 1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::testfn::Bump;

    #[test]
    fn zero_pair_has_zero_residual() {
        let g = Grid::finite(0.0, 1.0, 64).unwrap();
        let f = SampledFunction::from_fn(g, |x| x * x);
        let r = ibp_residual(&f, &SampledFunction::zeros(g), 0.5, Direction::Left).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn swap_flips_sign() {
        let g = Grid::finite(0.0, 1.0, 256).unwrap();
        let b = Bump::new(0.5, 0.3);
        let f = SampledFunction::from_fn(g, |x| x * x);
        let phi = SampledFunction::from_fn(g, |x| b.eval(x));
        let r1 = ibp_residual(&f, &phi, 0.5, Direction::Left).unwrap();
        let r2 = ibp_residual(&phi, &f, 0.5, Direction::Right).unwrap();
        assert_eq!(r1.diagnostics["signed"], -r2.diagnostics["signed"]);
    }
}
