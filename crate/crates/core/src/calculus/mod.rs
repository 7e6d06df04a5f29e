//! Fractional calculus identities as executable residual checks.

mod ftfc;
mod ibp;
mod mollify;
mod rules;
mod weak;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use ftfc::{ftfc_constant, ftfc_reconstruct, kernel_function, FtfcDecomposition};
pub use ibp::{ibp_integral_residual, ibp_residual};
pub use mollify::{mollifier_commutation, mollify};
pub use rules::{chain_rule_check, integral_any, product_rule_check, product_rule_check_with};
pub use weak::{battery, smooth_noise, weak_derivative_verify, WEAK_TOLERANCE};

use crate::error::Result;
use crate::grid::SampledFunction;
use crate::norms::{interior, lp_norm_where};

/// Fraction of the domain cut from each end before residual norms are taken.
pub const INTERIOR_MARGIN: f64 = 0.05;

/// Outcome of an identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub diagnostics: BTreeMap<String, f64>,
}

impl ResidualReport {
    pub fn new(identity: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        ResidualReport {
            identity: identity.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    /// Same report judged against another tolerance.
    pub fn with_tolerance(self, tolerance: f64) -> Self {
        let pass = self.residual.is_finite() && self.residual <= tolerance;
        ResidualReport { tolerance, pass, ..self }
    }
}

/// L² norm over the non-excluded nodes of the interior.
pub fn interior_l2(f: &SampledFunction) -> Result<f64> {
    lp_norm_where(f, 2.0, interior(f, INTERIOR_MARGIN))
}
