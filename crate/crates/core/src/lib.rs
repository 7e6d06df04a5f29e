//! Fractional calculus on uniform grids.
//!
//! The crate provides Riemann-Liouville, Caputo, Grünwald-Letnikov and
//! Fourier fractional operators, executable checks of fractional calculus
//! identities (fundamental theorem, product and chain rules, integration by
//! parts, weak derivatives, mollification), fractional Sobolev norms and
//! inequalities, and closed-form reference solutions to test all of it
//! against.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod fit;
pub mod grid;
pub mod io;
pub mod norms;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod sobolev;
pub mod special;
pub mod testfn;

pub use calculus::ResidualReport;
pub use error::{Error, Result};
pub use grid::{Direction, DomainKind, Grid, SampledFunction};
pub use norms::lp_norm;
pub use operators::{apply, Family, FracSpec, OperatorResult, Scheme};
pub use special::{gamma, gl_weights, reciprocal_gamma};
