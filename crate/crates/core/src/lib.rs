//! Constructive unitary-orbit witnesses, counterexamples, and Schatten-norm
//! inequality checks for small dense complex matrices.
//!
//! * [`matcore`]: Hermitian eigensolver, SVD, functional calculus, norms.
//! * [`orbit`]: isometry/unitary witnesses packaged as verifiable certificates.
//! * [`counterex`]: explicit counterexamples and impossibility checks.
//! * [`ineq`]: property harness for Clarkson–McCarthy type inequalities.
//! * [`sample`]: seeded ChaCha20 ensembles.

// `!(x <= bound)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counterex;
pub mod error;
pub mod ineq;
pub mod matcore;
pub mod orbit;
pub mod sample;

pub use error::{Error, Result};
