//! Computable criteria for membership in the set Ω of irrationals θ for which
//! `W(θ, ψ) = { s : ‖qθ − s‖ < ψ(q) for infinitely many q }` has full measure
//! for every Khinchin sequence ψ, evaluated at finite truncation, plus an
//! exact-measure simulator for the truncated target sets themselves.
//!
//! The crate is organised bottom-up:
//!
//! * [`theta`], [`convergents`] and [`bignum`]: partial quotients, exact
//!   convergents and certified multiples `qθ mod 1`;
//! * [`criteria`]: the largest-sum operator, the convergent-ratio statistic,
//!   the series criterion and the five growth classifiers;
//! * [`sequences`]: ψ / φ objects, Khinchin checks and the explicit
//!   constructions (counterexample step function, step φ from convergent
//!   indices, dyadic diagnostics);
//! * [`orbit`]: arc unions on the circle and truncated target unions;
//! * [`specfile`]: the key-value text format for θ and ψ specifications.

// `!(x > 0.0)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bignum;
pub mod convergents;
pub mod criteria;
pub mod error;
pub mod orbit;
pub mod sequences;
pub mod specfile;
pub mod theta;

pub use convergents::{build_convergents, circle_distance, CirclePoint, ConvergentTable};
pub use error::{Error, Result};
pub use theta::{expand_theta, GrowthRule, ThetaSpec};

/// Re-exported so callers can build quotient lists without naming malachite.
pub use malachite_nz::natural::Natural;
