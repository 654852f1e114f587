//! A computable infinitesimal-enriched ordered field.
//!
//! Hyperreals are modelled by truncated formal Laurent series in a single
//! positive infinitesimal `E`, ordered by the sign of the leading (lowest
//! exponent) coefficient. This is an ordered field extension of the
//! rationals, so the standard part, the relation "infinitely close" and
//! adequality all have their usual meaning. The ultrapower construction of
//! the hyperreal line is not computable and is not represented here.

mod coefficient;
mod rational;
mod series;
mod taylor;

pub use coefficient::{Coefficient, Mode};
pub use rational::{parse_rational, rational_from_f64, rational_to_f64, sqrt_rational, Rational};
pub use series::{adequal, approx, Series};
pub use taylor::{taylor_apply, Transcendental};

use std::fmt::Debug;
use thiserror::Error;

/// Default truncation order: every derivation the solvers replay stays at
/// order 2 in `E`, leaving six orders of headroom.
pub const DEFAULT_TRUNC: i64 = 8;

/// Default tolerance for approximate coefficients.
pub const DEFAULT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("invalid precision: truncation order {0} is below 1")]
    InvalidPrecision(i64),
    #[error("mixing exact and approximate coefficients")]
    ModeMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: the value cannot be certified at this truncation order")]
    PrecisionExhausted,
    #[error("value is not finite")]
    InfiniteValue,
    #[error("{0} of a non-zero constant has no exact rational expansion")]
    ExactModeUnsupported(&'static str),
    #[error("square root of a negative value")]
    NegativeSqrtArgument,
    #[error("square root of a non-zero infinitesimal is not a Laurent series")]
    SqrtOfInfinitesimal,
}

pub type Result<T> = std::result::Result<T, NumError>;

/// Coefficient field of a [`Series`].
///
/// The mode travels with every value so that a series can build its own
/// zero and one, and so that incompatible coefficients are caught before any
/// arithmetic happens.
pub trait Scalar: Clone + Debug + PartialEq {
    type Mode: Copy + Debug + PartialEq;

    fn mode(&self) -> Self::Mode;
    fn zero(mode: Self::Mode) -> Self;
    fn one(mode: Self::Mode) -> Self;
    fn from_rational(q: &Rational, mode: Self::Mode) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}
