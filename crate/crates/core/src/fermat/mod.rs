//! Replays of Fermat's adequality procedures: extrema of polynomials,
//! subtangents of algebraic curves, tangents of parametric curves (standing
//! in for the cycloid construction) and the refraction problem. Each solver
//! returns its answer together with a step-by-step [`Derivation`].

mod extremum;
mod parametric;
mod refraction;
mod tangent;
mod trace;

pub use extremum::{maximize, ExtremumResult};
pub use parametric::{parametric_tangent, SlopeResult, PARAMETER, SLOPE_VAR};
pub use refraction::{refract, RefractionResult, RefractionSetup, MAX_BISECTIONS};
pub use tangent::{subtangent, TangentResult};
pub use trace::{Derivation, RelationKind, Rule, SideCondition, Step, TraceStyle};

use thiserror::Error;

use crate::expr::ExprError;
use crate::numfield::{rational_from_f64, NumError, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FermatError {
    #[error("not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("the expression is constant in {0}: no adequality can be formed")]
    DegenerateConstant(String),
    #[error("the point ({x}, {y}) is not on the curve")]
    PointNotOnCurve { x: Box<Rational>, y: Box<Rational> },
    #[error("the tangent has no finite subtangent (vertical slope in the increment ratio)")]
    VerticalTangent,
    #[error("the ordinate is zero, so the similar-triangles construction degenerates")]
    ZeroOrdinate,
    #[error("the tangent is perpendicular to the axis: the subtangent is zero")]
    ZeroSubtangent,
    #[error("both increments vanish to the trusted order: the point is stationary")]
    StationaryPoint,
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("tolerance {tol} not reached within {iterations} bisection steps")]
    ToleranceNotReached { tol: f64, iterations: usize },
    #[error(transparent)]
    Expr(ExprError),
    #[error(transparent)]
    Num(#[from] NumError),
}

impl From<ExprError> for FermatError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::NotPolynomial(m) => FermatError::NotPolynomial(m),
            ExprError::Num(n) => FermatError::Num(n),
            other => FermatError::Expr(other),
        }
    }
}

/// Exact stand-in for an `f64` in a trace: the value rounded to twelve
/// decimal places (the nearest dyadic rational for huge magnitudes).
fn display_rational(x: f64) -> Rational {
    let scale = 1e12;
    let scaled = (x * scale).round();
    if scaled.is_finite() && scaled.abs() < 9.0e15 {
        Rational::new((scaled as i64).into(), 1_000_000_000_000i64.into())
    } else {
        rational_from_f64(x).unwrap_or_default()
    }
}
