//! The expression language: parsing, rendering, evaluation in the series
//! field, and the polynomial normal forms the solvers and checker rely on.

mod ast;
mod derivative;
mod eval;
mod mpoly;
mod parser;
mod poly;
mod ratfunc;
mod render;

pub use ast::{Expr, Func, EPSILON};
pub use derivative::symbolic_derivative;
pub use eval::{eval_series, rf_series_eval, Binding};
pub use mpoly::{MPoly, Monomial};
pub use parser::parse;
pub use poly::Polynomial;
pub use ratfunc::{RationalFunction, SUBTANGENT_VAR};
pub use render::{render, Style};

use thiserror::Error;

use crate::numfield::{NumError, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function '{name}' at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("'{0}' is reserved for the infinitesimal")]
    ReservedName(String),
    #[error("invalid variable name '{0}'")]
    InvalidName(String),
    #[error("value bound to '{0}' does not match the binding's mode or order")]
    BindingMismatch(String),
    #[error("not a polynomial: {0}")]
    NotPolynomial(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

impl ExprError {
    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        ExprError::Syntax { offset, message: message.into() }
    }
}

/// Expands `e` into a polynomial in `var` after substituting the given
/// rational values for the other variables.
pub fn to_polynomial(e: &Expr, var: &str, params: &[(&str, Rational)]) -> Result<Polynomial, ExprError> {
    let mut p = MPoly::from_expr(e)?;
    for (name, value) in params {
        p = p.substitute_rational(name, value);
    }
    p.to_univariate(var).ok_or_else(|| {
        let extra: Vec<String> = p.vars().into_iter().filter(|v| v != var).collect();
        ExprError::NotPolynomial(format!("{e} depends on {} besides {var}", extra.join(", ")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_normal_form() {
        let ten = Rational::from_integer(10.into());
        assert_eq!(
            to_polynomial(&parse("B - 2*A").unwrap(), "A", &[("B", ten)]).unwrap(),
            Polynomial::from_ints("A", &[10, -2])
        );
        assert_eq!(
            to_polynomial(&parse("(A+1)^2").unwrap(), "A", &[]).unwrap(),
            Polynomial::from_ints("A", &[1, 2, 1])
        );
        assert!(matches!(to_polynomial(&parse("sin(A)").unwrap(), "A", &[]), Err(ExprError::NotPolynomial(_))));
        assert!(matches!(to_polynomial(&parse("B*A").unwrap(), "A", &[]), Err(ExprError::NotPolynomial(_))));
    }
}
