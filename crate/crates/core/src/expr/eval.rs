use std::collections::BTreeMap;

use super::ast::{Expr, EPSILON};
use super::mpoly::MPoly;
use super::ratfunc::RationalFunction;
use super::ExprError;
use crate::numfield::{taylor_apply, Coefficient, Mode, Rational, Scalar, Series};

/// Values for the free variables of an expression. `E` is always bound to
/// the infinitesimal, and every value shares one mode and truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    mode: Mode,
    trunc: i64,
    values: BTreeMap<String, Series>,
}

impl Binding {
    pub fn new(mode: Mode, trunc: i64) -> Result<Self, ExprError> {
        let mut values = BTreeMap::new();
        values.insert(EPSILON.to_string(), Series::epsilon_in(mode, trunc)?);
        Ok(Binding { mode, trunc, values })
    }

    pub fn exact(trunc: i64) -> Result<Self, ExprError> {
        Self::new(Mode::Exact, trunc)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Binds `name`; a value known to a higher order is cut back to the
    /// binding's order.
    pub fn bind(&mut self, name: &str, value: Series) -> Result<(), ExprError> {
        if name == EPSILON {
            return Err(ExprError::ReservedName(name.to_string()));
        }
        if !Expr::is_valid_name(name) {
            return Err(ExprError::InvalidName(name.to_string()));
        }
        if value.mode() != self.mode || value.trunc() < self.trunc {
            return Err(ExprError::BindingMismatch(name.to_string()));
        }
        self.values.insert(name.to_string(), value.truncated(self.trunc));
        Ok(())
    }

    pub fn bind_rational(&mut self, name: &str, q: &Rational) -> Result<(), ExprError> {
        let value = Series::constant(Coefficient::from_rational(q, self.mode), self.trunc);
        self.bind(name, value)
    }

    /// Builder form of [`Binding::bind`].
    pub fn with(mut self, name: &str, value: Series) -> Result<Self, ExprError> {
        self.bind(name, value)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Series> {
        self.values.get(name)
    }

    /// Bound names other than `E`.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str).filter(|n| *n != EPSILON)
    }
}

/// Evaluates `e` bottom-up in the series field.
pub fn eval_series(e: &Expr, binding: &Binding) -> Result<Series, ExprError> {
    let go = |x: &Expr| eval_series(x, binding);
    Ok(match e {
        Expr::Const(q) => Series::constant(Coefficient::from_rational(q, binding.mode), binding.trunc),
        Expr::Var(v) => binding.get(v).cloned().ok_or_else(|| ExprError::UnboundVariable(v.clone()))?,
        Expr::Add(a, b) => go(a)?.add(&go(b)?)?,
        Expr::Sub(a, b) => go(a)?.sub(&go(b)?)?,
        Expr::Mul(a, b) => go(a)?.mul(&go(b)?)?,
        Expr::Div(a, b) => go(a)?.div(&go(b)?)?,
        Expr::Pow(a, k) => go(a)?.pow(*k)?,
        Expr::Neg(a) => go(a)?.neg(),
        Expr::Func(f, a) => taylor_apply(*f, &go(a)?)?,
    })
}

/// Evaluates a polynomial curve equation `F(x, y)` at
/// `x = x0 + E`, `y = y0 (t + E) / t`, where the subtangent `t` is left
/// symbolic: the coefficients are rational functions of `t`.
pub fn rf_series_eval(
    curve: &Expr,
    x0: &Rational,
    y0: &Rational,
    trunc: i64,
) -> Result<Series<RationalFunction>, ExprError> {
    let poly = MPoly::from_expr(curve)?;
    if let Some(other) = poly.vars().into_iter().find(|v| v != "x" && v != "y") {
        return Err(ExprError::NotPolynomial(format!("unexpected variable {other} in curve {curve}")));
    }
    let rf = |q: &Rational| RationalFunction::constant(q.clone());
    let x = Series::constant(rf(x0), trunc).add(&Series::epsilon_in((), trunc)?)?;
    let slope = rf(y0).mul(&RationalFunction::t().inv().expect("t is nonzero"));
    let y = Series::constant(rf(y0), trunc).add(&Series::monomial(slope, 1, trunc))?;

    let mut total = Series::zero((), trunc);
    for (monomial, c) in poly.terms() {
        let mut term = Series::constant(rf(c), trunc);
        for (name, k) in monomial.factors() {
            let base = if name == "x" { &x } else { &y };
            term = term.mul(&base.pow(i64::from(*k))?)?;
        }
        total = total.add(&term)?;
    }
    Ok(total)
}
