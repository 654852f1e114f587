//! Textbook symbolic differentiation, used as an independent oracle for the
//! adequality solvers. Only constants are folded.

use num_traits::{One, Zero};

use super::ast::{Expr, Func};
use crate::numfield::Rational;

fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        (Some(x), _) if x.is_zero() => b,
        (_, Some(y)) if y.is_zero() => a,
        _ => a.add(b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        (Some(x), _) if x.is_zero() => b.neg(),
        (_, Some(y)) if y.is_zero() => a,
        _ => a.sub(b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(x), _) | (_, Some(x)) if x.is_zero() => Expr::int(0),
        (Some(x), _) if x.is_one() => b,
        (_, Some(y)) if y.is_one() => a,
        _ => a.mul(b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) if !y.is_zero() => Expr::Const(x / y),
        (Some(x), _) if x.is_zero() => Expr::int(0),
        (_, Some(y)) if y.is_one() => a,
        _ => a.div(b),
    }
}

fn pow(a: Expr, k: i64) -> Expr {
    match k {
        0 => Expr::int(1),
        1 => a,
        _ => a.pow(k),
    }
}

/// Derivative of `e` with respect to `var`.
pub fn symbolic_derivative(e: &Expr, var: &str) -> Expr {
    let d = |x: &Expr| symbolic_derivative(x, var);
    match e {
        Expr::Const(_) => Expr::int(0),
        Expr::Var(v) => Expr::int(i64::from(v == var)),
        Expr::Add(a, b) => add(d(a), d(b)),
        Expr::Sub(a, b) => sub(d(a), d(b)),
        Expr::Mul(a, b) => add(mul(d(a), (**b).clone()), mul((**a).clone(), d(b))),
        Expr::Div(a, b) => div(sub(mul(d(a), (**b).clone()), mul((**a).clone(), d(b))), pow((**b).clone(), 2)),
        Expr::Pow(a, k) => mul(mul(Expr::Const(Rational::from_integer((*k).into())), pow((**a).clone(), k - 1)), d(a)),
        Expr::Neg(a) => {
            let inner = d(a);
            if inner.as_const().is_some() {
                inner.neg()
            } else {
                Expr::Neg(Box::new(inner))
            }
        }
        Expr::Func(f, a) => {
            let arg = (**a).clone();
            let outer = match f {
                Func::Sin => Expr::apply(Func::Cos, arg),
                Func::Cos => Expr::apply(Func::Sin, arg).neg(),
                Func::Sqrt => div(Expr::int(1), mul(Expr::int(2), Expr::apply(Func::Sqrt, arg))),
            };
            mul(outer, d(a))
        }
    }
}
