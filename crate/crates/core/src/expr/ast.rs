use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::numfield::{Rational, Transcendental};

pub use crate::numfield::Transcendental as Func;

/// Name reserved for the infinitesimal.
pub const EPSILON: &str = "E";

/// Expression tree. Exponents are integers; fractional powers only enter
/// through `sqrt`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Rational),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Neg(Box<Expr>),
    Func(Transcendental, Box<Expr>),
}

// Consuming builders that read like arithmetic (`a.add(b)`); the operator
// traits are deliberately not implemented so `+` never hides an allocation.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn constant(q: Rational) -> Self {
        Expr::Const(q)
    }

    pub fn int(n: i64) -> Self {
        Expr::Const(Rational::from_integer(n.into()))
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn epsilon() -> Self {
        Expr::Var(EPSILON.to_string())
    }

    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    pub fn pow(self, k: i64) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    /// Negation; a negated constant folds into the constant.
    pub fn neg(self) -> Expr {
        match self {
            Expr::Const(q) => Expr::Const(-q),
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn apply(f: Transcendental, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            Expr::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(q) if q.is_one())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Func(_, a) => a.collect_vars(out),
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => v == name,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_var(name) || b.contains_var(name)
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Func(_, a) => a.contains_var(name),
        }
    }

    pub fn contains_func(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_func() || b.contains_func()
            }
            Expr::Pow(a, _) | Expr::Neg(a) => a.contains_func(),
            Expr::Func(..) => true,
        }
    }

    /// Replaces every occurrence of the variable `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Expr) -> Expr {
        let go = |e: &Expr| Box::new(e.substitute(name, value));
        match self {
            Expr::Var(v) if v == name => value.clone(),
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Add(a, b) => Expr::Add(go(a), go(b)),
            Expr::Sub(a, b) => Expr::Sub(go(a), go(b)),
            Expr::Mul(a, b) => Expr::Mul(go(a), go(b)),
            Expr::Div(a, b) => Expr::Div(go(a), go(b)),
            Expr::Pow(a, k) => Expr::Pow(go(a), *k),
            Expr::Neg(a) => Expr::Neg(go(a)),
            Expr::Func(f, a) => Expr::Func(*f, go(a)),
        }
    }

    /// Exact value of a variable-free, function-free expression.
    pub fn eval_rational(&self) -> Option<Rational> {
        Some(match self {
            Expr::Const(q) => q.clone(),
            Expr::Var(_) | Expr::Func(..) => return None,
            Expr::Add(a, b) => a.eval_rational()? + b.eval_rational()?,
            Expr::Sub(a, b) => a.eval_rational()? - b.eval_rational()?,
            Expr::Mul(a, b) => a.eval_rational()? * b.eval_rational()?,
            Expr::Div(a, b) => {
                let d = b.eval_rational()?;
                if d.is_zero() {
                    return None;
                }
                a.eval_rational()? / d
            }
            Expr::Pow(a, k) => {
                let base = a.eval_rational()?;
                if *k < 0 && base.is_zero() {
                    return None;
                }
                let mut out = Rational::one();
                for _ in 0..k.unsigned_abs() {
                    out *= &base;
                }
                if *k < 0 {
                    out.recip()
                } else {
                    out
                }
            }
            Expr::Neg(a) => -a.eval_rational()?,
        })
    }
}

impl From<Rational> for Expr {
    fn from(q: Rational) -> Self {
        Expr::Const(q)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::render(self, super::render::Style::Canonical))
    }
}
