//! Quotients of multivariate polynomials, compared by cross-multiplication.
//! Enough to decide the identities the checker needs without computing
//! multivariate gcds.

use num_traits::{One, Zero};

use crate::expr::{Expr, MPoly, EPSILON};
use crate::numfield::Rational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum FracError {
    Transcendental,
    DivisionByZero,
}

#[derive(Debug, Clone)]
pub(crate) struct MFrac {
    num: MPoly,
    den: MPoly,
}

impl MFrac {
    pub fn from_poly(p: MPoly) -> Self {
        MFrac { num: p, den: MPoly::constant(Rational::one()) }
    }

    pub fn from_expr(e: &Expr) -> Result<Self, FracError> {
        Ok(match e {
            Expr::Const(q) => Self::from_poly(MPoly::constant(q.clone())),
            Expr::Var(v) => Self::from_poly(MPoly::var(v)),
            Expr::Add(a, b) => Self::from_expr(a)?.add(&Self::from_expr(b)?),
            Expr::Sub(a, b) => Self::from_expr(a)?.sub(&Self::from_expr(b)?),
            Expr::Mul(a, b) => Self::from_expr(a)?.mul(&Self::from_expr(b)?),
            Expr::Div(a, b) => Self::from_expr(a)?.div(&Self::from_expr(b)?)?,
            Expr::Pow(a, k) => {
                let base = Self::from_expr(a)?;
                let raised =
                    MFrac { num: base.num.pow(k.unsigned_abs() as u32), den: base.den.pow(k.unsigned_abs() as u32) };
                if *k < 0 {
                    raised.inv()?
                } else {
                    raised
                }
            }
            Expr::Neg(a) => Self::from_expr(a)?.neg(),
            Expr::Func(..) => return Err(FracError::Transcendental),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        MFrac { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn neg(&self) -> Self {
        MFrac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        MFrac { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn inv(&self) -> Result<Self, FracError> {
        if self.num.is_zero() {
            return Err(FracError::DivisionByZero);
        }
        Ok(MFrac { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, o: &Self) -> Result<Self, FracError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MFrac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn same(&self, o: &Self) -> bool {
        self.num.mul(&o.den).sub(&o.num.mul(&self.den)).is_zero()
    }

    /// The nonzero rational `c` with `self = c * o`, if there is one.
    pub fn constant_multiple_of(&self, o: &Self) -> Option<Rational> {
        if self.is_zero() || o.is_zero() {
            return None;
        }
        // self / o = n / d with n = c d
        let n = self.num.mul(&o.den);
        let d = self.den.mul(&o.num);
        let (m, dc) = d.terms().next()?;
        let c = n.coeff(m) / dc;
        (!c.is_zero() && n.sub(&d.scale(&c)).is_zero()).then_some(c)
    }

    pub fn substitute_rational(&self, name: &str, q: &Rational) -> Result<Self, FracError> {
        let den = self.den.substitute_rational(name, q);
        if den.is_zero() {
            return Err(FracError::DivisionByZero);
        }
        Ok(MFrac { num: self.num.substitute_rational(name, q), den })
    }

    /// As a polynomial, when the denominator is a constant.
    pub fn as_poly(&self) -> Option<MPoly> {
        let c = self.den.as_constant()?;
        Some(self.num.scale(&c.recip()))
    }

    /// Order in `E`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        Some(i64::from(self.num.min_degree_in(EPSILON)?) - i64::from(self.den.min_degree_in(EPSILON)?))
    }

    /// Multiplies by `E^k`, `k` of either sign.
    pub fn shift(&self, k: i64) -> Self {
        let power = MPoly::var(EPSILON).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            MFrac { num: self.num.mul(&power), den: self.den.clone() }
        } else {
            MFrac { num: self.num.clone(), den: self.den.mul(&power) }
        }
    }

    /// Standard part: treats every other variable as a standard quantity.
    /// `None` when the value is infinite.
    pub fn standard_part(&self) -> Option<Self> {
        let v = match self.valuation() {
            None => return Some(self.clone()),
            Some(v) => v,
        };
        if v < 0 {
            return None;
        }
        if v > 0 {
            return Some(Self::from_poly(MPoly::zero()));
        }
        let lowest = |p: &MPoly| {
            let k = p.min_degree_in(EPSILON).expect("nonzero");
            p.coefficients_in(EPSILON).remove(&k).expect("lowest coefficient")
        };
        Some(MFrac { num: lowest(&self.num), den: lowest(&self.den) })
    }
}
