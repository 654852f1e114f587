use std::fmt;

use num_traits::{One, Zero};

use super::poly::Polynomial;
use crate::numfield::{Rational, Scalar};

/// Variable of the rational functions used for the subtangent unknown.
pub const SUBTANGENT_VAR: &str = "t";

/// Quotient of two polynomials in `t`, kept in lowest terms with a monic
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Normalizes `num / den`; `None` when `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::from_polynomial(Polynomial::zero(den.var())));
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().expect("nonzero").recip();
        Some(RationalFunction { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::constant(p.var().to_string(), Rational::one());
        RationalFunction { num: p, den }
    }

    pub fn constant(q: Rational) -> Self {
        Self::from_polynomial(Polynomial::constant(SUBTANGENT_VAR, q))
    }

    /// The variable `t` itself.
    pub fn t() -> Self {
        Self::from_polynomial(Polynomial::from_ints(SUBTANGENT_VAR, &[0, 1]))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Value at `t = x`; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl Scalar for RationalFunction {
    type Mode = ();

    fn mode(&self) {}

    fn zero(_: ()) -> Self {
        Self::constant(Rational::zero())
    }

    fn one(_: ()) -> Self {
        Self::constant(Rational::one())
    }

    fn from_rational(q: &Rational, _: ()) -> Self {
        Self::constant(q.clone())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    fn inv(&self) -> Option<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
