use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{rational_to_f64, Rational};
use super::Scalar;

/// Arithmetic mode of a coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Exact,
    /// Doubles compared with absolute tolerance `eps`.
    Approx {
        eps: f64,
    },
}

impl Mode {
    pub fn approx() -> Self {
        Mode::Approx { eps: super::DEFAULT_EPS }
    }
}

/// Scalar coefficient of a hyperreal series.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Exact(Rational),
    Approx { value: f64, eps: f64 },
}

impl Coefficient {
    pub fn approx(value: f64) -> Self {
        Coefficient::Approx { value, eps: super::DEFAULT_EPS }
    }

    pub fn from_f64(value: f64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coefficient::Exact(super::rational::rational_from_f64(value).unwrap_or_else(Rational::zero)),
            Mode::Approx { eps } => Coefficient::Approx { value, eps },
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Exact(q) => rational_to_f64(q),
            Coefficient::Approx { value, .. } => *value,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Coefficient::Exact(q) => Some(q),
            Coefficient::Approx { .. } => None,
        }
    }

    /// Sign relative to zero; approximate values within `eps` count as zero.
    pub fn signum(&self) -> Ordering {
        if Scalar::is_zero(self) {
            return Ordering::Equal;
        }
        match self {
            Coefficient::Exact(q) => {
                if q.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            Coefficient::Approx { value, .. } => {
                if *value > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    fn eps(&self) -> Option<f64> {
        match self {
            Coefficient::Exact(_) => None,
            Coefficient::Approx { eps, .. } => Some(*eps),
        }
    }

    fn combine(
        &self,
        other: &Self,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        approx: impl FnOnce(f64, f64) -> f64,
    ) -> Self {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(exact(a, b)),
            _ => {
                let eps = self.eps().into_iter().chain(other.eps()).fold(0.0, f64::max);
                Coefficient::Approx { value: approx(self.to_f64(), other.to_f64()), eps }
            }
        }
    }
}

impl Scalar for Coefficient {
    type Mode = Mode;

    fn mode(&self) -> Mode {
        match self {
            Coefficient::Exact(_) => Mode::Exact,
            Coefficient::Approx { eps, .. } => Mode::Approx { eps: *eps },
        }
    }

    fn zero(mode: Mode) -> Self {
        Self::from_rational(&Rational::zero(), mode)
    }

    fn one(mode: Mode) -> Self {
        Self::from_rational(&Rational::one(), mode)
    }

    fn from_rational(q: &Rational, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coefficient::Exact(q.clone()),
            Mode::Approx { eps } => Coefficient::Approx { value: rational_to_f64(q), eps },
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(q) => q.is_zero(),
            Coefficient::Approx { value, eps } => value.abs() <= *eps,
        }
    }

    fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b, |a, b| a + b)
    }

    fn neg(&self) -> Self {
        match self {
            Coefficient::Exact(q) => Coefficient::Exact(-q),
            Coefficient::Approx { value, eps } => Coefficient::Approx { value: -value, eps: *eps },
        }
    }

    fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b, |a, b| a * b)
    }

    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        Some(match self {
            Coefficient::Exact(q) => Coefficient::Exact(q.recip()),
            Coefficient::Approx { value, eps } => Coefficient::Approx { value: value.recip(), eps: *eps },
        })
    }
}

impl From<Rational> for Coefficient {
    fn from(q: Rational) -> Self {
        Coefficient::Exact(q)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(q) => write!(f, "{q}"),
            Coefficient::Approx { value, .. } => write!(f, "{value}"),
        }
    }
}
