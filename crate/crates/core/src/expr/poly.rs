use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ast::Expr;
use super::render::{render, Style};
use crate::numfield::Rational;

/// Dense univariate polynomial over the rationals, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    var: String,
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(var: impl Into<String>, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { var: var.into(), coeffs }
    }

    pub fn from_ints(var: impl Into<String>, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(var: impl Into<String>) -> Self {
        Self::new(var, Vec::new())
    }

    pub fn constant(var: impl Into<String>, c: Rational) -> Self {
        Self::new(var, vec![c])
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Rational, Rational) -> Rational) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.var.clone(), (0..n).map(|k| f(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.var.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.var.clone(), self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.var.clone());
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.var.clone(), out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            let k = rem.len() - 1 - d;
            let factor = rem.last().expect("nonempty") / &lead;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &factor * c;
            }
            quot[k] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(self.var.clone(), quot), Self::new(self.var.clone(), rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.var.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// Whether `self = c * other` for some nonzero rational `c`.
    pub fn is_proportional_to(&self, other: &Self) -> bool {
        match (self.leading(), other.leading()) {
            (None, None) => true,
            (Some(a), Some(b)) if self.coeffs.len() == other.coeffs.len() => {
                let c = a / b;
                self.coeffs.iter().zip(&other.coeffs).all(|(x, y)| *x == &c * y)
            }
            _ => false,
        }
    }

    /// All rational roots, ascending, found with the rational root theorem.
    ///
    /// Returns `None` for the zero polynomial, and when the integer-normalized
    /// end coefficients are too large for divisor enumeration.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        if self.is_zero() {
            return None;
        }
        let mut roots = Vec::new();
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        if ints[0].is_zero() {
            roots.push(Rational::zero());
            let shift = ints.iter().take_while(|c| c.is_zero()).count();
            ints.drain(..shift);
        }
        if ints.len() > 1 {
            let ps = divisors(&ints[0])?;
            let qs = divisors(ints.last().expect("nonempty"))?;
            let reduced = Polynomial::new(self.var.clone(), ints.iter().cloned().map(Rational::from_integer).collect());
            let mut found: Vec<Rational> = Vec::new();
            for p in &ps {
                for q in &qs {
                    for sign in [1, -1] {
                        let cand = Rational::new(p * BigInt::from(sign), q.clone());
                        if !found.contains(&cand) && reduced.eval(&cand).is_zero() {
                            found.push(cand);
                        }
                    }
                }
            }
            roots.extend(found);
        }
        roots.sort();
        Some(roots)
    }

    pub fn to_expr(&self) -> Expr {
        let terms: Vec<(Rational, Vec<(String, u32)>)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = if k == 0 { vec![] } else { vec![(self.var.clone(), k as u32)] };
                (c.clone(), mono)
            })
            .collect();
        super::mpoly::terms_to_expr(&terms)
    }
}

/// Positive divisors of `|n|` (for `n != 0`), by trial division.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    const LIMIT: u64 = 1_000_000_000_000_000;
    let n = n.abs().to_u64().filter(|&n| n <= LIMIT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.to_expr(), Style::Canonical))
    }
}
