use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::coefficient::{Coefficient, Mode};
use super::rational::Rational;
use super::{NumError, Result, Scalar};

/// Truncated formal Laurent series `Σ c_k E^k`.
///
/// Coefficients at exponents `<= trunc` are trusted. `exact` is true while no
/// term has been dropped, in which case the stored terms are the whole value.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<C: Scalar = Coefficient> {
    terms: BTreeMap<i64, C>,
    trunc: i64,
    exact: bool,
    mode: C::Mode,
}

impl<C: Scalar> Series<C> {
    pub fn zero(mode: C::Mode, trunc: i64) -> Self {
        Series { terms: BTreeMap::new(), trunc, exact: true, mode }
    }

    pub fn constant(c: C, trunc: i64) -> Self {
        Self::monomial(c, 0, trunc)
    }

    pub fn monomial(c: C, exponent: i64, trunc: i64) -> Self {
        let mode = c.mode();
        Self::from_terms(mode, trunc, true, [(exponent, c)])
    }

    /// Builds a series, dropping zero coefficients and clearing the exact
    /// flag if a nonzero term lies beyond `trunc`.
    pub fn from_terms(mode: C::Mode, trunc: i64, exact: bool, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut acc: BTreeMap<i64, C> = BTreeMap::new();
        for (k, c) in terms {
            match acc.get_mut(&k) {
                Some(existing) => *existing = existing.add(&c),
                None => {
                    acc.insert(k, c);
                }
            }
        }
        let mut s = Series { terms: BTreeMap::new(), trunc, exact, mode };
        for (k, c) in acc {
            if c.is_zero() {
                continue;
            }
            if k > trunc {
                s.exact = false;
            } else {
                s.terms.insert(k, c);
            }
        }
        s
    }

    /// The infinitesimal `E` itself.
    pub fn epsilon_in(mode: C::Mode, trunc: i64) -> Result<Self> {
        if trunc < 1 {
            return Err(NumError::InvalidPrecision(trunc));
        }
        Ok(Self::monomial(C::one(mode), 1, trunc))
    }

    pub fn one(mode: C::Mode, trunc: i64) -> Self {
        Self::constant(C::one(mode), trunc)
    }

    pub fn mode(&self) -> C::Mode {
        self.mode
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Stored terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, exponent: i64) -> C {
        self.terms.get(&exponent).cloned().unwrap_or_else(|| C::zero(self.mode))
    }

    /// Lowest stored exponent; `None` for a series with no stored terms.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(i64, &C)> {
        self.terms.iter().next().map(|(k, c)| (*k, c))
    }

    /// True when no term is stored. For an inexact series this only says the
    /// trusted part vanishes; see [`Series::certified_zero`].
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Decides whether the value is zero, failing when the trusted part
    /// vanishes but terms were dropped.
    pub fn certified_zero(&self) -> Result<bool> {
        if !self.terms.is_empty() {
            Ok(false)
        } else if self.exact {
            Ok(true)
        } else {
            Err(NumError::PrecisionExhausted)
        }
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 1)
    }

    pub fn is_finite(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// Lower bound on the true valuation; `None` means the value is exactly 0.
    fn valuation_bound(&self) -> Option<i64> {
        match self.valuation() {
            Some(v) => Some(v),
            None if self.exact => None,
            None => Some(self.trunc + 1),
        }
    }

    fn check_mode(&self, other: &Self) -> Result<()> {
        if self.mode == other.mode {
            Ok(())
        } else {
            Err(NumError::ModeMismatch)
        }
    }

    /// Drops every term above `trunc`.
    pub fn truncated(&self, trunc: i64) -> Self {
        let trunc = trunc.min(self.trunc);
        Self::from_terms(self.mode, trunc, self.exact, self.terms.clone())
    }

    /// Exact multiplication by `E^k`.
    pub fn shift(&self, k: i64) -> Self {
        Series {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            trunc: self.trunc + k,
            exact: self.exact,
            mode: self.mode,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.mode, self.trunc, self.exact, self.terms.iter().map(|(k, x)| (*k, x.mul(c))))
    }

    pub fn neg(&self) -> Self {
        Series { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_mode(other)?;
        let trunc = self.trunc.min(other.trunc);
        let terms = self.terms.iter().chain(other.terms.iter()).map(|(k, c)| (*k, c.clone()));
        Ok(Self::from_terms(self.mode, trunc, self.exact && other.exact, terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_mode(other)?;
        let (va, vb) = (self.valuation_bound(), other.valuation_bound());
        let trunc = match (va, vb) {
            (None, None) => self.trunc.min(other.trunc),
            (None, Some(v)) => self.trunc + v,
            (Some(v), None) => other.trunc + v,
            (Some(a), Some(b)) => (self.trunc + b).min(other.trunc + a),
        };
        if va.is_none() || vb.is_none() {
            return Ok(Self::zero(self.mode, trunc));
        }
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        let mut dropped = false;
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let p = a.mul(b);
                if i + j > trunc {
                    dropped |= !p.is_zero();
                    continue;
                }
                match out.get_mut(&(i + j)) {
                    Some(acc) => *acc = acc.add(&p),
                    None => {
                        out.insert(i + j, p);
                    }
                }
            }
        }
        Ok(Self::from_terms(self.mode, trunc, self.exact && other.exact && !dropped, out))
    }

    /// Multiplicative inverse.
    ///
    /// Writing `a = c E^v (1 + h)`, the result is `c^-1 E^-v Σ (-h)^k` trusted
    /// up to exponent `a.trunc - 2v`.
    pub fn inv(&self) -> Result<Self> {
        let Some((v, lead)) = self.leading() else {
            return Err(if self.exact { NumError::DivisionByZero } else { NumError::PrecisionExhausted });
        };
        let lead_inv = lead.inv().ok_or(NumError::DivisionByZero)?;
        let trunc = self.trunc - 2 * v;
        // h_k for k >= 1, the normalized tail
        let h: Vec<(i64, C)> = self.terms.iter().skip(1).map(|(k, c)| (k - v, c.mul(&lead_inv))).collect();
        let top = trunc + v;
        let mut u: Vec<C> = vec![C::one(self.mode)];
        for n in 1..=top.max(0) {
            let mut acc = C::zero(self.mode);
            for (j, hj) in &h {
                if *j > n {
                    break;
                }
                acc = acc.add(&hj.mul(&u[(n - j) as usize]));
            }
            u.push(acc.neg());
        }
        let exact = self.exact && h.is_empty();
        let terms = u.into_iter().enumerate().map(|(n, c)| (n as i64 - v, c.mul(&lead_inv)));
        Ok(Self::from_terms(self.mode, trunc, exact, terms))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_mode(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut result = Self::one(self.mode, self.trunc);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Standard part: the coefficient of `E^0` of a finite value.
    pub fn st(&self) -> Result<C> {
        match self.valuation() {
            Some(v) if v < 0 => Err(NumError::InfiniteValue),
            Some(_) => Ok(self.coeff(0)),
            None if self.exact || self.trunc >= 0 => Ok(C::zero(self.mode)),
            None => Err(NumError::PrecisionExhausted),
        }
    }

    /// Infinitesimal test that refuses to guess when the trusted window is
    /// too short.
    fn certified_infinitesimal(&self) -> Result<bool> {
        match self.valuation() {
            Some(v) => Ok(v >= 1),
            None if self.exact || self.trunc >= 0 => Ok(true),
            None => Err(NumError::PrecisionExhausted),
        }
    }
}

/// `a ≈ b`: the difference is infinitesimal.
pub fn approx<C: Scalar>(a: &Series<C>, b: &Series<C>) -> Result<bool> {
    a.sub(b)?.certified_infinitesimal()
}

/// Adequality: `a/b ≈ 1`, or both are zero.
pub fn adequal<C: Scalar>(a: &Series<C>, b: &Series<C>) -> Result<bool> {
    a.check_mode(b)?;
    match (a.certified_zero()?, b.certified_zero()?) {
        (true, true) => Ok(true),
        (true, false) | (false, true) => Ok(false),
        (false, false) => {
            let ratio = a.div(b)?;
            let one = Series::one(a.mode, ratio.trunc.max(0));
            approx(&ratio, &one)
        }
    }
}

impl Series<Coefficient> {
    /// Embeds a rational as an exact constant series.
    pub fn from_rational(q: Rational, trunc: i64) -> Self {
        Self::constant(Coefficient::Exact(q), trunc)
    }

    /// `E` in exact mode.
    pub fn epsilon(trunc: i64) -> Result<Self> {
        Self::epsilon_in(Mode::Exact, trunc)
    }

    /// Total order: the sign of the leading coefficient of `self - other`.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        let d = self.sub(other)?;
        match d.leading() {
            Some((_, c)) => Ok(c.signum()),
            None if d.exact => Ok(Ordering::Equal),
            None => Err(NumError::PrecisionExhausted),
        }
    }
}

impl fmt::Display for Series<Coefficient> {
    /// Renders `c*E^k` terms in ascending order, with an `O(E^{N+1})` tail
    /// when terms have been dropped.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let negative = c.signum() == Ordering::Less;
            let magnitude = if negative { c.neg() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = magnitude == Coefficient::one(self.mode);
            match (k, unit) {
                (0, _) => write!(f, "{magnitude}")?,
                (1, true) => write!(f, "E")?,
                (1, false) => write!(f, "{magnitude}*E")?,
                (_, true) => write!(f, "E^{k}")?,
                (_, false) => write!(f, "{magnitude}*E^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.exact {
            write!(f, " + O(E^{})", self.trunc + 1)?;
        }
        Ok(())
    }
}
