use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::ast::{Expr, EPSILON};
use super::poly::Polynomial;
use super::render::{render, Style};
use super::ExprError;
use crate::numfield::Rational;

/// Power product: variable names in ascending order, exponents positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    /// `name^k` (the empty product for `k = 0`).
    pub fn power(name: &str, k: u32) -> Self {
        if k == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(name.to_string(), k)])
        }
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.0.iter().find(|(v, _)| v == name).map_or(0, |(_, k)| *k)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, k) in &other.0 {
            *map.entry(v.clone()).or_insert(0) += k;
        }
        Monomial(map.into_iter().collect())
    }

    /// Splits off the power of `name`.
    fn split(&self, name: &str) -> (u32, Monomial) {
        let rest = self.0.iter().filter(|(v, _)| v != name).cloned().collect();
        (self.degree_in(name), Monomial(rest))
    }

    fn with_power(&self, name: &str, k: u32) -> Monomial {
        let (_, rest) = self.split(name);
        if k == 0 {
            rest
        } else {
            rest.mul(&Monomial(vec![(name.to_string(), k)]))
        }
    }
}

/// Sparse multivariate polynomial over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(q: Rational) -> Self {
        Self::from_terms([(Monomial::one(), q)])
    }

    pub fn var(name: &str) -> Self {
        Self::from_terms([(Monomial::var(name), Rational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = MPoly::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> MPoly {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * q)))
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::constant(Rational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms.keys().map(|m| m.degree_in(name)).max().unwrap_or(0)
    }

    /// Lowest power of `name` present; `None` for the zero polynomial.
    pub fn min_degree_in(&self, name: &str) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_in(name)).min()
    }

    /// Coefficients of the powers of `name`, as polynomials in the rest.
    pub fn coefficients_in(&self, name: &str) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.split(name);
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Exact division by `name^k`; `None` if some term has a lower power.
    pub fn div_by_power(&self, name: &str, k: u32) -> Option<MPoly> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let d = m.degree_in(name).checked_sub(k)?;
            out.add_term(m.with_power(name, d), c.clone());
        }
        Some(out)
    }

    pub fn substitute(&self, name: &str, value: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (k, coeff) in self.coefficients_in(name) {
            out = out.add(&coeff.mul(&value.pow(k)));
        }
        out
    }

    pub fn substitute_rational(&self, name: &str, q: &Rational) -> MPoly {
        self.substitute(name, &MPoly::constant(q.clone()))
    }

    /// Positive terms, and the negation of the negative terms, so that
    /// `self = positive - negative` with all coefficients of both positive.
    pub fn split_by_sign(&self) -> (MPoly, MPoly) {
        let pos = self.terms.iter().filter(|(_, c)| c.is_positive());
        let neg = self.terms.iter().filter(|(_, c)| c.is_negative());
        (
            Self::from_terms(pos.map(|(m, c)| (m.clone(), c.clone()))),
            Self::from_terms(neg.map(|(m, c)| (m.clone(), -c))),
        )
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    /// View as a polynomial in `name`; `None` if other variables occur.
    pub fn to_univariate(&self, name: &str) -> Option<Polynomial> {
        let coeffs = self.coefficients_in(name);
        let degree = coeffs.keys().next_back().copied().unwrap_or(0);
        let mut dense = vec![Rational::zero(); degree as usize + 1];
        for (k, c) in coeffs {
            dense[k as usize] = c.as_constant()?;
        }
        Some(Polynomial::new(name, dense))
    }

    pub fn from_polynomial(p: &Polynomial) -> MPoly {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let m = if k == 0 { Monomial::one() } else { Monomial(vec![(p.var().to_string(), k as u32)]) };
            (m, c.clone())
        }))
    }

    /// Expands an expression; fails on functions, division by a
    /// non-constant and negative powers of a non-constant.
    pub fn from_expr(e: &Expr) -> Result<MPoly, ExprError> {
        let not_poly = |why: &str| ExprError::NotPolynomial(format!("{why} in {e}"));
        Ok(match e {
            Expr::Const(q) => MPoly::constant(q.clone()),
            Expr::Var(v) => MPoly::var(v),
            Expr::Add(a, b) => Self::from_expr(a)?.add(&Self::from_expr(b)?),
            Expr::Sub(a, b) => Self::from_expr(a)?.sub(&Self::from_expr(b)?),
            Expr::Mul(a, b) => Self::from_expr(a)?.mul(&Self::from_expr(b)?),
            Expr::Div(a, b) => {
                let d = Self::from_expr(b)?.as_constant().ok_or_else(|| not_poly("division by a non-constant"))?;
                if d.is_zero() {
                    return Err(not_poly("division by zero"));
                }
                Self::from_expr(a)?.scale(&d.recip())
            }
            Expr::Pow(a, k) => {
                let base = Self::from_expr(a)?;
                if *k >= 0 {
                    base.pow(*k as u32)
                } else {
                    match base.as_constant() {
                        Some(c) if !c.is_zero() => MPoly::constant(c.recip().pow(k.unsigned_abs() as i32)),
                        _ => return Err(not_poly("negative power")),
                    }
                }
            }
            Expr::Neg(a) => Self::from_expr(a)?.neg(),
            Expr::Func(f, _) => return Err(not_poly(f.name())),
        })
    }

    /// Renders as a sum of terms. Terms are ordered by ascending power of
    /// `E`, then by descending powers of the variables in `priority` (other
    /// variables follow alphabetically); within a term `E` comes last.
    pub fn to_expr(&self, priority: &[&str]) -> Expr {
        let mut order: Vec<String> = priority.iter().map(|s| s.to_string()).collect();
        for v in self.vars() {
            if v != EPSILON && !order.contains(&v) {
                order.push(v);
            }
        }
        order.retain(|v| v != EPSILON);
        let key = |m: &Monomial| {
            let rest: Vec<std::cmp::Reverse<u32>> = order.iter().map(|v| std::cmp::Reverse(m.degree_in(v))).collect();
            (m.degree_in(EPSILON), rest)
        };
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| key(m));
        let ordered: Vec<(Rational, Vec<(String, u32)>)> = terms
            .into_iter()
            .map(|(m, c)| {
                let mut factors: Vec<(String, u32)> =
                    order.iter().filter_map(|v| Some((v.clone(), Some(m.degree_in(v)).filter(|&k| k > 0)?))).collect();
                let e = m.degree_in(EPSILON);
                if e > 0 {
                    factors.push((EPSILON.to_string(), e));
                }
                (c.clone(), factors)
            })
            .collect();
        terms_to_expr(&ordered)
    }
}

fn power(v: &str, k: u32) -> Expr {
    if k == 1 {
        Expr::var(v)
    } else {
        Expr::var(v).pow(k as i64)
    }
}

/// `coeff * v1^k1 * v2^k2 * ...`, left-associated.
fn term_expr(coeff: Rational, factors: &[(String, u32)]) -> Expr {
    let mut parts = factors.iter().map(|(v, k)| power(v, *k));
    match parts.next() {
        None => Expr::Const(coeff),
        Some(first) => {
            let head = if coeff.is_one() {
                first
            } else if coeff == -Rational::one() {
                first.neg()
            } else {
                Expr::Const(coeff).mul(first)
            };
            parts.fold(head, Expr::mul)
        }
    }
}

/// Builds `c1*m1 + c2*m2 - ...` keeping the given term and factor order.
pub(crate) fn terms_to_expr(terms: &[(Rational, Vec<(String, u32)>)]) -> Expr {
    let mut acc: Option<Expr> = None;
    for (c, factors) in terms {
        acc = Some(match acc {
            None => term_expr(c.clone(), factors),
            Some(prev) if c.is_negative() => prev.sub(term_expr(c.abs(), factors)),
            Some(prev) => prev.add(term_expr(c.clone(), factors)),
        });
    }
    acc.unwrap_or_else(|| Expr::int(0))
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.to_expr(&[]), Style::Canonical))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn mp(text: &str) -> MPoly {
        MPoly::from_expr(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn expansion_is_canonical() {
        assert_eq!(mp("(A+E)^2"), mp("A^2 + 2*A*E + E^2"));
        assert_eq!(mp("(x+1)*(x-1)"), mp("x^2 - 1"));
        assert!(mp("x - x").is_zero());
        assert_eq!(mp("x/2 + x/2"), mp("x"));
        assert_eq!(mp("2^-2"), MPoly::constant(Rational::new(1.into(), 4.into())));
    }

    #[test]
    fn rejects_non_polynomials() {
        for text in ["sin(x)", "1/x", "x^-1", "1/(x - x)"] {
            assert!(matches!(MPoly::from_expr(&parse(text).unwrap()), Err(ExprError::NotPolynomial(_))), "{text}");
        }
    }

    #[test]
    fn fermat_ordering() {
        let p = mp("B*(A+E) - (A+E)^2");
        let e = p.to_expr(&["B", "A"]);
        assert_eq!(render(&e, Style::Compact), "BA-A^2+BE-2AE-E^2");
        let d = p.sub(&mp("B*A - A^2"));
        assert_eq!(render(&d.to_expr(&["B", "A"]), Style::Compact), "BE-2AE-E^2");
        let (pos, neg) = d.split_by_sign();
        assert_eq!(render(&pos.to_expr(&["B", "A"]), Style::Compact), "BE");
        assert_eq!(render(&neg.to_expr(&["B", "A"]), Style::Compact), "2AE+E^2");
        assert_eq!(render(&mp("-A*E").to_expr(&["A"]), Style::Compact), "-AE");
    }

    #[test]
    fn coefficient_views() {
        let p = mp("3*E^2*t + E*t^2 - 4");
        assert_eq!(p.min_degree_in(EPSILON), Some(0));
        assert_eq!(p.degree_in("t"), 2);
        let q = mp("3*E^2*t + E*t^2").div_by_power(EPSILON, 1).unwrap();
        assert_eq!(q, mp("3*E*t + t^2"));
        assert!(p.div_by_power(EPSILON, 1).is_none());
        assert_eq!(q.substitute_rational(EPSILON, &Rational::zero()), mp("t^2"));
        assert_eq!(
            mp("B - 2*A").substitute_rational("B", &Rational::from_integer(10.into())).to_univariate("A"),
            Some(Polynomial::from_ints("A", &[10, -2]))
        );
        assert_eq!(mp("(A+1)^2").to_univariate("A"), Some(Polynomial::from_ints("A", &[1, 2, 1])));
        assert_eq!(mp("A*B").to_univariate("A"), None);
    }

    #[test]
    fn substitution() {
        assert_eq!(mp("x^2 + y").substitute("x", &mp("y + 1")), mp("y^2 + 3*y + 1"));
    }
}
