use num_traits::Signed;

use super::{display_rational, Derivation, FermatError, RelationKind, Rule, Step};
use crate::expr::{eval_series, parse, Binding, Expr, MPoly, Monomial, EPSILON};
use crate::numfield::{Coefficient, Mode, Rational, Series};

/// Cap on bisection steps.
pub const MAX_BISECTIONS: usize = 200;

const TRAVEL_TIME: &str = "sqrt(a^2 + x^2)/v1 + sqrt(b^2 + (d - x)^2)/v2";
const FIRST_LEG: &str = "sqrt(a^2 + x^2)/v1";
const SECOND_LEG: &str = "sqrt(b^2 + (d - x)^2)/v2";

/// Light travels from `(0, a)` in the first medium at speed `v1` to
/// `(d, -b)` in the second at speed `v2`, crossing the interface `y = 0`
/// at `(x, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractionSetup {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefractionResult {
    /// Crossing point minimizing the travel time, `0 < x_star < d`.
    pub x_star: f64,
    /// Angle of incidence, from the normal, in radians.
    pub theta1: f64,
    /// Angle of refraction, from the normal, in radians.
    pub theta2: f64,
    /// `|sin(theta1)/v1 - sin(theta2)/v2|`, at most the requested tolerance.
    pub snell_residual: f64,
    pub iterations: usize,
    /// The adequality argument at `x_star`, with coefficients rounded to
    /// twelve decimals.
    pub derivation: Derivation,
}

impl RefractionSetup {
    fn validate(&self, tol: f64) -> Result<(), FermatError> {
        for (name, v) in [("a", self.a), ("b", self.b), ("d", self.d), ("v1", self.v1), ("v2", self.v2), ("tol", tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(FermatError::InvalidGeometry(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    fn binding(&self, trunc: i64) -> Result<Binding, FermatError> {
        let mode = Mode::approx();
        let mut b = Binding::new(mode, trunc)?;
        for (name, v) in [("a", self.a), ("b", self.b), ("d", self.d), ("v1", self.v1), ("v2", self.v2)] {
            b.bind(name, Series::constant(Coefficient::from_f64(v, mode), trunc))?;
        }
        Ok(b)
    }

    fn angles(&self, x: f64) -> (f64, f64) {
        ((x / self.a).atan(), ((self.d - x) / self.b).atan())
    }

    fn residual(&self, x: f64) -> f64 {
        let (t1, t2) = self.angles(x);
        (t1.sin() / self.v1 - t2.sin() / self.v2).abs()
    }
}

/// `T(x + E) - T(x)` for the given expression in the series field.
fn increment(e: &Expr, constants: &Binding, x: f64) -> Result<Series, FermatError> {
    let mode = constants.mode();
    let trunc = constants.trunc();
    let at = Series::constant(Coefficient::from_f64(x, mode), trunc);
    let shifted = constants.clone().with("x", at.add(&Series::epsilon_in(mode, trunc)?)?)?;
    let base = constants.clone().with("x", at)?;
    Ok(eval_series(e, &shifted)?.sub(&eval_series(e, &base)?)?)
}

/// Finds the crossing point by bisecting the stationarity function
/// `g(x) = st((T(x + E) - T(x)) / E)`, which is increasing with
/// `g(0) < 0 < g(d)`. Stops once the bracket is no wider than `tol` and the
/// Snell residual is at most `tol`.
pub fn refract(setup: &RefractionSetup, tol: f64, trunc: i64) -> Result<RefractionResult, FermatError> {
    setup.validate(tol)?;
    let travel_time = parse(TRAVEL_TIME)?;
    let constants = setup.binding(trunc.max(1))?;
    let epsilon = Series::epsilon_in(constants.mode(), constants.trunc())?;
    let stationarity = |x: f64| -> Result<f64, FermatError> {
        Ok(increment(&travel_time, &constants, x)?.div(&epsilon)?.st()?.to_f64())
    };

    let (mut lo, mut hi) = (0.0, setup.d);
    let mut iterations = 0;
    let x_star = loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol && setup.residual(mid) <= tol {
            break mid;
        }
        if iterations == MAX_BISECTIONS {
            return Err(FermatError::ToleranceNotReached { tol, iterations });
        }
        iterations += 1;
        let g = stationarity(mid)?;
        if g < 0.0 {
            lo = mid;
        } else if g > 0.0 {
            hi = mid;
        } else {
            (lo, hi) = (mid, mid);
        }
    };

    let (theta1, theta2) = setup.angles(x_star);
    Ok(RefractionResult {
        x_star,
        theta1,
        theta2,
        snell_residual: setup.residual(x_star),
        iterations,
        derivation: trace(setup, x_star)?,
    })
}

/// `c1*E + c2*E^2 + ...` from `(coefficient, power)` pairs, in order.
fn sum_expr(terms: &[(Rational, u32)]) -> Expr {
    let term = |c: &Rational, k: u32| {
        let e = if k == 1 { Expr::epsilon() } else { Expr::epsilon().pow(k as i64) };
        if k == 0 {
            Expr::Const(c.clone())
        } else {
            Expr::Const(c.clone()).mul(e)
        }
    };
    terms.iter().map(|(c, k)| term(c, *k)).reduce(Expr::add).unwrap_or_else(|| Expr::int(0))
}

/// The leg increments to second order, grouped by sign, divided by `E` and
/// rounded off: once for each leg's square root expansion.
fn trace(setup: &RefractionSetup, x_star: f64) -> Result<Derivation, FermatError> {
    let constants = setup.binding(2)?;
    let leg_terms = |text: &str| -> Result<Vec<(Rational, u32)>, FermatError> {
        let inc = increment(&parse(text)?, &constants, x_star)?;
        Ok(inc.terms().filter(|(k, _)| *k >= 1).map(|(k, c)| (display_rational(c.to_f64()), k as u32)).collect())
    };
    let (first, second) = (leg_terms(FIRST_LEG)?, leg_terms(SECOND_LEG)?);
    let all: Vec<(Rational, u32)> = first.iter().chain(&second).cloned().collect();
    let combined = MPoly::from_terms(all.iter().map(|(c, k)| (Monomial::power(EPSILON, *k), c.clone())));

    let positive: Vec<(Rational, u32)> = all.iter().filter(|(c, _)| c.is_positive()).cloned().collect();
    let negative: Vec<(Rational, u32)> = all.iter().filter(|(c, _)| c.is_negative()).map(|(c, k)| (-c, *k)).collect();
    let lower =
        |terms: &[(Rational, u32)]| -> Vec<(Rational, u32)> { terms.iter().map(|(c, k)| (c.clone(), k - 1)).collect() };
    let leading = |terms: &[(Rational, u32)]| -> Vec<(Rational, u32)> {
        terms.iter().filter(|(_, k)| *k == 1).map(|(c, _)| (c.clone(), 0)).collect()
    };

    let steps = vec![
        Step::new(
            sum_expr(&first).add(sum_expr(&second)),
            combined.to_expr(&[]),
            RelationKind::Equality,
            Rule::Substitute,
            format!("travel-time increment at x = {x_star}: each leg's square root expanded to second order"),
        ),
        Step::new(
            sum_expr(&positive),
            sum_expr(&negative),
            RelationKind::Adequality,
            Rule::GroupBySign,
            "the time is stationary: positive terms against negative ones, legs kept apart",
        ),
        Step::new(
            sum_expr(&lower(&positive)),
            sum_expr(&lower(&negative)),
            RelationKind::Adequality,
            Rule::DivideByE,
            "divide both sides by E",
        ),
        Step::new(
            sum_expr(&leading(&positive)),
            sum_expr(&leading(&negative)),
            RelationKind::Equality,
            Rule::DiscardE,
            "discard the second-order terms of both legs: sin(theta1)/v1 = sin(theta2)/v2",
        ),
    ];
    Ok(Derivation::new(steps).expect("nonempty"))
}
