use num_traits::Zero;

use super::{display_rational, Derivation, FermatError, RelationKind, Rule, Step};
use crate::expr::{eval_series, Binding, Expr, MPoly, Monomial, EPSILON};
use crate::numfield::{Coefficient, Rational, Scalar, Series};

/// Name of the curve parameter in `x(theta)`, `y(theta)`.
pub const PARAMETER: &str = "theta";
/// Name of the unknown slope in the trace.
pub const SLOPE_VAR: &str = "M";

/// Increments shown in a trace stop this many orders above the leading one.
const SHOWN_ORDERS: i64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeResult {
    /// `dy/dx` at the base point, in the mode of the base parameter.
    pub slope: Coefficient,
    pub derivation: Derivation,
}

/// Tangent slope of the parametric curve `(x(theta), y(theta))` at `theta0`:
/// the standard part of the ratio of the increments from `theta0` to
/// `theta0 + E`. An approximate `theta0` puts the whole computation in
/// approximate mode, which is what transcendental base points need.
pub fn parametric_tangent(x: &Expr, y: &Expr, theta0: &Coefficient, trunc: i64) -> Result<SlopeResult, FermatError> {
    let mode = theta0.mode();
    let mut base = Binding::new(mode, trunc)?;
    let mut shifted = base.clone();
    let point = Series::constant(theta0.clone(), trunc);
    shifted.bind(PARAMETER, point.add(&Series::epsilon_in(mode, trunc)?)?)?;
    base.bind(PARAMETER, point)?;

    let dx = eval_series(x, &shifted)?.sub(&eval_series(x, &base)?)?;
    let dy = eval_series(y, &shifted)?.sub(&eval_series(y, &base)?)?;
    let order = match (dx.valuation(), dy.valuation()) {
        (None, None) => return Err(FermatError::StationaryPoint),
        (None, Some(_)) => return Err(FermatError::VerticalTangent),
        (Some(vx), Some(vy)) if vy < vx => return Err(FermatError::VerticalTangent),
        (Some(vx), _) => vx,
    };
    let slope = dy.div(&dx)?.st()?;

    let derivation = trace(&dx, &dy, order)?;
    Ok(SlopeResult { slope, derivation })
}

fn exact_value(c: &Coefficient) -> Rational {
    match c {
        Coefficient::Exact(q) => q.clone(),
        Coefficient::Approx { value, .. } => display_rational(*value),
    }
}

/// The increment as a polynomial in `E`, cut after `order + SHOWN_ORDERS`.
fn shown_increment(s: &Series, order: i64) -> MPoly {
    MPoly::from_terms(
        s.terms()
            .filter(|(k, _)| *k <= order + SHOWN_ORDERS)
            .map(|(k, c)| (Monomial::power(EPSILON, k as u32), exact_value(c))),
    )
}

fn trace(dx: &Series, dy: &Series, order: i64) -> Result<Derivation, FermatError> {
    let priority = [SLOPE_VAR];
    let slope = MPoly::var(SLOPE_VAR);
    let (shown_x, shown_y) = (shown_increment(dx, order), shown_increment(dy, order));
    let k = order as u32;
    let divided = |p: &MPoly| p.div_by_power(EPSILON, k).expect("valuation at least order");
    let (div_x, div_y) = (divided(&shown_x), divided(&shown_y));
    let zero = Rational::zero();
    let (lead_x, lead_y) = (div_x.substitute_rational(EPSILON, &zero), div_y.substitute_rational(EPSILON, &zero));
    let lead_x_value = lead_x.as_constant().expect("constant");
    let lead_y_value = lead_y.as_constant().expect("constant");
    let ratio = if lead_x_value.is_zero() { Rational::zero() } else { &lead_y_value / &lead_x_value };

    let with_slope = |p: &MPoly| Expr::var(SLOPE_VAR).mul(p.to_expr(&priority));
    let divide_note =
        if order == 1 { "divide both sides by E".to_string() } else { format!("divide both sides by E^{order}") };
    let mut steps = vec![
        Step::new(
            shown_y.to_expr(&priority),
            with_slope(&shown_x),
            RelationKind::Adequality,
            Rule::Substitute,
            format!(
                "increments of y and x from {PARAMETER}0 to {PARAMETER}0 + E, adequated through the chord slope {SLOPE_VAR}; \
                 powers of E above {} omitted",
                order + SHOWN_ORDERS
            ),
        ),
        Step::new(div_y.to_expr(&priority), with_slope(&div_x), RelationKind::Adequality, Rule::DivideByE, divide_note),
        Step::new(
            lead_y.to_expr(&priority),
            slope.mul(&lead_x).to_expr(&priority),
            RelationKind::Equality,
            Rule::DiscardE,
            "discard the terms still containing E",
        ),
    ];
    if !lead_x_value.is_zero() {
        steps.push(Step::new(
            Expr::var(SLOPE_VAR),
            Expr::Const(ratio),
            RelationKind::Equality,
            Rule::Solve,
            "solve for the slope",
        ));
    }
    Ok(Derivation::new(steps).expect("nonempty"))
}
