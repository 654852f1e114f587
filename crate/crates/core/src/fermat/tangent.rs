use num_traits::Zero;

use super::{Derivation, FermatError, RelationKind, Rule, Step};
use crate::expr::{rf_series_eval, Expr, MPoly, EPSILON, SUBTANGENT_VAR};
use crate::numfield::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct TangentResult {
    /// Signed distance along the x-axis from the tangent's axis intercept to
    /// the foot of the ordinate; never zero.
    pub subtangent_t: Rational,
    pub derivation: Derivation,
}

/// Fermat's subtangent construction for the algebraic curve `curve(x, y) = 0`
/// at the rational point `(x0, y0)`.
///
/// The point `(x0 + E, y0 (t + E) / t)` lies on the tangent; adequating the
/// curve's equation there and discarding `E` leaves an equation for `t`.
pub fn subtangent(curve: &Expr, x0: &Rational, y0: &Rational, trunc: i64) -> Result<TangentResult, FermatError> {
    let poly = MPoly::from_expr(curve)?;
    if let Some(v) = poly.vars().into_iter().find(|v| v != "x" && v != "y") {
        return Err(FermatError::NotPolynomial(format!("curve {curve} mentions {v}; only x and y are allowed")));
    }
    let at_point = poly.substitute_rational("x", x0).substitute_rational("y", y0);
    if !at_point.is_zero() {
        return Err(FermatError::PointNotOnCurve { x: Box::new(x0.clone()), y: Box::new(y0.clone()) });
    }
    if y0.is_zero() {
        return Err(FermatError::ZeroOrdinate);
    }

    // First-order coefficient (Fx t + y0 Fy) / t in lowest terms.
    let series = rf_series_eval(curve, x0, y0, trunc.max(1))?;
    let first = series.coeff(1);
    let (num, den) = (first.numerator(), first.denominator());
    let root = match num.degree() {
        None => return Err(FermatError::VerticalTangent),
        Some(1) => -num.coeff(0) / num.coeff(1),
        _ if den.degree() == Some(1) => return Err(FermatError::VerticalTangent),
        _ => return Err(FermatError::ZeroSubtangent),
    };

    let derivation = trace(curve, &poly, x0, y0, &root)?;
    Ok(TangentResult { subtangent_t: root, derivation })
}

fn trace(curve: &Expr, poly: &MPoly, x0: &Rational, y0: &Rational, root: &Rational) -> Result<Derivation, FermatError> {
    let t = SUBTANGENT_VAR;
    let m = poly.degree_in("y");
    let shifted_x = if x0.is_zero() { Expr::epsilon() } else { Expr::Const(x0.clone()).add(Expr::epsilon()) };
    let on_tangent = Expr::Const(y0.clone()).mul(Expr::var(t).add(Expr::epsilon())).div(Expr::var(t));
    let substituted = curve.substitute("x", &shifted_x).substitute("y", &on_tangent);
    let cleared = match m {
        0 => substituted,
        1 => Expr::var(t).mul(substituted),
        _ => Expr::var(t).pow(m as i64).mul(substituted),
    };

    // t^m F(x0 + E, y0 (t + E)/t) as a polynomial in t and E.
    let x_shift = MPoly::constant(x0.clone()).add(&MPoly::var(EPSILON));
    let t_shift = MPoly::var(t).add(&MPoly::var(EPSILON));
    let mut expanded = MPoly::zero();
    for (k, coeff) in poly.coefficients_in("y") {
        let term = coeff
            .substitute("x", &x_shift)
            .mul(&t_shift.pow(k))
            .mul(&MPoly::var(t).pow(m - k))
            .scale(&y0.pow(k as i32));
        expanded = expanded.add(&term);
    }

    let priority = [t];
    let show = |p: &MPoly| p.to_expr(&priority);
    let order = expanded.min_degree_in(EPSILON).expect("nonzero first-order term");
    let (positive, negative) = expanded.split_by_sign();
    let divide = |p: &MPoly| p.div_by_power(EPSILON, order).expect("common power of E");
    let (pos_div, neg_div) = (divide(&positive), divide(&negative));
    let zero = Rational::zero();
    let (pos_st, neg_st) = (pos_div.substitute_rational(EPSILON, &zero), neg_div.substitute_rational(EPSILON, &zero));

    let steps = vec![
        Step::new(
            cleared,
            show(&expanded),
            RelationKind::Equality,
            Rule::Substitute,
            "put the point of the tangent into the curve's equation and clear denominators",
        ),
        Step::new(
            show(&positive),
            show(&negative),
            RelationKind::Adequality,
            Rule::GroupBySign,
            "the tangent point nearly satisfies the curve: positive terms against negative ones",
        ),
        Step::new(show(&pos_div), show(&neg_div), RelationKind::Adequality, Rule::DivideByE, "divide both sides by E"),
        Step::new(
            show(&pos_st),
            show(&neg_st),
            RelationKind::Equality,
            Rule::DiscardE,
            "discard the terms still containing E",
        ),
        Step::new(Expr::var(t), Expr::Const(root.clone()), RelationKind::Equality, Rule::Solve, "the nonzero root"),
    ];
    Ok(Derivation::new(steps).expect("nonempty"))
}
