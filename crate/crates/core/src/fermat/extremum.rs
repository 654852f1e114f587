use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Derivation, FermatError, RelationKind, Rule, SideCondition, Step};
use crate::expr::{eval_series, Binding, Expr, ExprError, MPoly, Polynomial, EPSILON};
use crate::numfield::{Coefficient, Rational, Series};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremumResult {
    /// The unknown that was varied.
    pub variable: String,
    /// The equality left after discarding `E`, as `lhs - rhs` with all
    /// parameters bound.
    pub critical_equation: Polynomial,
    /// Exact rational roots of the critical equation, ascending. Irrational
    /// critical points appear only through `critical_equation`.
    pub rational_roots: Vec<Rational>,
    pub derivation: Derivation,
}

/// Fermat's extremum procedure for a polynomial `p` in `var`: compare
/// `p(var + E)` with `p(var)`, cancel, group by sign, divide by the common
/// power of `E`, discard what still contains `E`, and solve.
///
/// Parameters stay symbolic through the adequality steps and are bound by a
/// separate solve step, so the trace reads like the classical one.
pub fn maximize(
    p: &Expr,
    var: &str,
    params: &BTreeMap<String, Rational>,
    trunc: i64,
) -> Result<ExtremumResult, FermatError> {
    if p.contains_var(EPSILON) || params.contains_key(EPSILON) {
        return Err(ExprError::ReservedName(EPSILON.to_string()).into());
    }
    let poly = MPoly::from_expr(p)?;
    let unbound: Vec<String> = poly.vars().into_iter().filter(|v| v != var && !params.contains_key(v)).collect();
    if !unbound.is_empty() {
        return Err(FermatError::NotPolynomial(format!("{p} has unbound parameters {}", unbound.join(", "))));
    }
    let bind = |m: &MPoly| params.iter().fold(m.clone(), |acc, (name, q)| acc.substitute_rational(name, q));
    if bind(&poly).degree_in(var) == 0 {
        return Err(FermatError::DegenerateConstant(var.to_string()));
    }

    let vars = poly.vars();
    let mut priority: Vec<&str> = vars.iter().map(String::as_str).filter(|v| *v != var).collect();
    priority.push(var);
    let show = |m: &MPoly| m.to_expr(&priority);

    let shifted_var = Expr::var(var).add(Expr::epsilon());
    let shifted = poly.substitute(var, &MPoly::from_expr(&shifted_var)?);
    let diff = shifted.sub(&poly);
    let order = diff.min_degree_in(EPSILON).expect("non-constant polynomial has a nonzero increment");
    let (positive, negative) = diff.split_by_sign();
    let divided = |m: &MPoly| m.div_by_power(EPSILON, order).expect("every term carries E^order");
    let (pos_div, neg_div) = (divided(&positive), divided(&negative));
    let zero = Rational::zero();
    let (pos_st, neg_st) = (pos_div.substitute_rational(EPSILON, &zero), neg_div.substitute_rational(EPSILON, &zero));

    let divide_note =
        if order == 1 { "divide both sides by E".to_string() } else { format!("divide both sides by E^{order}") };
    let mut steps = vec![
        Step::new(
            p.substitute(var, &shifted_var),
            show(&shifted),
            RelationKind::Equality,
            Rule::Substitute,
            format!("replace {var} by {var} + E"),
        ),
        Step::new(
            show(&shifted).sub(show(&poly)),
            show(&diff),
            RelationKind::Equality,
            Rule::CancelCommon,
            format!("subtract the value at {var}; common terms cancel"),
        ),
        Step::new(
            show(&positive),
            show(&negative),
            RelationKind::Adequality,
            Rule::GroupBySign,
            "positive terms on one side, negative terms on the other",
        ),
        Step::new(show(&pos_div), show(&neg_div), RelationKind::Adequality, Rule::DivideByE, divide_note),
        Step::new(
            show(&pos_st),
            show(&neg_st),
            RelationKind::Equality,
            Rule::DiscardE,
            "discard the terms still containing E",
        ),
    ];

    let used: Vec<(&String, &Rational)> =
        params.iter().filter(|(name, _)| pos_st.degree_in(name) > 0 || neg_st.degree_in(name) > 0).collect();
    let (lhs, rhs) = (bind(&pos_st), bind(&neg_st));
    if !used.is_empty() {
        let mut step = Step::new(show(&lhs), show(&rhs), RelationKind::Equality, Rule::Solve, "bind the parameters");
        for (name, value) in used {
            step = step.with_condition(SideCondition::Equals(name.clone(), value.clone()));
        }
        steps.push(step);
    }

    let critical_equation = lhs.sub(&rhs).to_univariate(var).expect("all parameters are bound");
    let candidates = critical_equation.rational_roots().unwrap_or_default();
    let mut rational_roots = Vec::new();
    for root in candidates {
        if increment_is_second_order(p, var, params, &root, trunc)? {
            steps.push(Step::new(
                Expr::var(var),
                Expr::Const(root.clone()),
                RelationKind::Equality,
                Rule::Solve,
                "rational root of the critical equation",
            ));
            rational_roots.push(root);
        }
    }

    Ok(ExtremumResult {
        variable: var.to_string(),
        critical_equation,
        rational_roots,
        derivation: Derivation::new(steps).expect("nonempty"),
    })
}

/// Checks in the series field that `p(root + E) - p(root)` is adequal to
/// nothing of first order, i.e. `st((p(root + E) - p(root)) / E) = 0`.
fn increment_is_second_order(
    p: &Expr,
    var: &str,
    params: &BTreeMap<String, Rational>,
    root: &Rational,
    trunc: i64,
) -> Result<bool, FermatError> {
    let mut base = Binding::exact(trunc)?;
    for (name, q) in params {
        base.bind_rational(name, q)?;
    }
    let mut shifted = base.clone();
    base.bind_rational(var, root)?;
    let point = Series::from_rational(root.clone(), trunc);
    let epsilon = Series::epsilon(trunc)?;
    shifted.bind(var, point.add(&epsilon)?)?;
    let increment = eval_series(p, &shifted)?.sub(&eval_series(p, &base)?)?;
    let slope = increment.div(&epsilon)?.st()?;
    Ok(slope == Coefficient::Exact(Rational::zero()))
}
