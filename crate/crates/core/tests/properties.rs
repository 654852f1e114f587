//! Randomized invariants across the numeric core, the expression engine, the
//! solvers and the checker.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use adequality::checker::{approx_division_counterexample, validate_derivation, validate_step, StepVerdict};
use adequality::expr::{
    eval_series, parse, render, symbolic_derivative, Binding, Expr, MPoly, Polynomial, RationalFunction, Style,
};
use adequality::fermat::{maximize, parametric_tangent, refract, subtangent, Derivation, FermatError, RefractionSetup};
use adequality::fermat::{RelationKind, Rule};
use adequality::numfield::{adequal, approx, Coefficient, Mode, NumError, Rational, Scalar, Series, Transcendental};
use proptest::prelude::*;

const TRUNC: i64 = 8;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| q(if neg { -n } else { n }, d))
}

/// Exact series with exponents in `low..=4` and coefficients in [-9, 9].
fn series_from(low: i64) -> impl Strategy<Value = Series> {
    prop::collection::vec((low..=4i64, -9i64..=9), 0..5).prop_map(|terms| {
        Series::from_terms(Mode::Exact, TRUNC, true, terms.into_iter().map(|(k, c)| (k, Coefficient::Exact(q(c, 1)))))
    })
}

fn small_series() -> impl Strategy<Value = Series> {
    series_from(0)
}

fn laurent_series() -> impl Strategy<Value = Series> {
    series_from(-2)
}

fn constant(r: &Rational) -> Series {
    Series::from_rational(r.clone(), TRUNC)
}

fn epsilon() -> Series {
    Series::epsilon(TRUNC).unwrap()
}

// ---------------------------------------------------------------- numfield

proptest! {
    #[test]
    fn order_is_compatible_with_addition(a in small_series(), b in small_series(), c in small_series()) {
        if a.compare(&b).unwrap() == Ordering::Less {
            prop_assert_eq!(a.add(&c).unwrap().compare(&b.add(&c).unwrap()).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn order_is_compatible_with_positive_products(a in small_series(), b in small_series(), c in small_series()) {
        let zero = Series::zero(Mode::Exact, TRUNC);
        if a.compare(&b).unwrap() == Ordering::Less && c.compare(&zero).unwrap() == Ordering::Greater {
            prop_assert_eq!(a.mul(&c).unwrap().compare(&b.mul(&c).unwrap()).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn trichotomy(a in small_series(), b in small_series()) {
        let (ab, ba) = (a.compare(&b).unwrap(), b.compare(&a).unwrap());
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(ab == Ordering::Equal, a.sub(&b).unwrap().is_zero());
    }

    #[test]
    fn inverse_agrees_with_one_on_trusted_terms(a in laurent_series()) {
        prop_assume!(!a.is_zero());
        let product = a.mul(&a.inv().unwrap()).unwrap();
        let one = Series::one(Mode::Exact, TRUNC);
        for k in -4..=product.trunc() {
            prop_assert_eq!(product.coeff(k), one.coeff(k));
        }
    }

    #[test]
    fn standard_part_is_a_homomorphism(a in small_series(), b in small_series()) {
        let (sa, sb) = (a.st().unwrap(), b.st().unwrap());
        prop_assert_eq!(a.add(&b).unwrap().st().unwrap(), sa.add(&sb));
        prop_assert_eq!(a.mul(&b).unwrap().st().unwrap(), sa.mul(&sb));
    }

    #[test]
    fn approx_means_infinitesimal_difference(a in small_series(), b in small_series()) {
        let st_diff = a.sub(&b).unwrap().st().unwrap();
        prop_assert_eq!(approx(&a, &b).unwrap(), st_diff.is_zero());
    }

    #[test]
    fn adequality_is_invariant_under_division(a in laurent_series(), b in laurent_series(), c in laurent_series()) {
        prop_assume!(!c.is_zero());
        let before = adequal(&a, &b);
        let after = a.div(&c).and_then(|x| b.div(&c).and_then(|y| adequal(&x, &y)));
        if let (Ok(before), Ok(after)) = (before, after) {
            prop_assert_eq!(before, after);
        }
        if let (Ok(before), Ok(after)) = (adequal(&a, &b), a.div(&epsilon()).and_then(|x| adequal(&x, &b.div(&epsilon())?))) {
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn adequality_to_an_appreciable_value_implies_approx(a in small_series(), b in small_series()) {
        prop_assume!(b.is_finite() && !b.is_infinitesimal());
        if adequal(&a, &b).unwrap() {
            prop_assert!(approx(&a, &b).unwrap());
        }
    }

    #[test]
    fn epsilon_is_positive_and_below_every_positive_rational(n in 1i64..1_000_000, d in 1i64..1_000_000) {
        let e = epsilon();
        prop_assert_eq!(e.compare(&constant(&q(n, d))).unwrap(), Ordering::Less);
        prop_assert_eq!(e.compare(&Series::zero(Mode::Exact, TRUNC)).unwrap(), Ordering::Greater);
    }
}

#[test]
fn approx_is_not_invariant_under_division() {
    let e = epsilon();
    let two_e = e.scale(&Coefficient::Exact(q(2, 1)));
    assert!(approx(&e, &two_e).unwrap());
    assert!(!approx(&e.div(&e).unwrap(), &two_e.div(&e).unwrap()).unwrap());
}

// ---------------------------------------------------------------- expr

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        rational().prop_map(Expr::Const),
        prop::sample::select(vec!["x", "y", "A", "B", "E", "theta"]).prop_map(Expr::var),
    ]
}

fn expression() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.div(b)),
            (inner.clone(), -3i64..=4).prop_map(|(a, k)| a.pow(k)),
            inner.clone().prop_map(Expr::neg),
            (prop::sample::select(vec![Transcendental::Sin, Transcendental::Cos, Transcendental::Sqrt]), inner)
                .prop_map(|(f, a)| Expr::apply(f, a)),
        ]
    })
}

/// Univariate polynomial in `A` with the given ascending coefficients.
fn poly_expr(coeffs: &[Rational]) -> Expr {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| Expr::Const(c.clone()).mul(Expr::var("A").pow(k as i64)))
        .reduce(Expr::add)
        .unwrap_or_else(|| Expr::int(0))
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(q(0, 1), |acc, c| acc * x + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonical_rendering_round_trips(e in expression()) {
        let text = render(&e, Style::Canonical);
        prop_assert_eq!(parse(&text).unwrap(), e, "{}", text);
    }
}

proptest! {
    #[test]
    fn difference_quotient_matches_derivative(
        coeffs in prop::collection::vec(rational(), 1..=7),
        a in rational(),
    ) {
        let p = poly_expr(&coeffs);
        let at = |v: Series| eval_series(&p, &Binding::exact(TRUNC).unwrap().with("A", v).unwrap()).unwrap();
        let quotient = at(constant(&a).add(&epsilon()).unwrap()).sub(&at(constant(&a))).unwrap().div(&epsilon()).unwrap();
        let derivative = symbolic_derivative(&p, "A").substitute("A", &Expr::Const(a.clone()));
        // independent oracle: termwise power rule on the coefficient list
        let oracle: Rational = coeffs.iter().enumerate().skip(1)
            .map(|(k, c)| c * Rational::from_integer((k as i64).into()) * num_traits::Pow::pow(&a, (k - 1) as u32))
            .sum();
        prop_assert_eq!(quotient.st().unwrap(), Coefficient::Exact(oracle.clone()));
        prop_assert_eq!(derivative.eval_rational(), Some(oracle));
    }

    #[test]
    fn rational_function_normal_form_is_idempotent(
        n in prop::collection::vec(-6i64..=6, 1..4),
        d in prop::collection::vec(-6i64..=6, 1..4),
        m in prop::collection::vec(-6i64..=6, 1..3),
    ) {
        let (num, den, common) = (Polynomial::from_ints("t", &n), Polynomial::from_ints("t", &d), Polynomial::from_ints("t", &m));
        prop_assume!(!den.is_zero() && !common.is_zero());
        let r = RationalFunction::new(num.clone(), den.clone()).unwrap();
        let again = RationalFunction::new(r.numerator().clone(), r.denominator().clone()).unwrap();
        prop_assert_eq!(&again, &r);
        let scaled = RationalFunction::new(num.mul(&common), den.mul(&common)).unwrap();
        prop_assert_eq!(&scaled, &r);
        let sum = r.add(&r).sub(&r);
        prop_assert_eq!(&sum, &r);
    }

    #[test]
    fn closed_expressions_evaluate_exactly(e in expression()) {
        let closed = ["x", "y", "A", "B", "E", "theta"].iter().fold(e, |acc, v| acc.substitute(v, &Expr::Const(q(3, 2))));
        let series = eval_series(&closed, &Binding::exact(TRUNC).unwrap());
        match closed.eval_rational() {
            Some(exact) => prop_assert_eq!(series.unwrap(), constant(&exact)),
            // transcendental values or division by zero: no exact value
            None => prop_assert!(series.is_err() || closed.contains_func()),
        }
    }
}

// ---------------------------------------------------------------- fermat

fn is_pattern(kinds: &[RelationKind], steps: &Derivation) -> bool {
    let end = steps.steps().iter().rposition(|s| s.rule != Rule::Solve).map_or(0, |i| i + 1);
    let kinds = &kinds[..end];
    let first_adq = match kinds.iter().position(|k| *k == RelationKind::Adequality) {
        Some(i) => i,
        None => return false,
    };
    let last = kinds.len() - 1;
    kinds[..first_adq].iter().all(|k| *k == RelationKind::Equality)
        && kinds[first_adq..last].iter().all(|k| *k == RelationKind::Adequality)
        && kinds[last] == RelationKind::Equality
}

fn group_by_sign_is_positive(d: &Derivation) -> bool {
    d.steps()
        .iter()
        .filter(|s| s.rule == Rule::GroupBySign)
        .all(|s| [&s.lhs, &s.rhs].iter().all(|side| MPoly::from_expr(side).unwrap().all_coefficients_positive()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn critical_equation_is_proportional_to_derivative(
        coeffs in prop::collection::vec(rational(), 2..=7),
    ) {
        prop_assume!(coeffs[1..].iter().any(|c| *c != q(0, 1)));
        let p = poly_expr(&coeffs);
        let r = maximize(&p, "A", &BTreeMap::new(), TRUNC).unwrap();
        let oracle: Vec<Rational> = coeffs.iter().enumerate().skip(1)
            .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
            .collect();
        let derivative = Polynomial::new("A", oracle.clone());
        if derivative.is_zero() {
            prop_assert!(r.critical_equation.is_zero());
        } else {
            prop_assert!(r.critical_equation.is_proportional_to(&derivative));
        }
        for root in &r.rational_roots {
            prop_assert_eq!(horner(&oracle, root), q(0, 1));
        }
        prop_assert!(is_pattern(&r.derivation.kinds(), &r.derivation));
        prop_assert!(group_by_sign_is_positive(&r.derivation));
    }
}

/// Random curve through `(x0, y0)`: coefficients on the non-constant
/// monomials of total degree at most `degree`, the constant fixed to pass
/// through the point.
fn curve_through(coeffs: &[i64], degree: u32, x0: &Rational, y0: &Rational) -> Vec<(u32, u32, Rational)> {
    let monomials: Vec<(u32, u32)> =
        (0..=degree).flat_map(|i| (0..=degree - i).map(move |j| (i, j))).filter(|m| *m != (0, 0)).collect();
    let mut terms: Vec<(u32, u32, Rational)> =
        monomials.iter().zip(coeffs).map(|(&(i, j), &c)| (i, j, q(c, 1))).collect();
    let value: Rational = terms.iter().map(|(i, j, c)| c * x0.pow(*i as i32) * y0.pow(*j as i32)).sum();
    terms.push((0, 0, -value));
    terms
}

fn curve_expr(terms: &[(u32, u32, Rational)]) -> Expr {
    terms
        .iter()
        .map(|(i, j, c)| Expr::Const(c.clone()).mul(Expr::var("x").pow(*i as i64)).mul(Expr::var("y").pow(*j as i64)))
        .reduce(Expr::add)
        .unwrap()
}

/// Partial derivatives by the power rule, straight from the term list.
fn partials(terms: &[(u32, u32, Rational)], x0: &Rational, y0: &Rational) -> (Rational, Rational) {
    let mut fx = q(0, 1);
    let mut fy = q(0, 1);
    for (i, j, c) in terms {
        if *i > 0 {
            fx += c * Rational::from_integer((*i as i64).into()) * x0.pow(*i as i32 - 1) * y0.pow(*j as i32);
        }
        if *j > 0 {
            fy += c * Rational::from_integer((*j as i64).into()) * x0.pow(*i as i32) * y0.pow(*j as i32 - 1);
        }
    }
    (fx, fy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn subtangent_satisfies_the_tangent_condition(
        degree in 2u32..=3,
        coeffs in prop::collection::vec(-5i64..=5, 9),
        x0 in rational(),
        y0 in nonzero_rational(),
    ) {
        let terms = curve_through(&coeffs, degree, &x0, &y0);
        let (fx, fy) = partials(&terms, &x0, &y0);
        match subtangent(&curve_expr(&terms), &x0, &y0, TRUNC) {
            Ok(r) => {
                prop_assert_eq!(&r.subtangent_t * &fx + &y0 * &fy, q(0, 1));
                prop_assert!(r.subtangent_t != q(0, 1));
                prop_assert!(is_pattern(&r.derivation.kinds(), &r.derivation));
                prop_assert!(group_by_sign_is_positive(&r.derivation));
                prop_assert!(validate_derivation(&r.derivation).is_valid());
            }
            Err(FermatError::VerticalTangent) => prop_assert_eq!(fx, q(0, 1)),
            Err(FermatError::ZeroSubtangent) => prop_assert_eq!(fy, q(0, 1)),
            Err(e) => prop_assert!(false, "unexpected {}", e),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn parametric_slope_matches_derivative_ratio(
        (an, bn, cn, dn) in (4i64..=12, -8i64..=8, -8i64..=8, -4i64..=4), theta in -2.0f64..2.0,
    ) {
        let x = parse(&format!("({an}/4)*theta + ({bn}/4)*sin(theta)")).unwrap();
        let y = parse(&format!("({cn}/4)*cos(theta) + ({dn}/4)*theta^2")).unwrap();
        let (a, b, c, d) = (an as f64 / 4.0, bn as f64 / 4.0, cn as f64 / 4.0, dn as f64 / 4.0);
        let dx = a + b * theta.cos();
        let dy = -c * theta.sin() + 2.0 * d * theta;
        prop_assume!(dx.abs() > 1e-3);
        let r = parametric_tangent(&x, &y, &Coefficient::from_f64(theta, Mode::approx()), TRUNC).unwrap();
        prop_assert!((r.slope.to_f64() - dy / dx).abs() <= 1e-9 * (1.0 + (dy / dx).abs()));
        prop_assert!(validate_derivation(&r.derivation).is_valid());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn refraction_meets_its_tolerance(
        a in 0.1f64..5.0, b in 0.1f64..5.0, d in 0.1f64..5.0, v1 in 0.2f64..3.0, v2 in 0.2f64..3.0,
        tol_exp in 6i32..=11,
    ) {
        let tol = 10f64.powi(-tol_exp);
        let r = refract(&RefractionSetup { a, b, d, v1, v2 }, tol, TRUNC).unwrap();
        prop_assert!(r.snell_residual <= tol);
        prop_assert!(0.0 < r.x_star && r.x_star < d);
        prop_assert!(group_by_sign_is_positive(&r.derivation));
        prop_assert!(validate_derivation(&r.derivation).is_valid());
    }
}

// ---------------------------------------------------------------- checker

fn bind_all(values: &BTreeMap<String, Rational>) -> Binding {
    values.iter().fold(Binding::exact(TRUNC).unwrap(), |b, (name, v)| b.with(name, constant(v)).unwrap())
}

/// Both sides of a step under concrete values, with `E` as the infinitesimal.
fn relation_holds(lhs: &Expr, rhs: &Expr, kind: RelationKind, values: &Binding) -> Result<bool, NumError> {
    let (l, r) = match (eval_series(lhs, values), eval_series(rhs, values)) {
        (Ok(l), Ok(r)) => (l, r),
        _ => return Err(NumError::DivisionByZero),
    };
    match kind {
        RelationKind::Equality => Ok(l.compare(&r)? == Ordering::Equal),
        RelationKind::Adequality => adequal(&l, &r),
        RelationKind::Approx => approx(&l, &r),
    }
}

/// Every valid step of a solver trace preserves its relation when the
/// unknowns take the solver's answer and the parameters their values. The
/// step that opens the adequality block is the method's hypothesis rather
/// than a consequence of the identity before it, so it is not an
/// implication to test; every equality in the trace must hold outright.
fn spot_check(d: &Derivation, values: &BTreeMap<String, Rational>) -> Result<(), TestCaseError> {
    let binding = bind_all(values);
    let steps = d.steps();
    for pair in steps.windows(2) {
        let (before, after) = (&pair[0], &pair[1]);
        let hypothesis = before.kind == RelationKind::Equality && after.kind == RelationKind::Adequality;
        if hypothesis || validate_step(before, after).unwrap() != StepVerdict::Valid {
            continue;
        }
        if relation_holds(&before.lhs, &before.rhs, before.kind, &binding) == Ok(true) {
            prop_assert_eq!(relation_holds(&after.lhs, &after.rhs, after.kind, &binding), Ok(true), "{:?}", after);
        }
    }
    for s in steps.iter().filter(|s| s.kind == RelationKind::Equality) {
        prop_assert_eq!(relation_holds(&s.lhs, &s.rhs, s.kind, &binding), Ok(true), "{:?}", s);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn valid_steps_are_sound_on_quadratics(lead in nonzero_rational(), b in rational(), c in rational()) {
        // lead*A^2 + B*A + c with B bound as a parameter
        let p = Expr::Const(lead.clone()).mul(Expr::var("A").pow(2)).add(Expr::var("B").mul(Expr::var("A"))).add(Expr::Const(c));
        let params = BTreeMap::from([("B".to_string(), b.clone())]);
        let r = maximize(&p, "A", &params, TRUNC).unwrap();
        prop_assert_eq!(r.rational_roots.len(), 1);
        let mut values = params;
        values.insert("A".into(), r.rational_roots[0].clone());
        spot_check(&r.derivation, &values)?;
    }

    #[test]
    fn valid_steps_are_sound_on_conics(coeffs in prop::collection::vec(-5i64..=5, 9), x0 in rational(), y0 in nonzero_rational()) {
        let terms = curve_through(&coeffs, 2, &x0, &y0);
        if let Ok(r) = subtangent(&curve_expr(&terms), &x0, &y0, TRUNC) {
            spot_check(&r.derivation, &BTreeMap::from([("t".to_string(), r.subtangent_t.clone())]))?;
        }
    }

    #[test]
    fn dividing_an_adequality_by_e_is_always_valid(
        coeffs in prop::collection::vec((-5i64..=5, 0u32..=3), 1..5),
        k in 1u32..=3,
    ) {
        let p = coeffs.iter().map(|(c, j)| Expr::int(*c).mul(Expr::var("A").pow(*j as i64))).reduce(Expr::add).unwrap();
        let side = |e: Expr, power: u32| e.mul(Expr::epsilon().pow(power as i64));
        let step = |lhs: Expr, rhs: Expr, rule| adequality::fermat::Step::new(lhs, rhs, RelationKind::Adequality, rule, "");
        let before = step(side(p.clone(), k), side(Expr::var("B"), k), Rule::Algebra);
        let after = step(p.clone(), Expr::var("B"), Rule::DivideByE);
        prop_assert_eq!(validate_step(&before, &after).unwrap(), StepVerdict::Valid);
        let approx_before = adequality::fermat::Step::new(before.lhs.clone(), before.rhs.clone(), RelationKind::Approx, Rule::Algebra, "");
        let approx_after = adequality::fermat::Step::new(p, Expr::var("B"), RelationKind::Approx, Rule::DivideByE, "");
        let refuted = matches!(validate_step(&approx_before, &approx_after).unwrap(), StepVerdict::Invalid { .. });
        prop_assert!(refuted);
    }
}

#[test]
fn counterexample_refutes_dividing_approx() {
    let b = approx_division_counterexample();
    let (p, q2, e) = (b.get("P").unwrap(), b.get("Q").unwrap(), b.get("E").unwrap());
    assert!(approx(p, q2).unwrap());
    assert!(!approx(&p.div(e).unwrap(), &q2.div(e).unwrap()).unwrap());
}
