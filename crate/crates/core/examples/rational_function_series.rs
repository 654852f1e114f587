//! Series whose coefficients are rational functions of the subtangent `t`:
//! the curve's equation along the tangent line.

use adequality::expr::{parse, rf_series_eval, ExprError};
use adequality::numfield::Rational;

fn main() -> Result<(), ExprError> {
    let q = |n: i64| Rational::from_integer(n.into());
    let curve = parse("y^2 - 4*x")?;
    let series = rf_series_eval(&curve, &q(1), &q(2), 3)?;
    for k in 0..=2 {
        println!("coefficient of E^{k}: {}", series.coeff(k));
    }
    let roots = series.coeff(1).numerator().rational_roots().unwrap_or_default();
    let roots: Vec<String> = roots.iter().map(ToString::to_string).collect();
    println!("the E^1 coefficient vanishes at t = {}", roots.join(", "));
    Ok(())
}
