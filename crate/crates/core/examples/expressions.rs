//! Parsing, rendering, symbolic differentiation and series evaluation of
//! expressions.

use adequality::expr::{eval_series, parse, render, symbolic_derivative, Binding, ExprError, Style};
use adequality::numfield::{Rational, Series};

fn main() -> Result<(), ExprError> {
    let p = parse("B*A - A^2")?;
    println!("canonical: {}", render(&p, Style::Canonical));
    println!("compact:   {}", render(&p, Style::Compact));
    println!("herigone:  {}", render(&p, Style::Herigone));
    println!("d/dA:      {}", symbolic_derivative(&p, "A"));

    // (p(A + E) - p(A)) / E at A = 3, B = 10: its standard part is p'(3).
    let trunc = 4;
    let at = |a: Series| -> Result<Series, ExprError> {
        let b = Binding::exact(trunc)?
            .with("A", a)?
            .with("B", Series::from_rational(Rational::from_integer(10.into()), trunc))?;
        eval_series(&p, &b)
    };
    let three = Series::from_rational(Rational::from_integer(3.into()), trunc);
    let e = Series::epsilon(trunc)?;
    let quotient = at(three.add(&e)?)?.sub(&at(three)?)?.div(&e)?;
    println!("difference quotient at A = 3: {quotient}, standard part {}", quotient.st()?);
    Ok(())
}
