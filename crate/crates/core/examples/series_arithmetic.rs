//! Arithmetic with an infinitesimal `E`: truncated Laurent series, the
//! standard part, and the two proximity relations.

use adequality::numfield::{adequal, approx, taylor_apply, NumError, Rational, Series, Transcendental};

fn main() -> Result<(), NumError> {
    let trunc = 6;
    let e = Series::epsilon(trunc)?;
    let one = Series::from_rational(Rational::from_integer(1.into()), trunc);

    let geometric = one.div(&one.sub(&e)?)?;
    println!("1/(1-E)     = {geometric}");
    println!("1/E         = {}", one.div(&e)?);

    let sin_e = taylor_apply(Transcendental::Sin, &e)?;
    println!("sin(E)      = {sin_e}");
    println!("sin(E) adq E: {}", adequal(&sin_e, &e)?);
    println!("sin(E) ~ E  : {}", approx(&sin_e, &e)?);

    // 2E is infinitely close to E, but the quotients by E are 2 and 1.
    let two_e = e.scale(&Rational::from_integer(2.into()).into());
    println!("E ~ 2E      : {}", approx(&e, &two_e)?);
    println!("1 ~ 2       : {}", approx(&e.div(&e)?, &two_e.div(&e)?)?);
    println!("E adq 2E    : {}", adequal(&e, &two_e)?);

    println!("st(3 + E)   = {}", Series::from_rational(Rational::from_integer(3.into()), trunc).add(&e)?.st()?);
    Ok(())
}
