//! Subtangents of algebraic curves by the similar-triangles substitution.

use adequality::expr::parse;
use adequality::fermat::{subtangent, FermatError, TraceStyle};
use adequality::numfield::{Rational, DEFAULT_TRUNC};

fn main() -> Result<(), FermatError> {
    let q = |n: i64| Rational::from_integer(n.into());
    for (curve, x0, y0) in [("y^2 - 4*x", q(1), q(2)), ("x^2 + y^2 - 25", q(3), q(4)), ("y - x^3", q(2), q(8))] {
        let r = subtangent(&parse(curve)?, &x0, &y0, DEFAULT_TRUNC)?;
        println!("{curve} = 0 at ({x0}, {y0}): subtangent {}", r.subtangent_t);
        for line in r.derivation.render_lines(TraceStyle::Modern) {
            println!("    {line}");
        }
    }
    match subtangent(&parse("x^2 + y^2 - 25")?, &q(0), &q(5), DEFAULT_TRUNC) {
        Err(e) => println!("top of the circle: {e}"),
        Ok(r) => println!("unexpected subtangent {}", r.subtangent_t),
    }
    Ok(())
}
