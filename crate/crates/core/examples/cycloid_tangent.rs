//! Tangent slope of the cycloid from the ratio of infinitesimal increments.

use std::f64::consts::PI;

use adequality::expr::parse;
use adequality::fermat::{parametric_tangent, FermatError, TraceStyle};
use adequality::numfield::{Coefficient, Mode, DEFAULT_TRUNC};

fn main() -> Result<(), FermatError> {
    let (x, y) = (parse("theta - sin(theta)")?, parse("1 - cos(theta)")?);
    for theta in [PI / 6.0, PI / 2.0, 2.0 * PI / 3.0] {
        let r = parametric_tangent(&x, &y, &Coefficient::from_f64(theta, Mode::approx()), DEFAULT_TRUNC)?;
        let closed_form = theta.sin() / (1.0 - theta.cos());
        println!("theta0 = {theta:.6}: slope {:.12} (closed form {closed_form:.12})", r.slope.to_f64());
    }
    let r = parametric_tangent(&x, &y, &Coefficient::from_f64(PI / 2.0, Mode::approx()), DEFAULT_TRUNC)?;
    for line in r.derivation.render_lines(TraceStyle::Modern) {
        println!("    {line}");
    }
    Ok(())
}
