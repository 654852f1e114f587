//! Least-time refraction: bisection on the standard part of the travel
//! time's difference quotient recovers Snell's law.

use adequality::fermat::{refract, FermatError, RefractionSetup};
use adequality::numfield::DEFAULT_TRUNC;

fn main() -> Result<(), FermatError> {
    let setup = RefractionSetup { a: 1.0, b: 1.0, d: 2.0, v1: 1.0, v2: 0.5 };
    let r = refract(&setup, 1e-12, DEFAULT_TRUNC)?;
    println!("crossing point x* = {:.12} after {} bisections", r.x_star, r.iterations);
    println!("sin(theta1)/sin(theta2) = {:.12} (v1/v2 = {})", r.theta1.sin() / r.theta2.sin(), setup.v1 / setup.v2);
    println!("residual |sin(theta1)/v1 - sin(theta2)/v2| = {:e}", r.snell_residual);
    Ok(())
}
