//! The classic adequality argument for the maximum of `B*A - A^2`.

use std::collections::BTreeMap;

use adequality::expr::parse;
use adequality::fermat::{maximize, FermatError, TraceStyle};
use adequality::numfield::{Rational, DEFAULT_TRUNC};

fn main() -> Result<(), FermatError> {
    let params = BTreeMap::from([("B".to_string(), Rational::from_integer(10.into()))]);
    let result = maximize(&parse("B*A - A^2")?, "A", &params, DEFAULT_TRUNC)?;
    for line in result.derivation.render_lines(TraceStyle::Modern) {
        println!("{line}");
    }
    println!();
    for line in result.derivation.render_lines(TraceStyle::Herigone) {
        println!("{line}");
    }
    let roots: Vec<String> = result.rational_roots.iter().map(ToString::to_string).collect();
    println!("\ncritical equation {} = 0, rational roots [{}]", result.critical_equation, roots.join(", "));
    Ok(())
}
