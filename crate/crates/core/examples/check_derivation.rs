//! Checking derivations: the adequality argument passes, while the same
//! computation written with equality throughout divides by `E` and then sets
//! it to zero, and is rejected.

use std::collections::BTreeMap;

use adequality::checker::{validate_derivation, StepVerdict};
use adequality::expr::{parse, ExprError};
use adequality::fermat::{maximize, Derivation, RelationKind, Rule, SideCondition, Step};
use adequality::numfield::{Rational, DEFAULT_TRUNC};

fn step(lhs: &str, rhs: &str, rule: Rule) -> Result<Step, ExprError> {
    Ok(Step::new(parse(lhs)?, parse(rhs)?, RelationKind::Equality, rule, ""))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BTreeMap::from([("B".to_string(), Rational::from_integer(10.into()))]);
    let golden = maximize(&parse("B*A - A^2")?, "A", &params, DEFAULT_TRUNC)?.derivation;
    let report = validate_derivation(&golden);
    println!("adequality trace: valid = {}, pattern = {}", report.is_valid(), report.pattern);

    let zero = Rational::from_integer(0.into());
    let all_equalities = Derivation::new(vec![
        step("B*(A + E) - (A + E)^2", "B*A - A^2", Rule::Substitute)?,
        step("B*E - 2*A*E - E^2", "0", Rule::CancelCommon)?,
        step("B - 2*A - E", "0", Rule::DivideByE)?.with_condition(SideCondition::NonZero("E".into())),
        step("B - 2*A", "0", Rule::DiscardE)?.with_condition(SideCondition::Equals("E".into(), zero)),
        step("A", "B/2", Rule::Solve)?,
    ])
    .expect("nonempty");
    let report = validate_derivation(&all_equalities);
    let steps_ok = report.verdicts.iter().all(StepVerdict::is_valid);
    println!(
        "equality-only trace: every step algebraically valid = {steps_ok}, pattern = {}, {}",
        report.pattern,
        report.inconsistency.as_deref().unwrap_or("consistent")
    );
    Ok(())
}
