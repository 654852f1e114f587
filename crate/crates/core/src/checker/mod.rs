//! Validation of derivations against the meaning of the three relations.
//!
//! Each step is checked against the step it rewrites, by exact identity
//! testing over rational functions. Dividing by `E` is licensed for
//! adequality (it is invariant under multiplication) but not for "infinitely
//! close"; discarding `E` is licensed as taking standard parts. Under plain
//! equality both moves are only algebra, and they silently assume `E != 0`
//! and `E = 0` respectively; those assumptions are collected over the whole
//! derivation and a derivation that makes both is rejected.

mod mfrac;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{Binding, Expr, EPSILON};
use crate::fermat::{Derivation, RelationKind, Rule, SideCondition, Step};
use crate::numfield::{Rational, Series, DEFAULT_TRUNC};
use mfrac::{FracError, MFrac};

#[derive(Debug, Clone, PartialEq)]
pub enum StepVerdict {
    Valid,
    Invalid { reason: String, counterexample: Option<Binding> },
    Undecidable(String),
}

impl StepVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, StepVerdict::Valid)
    }

    fn invalid(reason: impl Into<String>) -> Self {
        StepVerdict::Invalid { reason: reason.into(), counterexample: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("malformed step: {0}")]
    MalformedStep(String),
}

/// Per-step verdicts plus the two derivation-wide checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationReport {
    pub verdicts: Vec<StepVerdict>,
    /// Adequalities form one contiguous block followed by exactly one
    /// concluding equality (trailing solve steps aside).
    pub pattern: bool,
    /// Recorded and implied side conditions, sorted.
    pub side_conditions: Vec<SideCondition>,
    /// Why the side conditions contradict each other, if they do.
    pub inconsistency: Option<String>,
}

impl DerivationReport {
    pub fn is_valid(&self) -> bool {
        self.verdicts.iter().all(StepVerdict::is_valid) && self.pattern && self.inconsistency.is_none()
    }
}

/// The binding that refutes dividing an "infinitely close" relation by `E`:
/// `P = E` and `Q = 2E` are infinitely close, `P/E` and `Q/E` are not.
pub fn approx_division_counterexample() -> Binding {
    let e = Series::epsilon(DEFAULT_TRUNC).expect("positive order");
    let two = Series::from_rational(Rational::from_integer(2.into()), DEFAULT_TRUNC);
    Binding::exact(DEFAULT_TRUNC)
        .and_then(|b| b.with("P", e.clone()))
        .and_then(|b| b.with("Q", two.mul(&e).expect("same mode")))
        .expect("valid names")
}

struct Sides {
    lhs: MFrac,
    rhs: MFrac,
}

impl Sides {
    fn difference(&self) -> MFrac {
        self.lhs.sub(&self.rhs)
    }
}

enum Prepared {
    Ready(Sides, Sides),
    Verdict(StepVerdict),
}

fn frac(e: &Expr, bindings: &[(String, Rational)]) -> Result<MFrac, FracError> {
    let mut f = MFrac::from_expr(e)?;
    for (name, q) in bindings {
        f = f.substitute_rational(name, q)?;
    }
    Ok(f)
}

fn prepare(before: &Step, after: &Step) -> Prepared {
    let bindings: Vec<(String, Rational)> = after
        .side_conditions
        .iter()
        .filter_map(|c| match c {
            SideCondition::Equals(v, q) if v != EPSILON => Some((v.clone(), q.clone())),
            _ => None,
        })
        .collect();
    let sides = |s: &Step, b: &[(String, Rational)]| -> Result<Sides, FracError> {
        Ok(Sides { lhs: frac(&s.lhs, b)?, rhs: frac(&s.rhs, b)? })
    };
    match (sides(before, &bindings), sides(after, &[])) {
        (Ok(b), Ok(a)) => Prepared::Ready(b, a),
        (Err(FracError::Transcendental), _) | (_, Err(FracError::Transcendental)) => Prepared::Verdict(
            StepVerdict::Undecidable("transcendental functions are outside the identity checker".into()),
        ),
        _ => Prepared::Verdict(StepVerdict::invalid("division by zero")),
    }
}

/// Whether `after` restates `before` under the relation `kind`.
fn equivalent(kind: RelationKind, before: &Sides, after: &Sides) -> bool {
    match kind {
        RelationKind::Equality => {
            let (db, da) = (before.difference(), after.difference());
            da.is_zero() || (db.is_zero() && da.is_zero()) || da.constant_multiple_of(&db).is_some()
        }
        RelationKind::Adequality => {
            let scaled = |l: &MFrac, r: &MFrac| match (l.constant_multiple_of(&before.lhs), before.lhs.is_zero()) {
                (Some(c), _) => r.same(&before.rhs.scale(&c)),
                (None, true) => l.is_zero() && r.constant_multiple_of(&before.rhs).is_some(),
                (None, false) => false,
            };
            scaled(&after.lhs, &after.rhs) || {
                let swapped = Sides { lhs: before.rhs.clone(), rhs: before.lhs.clone() };
                match (after.lhs.constant_multiple_of(&swapped.lhs), swapped.lhs.is_zero()) {
                    (Some(c), _) => after.rhs.same(&swapped.rhs.scale(&c)),
                    (None, true) => after.lhs.is_zero() && after.rhs.constant_multiple_of(&swapped.rhs).is_some(),
                    (None, false) => false,
                }
            }
        }
        RelationKind::Approx => {
            (after.lhs.same(&before.lhs) && after.rhs.same(&before.rhs))
                || (after.lhs.same(&before.rhs) && after.rhs.same(&before.lhs))
        }
    }
}

fn positive_terms_only(f: &MFrac) -> bool {
    f.as_poly().is_some_and(|p| p.all_coefficients_positive())
}

/// `k >= 1` with `before = E^k * after` on both sides, if any.
fn divided_by_power(before: &Sides, after: &Sides) -> Option<i64> {
    let k = match (before.lhs.valuation(), after.lhs.valuation()) {
        (Some(b), Some(a)) => b - a,
        _ => before.rhs.valuation()? - after.rhs.valuation()?,
    };
    (k >= 1 && before.lhs.same(&after.lhs.shift(k)) && before.rhs.same(&after.rhs.shift(k))).then_some(k)
}

/// A solve step of the form `V = q` (or `q = V`).
fn root_assignment(step: &Step) -> Option<(&str, &Rational)> {
    if step.rule != Rule::Solve || step.kind != RelationKind::Equality {
        return None;
    }
    match (&step.lhs, &step.rhs) {
        (Expr::Var(v), Expr::Const(q)) | (Expr::Const(q), Expr::Var(v)) if v != EPSILON => Some((v, q)),
        _ => None,
    }
}

fn check(before: &Step, after: &Step) -> Result<(StepVerdict, Vec<SideCondition>), CheckError> {
    if after.rule == Rule::DiscardE && after.kind != RelationKind::Equality {
        return Err(CheckError::MalformedStep("discard-e must conclude an equality".into()));
    }
    let (b, a) = match prepare(before, after) {
        Prepared::Ready(b, a) => (b, a),
        Prepared::Verdict(v) => return Ok((v, vec![])),
    };
    let same_kind = before.kind == after.kind;
    let kind_change = || {
        StepVerdict::invalid(format!(
            "{} cannot turn '{}' into '{}'",
            after.rule.name(),
            before.kind.token(),
            after.kind.token()
        ))
    };
    let verdict = |ok: bool, reason: &str| if ok { StepVerdict::Valid } else { StepVerdict::invalid(reason) };

    Ok(match after.rule {
        Rule::Substitute | Rule::Algebra | Rule::CancelCommon => {
            if !same_kind {
                (kind_change(), vec![])
            } else {
                (verdict(equivalent(after.kind, &b, &a), "not an algebraic consequence of the previous step"), vec![])
            }
        }
        Rule::GroupBySign => {
            let regrouped = match (before.kind, after.kind) {
                (RelationKind::Equality, RelationKind::Adequality) => {
                    let da = a.difference();
                    da.same(&b.rhs) || da.same(&b.lhs)
                }
                (x, y) if x == y => equivalent(x, &b, &a),
                _ => return Ok((kind_change(), vec![])),
            };
            if !regrouped {
                (StepVerdict::invalid("the grouped sides do not recombine to the previous step"), vec![])
            } else if !(positive_terms_only(&a.lhs) && positive_terms_only(&a.rhs)) {
                (StepVerdict::invalid("grouping by sign must leave only positive terms on each side"), vec![])
            } else {
                (StepVerdict::Valid, vec![])
            }
        }
        Rule::DivideByE => {
            if !same_kind {
                return Ok((kind_change(), vec![]));
            }
            let divides = divided_by_power(&b, &a).is_some()
                || (after.kind == RelationKind::Equality && {
                    let (db, da) = (b.difference(), a.difference());
                    matches!((db.valuation(), da.valuation()), (Some(x), Some(y)) if x > y
                        && db.constant_multiple_of(&da.shift(x - y)).is_some())
                });
            if !divides {
                return Ok((StepVerdict::invalid("not the previous step divided by a power of E"), vec![]));
            }
            match after.kind {
                RelationKind::Adequality => (StepVerdict::Valid, vec![]),
                RelationKind::Equality => (StepVerdict::Valid, vec![SideCondition::NonZero(EPSILON.into())]),
                RelationKind::Approx => (
                    StepVerdict::Invalid {
                        reason: "'approx' is not preserved by division by E (E approx 2E, yet 1 is not approx 2)"
                            .into(),
                        counterexample: Some(approx_division_counterexample()),
                    },
                    vec![],
                ),
            }
        }
        Rule::DiscardE => match before.kind {
            RelationKind::Adequality | RelationKind::Approx => match (b.lhs.standard_part(), b.rhs.standard_part()) {
                (Some(l), Some(r)) => {
                    let ok = (a.lhs.same(&l) && a.rhs.same(&r)) || (a.lhs.same(&r) && a.rhs.same(&l));
                    (verdict(ok, "not the standard part of the previous step"), vec![])
                }
                _ => (StepVerdict::invalid("standard parts exist only for finite values"), vec![]),
            },
            RelationKind::Equality => {
                let zero = Rational::from_integer(0.into());
                let at_zero = |f: &MFrac| f.substitute_rational(EPSILON, &zero);
                let ok = match (at_zero(&b.lhs), at_zero(&b.rhs)) {
                    (Ok(l), Ok(r)) => {
                        let sides = Sides { lhs: l, rhs: r };
                        equivalent(RelationKind::Equality, &sides, &a)
                    }
                    _ => false,
                };
                if ok {
                    (StepVerdict::Valid, vec![SideCondition::Equals(EPSILON.into(), zero)])
                } else {
                    (StepVerdict::invalid("not the previous step with E set to zero"), vec![])
                }
            }
        },
        Rule::Solve => {
            if after.kind != RelationKind::Equality || before.kind != RelationKind::Equality {
                return Ok((StepVerdict::invalid("solve steps relate equalities"), vec![]));
            }
            if let Some((var, value)) = root_assignment(after) {
                let root = b.difference().substitute_rational(var, value);
                let ok = matches!(root, Ok(f) if f.is_zero());
                (verdict(ok, &format!("{var} = {value} does not satisfy the previous equation")), vec![])
            } else {
                (
                    verdict(equivalent(RelationKind::Equality, &b, &a), "not a consequence of the previous equation"),
                    vec![],
                )
            }
        }
    })
}

/// Checks `after` as a rewrite of `before`. Side conditions recorded on
/// `after` of the form `name = value` are applied to `before` first.
pub fn validate_step(before: &Step, after: &Step) -> Result<StepVerdict, CheckError> {
    check(before, after).map(|(v, _)| v)
}

/// The side conditions a valid step relies on without necessarily
/// recording them (`E != 0` for division under equality, `E = 0` for
/// discarding under equality).
pub fn implied_side_conditions(before: &Step, after: &Step) -> Vec<SideCondition> {
    match check(before, after) {
        Ok((StepVerdict::Valid, implied)) => implied,
        _ => vec![],
    }
}

fn pattern_holds(steps: &[Step]) -> bool {
    if steps.iter().any(|s| s.kind == RelationKind::Approx) {
        return false;
    }
    let end = steps.iter().rposition(|s| s.rule != Rule::Solve).map_or(0, |i| i + 1);
    let kinds: Vec<RelationKind> = steps[..end].iter().map(|s| s.kind).collect();
    let Some(first_adq) = kinds.iter().position(|k| *k == RelationKind::Adequality) else {
        return false;
    };
    let block_end =
        kinds[first_adq..].iter().position(|k| *k != RelationKind::Adequality).map_or(kinds.len(), |i| first_adq + i);
    kinds[..first_adq].iter().all(|k| *k == RelationKind::Equality)
        && block_end + 1 == kinds.len()
        && kinds[block_end] == RelationKind::Equality
}

fn inconsistency(conditions: &BTreeSet<SideCondition>) -> Option<String> {
    let vars: BTreeSet<&str> = conditions.iter().map(SideCondition::var).collect();
    vars.into_iter().find_map(|v| {
        let nonzero = conditions.contains(&SideCondition::NonZero(v.to_string()));
        let values: Vec<&Rational> = conditions
            .iter()
            .filter_map(|c| match c {
                SideCondition::Equals(w, q) if w == v => Some(q),
                _ => None,
            })
            .collect();
        let clash = values.len() > 1 || (nonzero && values.iter().any(|q| **q == Rational::from_integer(0.into())));
        clash.then(|| format!("inconsistent use of {v}"))
    })
}

/// Checks every step against its premise, the shape of the derivation and
/// the consistency of all side conditions. A root assignment `V = q` is
/// checked against the nearest earlier step that is not itself one.
pub fn validate_derivation(d: &Derivation) -> DerivationReport {
    let steps = d.steps();
    let mut verdicts = Vec::with_capacity(steps.len());
    let mut conditions: BTreeSet<SideCondition> = BTreeSet::new();
    for (i, step) in steps.iter().enumerate() {
        conditions.extend(step.side_conditions.iter().cloned());
        if i == 0 {
            verdicts.push(if matches!(step.rule, Rule::Substitute | Rule::Algebra) {
                StepVerdict::Valid
            } else {
                StepVerdict::invalid("a derivation must open with a substitution or an algebraic premise")
            });
            continue;
        }
        let premise = if root_assignment(step).is_some() {
            steps[..i].iter().rposition(|s| root_assignment(s).is_none()).expect("first step is the premise")
        } else {
            i - 1
        };
        match check(&steps[premise], step) {
            Ok((verdict, implied)) => {
                conditions.extend(implied);
                verdicts.push(verdict);
            }
            Err(e) => verdicts.push(StepVerdict::invalid(e.to_string())),
        }
    }
    DerivationReport {
        verdicts,
        pattern: pattern_holds(steps),
        inconsistency: inconsistency(&conditions),
        side_conditions: conditions.into_iter().collect(),
    }
}
