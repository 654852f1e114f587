//! Derivation files: the step list the checker reads, and the `steps`
//! member of every `solve --json` output.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::CliError;
use crate::expr::parse;
use crate::fermat::{Derivation, RelationKind, Rule, SideCondition, Step};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub lhs: String,
    pub rhs: String,
    pub kind: String,
    pub rule: String,
    #[serde(default)]
    pub side_conditions: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

/// Only `steps` is read; `kind` and `result` are tolerated so that solver
/// output can be checked as it stands.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationFile {
    pub steps: Vec<StepRecord>,
    #[serde(default)]
    #[allow(dead_code)]
    kind: Option<Value>,
    #[serde(default)]
    #[allow(dead_code)]
    result: Option<Value>,
}

impl StepRecord {
    pub fn from_step(s: &Step) -> Self {
        StepRecord {
            lhs: s.lhs.to_string(),
            rhs: s.rhs.to_string(),
            kind: s.kind.token().to_string(),
            rule: s.rule.name().to_string(),
            side_conditions: s.side_conditions.iter().map(ToString::to_string).collect(),
            note: s.note.clone(),
        }
    }

    fn to_step(&self, index: usize) -> Result<Step, CliError> {
        let bad = |msg: String| CliError::Input(format!("step {}: {msg}", index + 1));
        let lhs = parse(&self.lhs).map_err(|e| bad(format!("lhs: {e}")))?;
        let rhs = parse(&self.rhs).map_err(|e| bad(format!("rhs: {e}")))?;
        let kind = RelationKind::from_token(&self.kind)
            .ok_or_else(|| bad(format!("kind '{}' is not one of =, adq, approx", self.kind)))?;
        let rule = Rule::from_name(&self.rule).ok_or_else(|| {
            let names: Vec<&str> = Rule::ALL.iter().map(|r| r.name()).collect();
            bad(format!("rule '{}' is not one of {}", self.rule, names.join(", ")))
        })?;
        let mut step = Step::new(lhs, rhs, kind, rule, self.note.clone());
        for text in &self.side_conditions {
            let condition = SideCondition::parse(text)
                .ok_or_else(|| bad(format!("side condition '{text}' is neither 'name != 0' nor 'name = rational'")))?;
            step = step.with_condition(condition);
        }
        Ok(step)
    }
}

impl DerivationFile {
    pub fn to_derivation(&self) -> Result<Derivation, CliError> {
        let steps = self.steps.iter().enumerate().map(|(i, r)| r.to_step(i)).collect::<Result<Vec<_>, _>>()?;
        Derivation::new(steps).ok_or_else(|| CliError::Input("a derivation needs at least one step".into()))
    }
}

pub fn derivation_to_json(d: &Derivation) -> Map<String, Value> {
    let steps: Vec<StepRecord> = d.steps().iter().map(StepRecord::from_step).collect();
    let mut doc = Map::new();
    doc.insert("steps".into(), serde_json::to_value(steps).expect("plain records serialize"));
    doc
}
