use std::fmt;

use num_traits::Zero;

use crate::expr::{render, Expr, Style};
use crate::numfield::{parse_rational, Rational};

/// The three relations a step can assert between its sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Equality,
    Adequality,
    Approx,
}

impl RelationKind {
    /// ASCII token used in modern output and in derivation files.
    pub fn token(self) -> &'static str {
        match self {
            RelationKind::Equality => "=",
            RelationKind::Adequality => "adq",
            RelationKind::Approx => "approx",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "=" => Some(RelationKind::Equality),
            "adq" => Some(RelationKind::Adequality),
            "approx" => Some(RelationKind::Approx),
            _ => None,
        }
    }
}

/// The rewrite that produced a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Substitute,
    CancelCommon,
    GroupBySign,
    DivideByE,
    DiscardE,
    Algebra,
    Solve,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::Substitute,
        Rule::CancelCommon,
        Rule::GroupBySign,
        Rule::DivideByE,
        Rule::DiscardE,
        Rule::Algebra,
        Rule::Solve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Substitute => "substitute",
            Rule::CancelCommon => "cancel-common",
            Rule::GroupBySign => "group-by-sign",
            Rule::DivideByE => "divide-by-e",
            Rule::DiscardE => "discard-e",
            Rule::Algebra => "algebra",
            Rule::Solve => "solve",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }
}

/// A fact a step relies on, recorded so that contradictory assumptions can
/// be detected across a whole derivation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SideCondition {
    /// `name != 0`
    NonZero(String),
    /// `name = value`
    Equals(String, Rational),
}

impl SideCondition {
    pub fn var(&self) -> &str {
        match self {
            SideCondition::NonZero(v) | SideCondition::Equals(v, _) => v,
        }
    }

    /// Parses `"E != 0"` or `"B = 10"`.
    pub fn parse(text: &str) -> Option<Self> {
        let (name, value, nonzero) = if let Some((l, r)) = text.split_once("!=") {
            (l.trim(), r.trim(), true)
        } else {
            let (l, r) = text.split_once('=')?;
            (l.trim(), r.trim(), false)
        };
        if !Expr::is_valid_name(name) {
            return None;
        }
        let value = parse_rational(value)?;
        match (nonzero, value.is_zero()) {
            (true, true) => Some(SideCondition::NonZero(name.to_string())),
            (true, false) => None,
            (false, _) => Some(SideCondition::Equals(name.to_string(), value)),
        }
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::NonZero(v) => write!(f, "{v} != 0"),
            SideCondition::Equals(v, q) => write!(f, "{v} = {q}"),
        }
    }
}

/// One line of a derivation: `lhs <kind> rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub lhs: Expr,
    pub rhs: Expr,
    pub kind: RelationKind,
    pub rule: Rule,
    pub note: String,
    pub side_conditions: Vec<SideCondition>,
}

impl Step {
    pub fn new(lhs: Expr, rhs: Expr, kind: RelationKind, rule: Rule, note: impl Into<String>) -> Self {
        Step { lhs, rhs, kind, rule, note: note.into(), side_conditions: Vec::new() }
    }

    pub fn with_condition(mut self, condition: SideCondition) -> Self {
        self.side_conditions.push(condition);
        self
    }

    /// `lhs - rhs`.
    pub fn difference(&self) -> Expr {
        self.lhs.clone().sub(self.rhs.clone())
    }
}

/// Output notation for whole derivations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceStyle {
    /// `BE adq 2AE+E^2`
    #[default]
    Modern,
    /// Lower-case letters, explicit products and `2|2` for every relation,
    /// read right to left: `2*a+e 2|2 b`.
    Herigone,
}

/// A nonempty, ordered list of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    steps: Vec<Step>,
}

impl Derivation {
    /// `None` for an empty list.
    pub fn new(steps: Vec<Step>) -> Option<Self> {
        (!steps.is_empty()).then_some(Derivation { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn kinds(&self) -> Vec<RelationKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }

    /// One relation per line.
    pub fn render_lines(&self, style: TraceStyle) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| match style {
                TraceStyle::Modern => {
                    format!("{} {} {}", render(&s.lhs, Style::Compact), s.kind.token(), render(&s.rhs, Style::Compact))
                }
                TraceStyle::Herigone => {
                    format!("{} 2|2 {}", render(&s.rhs, Style::Herigone), render(&s.lhs, Style::Herigone))
                }
            })
            .collect()
    }
}
