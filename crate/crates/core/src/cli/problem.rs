//! Problem files: one JSON object per solver run.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::derivation_file::derivation_to_json;
use super::CliError;
use crate::expr::{parse, Expr, EPSILON};
use crate::fermat::{maximize, parametric_tangent, refract, subtangent, FermatError, RefractionSetup};
use crate::numfield::{parse_rational, rational_from_f64, rational_to_f64, Coefficient, Mode, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Maximize { expr: Expr, params: BTreeMap<String, Rational>, trunc: Option<i64> },
    Tangent { curve: Expr, point: (Rational, Rational), trunc: Option<i64> },
    ParamTangent { x: Expr, y: Expr, theta0: Coefficient, trunc: Option<i64> },
    Refract { setup: RefractionSetup, tol: Option<f64>, trunc: Option<i64> },
}

/// Settings a problem file may leave to the command line.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub order: Option<i64>,
    pub tol: Option<f64>,
}

pub const DEFAULT_TOL: f64 = 1e-9;

/// A solver's answer: the result fields and the derivation.
#[derive(Debug, Clone)]
pub struct Solution {
    pub kind: &'static str,
    pub result: Value,
    pub summary: String,
    pub derivation: crate::fermat::Derivation,
}

impl Solution {
    pub fn to_json(&self) -> Value {
        let mut doc = derivation_to_json(&self.derivation);
        doc.insert("kind".into(), json!(self.kind));
        doc.insert("result".into(), self.result.clone());
        Value::Object(doc)
    }
}

/// Field access for one problem object that remembers which keys were used,
/// so leftovers can be rejected.
struct Fields<'a> {
    kind: &'a str,
    map: Map<String, Value>,
}

impl<'a> Fields<'a> {
    fn input(&self, msg: impl std::fmt::Display) -> CliError {
        CliError::Input(format!("{} problem: {msg}", self.kind))
    }

    fn required(&mut self, key: &str) -> Result<Value, CliError> {
        self.map.remove(key).ok_or_else(|| self.input(format!("missing field '{key}'")))
    }

    fn expr(&mut self, key: &str) -> Result<Expr, CliError> {
        match self.required(key)? {
            Value::String(s) => parse(&s).map_err(|e| self.input(format!("field '{key}': {e}"))),
            other => Err(self.input(format!("field '{key}' must be an expression string, got {other}"))),
        }
    }

    fn rational(&self, key: &str, v: &Value) -> Result<Rational, CliError> {
        let parsed = match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(i.into())),
            _ => None,
        };
        parsed.ok_or_else(|| self.input(format!("field '{key}' must hold rationals such as \"3/4\", got {v}")))
    }

    fn number(&mut self, key: &str) -> Result<f64, CliError> {
        let v = self.required(key)?;
        v.as_f64().ok_or_else(|| self.input(format!("field '{key}' must be a number, got {v}")))
    }

    fn optional_number(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        if self.map.contains_key(key) {
            self.number(key).map(Some)
        } else {
            Ok(None)
        }
    }

    fn trunc(&mut self) -> Result<Option<i64>, CliError> {
        match self.map.remove("trunc") {
            None => Ok(None),
            Some(v) => match v.as_i64() {
                Some(n) if n >= 1 => Ok(Some(n)),
                _ => Err(self.input(format!("field 'trunc' must be a positive integer, got {v}"))),
            },
        }
    }

    fn mode(&mut self) -> Result<Option<&'static str>, CliError> {
        match self.map.remove("mode") {
            None => Ok(None),
            Some(Value::String(s)) if s == "exact" => Ok(Some("exact")),
            Some(Value::String(s)) if s == "approx" => Ok(Some("approx")),
            Some(v) => Err(self.input(format!("field 'mode' must be \"exact\" or \"approx\", got {v}"))),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        match self.map.keys().next() {
            Some(key) => Err(self.input(format!("unknown field '{key}'"))),
            None => Ok(()),
        }
    }
}

impl Problem {
    pub fn from_json(doc: Value) -> Result<Problem, CliError> {
        let Value::Object(mut map) = doc else {
            return Err(CliError::Input("a problem file must hold a JSON object".into()));
        };
        let kind = match map.remove("kind") {
            Some(Value::String(k)) => k,
            Some(other) => return Err(CliError::Input(format!("field 'kind' must be a string, got {other}"))),
            None => return Err(CliError::Input("missing field 'kind'".into())),
        };
        let mut f = Fields { kind: &kind, map };
        let problem = match kind.as_str() {
            "maximize" => {
                let expr = f.expr("expr")?;
                let params = match f.map.remove("params") {
                    None => BTreeMap::new(),
                    Some(Value::Object(m)) => m
                        .iter()
                        .map(|(name, v)| Ok((name.clone(), f.rational("params", v)?)))
                        .collect::<Result<_, CliError>>()?,
                    Some(v) => return Err(f.input(format!("field 'params' must map names to rationals, got {v}"))),
                };
                if f.mode()? == Some("approx") {
                    return Err(f.input("extrema are found in exact arithmetic only"));
                }
                Problem::Maximize { expr, params, trunc: f.trunc()? }
            }
            "tangent" => {
                let curve = f.expr("curve")?;
                let point = match f.required("point")? {
                    Value::Array(xy) if xy.len() == 2 => (f.rational("point", &xy[0])?, f.rational("point", &xy[1])?),
                    v => return Err(f.input(format!("field 'point' must be a pair of rationals, got {v}"))),
                };
                Problem::Tangent { curve, point, trunc: f.trunc()? }
            }
            "param-tangent" => {
                let (x, y) = (f.expr("x")?, f.expr("y")?);
                let raw = f.required("theta0")?;
                let mode = f.mode()?;
                let theta0 = match (&raw, mode) {
                    (Value::Number(n), Some("exact")) => {
                        let q = n.as_f64().and_then(rational_from_f64);
                        Coefficient::Exact(q.ok_or_else(|| f.input(format!("theta0 {n} has no exact value")))?)
                    }
                    (Value::Number(n), _) => Coefficient::from_f64(n.as_f64().unwrap_or(f64::NAN), Mode::approx()),
                    (Value::String(_), Some("approx")) => {
                        Coefficient::from_f64(rational_to_f64(&f.rational("theta0", &raw)?), Mode::approx())
                    }
                    (Value::String(_), _) => Coefficient::Exact(f.rational("theta0", &raw)?),
                    _ => {
                        return Err(f.input(format!("field 'theta0' must be a number or a rational string, got {raw}")))
                    }
                };
                if !theta0.to_f64().is_finite() {
                    return Err(f.input("theta0 must be finite"));
                }
                Problem::ParamTangent { x, y, theta0, trunc: f.trunc()? }
            }
            "refract" => {
                let setup = RefractionSetup {
                    a: f.number("a")?,
                    b: f.number("b")?,
                    d: f.number("d")?,
                    v1: f.number("v1")?,
                    v2: f.number("v2")?,
                };
                Problem::Refract { setup, tol: f.optional_number("tol")?, trunc: f.trunc()? }
            }
            other => {
                return Err(CliError::Input(format!(
                    "unknown kind '{other}' (expected maximize, tangent, param-tangent or refract)"
                )))
            }
        };
        f.finish()?;
        Ok(problem)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Maximize { .. } => "maximize",
            Problem::Tangent { .. } => "tangent",
            Problem::ParamTangent { .. } => "param-tangent",
            Problem::Refract { .. } => "refract",
        }
    }

    /// Runs the matching solver. Order precedence: command line, then file,
    /// then the library default; tolerance likewise.
    pub fn solve(&self, options: SolveOptions) -> Result<Solution, CliError> {
        let trunc = |file: &Option<i64>| options.order.or(*file).unwrap_or(crate::numfield::DEFAULT_TRUNC);
        let kind = self.kind();
        Ok(match self {
            Problem::Maximize { expr, params, trunc: t } => {
                let var = choose_variable(expr, params)?;
                let r = maximize(expr, &var, params, trunc(t))?;
                let roots: Vec<String> = r.rational_roots.iter().map(ToString::to_string).collect();
                Solution {
                    kind,
                    summary: format!("critical points of {expr} in {var}: {}", list_or_none(&roots)),
                    result: json!({
                        "variable": r.variable,
                        "critical_equation": r.critical_equation.to_expr().to_string(),
                        "rational_roots": roots,
                    }),
                    derivation: r.derivation,
                }
            }
            Problem::Tangent { curve, point: (x0, y0), trunc: t } => {
                let r = subtangent(curve, x0, y0, trunc(t))?;
                Solution {
                    kind,
                    summary: format!("subtangent at ({x0}, {y0}): t = {}", r.subtangent_t),
                    result: json!({ "subtangent": r.subtangent_t.to_string() }),
                    derivation: r.derivation,
                }
            }
            Problem::ParamTangent { x, y, theta0, trunc: t } => {
                let r = parametric_tangent(x, y, theta0, trunc(t))?;
                let slope = match &r.slope {
                    Coefficient::Exact(q) => json!(q.to_string()),
                    Coefficient::Approx { value, .. } => json!(value),
                };
                Solution {
                    kind,
                    summary: format!("slope at theta0 = {theta0}: {}", r.slope),
                    result: json!({ "slope": slope }),
                    derivation: r.derivation,
                }
            }
            Problem::Refract { setup, tol, trunc: t } => {
                let tol = options.tol.or(*tol).unwrap_or(DEFAULT_TOL);
                let r = refract(setup, tol, trunc(t))?;
                Solution {
                    kind,
                    summary: format!(
                        "x* = {}, theta1 = {}, theta2 = {}, snell residual = {:e}",
                        r.x_star, r.theta1, r.theta2, r.snell_residual
                    ),
                    result: json!({
                        "x_star": r.x_star,
                        "theta1": r.theta1,
                        "theta2": r.theta2,
                        "snell_residual": r.snell_residual,
                        "iterations": r.iterations,
                    }),
                    derivation: r.derivation,
                }
            }
        })
    }
}

fn list_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "none rational".into()
    } else {
        items.join(", ")
    }
}

/// The unknown of a maximize problem: `A` when present, otherwise the only
/// free variable that is not a parameter.
fn choose_variable(expr: &Expr, params: &BTreeMap<String, Rational>) -> Result<String, CliError> {
    let free: Vec<String> = expr.free_vars().into_iter().filter(|v| v != EPSILON && !params.contains_key(v)).collect();
    if free.iter().any(|v| v == "A") {
        return Ok("A".into());
    }
    match free.as_slice() {
        [only] => Ok(only.clone()),
        [] => Err(CliError::Math(FermatError::DegenerateConstant("every variable is a bound parameter".into()))),
        many => Err(CliError::Input(format!(
            "cannot tell the unknown from {}; call it A or bind the others in params",
            many.join(", ")
        ))),
    }
}
