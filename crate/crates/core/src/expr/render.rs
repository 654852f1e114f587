use num_traits::Signed;

use super::ast::Expr;

/// Output notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// The input grammar; always re-parses to the same tree.
    Canonical,
    /// Fermat-like display: juxtaposed products (`2AE`), no spaces around
    /// `+` and `-`.
    Compact,
    /// Hérigone-like display: lower-case letters, explicit `*`, no spaces.
    Herigone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Sum,
    Product,
    Unary,
    Power,
    Atom,
}

pub fn render(e: &Expr, style: Style) -> String {
    Renderer { style }.go(e, true).0
}

struct Renderer {
    style: Style,
}

impl Renderer {
    fn child(&self, e: &Expr, term_start: bool, min: Prec) -> String {
        let (text, prec) = self.go(e, term_start);
        if prec < min {
            let (inner, _) = self.go(e, true);
            format!("({inner})")
        } else {
            text
        }
    }

    fn binop(&self) -> (&'static str, &'static str) {
        match self.style {
            Style::Canonical => (" + ", " - "),
            Style::Compact | Style::Herigone => ("+", "-"),
        }
    }

    fn go(&self, e: &Expr, term_start: bool) -> (String, Prec) {
        match e {
            Expr::Const(q) => {
                let negative = q.is_negative();
                if q.is_integer() {
                    let prec = if negative { Prec::Unary } else { Prec::Atom };
                    (q.to_string(), prec)
                } else if term_start {
                    let prec = if negative { Prec::Unary } else { Prec::Product };
                    (q.to_string(), prec)
                } else {
                    (format!("({q})"), Prec::Atom)
                }
            }
            Expr::Var(v) => {
                let name = if self.style == Style::Herigone { v.to_lowercase() } else { v.clone() };
                (name, Prec::Atom)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (plus, minus) = self.binop();
                let op = if matches!(e, Expr::Add(..)) { plus } else { minus };
                let l = self.child(a, term_start, Prec::Sum);
                let r = self.child(b, true, Prec::Product);
                (format!("{l}{op}{r}"), Prec::Sum)
            }
            Expr::Mul(a, b) => {
                let l = self.child(a, term_start, Prec::Product);
                let r = self.child(b, false, Prec::Unary);
                let juxtapose = self.style == Style::Compact && ends_with_letter_or_int(a) && starts_with_letter(b);
                let op = if juxtapose { "" } else { "*" };
                (format!("{l}{op}{r}"), Prec::Product)
            }
            Expr::Div(a, b) => {
                let l = self.child(a, term_start, Prec::Product);
                let mut r = self.child(b, false, Prec::Unary);
                let int_over_int = matches!(a.as_ref(), Expr::Const(q) if q.is_integer())
                    && matches!(b.as_ref(), Expr::Const(q) if q.is_integer() && q.is_positive());
                if int_over_int {
                    r = format!("({r})");
                }
                (format!("{l}/{r}"), Prec::Product)
            }
            Expr::Pow(a, k) => {
                let base = self.child(a, true, Prec::Atom);
                (format!("{base}^{k}"), Prec::Power)
            }
            Expr::Neg(a) => {
                let inner = self.child(a, term_start, Prec::Unary);
                (format!("-{inner}"), Prec::Unary)
            }
            Expr::Func(f, a) => {
                let (inner, _) = self.go(a, true);
                (format!("{}({inner})", f.name()), Prec::Atom)
            }
        }
    }
}

fn single_letter(e: &Expr) -> bool {
    matches!(e, Expr::Var(v) if v.len() == 1)
}

fn ends_with_letter_or_int(e: &Expr) -> bool {
    match e {
        Expr::Const(q) => q.is_integer() && !q.is_negative(),
        Expr::Mul(_, b) => single_letter(b),
        Expr::Neg(a) => ends_with_letter_or_int(a),
        other => single_letter(other),
    }
}

fn starts_with_letter(e: &Expr) -> bool {
    match e {
        Expr::Pow(base, _) => single_letter(base),
        other => single_letter(other),
    }
}
