use num_traits::{One, Signed, Zero};

use super::coefficient::{Coefficient, Mode};
use super::rational::{sqrt_rational, Rational};
use super::{NumError, Result, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transcendental {
    Sin,
    Cos,
    Sqrt,
}

impl Transcendental {
    pub fn name(self) -> &'static str {
        match self {
            Transcendental::Sin => "sin",
            Transcendental::Cos => "cos",
            Transcendental::Sqrt => "sqrt",
        }
    }
}

/// Applies `f` to `c + h` (with `h` infinitesimal) through its Taylor
/// expansion at `c`, truncated at `a.trunc`.
pub fn taylor_apply(f: Transcendental, a: &Series) -> Result<Series> {
    if !a.is_finite() {
        return Err(NumError::InfiniteValue);
    }
    let mode = a.mode();
    let trunc = a.trunc();
    let c = a.coeff(0);
    let h =
        Series::from_terms(mode, trunc, a.is_exact(), a.terms().filter(|(k, _)| *k >= 1).map(|(k, x)| (k, x.clone())));
    let order = trunc.max(0) as usize;
    let derivs = match mode {
        Mode::Exact => exact_coefficients(f, c.as_exact().expect("exact mode"), order, h.is_zero())?,
        Mode::Approx { .. } => approx_coefficients(f, c.to_f64(), order, h.is_zero(), mode)?,
    };

    // Horner in h: d_0 + h (d_1 + h (d_2 + ...))
    let mut acc = Series::constant(derivs[order].clone(), trunc);
    for d in derivs[..order].iter().rev() {
        acc = acc.mul(&h)?.add(&Series::constant(d.clone(), trunc))?;
    }
    let out = acc.truncated(trunc);
    let terminates = h.is_zero() && a.is_exact();
    Ok(Series::from_terms(mode, trunc, terminates && out.is_exact(), out.terms().map(|(k, x)| (k, x.clone()))))
}

/// `f^(k)(c) / k!` for `k = 0..=order` with exact rationals.
fn exact_coefficients(f: Transcendental, c: &Rational, order: usize, constant_only: bool) -> Result<Vec<Coefficient>> {
    let factorials = factorials(order);
    let out: Vec<Rational> = match f {
        Transcendental::Sin | Transcendental::Cos => {
            if !c.is_zero() {
                return Err(NumError::ExactModeUnsupported(f.name()));
            }
            // derivatives at 0 cycle through sin, cos, -sin, -cos
            let phase = if f == Transcendental::Sin { 0 } else { 1 };
            (0..=order)
                .map(|k| {
                    let v: i64 = [0, 1, 0, -1][(k + phase) % 4];
                    Rational::from_integer(v.into()) / &factorials[k]
                })
                .collect()
        }
        Transcendental::Sqrt => {
            if c.is_negative() {
                return Err(NumError::NegativeSqrtArgument);
            }
            if c.is_zero() {
                if constant_only {
                    return Ok(vec![Coefficient::Exact(Rational::zero()); order + 1]);
                }
                return Err(NumError::SqrtOfInfinitesimal);
            }
            let root = sqrt_rational(c).ok_or(NumError::ExactModeUnsupported(f.name()))?;
            // sqrt(c + h) = root * Σ binom(1/2, k) (h/c)^k
            let half = Rational::new(1.into(), 2.into());
            let mut binom = Rational::one();
            let mut c_pow = Rational::one();
            let mut out = Vec::with_capacity(order + 1);
            for k in 0..=order {
                out.push(&root * &binom / &c_pow);
                let k_r = Rational::from_integer((k as i64).into());
                binom = binom * (&half - &k_r) / (&k_r + Rational::one());
                c_pow *= c;
            }
            out
        }
    };
    Ok(out.into_iter().map(Coefficient::Exact).collect())
}

fn approx_coefficients(
    f: Transcendental,
    c: f64,
    order: usize,
    constant_only: bool,
    mode: Mode,
) -> Result<Vec<Coefficient>> {
    let Mode::Approx { eps } = mode else { unreachable!("approximate mode") };
    let mut out = Vec::with_capacity(order + 1);
    match f {
        Transcendental::Sin | Transcendental::Cos => {
            let cycle = [c.sin(), c.cos(), -c.sin(), -c.cos()];
            let phase = if f == Transcendental::Sin { 0 } else { 1 };
            let mut fact = 1.0;
            for k in 0..=order {
                if k > 0 {
                    fact *= k as f64;
                }
                out.push(cycle[(k + phase) % 4] / fact);
            }
        }
        Transcendental::Sqrt => {
            if c < -eps {
                return Err(NumError::NegativeSqrtArgument);
            }
            if c.abs() <= eps {
                if constant_only {
                    return Ok(vec![Coefficient::Approx { value: 0.0, eps }; order + 1]);
                }
                return Err(NumError::SqrtOfInfinitesimal);
            }
            let root = c.sqrt();
            let mut binom = 1.0;
            let mut c_pow = 1.0;
            for k in 0..=order {
                out.push(root * binom / c_pow);
                binom *= (0.5 - k as f64) / (k as f64 + 1.0);
                c_pow *= c;
            }
        }
    }
    Ok(out.into_iter().map(|value| Coefficient::Approx { value, eps }).collect())
}

fn factorials(n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for k in 1..=n {
        let next = &out[k - 1] * Rational::from_integer((k as i64).into());
        out.push(next);
    }
    out
}
