//! Turning positioned syntax trees into canonical expressions.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::error::{DslError, DslErrorKind, Pos};
use super::parser::{Ast, BinOp};
use crate::symexpr::{Exponent, Expr, Func, Symbol};

/// Largest denominator accepted in a rational exponent.
pub const MAX_EXPONENT_DENOMINATOR: i64 = 4;
/// Largest magnitude accepted for an exponent.
pub const MAX_EXPONENT: i64 = 32;
/// Upper bound on the number of terms an expansion may produce.
const MAX_TERMS: u128 = 50_000;

pub(crate) const FUNCTIONS: [&str; 5] = ["exp", "log", "sin", "cos", "sqrt"];

/// Which identifiers may appear in an expression.
pub(crate) enum Scope<'a> {
    /// Any identifier that is not a function name becomes a symbol.
    Open,
    /// Only the listed symbols; parameter values are used where a constant is
    /// required (exponents).
    Closed { symbols: &'a BTreeSet<String>, params: &'a BTreeMap<String, BigRational> },
}

pub(crate) fn resolve(ast: &Ast, scope: &Scope<'_>) -> Result<Expr, DslError> {
    match ast {
        Ast::Num(n) => Ok(Expr::rational(n.clone())),
        Ast::Ident(name, pos) => {
            if FUNCTIONS.contains(&name.as_str()) {
                return Err(DslError::syntax(*pos, format!("function `{name}` needs a parenthesized argument")));
            }
            match scope {
                Scope::Open => Ok(Expr::sym(name)),
                Scope::Closed { symbols, .. } if symbols.contains(name) => Ok(Expr::sym(name)),
                Scope::Closed { .. } => Err(DslError::new(
                    DslErrorKind::UnknownIdentifier,
                    *pos,
                    format!("unknown identifier `{name}` (not a chart coordinate or parameter)"),
                )),
            }
        }
        Ast::Neg(a) => Ok(-&resolve(a, scope)?),
        Ast::Bin(op, a, b, pos) => {
            let l = resolve(a, scope)?;
            let r = resolve(b, scope)?;
            Ok(match op {
                BinOp::Add => &l + &r,
                BinOp::Sub => &l - &r,
                BinOp::Mul => {
                    guard_terms(l.term_count() as u128 * r.term_count() as u128, *pos)?;
                    &l * &r
                }
                BinOp::Div => {
                    if r.is_zero() {
                        return Err(DslError::new(DslErrorKind::Invalid, *pos, "division by zero"));
                    }
                    &l * &r.recip()
                }
            })
        }
        Ast::Pow(b, e, pos) => {
            let base = resolve(b, scope)?;
            let k = constant_exponent(e, scope, *pos)?;
            if base.is_zero() && k <= Exponent::zero() {
                return Err(DslError::new(DslErrorKind::Invalid, *pos, "zero raised to a non-positive power"));
            }
            if !k.is_integer() {
                if let Some(c) = base.as_rational() {
                    if c.is_negative() {
                        return Err(DslError::new(DslErrorKind::Invalid, *pos, "fractional power of a negative constant"));
                    }
                }
            }
            if k.is_integer() && k.to_integer() > 1 {
                guard_terms(expansion_bound(base.term_count() as u128, k.to_integer() as u128), *pos)?;
            }
            Ok(base.pow(k))
        }
        Ast::Call(name, arg, pos) => {
            let a = resolve(arg, scope)?;
            let f = match name.as_str() {
                "exp" => Func::Exp,
                "log" => Func::Log,
                "sin" => Func::Sin,
                "cos" => Func::Cos,
                "sqrt" => {
                    if a.as_rational().is_some_and(|c| c.is_negative()) {
                        return Err(DslError::new(DslErrorKind::Invalid, *pos, "square root of a negative constant"));
                    }
                    return Ok(a.sqrt());
                }
                other => {
                    return Err(DslError::new(
                        DslErrorKind::UnknownIdentifier,
                        *pos,
                        format!("unknown function `{other}` (expected exp, log, sin, cos or sqrt)"),
                    ))
                }
            };
            if f == Func::Log && a.as_rational().is_some_and(|c| !c.is_positive()) {
                return Err(DslError::new(DslErrorKind::Invalid, *pos, "logarithm of a non-positive constant"));
            }
            Ok(Expr::func(f, a))
        }
    }
}

/// Evaluate an expression that must be a rational constant once parameter
/// values are substituted.
pub(crate) fn constant_value(ast: &Ast, scope: &Scope<'_>, pos: Pos, what: &str) -> Result<BigRational, DslError> {
    let e = resolve(ast, scope)?;
    let e = match scope {
        Scope::Closed { params, .. } if !params.is_empty() => {
            let map = params.iter().map(|(k, v)| (Symbol::new(k), Expr::rational(v.clone()))).collect();
            e.subs(&map)
        }
        _ => e,
    };
    e.as_rational()
        .ok_or_else(|| DslError::new(DslErrorKind::Invalid, pos, format!("{what} must be a rational constant, got `{e}`")))
}

fn constant_exponent(ast: &Ast, scope: &Scope<'_>, pos: Pos) -> Result<Exponent, DslError> {
    let r = constant_value(ast, scope, pos, "exponent")?;
    let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) else {
        return Err(DslError::new(DslErrorKind::Invalid, pos, "exponent out of range"));
    };
    if d > MAX_EXPONENT_DENOMINATOR {
        return Err(DslError::new(
            DslErrorKind::Invalid,
            pos,
            format!("exponent denominator {d} exceeds {MAX_EXPONENT_DENOMINATOR}"),
        ));
    }
    if n.abs() > MAX_EXPONENT * d {
        return Err(DslError::new(DslErrorKind::Invalid, pos, format!("exponent magnitude exceeds {MAX_EXPONENT}")));
    }
    Ok(Exponent::new(n, d))
}

/// Number of monomials of degree `k` in `t` variables, an upper bound on
/// the size of `(sum of t terms)^k`.
fn expansion_bound(t: u128, k: u128) -> u128 {
    if t <= 1 {
        return 1;
    }
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.saturating_mul(t - 1 + i) / i;
        if acc > MAX_TERMS {
            return acc;
        }
    }
    acc
}

fn guard_terms(estimate: u128, pos: Pos) -> Result<(), DslError> {
    if estimate > MAX_TERMS {
        return Err(DslError::new(DslErrorKind::Invalid, pos, "expression expands to too many terms"));
    }
    Ok(())
}

pub(crate) fn to_usize_index(r: &BigRational) -> Option<usize> {
    if r.is_integer() {
        r.to_integer().to_usize()
    } else {
        None
    }
}
