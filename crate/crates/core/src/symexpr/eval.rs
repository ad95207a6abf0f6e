use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use thiserror::Error;

use super::expr::{rat_to_f64, Atom, Expr, Exponent, Func, Symbol};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("symbol `{0}` is not bound at the evaluation point")]
    Unbound(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Assignment of numeric values to symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NumericPoint(BTreeMap<Symbol, f64>);

impl NumericPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.0.insert(Symbol::new(name), value);
        self
    }

    pub fn set(&mut self, s: Symbol, value: f64) {
        self.0.insert(s, value);
    }

    pub fn get(&self, s: &Symbol) -> Option<f64> {
        self.0.get(s).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, f64)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Symbol, f64)> for NumericPoint {
    fn from_iter<I: IntoIterator<Item = (Symbol, f64)>>(iter: I) -> Self {
        NumericPoint(iter.into_iter().collect())
    }
}

impl Expr {
    /// IEEE double evaluation.
    pub fn eval(&self, p: &NumericPoint) -> Result<f64, EvalError> {
        self.eval_scaled(p).map(|(v, _)| v)
    }

    /// Value together with the largest magnitude of any summand met during
    /// evaluation, which bounds the cancellation the result went through.
    pub fn eval_scaled(&self, p: &NumericPoint) -> Result<(f64, f64), EvalError> {
        let mut total = 0.0;
        let mut scale: f64 = 0.0;
        for (m, c) in self.terms() {
            let mut t = rat_to_f64(c);
            for (a, e) in &m.0 {
                let (base, s) = eval_atom(a, p)?;
                scale = scale.max(s);
                t *= pow_f64(base, *e)?;
            }
            scale = scale.max(t.abs());
            total += t;
        }
        if !total.is_finite() {
            return Err(EvalError::Domain("non-finite value".into()));
        }
        Ok((total, scale.max(total.abs())))
    }
}

fn eval_atom(a: &Atom, p: &NumericPoint) -> Result<(f64, f64), EvalError> {
    match a {
        Atom::Sym(s) => p
            .get(s)
            .map(|v| (v, v.abs()))
            .ok_or_else(|| EvalError::Unbound(s.name().to_string())),
        Atom::Func(f, arg) => {
            let (x, s) = arg.eval_scaled(p)?;
            if *f == Func::Log && x <= 0.0 {
                return Err(EvalError::Domain(format!("log of non-positive value {x}")));
            }
            let v = f.apply_f64(x);
            if !v.is_finite() {
                return Err(EvalError::Domain(format!("{}({x}) is not finite", f.name())));
            }
            Ok((v, s.max(v.abs())))
        }
        Atom::Group(b) => b.eval_scaled(p),
    }
}

fn pow_f64(base: f64, e: Exponent) -> Result<f64, EvalError> {
    if e.is_integer() {
        let n = e.to_integer();
        if base == 0.0 && n < 0 {
            return Err(EvalError::Domain("division by zero".into()));
        }
        return Ok(match n.to_i32() {
            Some(k) => base.powi(k),
            None => base.powf(n as f64),
        });
    }
    if base < 0.0 {
        return Err(EvalError::Domain(format!("fractional power of negative value {base}")));
    }
    if base == 0.0 && e < Exponent::from_integer(0) {
        return Err(EvalError::Domain("division by zero".into()));
    }
    Ok(base.powf(*e.numer() as f64 / *e.denom() as f64))
}

/// Evaluate `e` at `p`.
pub fn evaluate(e: &Expr, p: &NumericPoint) -> Result<f64, EvalError> {
    e.eval(p)
}
