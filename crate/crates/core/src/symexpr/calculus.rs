use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use super::expr::{Atom, Expr, Exponent, Func, Symbol};

impl Expr {
    /// Partial derivative with respect to `var`. Symbols other than `var`
    /// (including parameters) are treated as independent of it.
    pub fn diff(&self, var: &Symbol) -> Expr {
        let mut parts = Vec::new();
        for (m, c) in self.terms() {
            for (i, (atom, e)) in m.0.iter().enumerate() {
                let inner = atom_derivative(atom, var);
                if inner.is_zero() {
                    continue;
                }
                let mut factors = m.0.clone();
                factors[i].1 = *e - Exponent::one();
                let coef = c * BigRational::new((*e.numer()).into(), (*e.denom()).into());
                parts.push(&Expr::term(coef, factors) * &inner);
            }
        }
        parts.into_iter().sum()
    }

    /// Simultaneous substitution of symbols by expressions.
    pub fn subs(&self, map: &BTreeMap<Symbol, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        self.terms()
            .map(|(m, c)| {
                m.0.iter().fold(Expr::rational(c.clone()), |acc, (a, e)| {
                    let base = match a {
                        Atom::Sym(s) => map.get(s).cloned().unwrap_or_else(|| Expr::symbol(s)),
                        Atom::Func(f, arg) => Expr::func(*f, arg.subs(map)),
                        Atom::Group(b) => b.subs(map),
                    };
                    &acc * &base.pow(*e)
                })
            })
            .sum()
    }

    /// Rebuild the expression bottom-up through the normalizing constructors.
    pub(crate) fn rebuild(&self) -> Expr {
        self.terms()
            .map(|(m, c)| {
                m.0.iter().fold(Expr::rational(c.clone()), |acc, (a, e)| {
                    let base = match a {
                        Atom::Sym(s) => Expr::symbol(s),
                        Atom::Func(f, arg) => Expr::func(*f, arg.rebuild()),
                        Atom::Group(b) => b.rebuild(),
                    };
                    &acc * &base.pow(*e)
                })
            })
            .sum()
    }
}

fn atom_derivative(atom: &Atom, var: &Symbol) -> Expr {
    match atom {
        Atom::Sym(s) => {
            if s == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Atom::Group(base) => base.diff(var),
        Atom::Func(f, arg) => {
            let d = arg.diff(var);
            if d.is_zero() {
                return Expr::zero();
            }
            let outer = match f {
                Func::Exp => Expr::func(Func::Exp, arg.clone()),
                Func::Log => arg.recip(),
                Func::Sin => Expr::func(Func::Cos, arg.clone()),
                Func::Cos => -&Expr::func(Func::Sin, arg.clone()),
            };
            &outer * &d
        }
    }
}

/// `∂e/∂var`, canonical.
pub fn differentiate(e: &Expr, var: &Symbol) -> Expr {
    e.diff(var)
}

/// Repeated partial derivative along the given sequence of variables.
pub fn differentiate_n(e: &Expr, vars: &[&Symbol]) -> Expr {
    vars.iter().fold(e.clone(), |acc, v| acc.diff(v))
}

/// Canonical form of `e`. Expressions are kept canonical at construction, so
/// this re-normalizes from the leaves and is idempotent.
pub fn simplify(e: &Expr) -> Expr {
    e.rebuild()
}

/// Integrate a polynomial in `var` (coefficients free of `var`) with zero
/// constant term. `None` when the expression is not of that shape.
pub fn antiderivative_polynomial(e: &Expr, var: &Symbol) -> Option<Expr> {
    let coeffs = e.coefficients_in(var)?;
    let x = Expr::symbol(var);
    let mut out = Expr::zero();
    for (k, c) in coeffs.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k1 = (k + 1) as i64;
        out = &out + &(&c * &(&x.powi(k1) * &Expr::rational(BigRational::new(1.into(), k1.into()))));
    }
    Some(out)
}
