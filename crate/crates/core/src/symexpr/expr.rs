//! Canonical expression representation.
//!
//! Every [`Expr`] is stored fully expanded: a finite sum of rational
//! coefficients times monomials, where a monomial is a sorted product of
//! atoms raised to nonzero rational exponents. Atoms are symbols, opaque
//! function applications, or *groups* (a non-atomic subexpression raised to a
//! power that cannot be multiplied out, e.g. `(x + 1)^(-1)` or `(x^2)^(1/2)`).
//!
//! Because construction always goes through the normalizing constructors,
//! two polynomials over the rationals that are equal as polynomials have the
//! same representation, and `Eq` is structural equality of canonical forms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exponent attached to an atom inside a monomial.
pub type Exponent = Rational64;

/// A named variable: chart coordinate or symbolic parameter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// Transcendental functions kept as opaque nodes. `sqrt` is not listed: it
/// is represented as a power with exponent 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn apply_f64(self, x: f64) -> f64 {
        match self {
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub(crate) enum Atom {
    Sym(Symbol),
    Func(Func, Expr),
    /// Non-atomic base; the exponent lives in the enclosing monomial and is
    /// never a positive integer (those are multiplied out).
    Group(Expr),
}

/// Sorted product of atoms with nonzero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub(crate) struct Monomial(pub(crate) Vec<(Atom, Exponent)>);

impl Monomial {
    pub(crate) fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub(crate) struct Poly {
    pub(crate) terms: BTreeMap<Monomial, BigRational>,
}

/// Immutable, canonical symbolic expression. Cheap to clone.
#[derive(Clone)]
pub struct Expr(pub(crate) Arc<Poly>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Expr {}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.cmp(&other.0)
    }
}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

/// Structural view of a canonical expression, in the vocabulary of an
/// ordinary expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprView {
    Rational(BigRational),
    Symbol(Symbol),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Expr, Exponent),
    Apply(Func, Expr),
}

pub(crate) fn rat_int(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

fn rat_powi(base: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let mut b = if e < 0 { base.recip() } else { base.clone() };
    let mut n = e.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &b;
        }
        n >>= 1;
        if n > 0 {
            b = &b * &b;
        }
    }
    acc
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

fn is_positive_integer(e: &Exponent) -> bool {
    e.is_integer() && *e.numer() > 0
}

impl Expr {
    fn from_poly(p: Poly) -> Expr {
        Expr(Arc::new(p))
    }

    pub fn zero() -> Expr {
        Expr::from_poly(Poly::default())
    }

    pub fn one() -> Expr {
        Expr::rational(BigRational::one())
    }

    pub fn int(i: i64) -> Expr {
        Expr::rational(rat_int(i))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(r: BigRational) -> Expr {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::default(), r);
        }
        Expr::from_poly(Poly { terms })
    }

    pub fn sym(name: &str) -> Expr {
        Expr::symbol(&Symbol::new(name))
    }

    pub fn symbol(s: &Symbol) -> Expr {
        Expr::atom(Atom::Sym(s.clone()))
    }

    pub(crate) fn atom(a: Atom) -> Expr {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![(a, Exponent::one())]), BigRational::one());
        Expr::from_poly(Poly { terms })
    }

    /// Build `coef * prod(atom^exp)`, normalizing the factor list.
    pub(crate) fn term(coef: BigRational, mut factors: Vec<(Atom, Exponent)>) -> Expr {
        if coef.is_zero() {
            return Expr::zero();
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Atom, Exponent)> = Vec::with_capacity(factors.len());
        for (a, e) in factors {
            match merged.last_mut() {
                Some((last, le)) if *last == a => *le += e,
                _ => merged.push((a, e)),
            }
        }
        let mut pending = Vec::new();
        let mut kept = Vec::with_capacity(merged.len());
        for (a, e) in merged {
            if e.is_zero() {
                continue;
            }
            match a {
                Atom::Group(base) if is_positive_integer(&e) => pending.push((base, e.to_integer())),
                other => kept.push((other, e)),
            }
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(kept), coef);
        let mut out = Expr::from_poly(Poly { terms });
        for (base, n) in pending {
            out = &out * &base.powi(n);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The constant value, if the expression is a rational constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.0.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.0.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        let (m, c) = self.single_term()?;
        match m.0.as_slice() {
            [(Atom::Sym(s), e)] if c.is_one() && e.is_one() => Some(s),
            _ => None,
        }
    }

    pub(crate) fn single_term(&self) -> Option<(&Monomial, &BigRational)> {
        if self.0.terms.len() == 1 {
            self.0.terms.iter().next()
        } else {
            None
        }
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.0.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.0.terms.len()
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        if let Some(c) = arg.as_rational() {
            match f {
                Func::Exp | Func::Cos if c.is_zero() => return Expr::one(),
                Func::Sin if c.is_zero() => return Expr::zero(),
                Func::Log if c.is_one() => return Expr::zero(),
                _ => {}
            }
        }
        Expr::atom(Atom::Func(f, arg))
    }

    pub fn exp(&self) -> Expr {
        Expr::func(Func::Exp, self.clone())
    }

    pub fn log(&self) -> Expr {
        Expr::func(Func::Log, self.clone())
    }

    pub fn sin(&self) -> Expr {
        Expr::func(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Expr {
        Expr::func(Func::Cos, self.clone())
    }

    pub fn sqrt(&self) -> Expr {
        self.pow(Exponent::new(1, 2))
    }

    pub fn powi(&self, n: i64) -> Expr {
        self.pow(Exponent::from_integer(n))
    }

    /// Multiplicative inverse.
    ///
    /// Panics on the zero expression.
    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    /// `None` when raising zero to a non-positive power.
    pub fn checked_pow(&self, k: Exponent) -> Option<Expr> {
        if self.is_zero() && k <= Exponent::zero() && !k.is_zero() {
            return None;
        }
        Some(self.pow(k))
    }

    /// Raise to a rational power.
    ///
    /// Positive integer powers are multiplied out; negative integer powers of
    /// monomials distribute over the factors; anything else becomes a group
    /// atom. Panics when raising zero to a negative power.
    pub fn pow(&self, k: Exponent) -> Expr {
        if k.is_zero() {
            return Expr::one();
        }
        if k.is_one() {
            return self.clone();
        }
        if self.is_zero() {
            assert!(k > Exponent::zero(), "zero raised to a negative power");
            return Expr::zero();
        }
        if is_positive_integer(&k) {
            let mut n = k.to_integer();
            let mut acc = Expr::one();
            let mut base = self.clone();
            while n > 0 {
                if n & 1 == 1 {
                    acc = &acc * &base;
                }
                n >>= 1;
                if n > 0 {
                    base = &base * &base;
                }
            }
            return acc;
        }
        if let Some((m, c)) = self.single_term() {
            if k.is_integer() {
                let n = k.to_integer();
                let coef = rat_powi(c, n);
                let factors = m.0.iter().map(|(a, e)| (a.clone(), *e * k)).collect();
                return Expr::term(coef, factors);
            }
            if m.is_one() {
                return Expr::const_root(c, k);
            }
            if c.is_one() && m.0.len() == 1 {
                let (a, e) = &m.0[0];
                if e.is_one() || !e.is_integer() {
                    return Expr::term(BigRational::one(), vec![(a.clone(), *e * k)]);
                }
            }
        }
        Expr::term(BigRational::one(), vec![(Atom::Group(self.clone()), k)])
    }

    fn const_root(c: &BigRational, k: Exponent) -> Expr {
        let den = *k.denom() as u32;
        if c.is_positive() {
            if let (Some(p), Some(q)) = (exact_root(c.numer(), den), exact_root(c.denom(), den)) {
                let root = BigRational::new(p, q);
                return Expr::rational(rat_powi(&root, *k.numer()));
            }
        }
        Expr::term(BigRational::one(), vec![(Atom::Group(Expr::rational(c.clone())), k)])
    }

    /// All symbols occurring anywhere, including inside function arguments.
    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        for (m, _) in self.terms() {
            for (a, _) in &m.0 {
                match a {
                    Atom::Sym(s) => {
                        out.insert(s.clone());
                    }
                    Atom::Func(_, arg) | Atom::Group(arg) => arg.collect_symbols(out),
                }
            }
        }
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        self.free_symbols().contains(s)
    }

    /// True when the expression contains a function node or a fractional
    /// power, i.e. lies outside the rational-function fragment.
    pub fn is_transcendental(&self) -> bool {
        self.terms().any(|(m, _)| {
            m.0.iter().any(|(a, e)| {
                !e.is_integer()
                    || match a {
                        Atom::Sym(_) => false,
                        Atom::Func(..) => true,
                        Atom::Group(b) => b.is_transcendental(),
                    }
            })
        })
    }

    /// Polynomial in its symbols: no functions, groups, or negative/fractional exponents.
    pub fn is_polynomial(&self) -> bool {
        self.terms().all(|(m, _)| {
            m.0.iter()
                .all(|(a, e)| matches!(a, Atom::Sym(_)) && is_positive_integer(e))
        })
    }

    /// Total degree in the given symbol, for polynomial expressions.
    pub fn degree_in(&self, s: &Symbol) -> Option<i64> {
        if !self.is_polynomial() {
            return None;
        }
        Some(
            self.terms()
                .map(|(m, _)| {
                    m.0.iter()
                        .filter(|(a, _)| matches!(a, Atom::Sym(x) if x == s))
                        .map(|(_, e)| e.to_integer())
                        .sum::<i64>()
                })
                .max()
                .unwrap_or(0),
        )
    }

    /// Coefficients of a polynomial in one variable `s`, lowest degree first.
    /// `None` unless the expression is polynomial in `s` with coefficients
    /// free of `s`.
    pub fn coefficients_in(&self, s: &Symbol) -> Option<Vec<Expr>> {
        let mut by_degree: BTreeMap<i64, Expr> = BTreeMap::new();
        for (m, c) in self.terms() {
            let mut deg = 0;
            let mut rest = Vec::new();
            for (a, e) in &m.0 {
                match a {
                    Atom::Sym(x) if x == s => {
                        if !is_positive_integer(e) {
                            return None;
                        }
                        deg = e.to_integer();
                    }
                    other => {
                        if let Atom::Func(_, arg) | Atom::Group(arg) = other {
                            if arg.depends_on(s) {
                                return None;
                            }
                        }
                        rest.push((other.clone(), *e));
                    }
                }
            }
            let t = Expr::term(c.clone(), rest);
            let slot = by_degree.entry(deg).or_insert_with(Expr::zero);
            *slot = &*slot + &t;
        }
        let top = by_degree.keys().next_back().copied().unwrap_or(0);
        Some((0..=top).map(|d| by_degree.remove(&d).unwrap_or_else(Expr::zero)).collect())
    }

    /// Structural view in expression-tree vocabulary.
    pub fn view(&self) -> ExprView {
        match self.0.terms.len() {
            0 => ExprView::Rational(BigRational::zero()),
            1 => {
                let (m, c) = self.0.terms.iter().next().unwrap();
                if m.is_one() {
                    return ExprView::Rational(c.clone());
                }
                if c.is_one() && m.0.len() == 1 {
                    let (a, e) = &m.0[0];
                    if e.is_one() {
                        return match a {
                            Atom::Sym(s) => ExprView::Symbol(s.clone()),
                            Atom::Func(f, arg) => ExprView::Apply(*f, arg.clone()),
                            Atom::Group(b) => ExprView::Power(b.clone(), *e),
                        };
                    }
                    return ExprView::Power(atom_base(a), *e);
                }
                let mut factors = Vec::with_capacity(m.0.len() + 1);
                if !c.is_one() {
                    factors.push(Expr::rational(c.clone()));
                }
                for (a, e) in &m.0 {
                    factors.push(Expr::term(BigRational::one(), vec![(a.clone(), *e)]));
                }
                ExprView::Product(factors)
            }
            _ => ExprView::Sum(
                self.0
                    .terms
                    .iter()
                    .map(|(m, c)| Expr::term(c.clone(), m.0.clone()))
                    .collect(),
            ),
        }
    }

    /// Approximate node count, used for diagnostics and size guards.
    pub fn size(&self) -> usize {
        self.terms()
            .map(|(m, _)| {
                1 + m
                    .0
                    .iter()
                    .map(|(a, _)| match a {
                        Atom::Sym(_) => 1,
                        Atom::Func(_, x) | Atom::Group(x) => 1 + x.size(),
                    })
                    .sum::<usize>()
            })
            .sum()
    }
}

fn atom_base(a: &Atom) -> Expr {
    match a {
        Atom::Group(b) => b.clone(),
        other => Expr::atom(other.clone()),
    }
}

impl Poly {
    fn add_term(&mut self, m: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// Product of two monomials; group atoms whose exponent becomes a positive
/// integer are returned separately for expansion.
fn mono_mul(a: &Monomial, b: &Monomial) -> (Monomial, Vec<(Expr, i64)>) {
    let mut out = Vec::with_capacity(a.0.len() + b.0.len());
    let mut pending = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut push = |atom: Atom, e: Exponent, out: &mut Vec<(Atom, Exponent)>| {
        if e.is_zero() {
            return;
        }
        match atom {
            Atom::Group(base) if is_positive_integer(&e) => pending.push((base, e.to_integer())),
            other => out.push((other, e)),
        }
    };
    while i < a.0.len() && j < b.0.len() {
        match a.0[i].0.cmp(&b.0[j].0) {
            Ordering::Less => {
                out.push(a.0[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b.0[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let e = a.0[i].1 + b.0[j].1;
                push(a.0[i].0.clone(), e, &mut out);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a.0[i..]);
    out.extend_from_slice(&b.0[j..]);
    (Monomial(out), pending)
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (big, small) = if self.0.terms.len() >= rhs.0.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut p = (*big.0).clone();
        for (m, c) in small.terms() {
            p.add_term(m.clone(), c.clone());
        }
        Expr::from_poly(p)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        let terms = self.terms().map(|(m, c)| (m.clone(), -c)).collect();
        Expr::from_poly(Poly { terms })
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut p = Poly::default();
        let mut deferred: Vec<Expr> = Vec::new();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                let c = ca * cb;
                let (m, pending) = mono_mul(ma, mb);
                if pending.is_empty() {
                    p.add_term(m, c);
                } else {
                    let mut t = Expr::term(c, m.0);
                    for (base, n) in pending {
                        t = &t * &base.powi(n);
                    }
                    deferred.push(t);
                }
            }
        }
        let mut out = Expr::from_poly(p);
        for t in deferred {
            out = &out + &t;
        }
        out
    }
}

impl Div for &Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        self * &rhs.recip()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
        impl $tr<i64> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: i64) -> Expr {
                self.$m(&Expr::int(rhs))
            }
        }
        impl $tr<i64> for Expr {
            type Output = Expr;
            fn $m(self, rhs: i64) -> Expr {
                (&self).$m(&Expr::int(rhs))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut p = Poly::default();
        let mut deferred = Expr::zero();
        for e in iter {
            match Arc::try_unwrap(e.0) {
                Ok(poly) => {
                    for (m, c) in poly.terms {
                        p.add_term(m, c);
                    }
                }
                Err(shared) => deferred = &deferred + &Expr(shared),
            }
        }
        &Expr::from_poly(p) + &deferred
    }
}

impl From<i64> for Expr {
    fn from(i: i64) -> Self {
        Expr::int(i)
    }
}

impl From<BigRational> for Expr {
    fn from(r: BigRational) -> Self {
        Expr::rational(r)
    }
}

/// Rational coefficient as f64, saturating for huge magnitudes.
pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}
