//! Zero recognition: exact for the rational-function fragment, seeded
//! sampling once transcendental nodes are involved.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::eval::{EvalError, NumericPoint};
use super::expr::{Atom, Expr, Exponent, Monomial};

/// Default seed for sampled zero tests.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZeroStatus {
    Zero,
    NonZero,
    ProbablyZero,
    ProbablyNonZero,
}

impl ZeroStatus {
    /// Zero or ProbablyZero.
    pub fn vanishes(self) -> bool {
        matches!(self, ZeroStatus::Zero | ZeroStatus::ProbablyZero)
    }

    pub fn is_exact(self) -> bool {
        matches!(self, ZeroStatus::Zero | ZeroStatus::NonZero)
    }

    /// Combine verdicts of several components of one object.
    pub fn combine(self, other: ZeroStatus) -> ZeroStatus {
        use ZeroStatus::*;
        match (self, other) {
            (NonZero, _) | (_, NonZero) => NonZero,
            (ProbablyNonZero, _) | (_, ProbablyNonZero) => ProbablyNonZero,
            (ProbablyZero, _) | (_, ProbablyZero) => ProbablyZero,
            (Zero, Zero) => Zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("gave up after {resamples} resamples hitting domain errors (last: {last})")]
    TooManyResamples { resamples: usize, last: EvalError },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Outcome of a zero test with its numeric evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroVerdict {
    pub status: ZeroStatus,
    /// Largest |value| over the sample points; 0 for exact verdicts.
    pub max_abs: f64,
    pub samples: usize,
    pub resamples: usize,
}

impl ZeroVerdict {
    fn exact(status: ZeroStatus) -> Self {
        ZeroVerdict { status, max_abs: 0.0, samples: 0, resamples: 0 }
    }
}

/// Parameters of the sampled zero test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroTest {
    pub seed: u64,
    pub samples: usize,
    pub max_resamples: usize,
    pub rel_tol: f64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest { seed: DEFAULT_SEED, samples: 20, max_resamples: 100, rel_tol: 1e-9 }
    }
}

impl ZeroTest {
    pub fn with_seed(seed: u64) -> Self {
        ZeroTest { seed, ..Self::default() }
    }

    pub fn check(&self, e: &Expr) -> Result<ZeroVerdict, SampleError> {
        if e.is_zero() {
            return Ok(ZeroVerdict::exact(ZeroStatus::Zero));
        }
        let (num, _den) = rational_parts(e);
        if num.is_zero() {
            return Ok(ZeroVerdict::exact(ZeroStatus::Zero));
        }
        if !num.is_transcendental() && !e.is_transcendental() {
            return Ok(ZeroVerdict::exact(ZeroStatus::NonZero));
        }
        self.sample(e)
    }

    /// Evaluate at seeded pseudorandom points in [-2,-0.1] ∪ [0.1,2].
    pub fn sample(&self, e: &Expr) -> Result<ZeroVerdict, SampleError> {
        let symbols: Vec<_> = e.free_symbols().into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut max_abs: f64 = 0.0;
        let mut vanishing = true;
        let mut resamples = 0;
        let mut taken = 0;
        while taken < self.samples {
            let p: NumericPoint = symbols
                .iter()
                .map(|s| {
                    let mag = rng.random_range(0.1..=2.0);
                    let v = if rng.random_bool(0.5) { mag } else { -mag };
                    (s.clone(), v)
                })
                .collect();
            match e.eval_scaled(&p) {
                Ok((v, scale)) => {
                    taken += 1;
                    max_abs = max_abs.max(v.abs());
                    if v.abs() >= self.rel_tol * (1.0 + scale) {
                        vanishing = false;
                    }
                }
                Err(err @ EvalError::Domain(_)) => {
                    resamples += 1;
                    if resamples > self.max_resamples {
                        return Err(SampleError::TooManyResamples { resamples, last: err });
                    }
                }
                Err(err) => return Err(err.into()),
            }
            if symbols.is_empty() {
                break;
            }
        }
        let status = if vanishing { ZeroStatus::ProbablyZero } else { ZeroStatus::ProbablyNonZero };
        Ok(ZeroVerdict { status, max_abs, samples: taken, resamples })
    }
}

/// Decide whether `e` vanishes identically, with the default test parameters.
pub fn is_zero(e: &Expr) -> Result<ZeroStatus, SampleError> {
    ZeroTest::default().check(e).map(|v| v.status)
}

/// Split into numerator and denominator so that the denominator carries
/// every negative integer power of a symbol or group. Function atoms and
/// fractional powers stay in the numerator as opaque indeterminates, so a
/// zero numerator certifies that `e` vanishes identically.
pub(crate) fn rational_parts(e: &Expr) -> (Expr, Expr) {
    let mut by_den: BTreeMap<Expr, Expr> = BTreeMap::new();
    for (m, c) in e.terms() {
        let (n, d) = term_parts(m, c);
        let slot = by_den.entry(d).or_insert_with(Expr::zero);
        *slot = &*slot + &n;
    }
    let mut acc_num = Expr::zero();
    let mut acc_den = Expr::one();
    for (d, n) in by_den {
        if n.is_zero() {
            continue;
        }
        if d == acc_den {
            acc_num = &acc_num + &n;
        } else if let Some(l) = monomial_lcm(&acc_den, &d) {
            let fa = &l / &acc_den;
            let fb = &l / &d;
            acc_num = &(&acc_num * &fa) + &(&n * &fb);
            acc_den = l;
        } else {
            acc_num = &(&acc_num * &d) + &(&n * &acc_den);
            acc_den = &acc_den * &d;
        }
    }
    (acc_num, acc_den)
}

fn term_parts(m: &Monomial, c: &BigRational) -> (Expr, Expr) {
    let mut num_factors = Vec::new();
    let mut den_factors = Vec::new();
    let mut num_extra = Expr::one();
    let mut den_extra = Expr::one();
    for (a, k) in &m.0 {
        if k.is_integer() && *k.numer() < 0 {
            let n = -k.to_integer();
            match a {
                Atom::Sym(_) => den_factors.push((a.clone(), Exponent::from_integer(n))),
                Atom::Group(b) => {
                    let (nb, db) = rational_parts(b);
                    num_extra = &num_extra * &db.powi(n);
                    den_extra = &den_extra * &nb.powi(n);
                }
                Atom::Func(..) => num_factors.push((a.clone(), *k)),
            }
        } else {
            num_factors.push((a.clone(), *k));
        }
    }
    let num = &Expr::term(c.clone(), num_factors) * &num_extra;
    let den = &Expr::term(BigRational::one(), den_factors) * &den_extra;
    (num, den)
}

/// Least common multiple of two unit-coefficient monomials in symbols.
fn monomial_lcm(a: &Expr, b: &Expr) -> Option<Expr> {
    let (ma, ca) = a.single_term()?;
    let (mb, cb) = b.single_term()?;
    if !ca.is_one() || !cb.is_one() {
        return None;
    }
    let all_syms = |m: &Monomial| m.0.iter().all(|(x, _)| matches!(x, Atom::Sym(_)));
    if !all_syms(ma) || !all_syms(mb) {
        return None;
    }
    let mut exps: BTreeMap<Atom, Exponent> = BTreeMap::new();
    for (x, e) in ma.0.iter().chain(mb.0.iter()) {
        let slot = exps.entry(x.clone()).or_insert(*e);
        if *e > *slot {
            *slot = *e;
        }
    }
    Some(Expr::term(BigRational::one(), exps.into_iter().collect()))
}
