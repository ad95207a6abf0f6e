//! Seeded random polynomial profiles for calibration runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metricdsl::PPWAVE_CHART;
use crate::symexpr::Expr;

/// Highest total degree in `(u, x1, x2)` of a generated profile.
pub const RANDOM_PROFILE_DEGREE: u32 = 4;

/// `count` polynomial profiles of total degree at most
/// [`RANDOM_PROFILE_DEGREE`] with rational coefficients `n/d`, `|n| ≤ 5`,
/// `1 ≤ d ≤ 4`. Each has between three and six terms, at least one of them
/// of transverse degree two or more so that the Weyl tensor is rarely zero.
pub fn seeded_profiles(seed: u64, count: usize) -> Vec<Expr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = Expr::sym(PPWAVE_CHART[0]);
    let x1 = Expr::sym(PPWAVE_CHART[2]);
    let x2 = Expr::sym(PPWAVE_CHART[3]);
    (0..count)
        .map(|_| {
            let terms = rng.random_range(3..=6);
            let mut h = Expr::zero();
            for t in 0..terms {
                let (a, b, k) = loop {
                    let a = rng.random_range(0..=RANDOM_PROFILE_DEGREE);
                    let b = rng.random_range(0..=RANDOM_PROFILE_DEGREE - a);
                    let k = rng.random_range(0..=RANDOM_PROFILE_DEGREE - a - b);
                    if t > 0 || a + b >= 2 {
                        break (a, b, k);
                    }
                };
                let n = loop {
                    let n: i64 = rng.random_range(-5..=5);
                    if n != 0 {
                        break n;
                    }
                };
                let d: i64 = rng.random_range(1..=4);
                let mono = &(&x1.powi(a as i64) * &x2.powi(b as i64)) * &u.powi(k as i64);
                h = &h + &(&Expr::frac(n, d) * &mono);
            }
            h
        })
        .collect()
}
