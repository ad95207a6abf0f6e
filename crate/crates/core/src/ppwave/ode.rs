//! The potential equation `f'' − μ f'² − φ(u)/2 = 0` of a pp-wave with
//! `ΔH = φ(u)`, integrated directly and through the linearization
//! `h = e^{−μ f}`, which turns it into `h'' + (μ/2) φ h = 0`.

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::error::PpWaveError;
use crate::metricdsl::PPWAVE_CHART;
use crate::symexpr::{antiderivative_polynomial, Expr, NumericPoint, Symbol};

/// The solver halts once `|f'|` exceeds this bound.
pub const BLOW_UP_BOUND: f64 = 1e6;
/// Default step of the fixed-step integrator.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Linearization discrepancies are measured where `h` exceeds this value.
pub const H_FLOOR: f64 = 0.1;

/// Initial value problem for the potential equation.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialOdeProblem {
    /// `φ(u)`, the transverse Laplacian of the profile.
    pub source: Expr,
    pub mu: BigRational,
    /// Initial data is given at `interval.0`.
    pub f0: f64,
    pub fp0: f64,
    pub interval: (f64, f64),
    pub step: f64,
}

impl PotentialOdeProblem {
    /// Zero initial data on `[0, 1]` with the default step.
    pub fn new(source: Expr, mu: BigRational) -> Self {
        PotentialOdeProblem { source, mu, f0: 0.0, fp0: 0.0, interval: (0.0, 1.0), step: DEFAULT_STEP }
    }

    pub fn with_initial(mut self, f0: f64, fp0: f64) -> Self {
        self.f0 = f0;
        self.fp0 = fp0;
        self
    }

    pub fn with_interval(mut self, a: f64, b: f64) -> Self {
        self.interval = (a, b);
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn u0(&self) -> f64 {
        self.interval.0
    }

    fn mu_f64(&self) -> f64 {
        self.mu.to_f64().unwrap_or(f64::NAN)
    }

    fn validate(&self) -> Result<usize, PpWaveError> {
        let bad = |m: String| Err(PpWaveError::InvalidProblem(m));
        if !(self.step > 0.0) || !self.step.is_finite() {
            return bad(format!("step must be positive, got {}", self.step));
        }
        let (a, b) = self.interval;
        if !(a.is_finite() && b.is_finite() && b > a) {
            return bad(format!("interval [{a}, {b}] must be finite with a < b"));
        }
        if !self.f0.is_finite() || !self.fp0.is_finite() {
            return bad("initial data must be finite".into());
        }
        if let Some(s) = self.source.free_symbols().into_iter().find(|s| s.name() != PPWAVE_CHART[0]) {
            return Err(PpWaveError::NotFunctionOfU(format!("{} (mentions {})", self.source, s.name())));
        }
        let n = ((b - a) / self.step).round().max(1.0);
        if n > 1e8 {
            return bad(format!("{n} steps is too many"));
        }
        let n = n as usize;
        if n < 4 {
            return bad("the interval must hold at least 4 steps".into());
        }
        Ok(n)
    }
}

/// One grid point of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeSample {
    pub u: f64,
    pub f: f64,
    pub fprime: f64,
    /// `h = e^{−μ f}` from the linear equation (1 when `μ = 0`).
    pub h: f64,
    /// `|f'' − μ f'² − φ/2|` with `f''` from a fourth-order finite
    /// difference of the computed `f'`.
    pub residual: f64,
}

/// Result of integrating a [`PotentialOdeProblem`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<OdeSample>,
    /// Grid spacing actually used (the interval divided evenly).
    pub step: f64,
    /// Where `|f'|` first exceeded [`BLOW_UP_BOUND`].
    pub blow_up: Option<f64>,
    /// Where the linear solution `h` first reached zero or below.
    pub h_breakdown: Option<f64>,
    /// `max |f − (−1/μ) log h|` over samples with `h > H_FLOOR` (`μ ≠ 0`).
    pub max_linearization_gap: Option<f64>,
    /// Max error against the exact polynomial solution (`μ = 0` with
    /// polynomial `φ`).
    pub closed_form_error: Option<f64>,
}

impl Trajectory {
    /// The interval the trajectory actually covers.
    pub fn valid_interval(&self) -> (f64, f64) {
        (self.samples.first().map_or(f64::NAN, |s| s.u), self.samples.last().map_or(f64::NAN, |s| s.u))
    }

    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.residual).fold(0.0, f64::max)
    }

    /// `max |f(u) − exact(u)|` over the grid.
    pub fn max_error_against(&self, exact: impl Fn(f64) -> f64) -> f64 {
        self.samples.iter().map(|s| (s.f - exact(s.u)).abs()).fold(0.0, f64::max)
    }

    /// CSV with header `u,f,fprime,h,residual` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("u,f,fprime,h,residual\n");
        for p in &self.samples {
            let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", p.u, p.f, p.fprime, p.h, p.residual);
        }
        s
    }
}

fn source_fn(source: &Expr) -> impl Fn(f64) -> Result<f64, PpWaveError> + '_ {
    let u = Symbol::new(PPWAVE_CHART[0]);
    move |x: f64| {
        let mut p = NumericPoint::new();
        p.set(u.clone(), x);
        Ok(source.eval(&p)?)
    }
}

type State = [f64; 2];

fn rk4_step(
    u: f64,
    y: State,
    dt: f64,
    rhs: &impl Fn(f64, State) -> Result<State, PpWaveError>,
) -> Result<State, PpWaveError> {
    let add = |a: State, b: State, s: f64| [a[0] + s * b[0], a[1] + s * b[1]];
    let k1 = rhs(u, y)?;
    let k2 = rhs(u + dt / 2.0, add(y, k1, dt / 2.0))?;
    let k3 = rhs(u + dt / 2.0, add(y, k2, dt / 2.0))?;
    let k4 = rhs(u + dt, add(y, k3, dt))?;
    Ok([
        y[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ])
}

/// Fourth-order finite-difference derivative of evenly spaced samples.
fn derivative4(v: &[f64], dt: f64) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * dt)
            } else if i + 4 < n {
                (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3] - 3.0 * v[i + 4]) / (12.0 * dt)
            } else if i >= 4 {
                (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3] + 3.0 * v[i - 4]) / (12.0 * dt)
            } else {
                f64::NAN
            }
        })
        .collect()
}

/// Exact solution for `μ = 0` and polynomial `φ`:
/// `f = f0 + fp0 (u − u0) + ∫∫ φ/2`.
pub fn soliton_closed_form(source: &Expr, u0: f64, f0: f64, fp0: f64) -> Option<impl Fn(f64) -> f64> {
    let u = Symbol::new(PPWAVE_CHART[0]);
    if !source.is_polynomial() {
        return None;
    }
    let half = &Expr::frac(1, 2) * source;
    let first = antiderivative_polynomial(&half, &u)?;
    let second = antiderivative_polynomial(&first, &u)?;
    let at = move |e: &Expr, x: f64| {
        let mut p = NumericPoint::new();
        p.set(u.clone(), x);
        e.eval(&p).unwrap_or(f64::NAN)
    };
    let first0 = at(&first, u0);
    let second0 = at(&second, u0);
    Some(move |x: f64| f0 + fp0 * (x - u0) + (at(&second, x) - second0) - first0 * (x - u0))
}

/// Integrate the potential equation with the classical fourth-order
/// Runge–Kutta scheme at a fixed step. For `μ ≠ 0` the linear equation for
/// `h` is integrated alongside on the same grid. Integration stops early,
/// with the point recorded, when `|f'|` exceeds [`BLOW_UP_BOUND`].
pub fn solve_potential_ode(p: &PotentialOdeProblem) -> Result<Trajectory, PpWaveError> {
    let n = p.validate()?;
    let (a, b) = p.interval;
    let dt = (b - a) / n as f64;
    let mu = p.mu_f64();
    let phi = source_fn(&p.source);
    let direct = |u: f64, y: State| -> Result<State, PpWaveError> { Ok([y[1], mu * y[1] * y[1] + 0.5 * phi(u)?]) };
    let linear = |u: f64, y: State| -> Result<State, PpWaveError> { Ok([y[1], -0.5 * mu * phi(u)? * y[0]]) };
    let linearize = !p.mu.is_zero();

    let mut us = vec![a];
    let mut ys: Vec<State> = vec![[p.f0, p.fp0]];
    let h0 = (-mu * p.f0).exp();
    let mut hs: Vec<State> = vec![[h0, -mu * p.fp0 * h0]];
    let mut blow_up = None;
    for k in 0..n {
        let u = a + k as f64 * dt;
        let y = rk4_step(u, ys[k], dt, &direct)?;
        if !y[1].is_finite() || y[1].abs() > BLOW_UP_BOUND || !y[0].is_finite() {
            blow_up = Some(u + dt);
            break;
        }
        let hy = if linearize { rk4_step(u, hs[k], dt, &linear)? } else { [1.0, 0.0] };
        us.push(if k + 1 == n { b } else { a + (k + 1) as f64 * dt });
        ys.push(y);
        hs.push(hy);
    }

    let fps: Vec<f64> = ys.iter().map(|y| y[1]).collect();
    let fpps = derivative4(&fps, dt);
    let mut samples = Vec::with_capacity(us.len());
    for i in 0..us.len() {
        let rhs = mu * fps[i] * fps[i] + 0.5 * phi(us[i])?;
        samples.push(OdeSample { u: us[i], f: ys[i][0], fprime: fps[i], h: hs[i][0], residual: (fpps[i] - rhs).abs() });
    }

    let (h_breakdown, max_linearization_gap) = if linearize {
        let breakdown = samples.iter().find(|s| s.h <= 0.0).map(|s| s.u);
        let gap = samples
            .iter()
            .take_while(|s| s.h > 0.0)
            .filter(|s| s.h > H_FLOOR)
            .map(|s| (s.f - (-1.0 / mu) * s.h.ln()).abs())
            .fold(0.0, f64::max);
        (breakdown, Some(gap))
    } else {
        (None, None)
    };
    let closed_form_error = if p.mu.is_zero() {
        soliton_closed_form(&p.source, a, p.f0, p.fp0)
            .map(|exact| samples.iter().map(|s| (s.f - exact(s.u)).abs()).fold(0.0, f64::max))
    } else {
        None
    };
    Ok(Trajectory { samples, step: dt, blow_up, h_breakdown, max_linearization_gap, closed_form_error })
}
