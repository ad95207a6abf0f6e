//! Certification of an isotropic quasi-Einstein pp-wave: the three
//! equivalent conditions (a potential `f(u)` solves the equation; `div W = 0`;
//! `ΔH` depends on `u` only) and the consequence `W(·,·,·,∇f) = 0`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::error::PpWaveError;
use super::ode::{solve_potential_ode, PotentialOdeProblem, Trajectory};
use super::profile::{PpWaveSpec, U};
use crate::qecore::QeStructure;
use crate::report::{Finding, Status};
use crate::symexpr::{Expr, ZeroTest};
use crate::tensorcalc::{assess_expr, weyl_along_gradient, Assessment};

const ANCHOR: &str = "Theorem \"isotropic-pp-wave\"";
const ANCHOR_F_OF_U: &str = "Lemma \"fnotdependv\"";
/// Absolute tolerance on `|Q(∂u,∂u)|` for numeric trajectories.
pub const TRAJECTORY_TOLERANCE: f64 = 1e-6;

/// The potential to certify.
#[derive(Clone, Copy, Debug)]
pub enum PotentialInput<'a> {
    Symbolic(&'a Expr),
    Trajectory(&'a Trajectory),
    /// No potential given: solvability is witnessed by the solver.
    Solve,
}

/// Outcome of [`qe_certify`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certification {
    /// Condition (i): a potential `f(u)` solves the equation. For a given
    /// potential this is its own verdict; otherwise the solver's witness.
    pub potential_solves: Status,
    /// Condition (ii): `div W = 0` (computed, not closed form).
    pub harmonic_weyl: Status,
    /// Condition (iii): `ΔH` is a function of `u` alone.
    pub laplacian_of_u: Status,
    /// Condition (i) in its solvability form: `Zero`/`ProbablyZero` when a
    /// solution exists (witnessed by the solver), `NonZero` when refuted.
    pub solvable: Status,
    /// The three conditions agree pairwise.
    pub equivalence_consistent: bool,
    /// `W(·,·,·,∇f)` for passing instances.
    pub weyl_gradient: Option<Status>,
    /// `λ` for a symbolic potential.
    pub lambda: Option<String>,
    pub verdict: Status,
    pub findings: Vec<Finding>,
}

impl Certification {
    pub fn passes(&self) -> bool {
        self.verdict.passes()
    }
}

fn status_of(a: &Assessment) -> Status {
    a.status.into()
}

/// Max `|f'' − μ f'² − φ/2|` over a trajectory.
fn trajectory_status(t: &Trajectory) -> (Status, String) {
    let m = t.max_residual();
    let (a, b) = t.valid_interval();
    let text = format!("max |Q(du,du)| {m:.3e} on [{a}, {b}]");
    if m.is_finite() && m < TRAJECTORY_TOLERANCE {
        (Status::ProbablyZero, text)
    } else {
        (Status::NonZero, text)
    }
}

/// Solve with zero data on [0, 1] and certify the trajectory.
fn solver_witness(source: &Expr, mu: &BigRational) -> Result<(Status, String), PpWaveError> {
    let t = solve_potential_ode(&PotentialOdeProblem::new(source.clone(), mu.clone()))?;
    Ok(trajectory_status(&t))
}

/// Certify a pp-wave with profile `h` and exponent `mu`. The verdict is
/// Refused when the harmonic conditions fail, since then no isotropic
/// potential exists; otherwise it is the verdict on the potential.
pub fn qe_certify(
    spec: &PpWaveSpec,
    mu: &BigRational,
    potential: PotentialInput<'_>,
    zt: &ZeroTest,
) -> Result<Certification, PpWaveError> {
    let g = spec.metric()?;
    let mut findings = Vec::new();

    let lap_u = spec.harmonic_weyl_assessment(zt)?;
    let laplacian_of_u = status_of(&lap_u);
    findings.push(Finding::from_assessment("laplacian_function_of_u", ANCHOR, &lap_u));
    let div_w = g.div_weyl()?.assess(zt)?;
    let harmonic_weyl = status_of(&div_w);
    findings.push(Finding::from_assessment("div_weyl_vanishes", ANCHOR, &div_w));

    let (solvable, witness_text) = if laplacian_of_u.passes() {
        let source = spec.potential_source(zt)?;
        solver_witness(&source, mu)?
    } else {
        (Status::NonZero, "refuted: the transverse Laplacian depends on x".to_string())
    };
    findings.push(Finding::info("potential_exists", ANCHOR, solvable, witness_text));

    let mut lambda = None;
    let potential_solves = match potential {
        PotentialInput::Solve => solvable,
        PotentialInput::Symbolic(f) => {
            let depends_transverse = f.free_symbols().iter().any(|s| spec.chart().index_of(s.name()) != Some(U));
            if depends_transverse && !spec.is_lcf(zt)?.vanishes() {
                findings.push(Finding::info(
                    "potential_depends_on_u_only",
                    ANCHOR_F_OF_U,
                    Status::NonZero,
                    format!("f = {f} depends on v, x1 or x2 on a metric that is not locally conformally flat"),
                ));
            }
            let q = QeStructure::new(g.clone(), f.clone(), mu.clone(), zt)?;
            findings.push(Finding::from_assessment("qe_residual_vanishes", ANCHOR, q.residual_status()));
            let lam = assess_expr(q.lambda(), zt)?;
            findings.push(Finding::from_assessment("lambda_vanishes", ANCHOR, &lam));
            lambda = Some(q.lambda().to_string());
            let s: Status = q.residual_status().status.into();
            if s.passes() && depends_transverse && !spec.is_lcf(zt)?.vanishes() {
                Status::NonZero
            } else {
                s
            }
        }
        PotentialInput::Trajectory(t) => {
            if laplacian_of_u.passes() {
                let (s, text) = trajectory_status(t);
                findings.push(Finding::info("trajectory_residual", ANCHOR, s, text));
                s
            } else {
                Status::Refused
            }
        }
    };

    let weyl_gradient = if potential_solves.passes() {
        // For f = f(u), W(·,·,·,∇f) = f'(u) W(·,·,·,∂v); testing with f = u covers every such f.
        let f = match potential {
            PotentialInput::Symbolic(f) => f.clone(),
            _ => Expr::symbol(spec.u()),
        };
        let a = weyl_along_gradient(&g, &f)?.assess(zt)?;
        findings.push(Finding::from_assessment("weyl_along_gradient_vanishes", ANCHOR, &a));
        Some(status_of(&a))
    } else {
        None
    };

    let equivalence_consistent =
        solvable.passes() == harmonic_weyl.passes() && harmonic_weyl.passes() == laplacian_of_u.passes();
    findings.push(Finding::info(
        "conditions_equivalent",
        ANCHOR,
        if equivalence_consistent { Status::Zero } else { Status::NonZero },
        format!(
            "solvable: {solvable:?}, div W = 0: {harmonic_weyl:?}, Laplacian of u: {laplacian_of_u:?}"
        ),
    ));

    let verdict = if !laplacian_of_u.passes() || !harmonic_weyl.passes() {
        Status::Refused
    } else if let Some(w) = weyl_gradient {
        if w.passes() {
            potential_solves
        } else {
            Status::NonZero
        }
    } else {
        potential_solves
    };
    Ok(Certification {
        potential_solves,
        harmonic_weyl,
        laplacian_of_u,
        solvable,
        equivalence_consistent,
        weyl_gradient,
        lambda,
        verdict,
        findings,
    })
}

/// The statuses of (solvable, `div W = 0`, `ΔH` of `u` alone) for a profile.
pub fn equivalence_statuses(spec: &PpWaveSpec, mu: &BigRational, zt: &ZeroTest) -> Result<[Status; 3], PpWaveError> {
    let c = qe_certify(spec, mu, PotentialInput::Solve, zt)?;
    Ok([c.solvable, c.harmonic_weyl, c.laplacian_of_u])
}
