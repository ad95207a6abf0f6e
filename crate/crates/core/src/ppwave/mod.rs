//! pp-wave specialization: metrics from a profile `H(u, x1, x2)`, closed
//! forms of the Weyl tensor and its divergence, the conformal-flatness and
//! harmonic-Weyl predicates, plane-wave profiles, the potential equation
//! and certification of isotropic quasi-Einstein pp-waves.

mod certify;
mod error;
mod ode;
mod profile;
mod random;

pub use certify::{equivalence_statuses, qe_certify, Certification, PotentialInput, TRAJECTORY_TOLERANCE};
pub use error::PpWaveError;
pub use ode::{
    soliton_closed_form, solve_potential_ode, OdeSample, PotentialOdeProblem, Trajectory, BLOW_UP_BOUND,
    DEFAULT_STEP, H_FLOOR,
};
pub use profile::{
    build_ppwave, compare_closed_forms, plane_wave_h, ClosedFormComparison, ClosedFormDivWeyl, ClosedFormWeyl,
    PpWaveSpec,
};
pub use random::{seeded_profiles, RANDOM_PROFILE_DEGREE};

#[cfg(test)]
mod tests;
