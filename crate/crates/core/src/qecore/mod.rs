//! The quasi-Einstein layer: the operator `Q(f)`, the derived `λ`, the
//! Bakry–Émery–Ricci tensor, the differential identities of solutions and
//! the classification checks for null and non-null gradients.

mod classify;
mod error;
mod identities;
mod isotropic;
mod nonisotropic;
mod structure;

pub use classify::{causal_character, harmonicity_checks, CausalCharacter, CausalType, HarmonicityChecks, CAUSAL_TOLERANCE};
pub use error::QeError;
pub use identities::{identity_residuals, IdentityResiduals};
pub use isotropic::{
    hessian_along_gradient, isotropic_invariant_suite, isotropic_preconditions, kernel_basis,
    parallel_distribution_check, pure_radiation_checks, ParallelCheck,
};
pub use nonisotropic::{gradient_contraction_residual, nonisotropic_preconditions, nonisotropic_structure_checks};
pub use structure::{bakry_emery_ricci, classify_mu, lambda_from_trace, qe_residual, MuClass, QeStructure};
