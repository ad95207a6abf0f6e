//! Curvature of a metric in coordinates: connection, Riemann, Ricci,
//! scalar curvature, Weyl tensor and its divergence, covariant derivatives,
//! scalar-field operators and conformal transformation rules.

mod conformal;
mod curvature;
mod derivative;
mod error;
mod frame;
mod identities;
mod metric;
mod residual;
mod tensor;

pub use conformal::{
    conformal_divweyl_residual, conformal_metric, conformal_ricci_prediction, conformal_ricci_residual,
    conformal_weyl_residual, weyl_along_gradient,
};
pub use curvature::{christoffel, div_weyl, divergence, ricci, riemann, scalar_curvature, weyl};
pub use derivative::{
    as_vector, covariant_derivative, differential, grad_norm_sq, gradient, hessian, insert_vector, laplacian, lower,
    outer, raise, trace,
};
pub use error::TensorError;
pub use frame::FrameField;
pub use identities::{
    bochner_residual, contracted_bianchi_residual, div_weyl_readings, first_bianchi_residual,
    hessian_consistency_residual, metric_compatibility_residual, raise_lower_residual, riemann_symmetry_residuals,
    scalar_gradient_residual, weyl_trace_residual, DivWeylReadings,
};
pub use metric::{default_point, determinant, MetricField, Signature};
pub use residual::{assess_expr, assess_exprs, Assessment};
pub use tensor::{flatten, unflatten, Slot, Symmetry, TensorField};

#[cfg(test)]
mod tests;
