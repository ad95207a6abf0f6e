//! Conformal change `g̃ = e^{−f} g` and the transformation rules it obeys.

use super::derivative::{differential, grad_norm_sq, gradient, hessian, insert_vector, laplacian, outer};
use super::error::TensorError;
use super::metric::MetricField;
use super::tensor::TensorField;
use crate::symexpr::Expr;

/// `g̃ = e^{−f} g`, checked at the same sample point as `g`.
pub fn conformal_metric(g: &MetricField, f: &Expr) -> Result<MetricField, TensorError> {
    let factor = (-f).exp();
    let n = g.dim();
    let comps = (0..n).map(|i| (0..n).map(|j| &factor * g.g(i, j)).collect()).collect();
    MetricField::with_point(g.chart().clone(), comps, g.sample_point().clone())
}

/// Right-hand side of the four-dimensional rule
/// `ρ̃ = ρ + Hes_f + ½ df⊗df + ½(Δf − ‖∇f‖²) g`.
pub fn conformal_ricci_prediction(g: &MetricField, f: &Expr) -> Result<TensorField, TensorError> {
    g.require_dim4("conformal_ricci")?;
    let half = Expr::frac(1, 2);
    let df = differential(g, f);
    let dfdf = outer(&df, &df);
    let shift = &half * &(&laplacian(g, f) - &grad_norm_sq(g, f));
    let hes = hessian(g, f);
    let rho = g.ricci();
    rho.add(&hes)?.add(&dfdf.scale(&half))?.add(&g.tensor().scale(&shift))
}

/// `ricci(g̃)` minus the predicted transformed Ricci tensor.
pub fn conformal_ricci_residual(g: &MetricField, f: &Expr) -> Result<TensorField, TensorError> {
    let predicted = conformal_ricci_prediction(g, f)?;
    let tilde = conformal_metric(g, f)?;
    tilde.ricci().sub(&predicted)
}

/// `W(·,·,·,∇f)` with `∇f` raised by `g`.
pub fn weyl_along_gradient(g: &MetricField, f: &Expr) -> Result<TensorField, TensorError> {
    let grad = gradient(g, f);
    Ok(insert_vector(g.weyl()?, 3, grad.components()))
}

/// `div W̃ − (div W − ½ W(·,·,·,∇f))`, where `div W̃` is computed for `g̃`
/// from its own Weyl tensor and connection.
pub fn conformal_divweyl_residual(g: &MetricField, f: &Expr) -> Result<TensorField, TensorError> {
    g.require_dim4("conformal_divweyl")?;
    let tilde = conformal_metric(g, f)?;
    let rhs = g.div_weyl()?.sub(&weyl_along_gradient(g, f)?.scale(&Expr::frac(1, 2)))?;
    tilde.div_weyl()?.sub(&rhs)
}

/// `W̃ − e^{−f} W`: the (0,4) Weyl tensor scales with the conformal factor.
pub fn conformal_weyl_residual(g: &MetricField, f: &Expr) -> Result<TensorField, TensorError> {
    g.require_dim4("conformal_weyl")?;
    let tilde = conformal_metric(g, f)?;
    tilde.weyl()?.sub(&g.weyl()?.scale(&(-f).exp()))
}
