//! The quasi-Einstein operator and the structure it defines.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::error::QeError;
use crate::symexpr::{Expr, ZeroTest};
use crate::tensorcalc::{
    differential, grad_norm_sq, hessian, laplacian, outer, Assessment, MetricField, TensorField,
};

/// How the exponent `μ` routes through the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuClass {
    /// `μ = −1/2`: the conformally Einstein case, where the structure
    /// theorems do not apply.
    ConformallyEinstein,
    /// `μ = 0`: gradient Ricci almost soliton.
    Soliton,
    Generic,
}

pub fn classify_mu(mu: &BigRational) -> MuClass {
    if mu.is_zero() {
        MuClass::Soliton
    } else if *mu == -BigRational::one() / BigRational::from_integer(2.into()) {
        MuClass::ConformallyEinstein
    } else {
        MuClass::Generic
    }
}

fn mu_expr(mu: &BigRational) -> Expr {
    Expr::rational(mu.clone())
}

/// `λ = (Δf + τ − μ‖∇f‖²)/n`, the value forced by tracing the qE equation.
pub fn lambda_from_trace(g: &MetricField, f: &Expr, mu: &BigRational) -> Expr {
    let n = g.dim() as i64;
    let sum = &(&laplacian(g, f) + g.scalar_curvature()) - &(&mu_expr(mu) * &grad_norm_sq(g, f));
    &sum * &Expr::frac(1, n)
}

/// `ρ + Hes_f − μ df⊗df`.
pub fn bakry_emery_ricci(g: &MetricField, f: &Expr, mu: &BigRational) -> TensorField {
    let df = differential(g, f);
    let m = mu_expr(mu);
    let h = hessian(g, f);
    let dfdf = outer(&df, &df);
    let rho = g.ricci();
    TensorField::from_fn(g.chart(), rho.slots().to_vec(), |ix| {
        let (i, j) = (ix[0], ix[1]);
        &(rho.get(&[i, j]) + h.get(&[i, j])) - &(&m * dfdf.get(&[i, j]))
    })
}

/// `Q(f) = Hes_f + ρ − μ df⊗df − λ g` with `λ` from the trace.
pub fn qe_residual(g: &MetricField, f: &Expr, mu: &BigRational) -> TensorField {
    let lambda = lambda_from_trace(g, f, mu);
    qe_residual_with(g, f, mu, &lambda)
}

fn qe_residual_with(g: &MetricField, f: &Expr, mu: &BigRational, lambda: &Expr) -> TensorField {
    let be = bakry_emery_ricci(g, f, mu);
    TensorField::from_fn(g.chart(), be.slots().to_vec(), |ix| {
        be.get(ix) - &(lambda * g.g(ix[0], ix[1]))
    })
}

/// A metric, potential and exponent with the derived `λ` and the verdict
/// on whether the quasi-Einstein equation holds.
#[derive(Clone, Debug)]
pub struct QeStructure {
    metric: MetricField,
    potential: Expr,
    mu: BigRational,
    lambda: Expr,
    residual: TensorField,
    status: Assessment,
}

impl QeStructure {
    /// Derive `λ`, form `Q(f)` and zero-test it. The structure is built even
    /// when `Q(f)` does not vanish; [`QeStructure::is_qe`] reports the verdict.
    pub fn new(metric: MetricField, potential: Expr, mu: BigRational, zt: &ZeroTest) -> Result<Self, QeError> {
        let lambda = lambda_from_trace(&metric, &potential, &mu);
        let residual = qe_residual_with(&metric, &potential, &mu, &lambda);
        let status = residual.assess(zt)?;
        Ok(QeStructure { metric, potential, mu, lambda, residual, status })
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn potential(&self) -> &Expr {
        &self.potential
    }

    pub fn mu(&self) -> &BigRational {
        &self.mu
    }

    pub fn mu_expr(&self) -> Expr {
        mu_expr(&self.mu)
    }

    pub fn mu_class(&self) -> MuClass {
        classify_mu(&self.mu)
    }

    pub fn lambda(&self) -> &Expr {
        &self.lambda
    }

    /// The tensor `Q(f)`.
    pub fn residual(&self) -> &TensorField {
        &self.residual
    }

    pub fn residual_status(&self) -> &Assessment {
        &self.status
    }

    pub fn is_qe(&self) -> bool {
        self.status.vanishes()
    }

    /// `n·λ − Δf − τ + μ‖∇f‖²`, which vanishes by construction.
    pub fn trace_relation_residual(&self) -> Expr {
        let g = &self.metric;
        let n = Expr::int(g.dim() as i64);
        let f = &self.potential;
        &(&(&(&n * &self.lambda) - &laplacian(g, f)) - g.scalar_curvature()) + &(&self.mu_expr() * &grad_norm_sq(g, f))
    }

    pub(crate) fn require_qe(&self, what: &str) -> Result<(), QeError> {
        if self.is_qe() {
            Ok(())
        } else {
            Err(QeError::Refused(format!(
                "{what} presupposes the quasi-Einstein equation, but Q(f) does not vanish ({})",
                self.status.summary()
            )))
        }
    }
}
