//! The four differential identities every four-dimensional quasi-Einstein
//! structure satisfies. Each residual is left side minus right side, exactly
//! as the identities are usually printed.

use super::error::QeError;
use super::structure::QeStructure;
use crate::symexpr::{Expr, ZeroTest};
use crate::tensorcalc::{
    covariant_derivative, differential, gradient, hessian, insert_vector, laplacian, Assessment, Slot,
    TensorField, TensorError,
};

/// Residuals of the four identities.
#[derive(Clone, Debug)]
pub struct IdentityResiduals {
    /// `2dΔf + 2ρ(∇f) + dτ − 2μ(Hes_f(∇f) + Δf df) − 2dλ` (a 1-form).
    pub laplacian_gradient: TensorField,
    /// `dτ + 2μ(3λ − τ)df + 2(μ − 1)ρ(∇f) − 6dλ` (a 1-form).
    pub scalar_curvature_gradient: TensorField,
    /// `R(X,Y,Z,∇f)` minus its expression through `dλ`, `∇ρ` and `Hes_f`.
    pub curvature_along_gradient: TensorField,
    /// `W(X,Y,Z,∇f)` minus its expression through `div W`, `ρ` and `df`.
    pub weyl_along_gradient: TensorField,
}

impl IdentityResiduals {
    /// (name, residual) pairs in a fixed order.
    pub fn named(&self) -> [(&'static str, &TensorField); 4] {
        [
            ("laplacian_gradient", &self.laplacian_gradient),
            ("scalar_curvature_gradient", &self.scalar_curvature_gradient),
            ("curvature_along_gradient", &self.curvature_along_gradient),
            ("weyl_along_gradient", &self.weyl_along_gradient),
        ]
    }

    pub fn assess(&self, zt: &ZeroTest) -> Result<Vec<(&'static str, Assessment)>, QeError> {
        self.named().into_iter().map(|(n, t)| Ok((n, t.assess(zt)?))).collect()
    }
}

/// Compute the identity residuals of a quasi-Einstein structure. Inputs
/// where `Q(f)` does not vanish are refused, since the identities are only
/// claimed for solutions.
pub fn identity_residuals(q: &QeStructure) -> Result<IdentityResiduals, QeError> {
    let g = q.metric();
    g.require_dim4("identity_residuals").map_err(QeError::from)?;
    q.require_qe("the quasi-Einstein identities")?;
    let f = q.potential();
    let mu = q.mu_expr();
    let lambda = q.lambda();
    let chart = g.chart();

    let df = differential(g, f);
    let grad = gradient(g, f);
    let hes = hessian(g, f);
    let lap = laplacian(g, f);
    let tau = g.scalar_curvature();
    let rho = g.ricci();
    let dlap = differential(g, &lap);
    let dtau = differential(g, tau);
    let dlambda = differential(g, lambda);
    let rho_grad = insert_vector(rho, 0, grad.components());
    let hes_grad = insert_vector(&hes, 0, grad.components());

    let two = Expr::int(2);
    let laplacian_gradient = TensorField::from_fn(chart, vec![Slot::Lower], |ix| {
        let k = ix[0];
        let lhs = &(&(&two * dlap.get(&[k])) + &(&two * rho_grad.get(&[k]))) + dtau.get(&[k]);
        let mu_term = &(&two * &mu) * &(hes_grad.get(&[k]) + &(&lap * df.get(&[k])));
        &(&lhs - &mu_term) - &(&two * dlambda.get(&[k]))
    });

    let three_lambda_minus_tau = &(&Expr::int(3) * lambda) - tau;
    let coef_df = &(&two * &mu) * &three_lambda_minus_tau;
    let coef_rho = &two * &(&mu - &Expr::one());
    let scalar_curvature_gradient = TensorField::from_fn(chart, vec![Slot::Lower], |ix| {
        let k = ix[0];
        let lhs = &(dtau.get(&[k]) + &(&coef_df * df.get(&[k]))) + &(&coef_rho * rho_grad.get(&[k]));
        &lhs - &(&Expr::int(6) * dlambda.get(&[k]))
    });

    let r_grad = insert_vector(g.riemann(), 3, grad.components());
    let nrho = covariant_derivative(g, rho);
    let curvature_along_gradient = TensorField::from_fn(chart, vec![Slot::Lower; 3], |ix| {
        let (x, y, z) = (ix[0], ix[1], ix[2]);
        let mut rhs = &(dlambda.get(&[x]) * g.g(y, z)) - &(dlambda.get(&[y]) * g.g(x, z));
        rhs = &(&rhs + nrho.get(&[y, x, z])) - nrho.get(&[x, y, z]);
        let mu_part = &(df.get(&[y]) * hes.get(&[x, z])) - &(df.get(&[x]) * hes.get(&[y, z]));
        rhs = &rhs + &(&mu * &mu_part);
        r_grad.get(&[x, y, z]) - &rhs
    });

    let w = g.weyl().map_err(|e: TensorError| QeError::from(e))?;
    let w_grad = insert_vector(w, 3, grad.components());
    let div_w = g.div_weyl()?;
    let c = &(&two * &mu) + &Expr::one();
    let sixth = Expr::frac(1, 6);
    let half = Expr::frac(1, 2);
    let c_tau = &(tau * &c) * &sixth;
    let c_rho = &c * &sixth;
    let c_mixed = &c * &half;
    let weyl_along_gradient = TensorField::from_fn(chart, vec![Slot::Lower; 3], |ix| {
        let (x, y, z) = (ix[0], ix[1], ix[2]);
        let a = &two * div_w.get(&[x, y, z]);
        let b = &c_tau * &(&(df.get(&[y]) * g.g(x, z)) - &(df.get(&[x]) * g.g(y, z)));
        let cc = &c_rho * &(&(rho_grad.get(&[x]) * g.g(y, z)) - &(rho_grad.get(&[y]) * g.g(x, z)));
        let d = &c_mixed * &(&(rho.get(&[y, z]) * df.get(&[x])) - &(rho.get(&[x, z]) * df.get(&[y])));
        let rhs = &(&(&a + &b) + &cc) + &d;
        w_grad.get(&[x, y, z]) - &rhs
    });

    Ok(IdentityResiduals { laplacian_gradient, scalar_curvature_gradient, curvature_along_gradient, weyl_along_gradient })
}
