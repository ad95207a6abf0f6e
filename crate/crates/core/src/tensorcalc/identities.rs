//! Residuals of classical curvature identities. Each function returns a
//! tensor that vanishes when the identity holds.

use super::curvature::divergence;
use super::derivative::{covariant_derivative, differential, gradient, hessian, insert_vector, laplacian, lower, raise};
use super::error::TensorError;
use super::metric::MetricField;
use super::tensor::{Slot, TensorField};
use crate::symexpr::Expr;

/// `R_ijkl + R_jkil + R_kijl`.
pub fn first_bianchi_residual(r: &TensorField) -> TensorField {
    TensorField::from_fn(r.chart(), vec![Slot::Lower; 4], |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        &(r.get(&[i, j, k, l]) + r.get(&[j, k, i, l])) + r.get(&[k, i, j, l])
    })
}

/// Residuals of the pair antisymmetries and pair exchange, by name.
pub fn riemann_symmetry_residuals(r: &TensorField) -> Vec<(&'static str, TensorField)> {
    let anti_first = TensorField::from_fn(r.chart(), vec![Slot::Lower; 4], |ix| {
        r.get(ix) + r.get(&[ix[1], ix[0], ix[2], ix[3]])
    });
    let anti_second = TensorField::from_fn(r.chart(), vec![Slot::Lower; 4], |ix| {
        r.get(ix) + r.get(&[ix[0], ix[1], ix[3], ix[2]])
    });
    let exchange = TensorField::from_fn(r.chart(), vec![Slot::Lower; 4], |ix| {
        r.get(ix) - r.get(&[ix[2], ix[3], ix[0], ix[1]])
    });
    vec![
        ("antisymmetry in the first pair", anti_first),
        ("antisymmetry in the second pair", anti_second),
        ("pair exchange symmetry", exchange),
        ("first Bianchi identity", first_bianchi_residual(r)),
    ]
}

/// `div ρ − ½ dτ`, with `(div ρ)_l = g^ab (∇_a ρ)_bl`.
pub fn contracted_bianchi_residual(g: &MetricField) -> Result<TensorField, TensorError> {
    let div_rho = divergence(g, g.ricci(), 0);
    let dtau = differential(g, g.scalar_curvature());
    div_rho.sub(&dtau.scale(&Expr::frac(1, 2)))
}

/// `div Hes_f − dΔf − ρ(∇f, ·)`.
pub fn bochner_residual(g: &MetricField, f: &Expr) -> Result<TensorField, TensorError> {
    let div_hes = divergence(g, &hessian(g, f), 0);
    let d_lap = differential(g, &laplacian(g, f));
    let rho_grad = insert_vector(g.ricci(), 0, gradient(g, f).components());
    div_hes.sub(&d_lap)?.sub(&rho_grad)
}

/// `g^ik W_ijkl`, indexed by (j, l).
pub fn weyl_trace_residual(g: &MetricField) -> Result<TensorField, TensorError> {
    let w = g.weyl()?;
    let n = g.dim();
    Ok(TensorField::from_fn(g.chart(), vec![Slot::Lower, Slot::Lower], |ix| {
        let mut acc = Expr::zero();
        for i in 0..n {
            for k in 0..n {
                let gi = g.inv(i, k);
                if !gi.is_zero() {
                    acc = &acc + &(gi * w.get(&[i, ix[0], k, ix[1]]));
                }
            }
        }
        acc
    }))
}

/// `∇g`, which vanishes for the Levi-Civita connection.
pub fn metric_compatibility_residual(g: &MetricField) -> TensorField {
    covariant_derivative(g, g.tensor())
}

/// Symmetrized `∇(df)` minus the Hessian.
pub fn hessian_consistency_residual(g: &MetricField, f: &Expr) -> Result<TensorField, TensorError> {
    let ndf = covariant_derivative(g, &differential(g, f));
    let half = Expr::frac(1, 2);
    let sym = TensorField::from_fn(g.chart(), vec![Slot::Lower, Slot::Lower], |ix| {
        &(ndf.get(&[ix[0], ix[1]]) + ndf.get(&[ix[1], ix[0]])) * &half
    });
    sym.sub(&hessian(g, f))
}

/// `∇h − dh` for a scalar `h`, viewing `h` as a rank-0 tensor.
pub fn scalar_gradient_residual(g: &MetricField, h: &Expr) -> Result<TensorField, TensorError> {
    let scalar = TensorField::new(g.chart().clone(), vec![], super::tensor::Symmetry::None, vec![h.clone()])?;
    covariant_derivative(g, &scalar).sub(&differential(g, h))
}

/// Raise then lower one slot and subtract the original.
pub fn raise_lower_residual(g: &MetricField, t: &TensorField, slot: usize) -> Result<TensorField, TensorError> {
    let round = match t.slots()[slot] {
        Slot::Lower => lower(g, &raise(g, t, slot)?, slot)?,
        Slot::Upper => raise(g, &lower(g, t, slot)?, slot)?,
    };
    round.sub(t)
}

/// The two candidate closed expressions for the divergence of the Weyl
/// tensor that differ only in how the Ricci-derivative terms are grouped:
///
/// * grouped: `−½{(∇_Xρ)(Y,Z) − (∇_Yρ)(X,Z)} + (1/12)(X(τ)g(Y,Z) − Y(τ)g(X,Z))`
/// * ungrouped: `−½(∇_Xρ)(Y,Z) − (∇_Yρ)(X,Z) + (1/12)(X(τ)g(Y,Z) − Y(τ)g(X,Z))`
#[derive(Clone, Debug)]
pub struct DivWeylReadings {
    pub grouped: TensorField,
    pub ungrouped: TensorField,
}

pub fn div_weyl_readings(g: &MetricField) -> Result<DivWeylReadings, TensorError> {
    g.require_dim4("div_weyl_readings")?;
    let nrho = covariant_derivative(g, g.ricci());
    let dtau = differential(g, g.scalar_curvature());
    let half = Expr::frac(1, 2);
    let twelfth = Expr::frac(1, 12);
    let tau_part = |x: usize, y: usize, z: usize| {
        &twelfth * &(&(dtau.get(&[x]) * g.g(y, z)) - &(dtau.get(&[y]) * g.g(x, z)))
    };
    let grouped = TensorField::from_fn(g.chart(), vec![Slot::Lower; 3], |ix| {
        let (x, y, z) = (ix[0], ix[1], ix[2]);
        let bracket = nrho.get(&[x, y, z]) - nrho.get(&[y, x, z]);
        &(-&(&half * &bracket)) + &tau_part(x, y, z)
    });
    let ungrouped = TensorField::from_fn(g.chart(), vec![Slot::Lower; 3], |ix| {
        let (x, y, z) = (ix[0], ix[1], ix[2]);
        let first = &half * nrho.get(&[x, y, z]);
        &(&(-&first) - nrho.get(&[y, x, z])) + &tau_part(x, y, z)
    });
    Ok(DivWeylReadings { grouped, ungrouped })
}
