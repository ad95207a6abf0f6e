//! Checks for a gradient that is spacelike or timelike: the Ricci tensor
//! diagonalizes in a frame adapted to `∇f` and the level sets are totally
//! umbilical.

use super::classify::{causal_character, harmonicity_checks};
use super::error::QeError;
use super::structure::{MuClass, QeStructure};
use crate::report::Finding;
use crate::symexpr::{Expr, ZeroTest};
use crate::tensorcalc::{
    assess_exprs, differential, grad_norm_sq, gradient, hessian, insert_vector, FrameField, MetricField, Slot,
    TensorField,
};

const ANCHOR_DIAG: &str = "Lemma \"W=0,nabla f eigenvector\"";
const ANCHOR_UMBILIC: &str = "Theorem \"non-isotropic\"";
const ANCHOR_CONTRACTION: &str = "Eq. \"lemma W=0 mu neq\"";

fn bilinear(g: &MetricField, t: &TensorField, a: &[Expr], b: &[Expr]) -> Expr {
    let n = g.dim();
    let mut acc = Expr::zero();
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if b[j].is_zero() {
                continue;
            }
            let c = t.get(&[i, j]);
            if !c.is_zero() {
                acc = &acc + &(&(c * &a[i]) * &b[j]);
            }
        }
    }
    acc
}

/// `τ(df⊗df − ‖∇f‖²g) + 3(‖∇f‖²ρ − df⊗ρ(∇f)) + ρ(∇f,∇f)g − ρ(∇f)⊗df`,
/// indexed by (X, Z).
pub fn gradient_contraction_residual(g: &MetricField, f: &Expr) -> TensorField {
    let df = differential(g, f);
    let grad = gradient(g, f);
    let rho = g.ricci();
    let rho_grad = insert_vector(rho, 0, grad.components());
    let norm = grad_norm_sq(g, f);
    let rho_gg: Expr = (0..g.dim()).map(|k| rho_grad.get(&[k]) * grad.get(&[k])).sum();
    let tau = g.scalar_curvature();
    let three = Expr::int(3);
    TensorField::from_fn(g.chart(), vec![Slot::Lower, Slot::Lower], |ix| {
        let (x, z) = (ix[0], ix[1]);
        let a = tau * &(&(df.get(&[x]) * df.get(&[z])) - &(&norm * g.g(x, z)));
        let b = &three * &(&(rho.get(&[x, z]) * &norm) - &(rho_grad.get(&[z]) * df.get(&[x])));
        let c = &(g.g(x, z) * &rho_gg) - &(df.get(&[z]) * rho_grad.get(&[x]));
        &(&a + &b) + &c
    })
}

/// Why a structure is outside the hypotheses of the non-isotropic analysis.
pub fn nonisotropic_preconditions(q: &QeStructure, zt: &ZeroTest) -> Result<Option<String>, QeError> {
    let g = q.metric();
    if g.dim() != 4 {
        return Ok(Some(format!("dimension is {}, the analysis needs 4", g.dim())));
    }
    if !q.is_qe() {
        return Ok(Some(format!("Q(f) does not vanish ({})", q.residual_status().summary())));
    }
    if q.mu_class() == MuClass::ConformallyEinstein {
        return Ok(Some("mu = -1/2: structure theorems inapplicable".into()));
    }
    let cc = causal_character(g, q.potential(), g.sample_point(), zt)?;
    if !cc.is_nonnull() {
        return Ok(Some(format!("grad f is {:?}, not spacelike or timelike", cc.kind)));
    }
    let h = harmonicity_checks(g, q.potential(), zt)?;
    if !h.both_hold() {
        return Ok(Some(format!(
            "harmonicity fails (div W: {}; W(.,.,.,grad f): {})",
            h.div_weyl.summary(),
            h.weyl_gradient.summary()
        )));
    }
    Ok(None)
}

/// Diagonality of the Ricci tensor in a frame starting at `∇f`,
/// umbilicity of the level sets and the contracted Weyl relation.
pub fn nonisotropic_structure_checks(q: &QeStructure, zt: &ZeroTest) -> Result<Vec<Finding>, QeError> {
    if let Some(why) = nonisotropic_preconditions(q, zt)? {
        return Err(QeError::Refused(why));
    }
    let g = q.metric();
    let f = q.potential();
    let grad = gradient(g, f);
    let frame = FrameField::orthogonal_from(g, grad.components())?;
    if frame.len() != g.dim() {
        return Err(QeError::Degenerate(format!(
            "Gram-Schmidt produced only {} of {} frame vectors",
            frame.len(),
            g.dim()
        )));
    }
    let v = &frame.vectors;
    let rho = g.ricci();
    let hes = hessian(g, f);
    let mut offdiag = Vec::new();
    let mut umbilic = Vec::new();
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            offdiag.push((vec![i, j], bilinear(g, rho, &v[i], &v[j])));
            if i >= 1 {
                umbilic.push((vec![i, j], bilinear(g, &hes, &v[i], &v[j])));
                let hii = bilinear(g, &hes, &v[i], &v[i]);
                let hjj = bilinear(g, &hes, &v[j], &v[j]);
                let d = &(&hii * &frame.gram[j][j]) - &(&hjj * &frame.gram[i][i]);
                umbilic.push((vec![i, j, i, j], d));
            }
        }
    }
    Ok(vec![
        Finding::from_assessment("ricci_diagonal_in_frame", ANCHOR_DIAG, &assess_exprs(&offdiag, zt)?),
        Finding::from_assessment("level_sets_umbilical", ANCHOR_UMBILIC, &assess_exprs(&umbilic, zt)?),
        Finding::from_assessment(
            "gradient_contraction",
            ANCHOR_CONTRACTION,
            &gradient_contraction_residual(g, f).assess(zt)?,
        ),
    ])
}
