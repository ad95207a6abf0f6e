//! Checks for a null gradient: the invariant chain that forces `λ = 0`,
//! the parallel null line field spanned by `∇f`, and pure radiation.

use super::classify::{causal_character, harmonicity_checks};
use super::error::QeError;
use super::structure::{MuClass, QeStructure};
use crate::report::Finding;
use crate::symexpr::{Expr, ZeroTest};
use crate::tensorcalc::{
    assess_exprs, differential, gradient, hessian, insert_vector, laplacian, Assessment, MetricField, TensorField,
};

const ANCHOR_FIRST: &str = "Lemma \"isotropic-first-results\"";
const ANCHOR_LAMBDA: &str = "Lemma \"lambda=0\"";
const ANCHOR_PARALLEL: &str = "Lemma \"LCFlorentzAQE then Walker\"";
const ANCHOR_CURV: &str = "Eq. \"curvature0-terms\"";
const ANCHOR_PP: &str = "Theorem \"isotropic\"";
const ANCHOR_WEYL_FREE: &str = "Eq. \"lemma W=0 mu neq1\"";

/// Outcome of the parallel line field check.
#[derive(Clone, Debug)]
pub struct ParallelCheck {
    /// 2×2 minors of `(∇_X ∇f, ∇f)`; zero iff `span{∇f}` is parallel.
    pub minors: Assessment,
    /// `R(D, D⊥, ·, ·)`.
    pub curvature_line_orthogonal: Assessment,
    /// `R(D⊥, D⊥, D, ·)`.
    pub curvature_orthogonal_line: Assessment,
    /// `R(D⊥, D⊥, ·, ·)`, the extra condition that makes a pp-wave.
    pub curvature_orthogonal_orthogonal: Assessment,
}

impl ParallelCheck {
    pub fn parallel(&self) -> bool {
        self.minors.vanishes()
    }

    pub fn findings(&self) -> Vec<Finding> {
        vec![
            Finding::from_assessment("parallel_gradient_line", ANCHOR_PARALLEL, &self.minors),
            Finding::from_assessment("curvature_line_orthogonal", ANCHOR_CURV, &self.curvature_line_orthogonal),
            Finding::from_assessment("curvature_orthogonal_line", ANCHOR_CURV, &self.curvature_orthogonal_line),
            Finding::from_assessment("curvature_orthogonal_orthogonal", ANCHOR_PP, &self.curvature_orthogonal_orthogonal),
        ]
    }
}

/// Basis of `ker df`: `e_k − (∂_k f/∂_p f) e_p` for `k ≠ p`, where `p` is the
/// first coordinate along which `f` varies.
pub fn kernel_basis(g: &MetricField, f: &Expr) -> Result<Vec<Vec<Expr>>, QeError> {
    let df = differential(g, f);
    let n = g.dim();
    let mut pivot = None;
    for p in 0..n {
        let c = df.get(&[p]);
        if !c.is_zero() && !ZeroTest::default().check(c)?.status.vanishes() {
            pivot = Some(p);
            break;
        }
    }
    let p = pivot.ok_or_else(|| QeError::Degenerate("df vanishes identically".into()))?;
    let inv = df.get(&[p]).recip();
    Ok((0..n)
        .filter(|k| *k != p)
        .map(|k| {
            let mut v = vec![Expr::zero(); n];
            v[k] = Expr::one();
            v[p] = -&(df.get(&[k]) * &inv);
            v
        })
        .collect())
}

fn components_of(t: &TensorField, label: usize) -> Vec<(Vec<usize>, Expr)> {
    t.indexed()
        .filter(|(_, e)| !e.is_zero())
        .map(|(mut ix, e)| {
            ix.insert(0, label);
            (ix, e.clone())
        })
        .collect()
}

/// Is `span{∇f}` a parallel line field, and do the curvature conditions of
/// a parallel null line field (and of a pp-wave) hold?
pub fn parallel_distribution_check(g: &MetricField, f: &Expr, zt: &ZeroTest) -> Result<ParallelCheck, QeError> {
    let n = g.dim();
    let grad = gradient(g, f);
    let gv = grad.components().to_vec();
    let at_point: Vec<f64> = gv.iter().map(|c| c.eval(g.sample_point())).collect::<Result<_, _>>()?;
    if gv.iter().all(|c| c.is_zero()) || at_point.iter().all(|v| v.abs() <= 1e-12) {
        return Err(QeError::Degenerate("the gradient of f vanishes at the sample point".into()));
    }
    let hes = hessian(g, f);
    // shape operator A^i_k = g^{ij} Hes_{kj}, i.e. ∇_{∂k} ∇f
    let a = |i: usize, k: usize| -> Expr {
        (0..n).filter(|j| !g.inv(i, *j).is_zero()).map(|j| g.inv(i, j) * hes.get(&[k, j])).sum()
    };
    let mut minors = Vec::new();
    for k in 0..n {
        let col: Vec<Expr> = (0..n).map(|i| a(i, k)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let m = &(&col[i] * &gv[j]) - &(&col[j] * &gv[i]);
                if !m.is_zero() {
                    minors.push((vec![k, i, j], m));
                }
            }
        }
    }
    let minors = assess_exprs(&minors, zt)?;

    let kernel = kernel_basis(g, f)?;
    let r = g.riemann();
    let r_d = insert_vector(r, 0, &gv);
    let mut line_orth = Vec::new();
    for (k, y) in kernel.iter().enumerate() {
        line_orth.extend(components_of(&insert_vector(&r_d, 0, y), k));
    }
    let mut orth_line = Vec::new();
    let mut orth_orth = Vec::new();
    for (k, y1) in kernel.iter().enumerate() {
        let r1 = insert_vector(r, 0, y1);
        for (l, y2) in kernel.iter().enumerate().skip(k + 1) {
            let r12 = insert_vector(&r1, 0, y2);
            orth_line.extend(components_of(&insert_vector(&r12, 0, &gv), k * n + l));
            orth_orth.extend(components_of(&r12, k * n + l));
        }
    }
    Ok(ParallelCheck {
        minors,
        curvature_line_orthogonal: assess_exprs(&line_orth, zt)?,
        curvature_orthogonal_line: assess_exprs(&orth_line, zt)?,
        curvature_orthogonal_orthogonal: assess_exprs(&orth_orth, zt)?,
    })
}

/// Pure radiation: Ricci of rank at most one with null image.
pub fn pure_radiation_checks(g: &MetricField, zt: &ZeroTest) -> Result<(Assessment, Assessment), QeError> {
    let n = g.dim();
    let rho = g.ricci();
    let mut rank = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                for l in (j + 1)..n {
                    let m = &(rho.get(&[i, j]) * rho.get(&[k, l])) - &(rho.get(&[i, l]) * rho.get(&[k, j]));
                    if !m.is_zero() {
                        rank.push((vec![i, k, j, l], m));
                    }
                }
            }
        }
    }
    let mut square = Vec::new();
    for i in 0..n {
        for l in i..n {
            let mut acc = Expr::zero();
            for j in 0..n {
                for k in 0..n {
                    let gi = g.inv(j, k);
                    if !gi.is_zero() && !rho.get(&[i, j]).is_zero() && !rho.get(&[k, l]).is_zero() {
                        acc = &acc + &(&(rho.get(&[i, j]) * gi) * rho.get(&[k, l]));
                    }
                }
            }
            if !acc.is_zero() {
                square.push((vec![i, l], acc));
            }
        }
    }
    Ok((assess_exprs(&rank, zt)?, assess_exprs(&square, zt)?))
}

/// `Hes_f(∇f, ·)`, which vanishes whenever `‖∇f‖² ≡ 0`.
pub fn hessian_along_gradient(g: &MetricField, f: &Expr) -> TensorField {
    insert_vector(&hessian(g, f), 0, gradient(g, f).components())
}

/// Why a structure is outside the hypotheses of the isotropic analysis, if it is.
pub fn isotropic_preconditions(q: &QeStructure, zt: &ZeroTest) -> Result<Option<String>, QeError> {
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
    if !cc.is_null() {
        return Ok(Some(format!("grad f is {:?}, not null", cc.kind)));
    }
    let h = harmonicity_checks(g, q.potential(), zt)?;
    if !h.div_weyl.vanishes() {
        return Ok(Some(format!("div W does not vanish ({})", h.div_weyl.summary())));
    }
    if !h.weyl_gradient.vanishes() {
        return Ok(Some(format!("W(.,.,.,grad f) does not vanish ({})", h.weyl_gradient.summary())));
    }
    Ok(None)
}

/// The invariant chain for an isotropic quasi-Einstein structure with
/// harmonic Weyl tensor and `W(·,·,·,∇f) = 0`. Inputs outside those
/// hypotheses are refused.
pub fn isotropic_invariant_suite(q: &QeStructure, zt: &ZeroTest) -> Result<Vec<Finding>, QeError> {
    if let Some(why) = isotropic_preconditions(q, zt)? {
        return Err(QeError::Refused(why));
    }
    let g = q.metric();
    let f = q.potential();
    let lambda = q.lambda();
    let df = differential(g, f);
    let grad = gradient(g, f);
    let rho_grad = insert_vector(g.ricci(), 0, grad.components());
    let eigen = rho_grad.sub(&df.scale(lambda))?;
    let trace = g.scalar_curvature() - &(&Expr::int(4) * lambda);
    let dlambda = differential(g, lambda);
    let lambda_grad = dlambda.add(&df.scale(lambda))?;
    let (rank, image) = pure_radiation_checks(g, zt)?;

    let tau = g.scalar_curvature();
    let rho = g.ricci();
    let three = Expr::int(3);
    let weyl_free = TensorField::from_fn(g.chart(), vec![crate::tensorcalc::Slot::Lower; 3], |ix| {
        let (x, y, z) = (ix[0], ix[1], ix[2]);
        let a = tau * &(&(df.get(&[x]) * g.g(y, z)) - &(df.get(&[y]) * g.g(x, z)));
        let b = &three * &(&(rho.get(&[x, z]) * df.get(&[y])) - &(rho.get(&[y, z]) * df.get(&[x])));
        let c = &(g.g(x, z) * rho_grad.get(&[y])) - &(g.g(y, z) * rho_grad.get(&[x]));
        &(&a + &b) + &c
    });

    let mut out = vec![
        Finding::from_assessment("ricci_eigenvector", ANCHOR_FIRST, &eigen.assess(zt)?),
        Finding::from_assessment("trace_scalar", ANCHOR_FIRST, &crate::tensorcalc::assess_expr(&trace, zt)?),
        Finding::from_assessment("laplacian_vanishes", ANCHOR_FIRST, &crate::tensorcalc::assess_expr(&laplacian(g, f), zt)?),
        Finding::from_assessment("lambda_gradient", ANCHOR_FIRST, &lambda_grad.assess(zt)?),
        Finding::from_assessment("lambda_vanishes", ANCHOR_LAMBDA, &crate::tensorcalc::assess_expr(lambda, zt)?),
        Finding::from_assessment("ricci_rank_one", ANCHOR_LAMBDA, &rank),
        Finding::from_assessment("ricci_null_image", ANCHOR_LAMBDA, &image),
        Finding::from_assessment("hessian_along_gradient", ANCHOR_FIRST, &hessian_along_gradient(g, f).assess(zt)?),
        Finding::from_assessment("weyl_free_contraction", ANCHOR_WEYL_FREE, &weyl_free.assess(zt)?),
    ];
    out.extend(parallel_distribution_check(g, f, zt)?.findings());
    Ok(out)
}
