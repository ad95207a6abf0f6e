//! Causal type of the gradient and the harmonic Weyl conditions.

use serde::{Deserialize, Serialize};

use super::error::QeError;
use crate::symexpr::{Expr, NumericPoint, ZeroTest};
use crate::tensorcalc::{gradient, grad_norm_sq, weyl_along_gradient, Assessment, MetricField};

/// Tolerance on `‖∇f‖²(p)` and on the gradient components.
pub const CAUSAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalType {
    Spacelike,
    Timelike,
    Null,
    ZeroVector,
}

/// Causal type of `∇f` with the point it was decided at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CausalCharacter {
    pub kind: CausalType,
    pub point: Vec<(String, f64)>,
    /// `‖∇f‖²` at the point.
    pub norm_sq: f64,
}

impl CausalCharacter {
    pub fn is_null(&self) -> bool {
        self.kind == CausalType::Null
    }

    pub fn is_nonnull(&self) -> bool {
        matches!(self.kind, CausalType::Spacelike | CausalType::Timelike)
    }
}

/// Classify `∇f` at `p`. The Null verdict additionally requires `‖∇f‖²`
/// to vanish identically; a gradient that is null only at `p` is reported
/// as degenerate so the caller can pick another point.
pub fn causal_character(g: &MetricField, f: &Expr, p: &NumericPoint, zt: &ZeroTest) -> Result<CausalCharacter, QeError> {
    let grad = gradient(g, f);
    let mut grad_max: f64 = 0.0;
    for c in grad.components() {
        grad_max = grad_max.max(c.eval(p)?.abs());
    }
    let norm = grad_norm_sq(g, f);
    let norm_sq = norm.eval(p)?;
    let point = p.iter().map(|(s, v)| (s.name().to_string(), v)).collect();
    let kind = if grad.components().iter().all(|c| c.is_zero()) || grad_max <= CAUSAL_TOLERANCE {
        CausalType::ZeroVector
    } else if zt.check(&norm)?.status.vanishes() {
        CausalType::Null
    } else if norm_sq > CAUSAL_TOLERANCE {
        CausalType::Spacelike
    } else if norm_sq < -CAUSAL_TOLERANCE {
        CausalType::Timelike
    } else {
        return Err(QeError::Degenerate(format!(
            "the gradient is null at the sample point (|grad f|^2 = {norm_sq:e}) but not identically; choose another point"
        )));
    };
    Ok(CausalCharacter { kind, point, norm_sq })
}

/// Verdicts on `div W = 0` and `W(·,·,·,∇f) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicityChecks {
    pub div_weyl: Assessment,
    pub weyl_gradient: Assessment,
}

impl HarmonicityChecks {
    pub fn both_hold(&self) -> bool {
        self.div_weyl.vanishes() && self.weyl_gradient.vanishes()
    }
}

pub fn harmonicity_checks(g: &MetricField, f: &Expr, zt: &ZeroTest) -> Result<HarmonicityChecks, QeError> {
    let div_weyl = g.div_weyl()?.assess(zt)?;
    let weyl_gradient = weyl_along_gradient(g, f)?.assess(zt)?;
    Ok(HarmonicityChecks { div_weyl, weyl_gradient })
}
