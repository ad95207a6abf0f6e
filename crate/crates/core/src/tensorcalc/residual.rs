//! Zero-testing whole tensors.

use serde::{Deserialize, Serialize};

use super::tensor::TensorField;
use crate::par;
use crate::symexpr::{Expr, SampleError, ZeroStatus, ZeroTest};

/// Longest residual expression kept verbatim in an assessment.
const MAX_SHOWN: usize = 240;

/// Verdict on a family of expressions that should all vanish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub status: ZeroStatus,
    /// Largest sampled |value|; 0 when every verdict was exact.
    pub max_abs: f64,
    pub components: usize,
    pub sampled: usize,
    pub resamples: usize,
    /// First offending component (index and expression), if any.
    pub witness: Option<(Vec<usize>, String)>,
}

impl Assessment {
    pub fn vanishes(&self) -> bool {
        self.status.vanishes()
    }

    /// "exact" for certified verdicts, otherwise the sampled maximum.
    pub fn summary(&self) -> String {
        match (&self.status, &self.witness) {
            (ZeroStatus::Zero, _) => "exact".into(),
            (ZeroStatus::NonZero, Some((ix, e))) => format!("exact nonzero at {ix:?}: {e}"),
            (_, Some((ix, e))) => format!("max |value| {:.3e}; component {ix:?}: {e}", self.max_abs),
            _ => format!("max |value| {:.3e}", self.max_abs),
        }
    }
}

fn shorten(e: &Expr) -> String {
    let s = e.to_string();
    if s.len() <= MAX_SHOWN {
        s
    } else {
        let cut = (0..=MAX_SHOWN).rev().find(|k| s.is_char_boundary(*k)).unwrap_or(0);
        format!("{} ...", &s[..cut])
    }
}

/// Zero-test each labelled expression (in parallel) and merge the verdicts.
pub fn assess_exprs(items: &[(Vec<usize>, Expr)], zt: &ZeroTest) -> Result<Assessment, SampleError> {
    let verdicts = par::map_slice(items, |(_, e)| zt.check(e));
    let mut out = Assessment {
        status: ZeroStatus::Zero,
        max_abs: 0.0,
        components: items.len(),
        sampled: 0,
        resamples: 0,
        witness: None,
    };
    for ((ix, e), v) in items.iter().zip(verdicts) {
        let v = v?;
        out.status = out.status.combine(v.status);
        out.max_abs = out.max_abs.max(v.max_abs);
        if v.samples > 0 {
            out.sampled += 1;
        }
        out.resamples += v.resamples;
        if !v.status.vanishes() && out.witness.is_none() {
            out.witness = Some((ix.clone(), shorten(e)));
        }
    }
    Ok(out)
}

pub fn assess_expr(e: &Expr, zt: &ZeroTest) -> Result<Assessment, SampleError> {
    assess_exprs(&[(vec![], e.clone())], zt)
}

impl TensorField {
    /// Zero-test every component that is not already structurally zero.
    pub fn assess(&self, zt: &ZeroTest) -> Result<Assessment, SampleError> {
        let items: Vec<(Vec<usize>, Expr)> =
            self.nonzero_components().into_iter().map(|(ix, e)| (ix, e.clone())).collect();
        let mut a = assess_exprs(&items, zt)?;
        a.components = self.components().len();
        Ok(a)
    }
}
