//! pp-wave metrics from a profile function, and the closed forms of their
//! Weyl tensor and its divergence.

use std::collections::BTreeMap;

use super::error::PpWaveError;
use crate::metricdsl::{brinkmann_matrix, Chart, PPWAVE_CHART};
use crate::symexpr::{Expr, Symbol, ZeroStatus, ZeroTest};
use crate::tensorcalc::{assess_exprs, Assessment, MetricField};

pub(crate) const U: usize = 0;
pub(crate) const V: usize = 1;
pub(crate) const X1: usize = 2;
pub(crate) const X2: usize = 3;

/// A validated profile `H(u, x1, x2)` of `2 du dv + H du² + dx1² + dx2²`.
#[derive(Clone, Debug, PartialEq)]
pub struct PpWaveSpec {
    h: Expr,
    chart: Chart,
}

impl PpWaveSpec {
    /// Accepts profiles that mention only `u`, `x1`, `x2`.
    pub fn new(h: Expr) -> Result<PpWaveSpec, PpWaveError> {
        let chart = Chart::brinkmann();
        for s in h.free_symbols() {
            if s.name() == PPWAVE_CHART[V] {
                return Err(PpWaveError::DependsOnV);
            }
            if chart.index_of(s.name()).is_none() {
                return Err(PpWaveError::ForeignSymbol(s.name().to_string()));
            }
        }
        Ok(PpWaveSpec { h, chart })
    }

    pub fn profile(&self) -> &Expr {
        &self.h
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn u(&self) -> &Symbol {
        self.chart.coord(U)
    }

    pub fn x1(&self) -> &Symbol {
        self.chart.coord(X1)
    }

    pub fn x2(&self) -> &Symbol {
        self.chart.coord(X2)
    }

    pub fn metric(&self) -> Result<MetricField, PpWaveError> {
        Ok(MetricField::new(self.chart.clone(), brinkmann_matrix(&self.h))?)
    }

    fn d(&self, e: &Expr, k: usize) -> Expr {
        e.diff(self.chart.coord(k))
    }

    /// Transverse Laplacian `∂²H/∂x1² + ∂²H/∂x2²`.
    pub fn transverse_laplacian(&self) -> Expr {
        &self.d(&self.d(&self.h, X1), X1) + &self.d(&self.d(&self.h, X2), X2)
    }

    pub fn closed_form_weyl(&self) -> ClosedFormWeyl {
        let h11 = self.d(&self.d(&self.h, X1), X1);
        let h22 = self.d(&self.d(&self.h, X2), X2);
        let h12 = self.d(&self.d(&self.h, X1), X2);
        let diag = &Expr::frac(1, 4) * &(&h22 - &h11);
        let mixed = &Expr::frac(-1, 2) * &h12;
        ClosedFormWeyl { u1u1: diag.clone(), u1u2: mixed, u2u2: -&diag }
    }

    pub fn closed_form_divweyl(&self) -> ClosedFormDivWeyl {
        let h1 = self.d(&self.h, X1);
        let h2 = self.d(&self.h, X2);
        let h111 = self.d(&self.d(&h1, X1), X1);
        let h122 = self.d(&self.d(&h1, X2), X2);
        let h112 = self.d(&self.d(&h1, X1), X2);
        let h222 = self.d(&self.d(&h2, X2), X2);
        let q = Expr::frac(-1, 4);
        ClosedFormDivWeyl { u1u: &q * &(&h111 + &h122), u2u: &q * &(&h112 + &h222) }
    }

    /// Status of `W ≡ 0` from the closed forms.
    pub fn is_lcf(&self, zt: &ZeroTest) -> Result<ZeroStatus, PpWaveError> {
        let w = self.closed_form_weyl();
        let items = vec![(vec![X1, X1], w.u1u1), (vec![X1, X2], w.u1u2)];
        Ok(assess_exprs(&items, zt)?.status)
    }

    /// Status of `∂_{x1} ΔH = ∂_{x2} ΔH = 0`, i.e. of the transverse
    /// Laplacian being a function of `u` alone.
    pub fn harmonic_weyl_condition(&self, zt: &ZeroTest) -> Result<ZeroStatus, PpWaveError> {
        Ok(self.harmonic_weyl_assessment(zt)?.status)
    }

    pub fn harmonic_weyl_assessment(&self, zt: &ZeroTest) -> Result<Assessment, PpWaveError> {
        let lap = self.transverse_laplacian();
        let items = vec![(vec![X1], self.d(&lap, X1)), (vec![X2], self.d(&lap, X2))];
        Ok(assess_exprs(&items, zt)?)
    }

    /// Status of `div W ≡ 0` from the closed forms.
    pub fn closed_form_harmonic(&self, zt: &ZeroTest) -> Result<ZeroStatus, PpWaveError> {
        let d = self.closed_form_divweyl();
        let items = vec![(vec![U, X1, U], d.u1u), (vec![U, X2, U], d.u2u)];
        Ok(assess_exprs(&items, zt)?.status)
    }

    /// `ΔH` as a function of `u`, when the harmonic condition holds.
    pub fn potential_source(&self, zt: &ZeroTest) -> Result<Expr, PpWaveError> {
        if !self.harmonic_weyl_condition(zt)?.vanishes() {
            return Err(PpWaveError::NotFunctionOfU(self.transverse_laplacian().to_string()));
        }
        let mut at_origin = BTreeMap::new();
        at_origin.insert(self.x1().clone(), Expr::zero());
        at_origin.insert(self.x2().clone(), Expr::zero());
        Ok(self.transverse_laplacian().subs(&at_origin))
    }
}

/// `build_ppwave` as a free function.
pub fn build_ppwave(h: &Expr) -> Result<MetricField, PpWaveError> {
    PpWaveSpec::new(h.clone())?.metric()
}

/// `W(∂u,∂xi,∂u,∂xj)`; the fourth printed value `W(∂u,∂x2,∂u,∂x1)`
/// equals `u1u2` by pair symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormWeyl {
    pub u1u1: Expr,
    pub u1u2: Expr,
    pub u2u2: Expr,
}

impl ClosedFormWeyl {
    pub fn get(&self, i: usize, j: usize) -> &Expr {
        match (i, j) {
            (X1, X1) => &self.u1u1,
            (X2, X2) => &self.u2u2,
            _ => &self.u1u2,
        }
    }

    /// The four printed values in the order (11, 12, 21, 22).
    pub fn values(&self) -> [Expr; 4] {
        [self.u1u1.clone(), self.u1u2.clone(), self.u1u2.clone(), self.u2u2.clone()]
    }
}

/// `div W(∂u,∂xi,∂u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormDivWeyl {
    pub u1u: Expr,
    pub u2u: Expr,
}

impl ClosedFormDivWeyl {
    pub fn get(&self, i: usize) -> &Expr {
        if i == X1 {
            &self.u1u
        } else {
            &self.u2u
        }
    }
}

/// `a(u)(x1² + x2²) + b1(u) x1 + b2(u) x2 + c(u)`.
pub fn plane_wave_h(a: &Expr, b1: &Expr, b2: &Expr, c: &Expr) -> Result<Expr, PpWaveError> {
    for e in [a, b1, b2, c] {
        if e.free_symbols().iter().any(|s| s.name() != PPWAVE_CHART[U]) {
            return Err(PpWaveError::NotFunctionOfU(e.to_string()));
        }
    }
    let x1 = Expr::sym(PPWAVE_CHART[X1]);
    let x2 = Expr::sym(PPWAVE_CHART[X2]);
    let quad = &(&x1 * &x1) + &(&x2 * &x2);
    Ok(&(&(&(a * &quad) + &(b1 * &x1)) + &(b2 * &x2)) + c)
}

/// Brute-force versus closed-form comparison of `W` and `div W`.
#[derive(Clone, Debug)]
pub struct ClosedFormComparison {
    /// Printed Weyl slots and their symmetry partners.
    pub weyl_printed: Assessment,
    /// Every other Weyl component.
    pub weyl_rest: Assessment,
    pub divweyl_printed: Assessment,
    pub divweyl_rest: Assessment,
}

impl ClosedFormComparison {
    pub fn all_exact_zero(&self) -> bool {
        [&self.weyl_printed, &self.weyl_rest, &self.divweyl_printed, &self.divweyl_rest]
            .iter()
            .all(|a| a.status == ZeroStatus::Zero)
    }

    pub fn all_vanish(&self) -> bool {
        [&self.weyl_printed, &self.weyl_rest, &self.divweyl_printed, &self.divweyl_rest].iter().all(|a| a.vanishes())
    }
}

/// Expected Weyl component from the closed forms, including the sign
/// flips of the pair antisymmetries; zero outside the printed pattern.
fn expected_weyl(cf: &ClosedFormWeyl, ix: &[usize]) -> Option<Expr> {
    let pair = |a: usize, b: usize| -> Option<(usize, bool)> {
        match (a, b) {
            (U, x) if x == X1 || x == X2 => Some((x, true)),
            (x, U) if x == X1 || x == X2 => Some((x, false)),
            _ => None,
        }
    };
    let (i, s1) = pair(ix[0], ix[1])?;
    let (j, s2) = pair(ix[2], ix[3])?;
    let v = cf.get(i, j).clone();
    Some(if s1 == s2 { v } else { -&v })
}

fn expected_divweyl(cf: &ClosedFormDivWeyl, ix: &[usize]) -> Option<Expr> {
    match (ix[0], ix[1], ix[2]) {
        (U, x, U) if x == X1 || x == X2 => Some(cf.get(x).clone()),
        (x, U, U) if x == X1 || x == X2 => Some(-cf.get(x)),
        _ => None,
    }
}

/// Compare the computed curvature of `spec.metric()` with the closed forms.
/// `weyl_sign` multiplies the computed Weyl tensor before comparison; it is
/// 1 except in calibration fixtures that inject a sign error.
pub fn compare_closed_forms(
    spec: &PpWaveSpec,
    weyl_sign: i64,
    zt: &ZeroTest,
) -> Result<ClosedFormComparison, PpWaveError> {
    let g = spec.metric()?;
    let sign = Expr::int(weyl_sign);
    let w = g.weyl()?;
    let dw = g.div_weyl()?;
    let cf = spec.closed_form_weyl();
    let cfd = spec.closed_form_divweyl();
    let (mut wp, mut wr, mut dp, mut dr) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (ix, e) in w.indexed() {
        let e = &sign * e;
        match expected_weyl(&cf, &ix) {
            Some(x) => wp.push((ix, &e - &x)),
            None => wr.push((ix, e)),
        }
    }
    for (ix, e) in dw.indexed() {
        let e = &sign * e;
        match expected_divweyl(&cfd, &ix) {
            Some(x) => dp.push((ix, &e - &x)),
            None => dr.push((ix, e)),
        }
    }
    Ok(ClosedFormComparison {
        weyl_printed: assess_exprs(&wp, zt)?,
        weyl_rest: assess_exprs(&wr, zt)?,
        divweyl_printed: assess_exprs(&dp, zt)?,
        divweyl_rest: assess_exprs(&dr, zt)?,
    })
}
