use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::error::TensorError;
use super::tensor::{Slot, Symmetry, TensorField};
use crate::metricdsl::{Chart, MetricDocument};
use crate::par;
use crate::symexpr::{Expr, NumericPoint};

/// Counts of negative, zero and positive eigenvalues at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Signature {
    pub fn is_lorentzian(&self) -> bool {
        self.negative == 1 && self.zero == 0 && self.positive >= 1
    }

    pub fn is_riemannian(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }
}

/// Default evaluation point: the k-th coordinate (0-based) takes 0.3 + 0.2·k.
pub fn default_point(chart: &Chart) -> NumericPoint {
    chart.coords().iter().enumerate().map(|(k, c)| (c.clone(), 0.3 + 0.2 * k as f64)).collect()
}

#[derive(Clone, Default)]
pub(crate) struct Cache {
    pub christoffel: OnceLock<TensorField>,
    pub riemann: OnceLock<TensorField>,
    pub ricci: OnceLock<TensorField>,
    pub scalar: OnceLock<Expr>,
    pub weyl: OnceLock<TensorField>,
    pub div_weyl: OnceLock<TensorField>,
}

/// Symmetric metric with its exact inverse. Curvature is computed lazily and
/// cached, so a `MetricField` can be shared across threads and queried
/// repeatedly.
#[derive(Clone)]
pub struct MetricField {
    chart: Chart,
    g: TensorField,
    inv: TensorField,
    det: Expr,
    point: NumericPoint,
    signature: Signature,
    pub(crate) cache: Cache,
}

impl std::fmt::Debug for MetricField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricField")
            .field("chart", &self.chart.names())
            .field("det", &self.det.to_string())
            .field("signature", &self.signature)
            .finish()
    }
}

impl MetricField {
    /// Metric from a full component matrix, checked at the default point.
    pub fn new(chart: Chart, comps: Vec<Vec<Expr>>) -> Result<Self, TensorError> {
        let point = default_point(&chart);
        Self::with_point(chart, comps, point)
    }

    /// Metric from a full component matrix; non-degeneracy and signature
    /// are evaluated at `point`.
    pub fn with_point(chart: Chart, comps: Vec<Vec<Expr>>, point: NumericPoint) -> Result<Self, TensorError> {
        let n = chart.dim();
        if comps.len() != n || comps.iter().any(|r| r.len() != n) {
            return Err(TensorError::Shape(format!("metric must be {n}x{n}")));
        }
        let flat: Vec<Expr> = comps.iter().flatten().cloned().collect();
        let g = TensorField::new(chart.clone(), vec![Slot::Lower, Slot::Lower], Symmetry::SymmetricPair, flat)?;
        let det = determinant(&comps);
        if det.is_zero() {
            return Err(TensorError::Singular("determinant is identically zero".into()));
        }
        let det_at = det.eval(&point)?;
        if det_at.abs() < 1e-12 {
            return Err(TensorError::Singular(format!("determinant vanishes at the sample point (value {det_at:e})")));
        }
        let mut numeric = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                numeric[(i, j)] = comps[i][j].eval(&point)?;
            }
        }
        let signature = signature_of(numeric);

        let det_inv = det.recip();
        let inv_flat = par::map_range(n * n, |k| {
            let (i, j) = (k / n, k % n);
            // inverse = adjugate / det, adjugate_ij = cofactor_ji
            let sign = if (i + j) % 2 == 0 { Expr::one() } else { Expr::int(-1) };
            &(&sign * &determinant(&minor(&comps, j, i))) * &det_inv
        });
        let inv = TensorField::new(chart.clone(), vec![Slot::Upper, Slot::Upper], Symmetry::None, inv_flat)?
            .assume_symmetry(Symmetry::SymmetricPair);
        Ok(MetricField { chart, g, inv, det, point, signature, cache: Cache::default() })
    }

    /// Metric described by a parsed document, with parameters substituted.
    pub fn from_document(doc: &MetricDocument) -> Result<Self, TensorError> {
        Self::new(doc.chart.clone(), doc.resolved_metric())
    }

    pub fn from_document_at(doc: &MetricDocument, point: NumericPoint) -> Result<Self, TensorError> {
        Self::with_point(doc.chart.clone(), doc.resolved_metric(), point)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Lower-index metric tensor.
    pub fn tensor(&self) -> &TensorField {
        &self.g
    }

    /// Upper-index inverse metric tensor.
    pub fn inverse_tensor(&self) -> &TensorField {
        &self.inv
    }

    pub fn g(&self, i: usize, j: usize) -> &Expr {
        self.g.get(&[i, j])
    }

    pub fn inv(&self, i: usize, j: usize) -> &Expr {
        self.inv.get(&[i, j])
    }

    pub fn det(&self) -> &Expr {
        &self.det
    }

    pub fn sample_point(&self) -> &NumericPoint {
        &self.point
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// `g_ik g^kj - δ_i^j`, which must vanish.
    pub fn inverse_residual(&self) -> TensorField {
        let n = self.dim();
        TensorField::from_fn(&self.chart, vec![Slot::Lower, Slot::Upper], |ix| {
            let s: Expr = (0..n).map(|k| self.g(ix[0], k) * self.inv(k, ix[1])).sum();
            if ix[0] == ix[1] {
                &s - &Expr::one()
            } else {
                s
            }
        })
    }

    /// `g(a, b)` for vectors given by upper components.
    pub fn inner(&self, a: &[Expr], b: &[Expr]) -> Expr {
        let n = self.dim();
        let mut acc = Expr::zero();
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() || self.g(i, j).is_zero() {
                    continue;
                }
                acc = &acc + &(&(&a[i] * self.g(i, j)) * &b[j]);
            }
        }
        acc
    }

    /// Lower the index of a vector: `a_i = g_ij a^j`.
    pub fn flat(&self, a: &[Expr]) -> Vec<Expr> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.g(i, j) * &a[j]).sum()).collect()
    }

    /// Raise the index of a covector: `a^i = g^ij a_j`.
    pub fn sharp(&self, a: &[Expr]) -> Vec<Expr> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.inv(i, j) * &a[j]).sum()).collect()
    }
}

fn signature_of(m: DMatrix<f64>) -> Signature {
    let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    let eig = SymmetricEigen::new(m);
    let tol = 1e-12 * scale;
    let mut s = Signature { negative: 0, zero: 0, positive: 0 };
    for ev in eig.eigenvalues.iter() {
        if *ev > tol {
            s.positive += 1;
        } else if *ev < -tol {
            s.negative += 1;
        } else {
            s.zero += 1;
        }
    }
    s
}

fn minor(m: &[Vec<Expr>], row: usize, col: usize) -> Vec<Vec<Expr>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Exact determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Expr>]) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = Expr::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let term = &m[0][j] * &determinant(&minor(m, 0, j));
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}
