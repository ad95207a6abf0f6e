//! Frames built symbolically by Gram–Schmidt.

use super::error::TensorError;
use super::metric::MetricField;
use crate::symexpr::{is_zero, Expr};

/// Ordered vector fields (upper components) with their Gram matrix.
#[derive(Clone, Debug)]
pub struct FrameField {
    pub vectors: Vec<Vec<Expr>>,
    pub gram: Vec<Vec<Expr>>,
}

fn vanishes(e: &Expr) -> bool {
    e.is_zero() || is_zero(e).map(|s| s.vanishes()).unwrap_or(false)
}

fn axpy(a: &Expr, x: &[Expr], y: &[Expr]) -> Vec<Expr> {
    // y + a x
    x.iter().zip(y).map(|(xi, yi)| if xi.is_zero() { yi.clone() } else { yi + &(a * xi) }).collect()
}

fn coordinate_vector(n: usize, k: usize) -> Vec<Expr> {
    (0..n).map(|i| if i == k { Expr::one() } else { Expr::zero() }).collect()
}

impl FrameField {
    fn from_vectors(g: &MetricField, vectors: Vec<Vec<Expr>>) -> FrameField {
        let gram = vectors.iter().map(|a| vectors.iter().map(|b| g.inner(a, b)).collect()).collect();
        FrameField { vectors, gram }
    }

    /// Orthogonal (unnormalized) frame whose first vector is `first`,
    /// completed by Gram–Schmidt over the coordinate basis in chart order.
    /// Candidates that vanish or have null norm are skipped, so the frame
    /// may be shorter than the dimension when the metric is indefinite.
    pub fn orthogonal_from(g: &MetricField, first: &[Expr]) -> Result<FrameField, TensorError> {
        let n = g.dim();
        let mut basis: Vec<Vec<Expr>> = Vec::new();
        let mut norms: Vec<Expr> = Vec::new();
        let candidates = std::iter::once(first.to_vec()).chain((0..n).map(|k| coordinate_vector(n, k)));
        for c in candidates {
            if basis.len() == n {
                break;
            }
            let mut v = c.clone();
            for (b, nb) in basis.iter().zip(&norms) {
                let coef = &g.inner(&c, b) * &nb.recip();
                if !coef.is_zero() {
                    v = axpy(&-&coef, b, &v);
                }
            }
            if v.iter().all(vanishes) {
                continue;
            }
            let norm = g.inner(&v, &v);
            if vanishes(&norm) {
                continue;
            }
            norms.push(norm);
            basis.push(v);
        }
        Ok(Self::from_vectors(g, basis))
    }

    /// Null frame adapted to a null vector `nvec`: `U` null with
    /// `g(U, nvec) = 1`, followed by unit vectors orthogonal to both.
    /// Returns the frame `[nvec, U, X_1, ..]`.
    pub fn null_frame(g: &MetricField, nvec: &[Expr]) -> Result<FrameField, TensorError> {
        let n = g.dim();
        if !vanishes(&g.inner(nvec, nvec)) {
            return Err(TensorError::Shape("null frame requested for a non-null vector".into()));
        }
        let pick = (0..n)
            .map(|k| coordinate_vector(n, k))
            .find(|e| !vanishes(&g.inner(e, nvec)))
            .ok_or_else(|| TensorError::Shape("vector is orthogonal to every coordinate field".into()))?;
        let en = g.inner(&pick, nvec);
        let ee = g.inner(&pick, &pick);
        let inv_en = en.recip();
        // U = (e − g(e,e)/(2 g(e,N)) N) / g(e,N)
        let shift = &(&ee * &inv_en) * &Expr::frac(-1, 2);
        let u: Vec<Expr> = axpy(&shift, nvec, &pick).iter().map(|c| c * &inv_en).collect();
        let mut spatial: Vec<Vec<Expr>> = Vec::new();
        let mut spatial_norms: Vec<Expr> = Vec::new();
        for k in 0..n {
            if spatial.len() + 2 == n {
                break;
            }
            let e = coordinate_vector(n, k);
            // remove the components along the hyperbolic plane spanned by N and U
            let mut x = axpy(&-&g.inner(&e, nvec), &u, &e);
            x = axpy(&-&g.inner(&e, &u), nvec, &x);
            for (b, nb) in spatial.iter().zip(&spatial_norms) {
                let coef = &g.inner(&x, b) * &nb.recip();
                if !coef.is_zero() {
                    x = axpy(&-&coef, b, &x);
                }
            }
            if x.iter().all(vanishes) {
                continue;
            }
            let norm = g.inner(&x, &x);
            if vanishes(&norm) {
                continue;
            }
            spatial_norms.push(norm);
            spatial.push(x);
        }
        let mut vectors = vec![nvec.to_vec(), u];
        for (x, nx) in spatial.into_iter().zip(spatial_norms) {
            let scale = nx.sqrt().recip();
            vectors.push(x.iter().map(|c| c * &scale).collect());
        }
        Ok(Self::from_vectors(g, vectors))
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Gram matrix minus `target`, flattened as (i, j, residual).
    pub fn gram_residual(&self, target: &[Vec<Expr>]) -> Vec<(Vec<usize>, Expr)> {
        let mut out = Vec::new();
        for (i, row) in self.gram.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                out.push((vec![i, j], e - &target[i][j]));
            }
        }
        out
    }

    /// Target Gram matrix of a null frame `[N, U, X_1, ..]`.
    pub fn null_frame_target(len: usize) -> Vec<Vec<Expr>> {
        (0..len)
            .map(|i| {
                (0..len)
                    .map(|j| match (i, j) {
                        (0, 1) | (1, 0) => Expr::one(),
                        (a, b) if a == b && a >= 2 => Expr::one(),
                        _ => Expr::zero(),
                    })
                    .collect()
            })
            .collect()
    }

    /// Off-diagonal Gram entries, which vanish for an orthogonal frame.
    pub fn orthogonality_residual(&self) -> Vec<(Vec<usize>, Expr)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j {
                    out.push((vec![i, j], self.gram[i][j].clone()));
                }
            }
        }
        out
    }
}
