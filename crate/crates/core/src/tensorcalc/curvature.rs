//! Levi-Civita connection and curvature.
//!
//! Sign convention. The curvature operator is
//! `R(X,Y) = ∇_[X,Y] − [∇_X, ∇_Y]`, the negative of the more common one,
//! and `R(X,Y,Z,T) = g(R(X,Y)Z, T)`. In coordinates, with the textbook
//! components `K^m_kij = ∂_i Γ^m_jk − ∂_j Γ^m_ik + Γ^m_ip Γ^p_jk − Γ^m_jp Γ^p_ik`
//! of `∇_i∇_j − ∇_j∇_i`, this gives `R_ijkl = −g_lm K^m_kij`.
//! Under this choice a round sphere has `R(X,Y,X,Y) > 0`, the Ricci tensor
//! is `ρ_jl = g^ik R_ijkl`, and a pp-wave has
//! `R(∂u,∂x1,∂u,∂x1) = −½ ∂²H/∂x1²`, which reproduces the published pp-wave
//! Weyl closed forms with their printed signs (pinned by a calibration test).

use super::derivative::covariant_derivative;
use super::error::TensorError;
use super::metric::MetricField;
use super::tensor::{flatten, Slot, Symmetry, TensorField};
use crate::par;
use crate::symexpr::Expr;

impl MetricField {
    /// `Γ^k_ij`, slots (upper, lower, lower).
    pub fn christoffel(&self) -> &TensorField {
        self.cache.christoffel.get_or_init(|| {
            let n = self.dim();
            let coords = self.chart().coords();
            // first-kind symbols Γ_lij = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
            let dg: Vec<Expr> = par::map_range(n * n * n, |k| {
                let (a, b, c) = (k / (n * n), (k / n) % n, k % n);
                self.g(a, b).diff(&coords[c])
            });
            let dg = |a: usize, b: usize, c: usize| &dg[(a * n + b) * n + c];
            let half = Expr::frac(1, 2);
            let first: Vec<Expr> = par::map_range(n * n * n, |k| {
                let (l, i, j) = (k / (n * n), (k / n) % n, k % n);
                &(&(dg(j, l, i) + dg(i, l, j)) - dg(i, j, l)) * &half
            });
            TensorField::from_fn(self.chart(), vec![Slot::Upper, Slot::Lower, Slot::Lower], |ix| {
                let (k, i, j) = (ix[0], ix[1], ix[2]);
                (0..n)
                    .filter(|&l| !self.inv(k, l).is_zero())
                    .map(|l| self.inv(k, l) * &first[(l * n + i) * n + j])
                    .sum()
            })
        })
    }

    /// `∂_d Γ^m_jk` for all index combinations, as a flat table indexed
    /// by (m, j, k, d).
    fn christoffel_derivatives(&self) -> Vec<Expr> {
        let n = self.dim();
        let gamma = self.christoffel();
        let coords = self.chart().coords();
        par::map_range(n.pow(4), |k| {
            let (m, j, kk, d) = (k / (n * n * n), (k / (n * n)) % n, (k / n) % n, k % n);
            gamma.get(&[m, j, kk]).diff(&coords[d])
        })
    }

    /// Textbook `K^m_kij`, the components of `∇_i∇_j − ∇_j∇_i` applied to `∂_k`.
    fn curvature_operator(&self, dgamma: &[Expr], m: usize, k: usize, i: usize, j: usize) -> Expr {
        let n = self.dim();
        let gamma = self.christoffel();
        let d = |m: usize, a: usize, b: usize, c: usize| &dgamma[flatten(&[m, a, b, c], n)];
        let mut acc = d(m, j, k, i) - d(m, i, k, j);
        for p in 0..n {
            let a = gamma.get(&[m, i, p]);
            let b = gamma.get(&[p, j, k]);
            if !a.is_zero() && !b.is_zero() {
                acc = &acc + &(a * b);
            }
            let c = gamma.get(&[m, j, p]);
            let e = gamma.get(&[p, i, k]);
            if !c.is_zero() && !e.is_zero() {
                acc = &acc - &(c * e);
            }
        }
        acc
    }

    fn lowered_riemann(&self, dgamma: &[Expr], i: usize, j: usize, k: usize, l: usize) -> Expr {
        let n = self.dim();
        let s: Expr = (0..n)
            .filter(|&m| !self.g(l, m).is_zero())
            .map(|m| self.g(l, m) * &self.curvature_operator(dgamma, m, k, i, j))
            .sum();
        -&s
    }

    /// `R_ijkl`, computed on independent components and filled by symmetry.
    pub fn riemann(&self) -> &TensorField {
        self.cache.riemann.get_or_init(|| {
            let n = self.dim();
            let dgamma = self.christoffel_derivatives();
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let mut independent = Vec::new();
            for (a, p) in pairs.iter().enumerate() {
                for q in &pairs[a..] {
                    independent.push((*p, *q));
                }
            }
            let values = par::map_slice(&independent, |((i, j), (k, l))| self.lowered_riemann(&dgamma, *i, *j, *k, *l));
            let mut comps = vec![Expr::zero(); n.pow(4)];
            for (((i, j), (k, l)), v) in independent.iter().zip(values) {
                let neg = -&v;
                for (a, b, c, d, val) in [
                    (i, j, k, l, &v),
                    (j, i, k, l, &neg),
                    (i, j, l, k, &neg),
                    (j, i, l, k, &v),
                    (k, l, i, j, &v),
                    (l, k, i, j, &neg),
                    (k, l, j, i, &neg),
                    (l, k, j, i, &v),
                ] {
                    comps[flatten(&[*a, *b, *c, *d], n)] = val.clone();
                }
            }
            TensorField::new(self.chart().clone(), vec![Slot::Lower; 4], Symmetry::None, comps)
                .expect("shape")
                .assume_symmetry(Symmetry::RiemannType)
        })
    }

    /// Every `R_ijkl` computed independently from the defining formula, with
    /// no symmetry assumed. Used to test the symmetries themselves.
    pub fn riemann_brute_force(&self) -> TensorField {
        let dgamma = self.christoffel_derivatives();
        TensorField::from_fn(self.chart(), vec![Slot::Lower; 4], |ix| {
            self.lowered_riemann(&dgamma, ix[0], ix[1], ix[2], ix[3])
        })
    }

    /// `ρ_jl = g^ik R_ijkl`.
    pub fn ricci(&self) -> &TensorField {
        self.cache.ricci.get_or_init(|| {
            let n = self.dim();
            let r = self.riemann();
            TensorField::from_fn(self.chart(), vec![Slot::Lower, Slot::Lower], |ix| {
                let (j, l) = (ix[0], ix[1]);
                let mut acc = Expr::zero();
                for i in 0..n {
                    for k in 0..n {
                        let gi = self.inv(i, k);
                        if gi.is_zero() {
                            continue;
                        }
                        let c = r.get(&[i, j, k, l]);
                        if !c.is_zero() {
                            acc = &acc + &(gi * c);
                        }
                    }
                }
                acc
            })
            .assume_symmetry(Symmetry::SymmetricPair)
        })
    }

    /// `τ = g^jl ρ_jl`.
    pub fn scalar_curvature(&self) -> &Expr {
        self.cache.scalar.get_or_init(|| {
            let n = self.dim();
            let rho = self.ricci();
            let mut acc = Expr::zero();
            for j in 0..n {
                for l in 0..n {
                    let gi = self.inv(j, l);
                    if !gi.is_zero() {
                        acc = &acc + &(gi * rho.get(&[j, l]));
                    }
                }
            }
            acc
        })
    }

    /// Four-dimensional Weyl tensor
    /// `W = R + τ/6 (g_ik g_jl − g_il g_jk) + ½(ρ_il g_jk − ρ_ik g_jl + ρ_jk g_il − ρ_jl g_ik)`.
    pub fn weyl(&self) -> Result<&TensorField, TensorError> {
        self.require_dim4("weyl")?;
        Ok(self.cache.weyl.get_or_init(|| {
            let r = self.riemann();
            let rho = self.ricci();
            let tau6 = self.scalar_curvature() * &Expr::frac(1, 6);
            let half = Expr::frac(1, 2);
            TensorField::from_fn(self.chart(), vec![Slot::Lower; 4], |ix| {
                let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
                let g = |a, b| self.g(a, b);
                let p = |a, b| rho.get(&[a, b]);
                let gg = &(g(i, k) * g(j, l)) - &(g(i, l) * g(j, k));
                let pg = &(&(&(p(i, l) * g(j, k)) - &(p(i, k) * g(j, l))) + &(p(j, k) * g(i, l))) - &(p(j, l) * g(i, k));
                &(r.get(ix) + &(&tau6 * &gg)) + &(&half * &pg)
            })
            .assume_symmetry(Symmetry::RiemannType)
        }))
    }

    /// Divergence of the Weyl tensor contracted on its last slot,
    /// `(div W)(X,Y,Z) = g^ab (∇_a W)(X,Y,Z,∂_b)`.
    pub fn div_weyl(&self) -> Result<&TensorField, TensorError> {
        self.require_dim4("div_weyl")?;
        if let Some(t) = self.cache.div_weyl.get() {
            return Ok(t);
        }
        let w = self.weyl()?.clone();
        let d = divergence(self, &w, 3);
        Ok(self.cache.div_weyl.get_or_init(|| d))
    }

    /// Divergence of the Weyl tensor contracted on its first slot,
    /// `g^ab (∇_a W)(∂_b,X,Y,Z)`. Kept for the slot-convention comparison.
    pub fn div_weyl_first_slot(&self) -> Result<TensorField, TensorError> {
        let w = self.weyl()?.clone();
        Ok(divergence(self, &w, 0))
    }

    pub(crate) fn require_dim4(&self, op: &'static str) -> Result<(), TensorError> {
        if self.dim() != 4 {
            return Err(TensorError::UnsupportedDimension { op, dim: self.dim() });
        }
        Ok(())
    }
}

/// Metric divergence of an all-lower tensor on one slot:
/// `g^ab (∇_a T)(.., ∂_b at position `slot`, ..)`. The result has rank one less.
pub fn divergence(g: &MetricField, t: &TensorField, slot: usize) -> TensorField {
    let n = g.dim();
    let nabla = covariant_derivative(g, t);
    let rank = t.rank();
    let slots: Vec<Slot> = t.slots().iter().enumerate().filter(|(k, _)| *k != slot).map(|(_, s)| *s).collect();
    TensorField::from_fn(g.chart(), slots, |ix| {
        let mut acc = Expr::zero();
        let mut full = Vec::with_capacity(rank + 1);
        for a in 0..n {
            for b in 0..n {
                let gi = g.inv(a, b);
                if gi.is_zero() {
                    continue;
                }
                full.clear();
                full.push(a);
                full.extend_from_slice(&ix[..slot]);
                full.push(b);
                full.extend_from_slice(&ix[slot..]);
                let c = nabla.get(&full);
                if !c.is_zero() {
                    acc = &acc + &(gi * c);
                }
            }
        }
        acc
    })
}

/// Free-function forms of the curvature accessors.
pub fn christoffel(g: &MetricField) -> TensorField {
    g.christoffel().clone()
}

pub fn riemann(g: &MetricField) -> TensorField {
    g.riemann().clone()
}

pub fn ricci(g: &MetricField) -> TensorField {
    g.ricci().clone()
}

pub fn scalar_curvature(g: &MetricField) -> Expr {
    g.scalar_curvature().clone()
}

pub fn weyl(g: &MetricField) -> Result<TensorField, TensorError> {
    g.weyl().cloned()
}

pub fn div_weyl(g: &MetricField) -> Result<TensorField, TensorError> {
    g.div_weyl().cloned()
}
