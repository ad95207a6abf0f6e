//! Covariant derivatives and the scalar-field operators built from them.

use super::error::TensorError;
use super::metric::MetricField;
use super::tensor::{Slot, Symmetry, TensorField};
use crate::symexpr::Expr;

/// `∇T` with the derivative index placed first:
/// `(∇T)[a, i..] = ∂_a T[i..] − Σ_lower Γ^p_{a i_s} T[..p..] + Σ_upper Γ^{i_s}_{a p} T[..p..]`.
pub fn covariant_derivative(g: &MetricField, t: &TensorField) -> TensorField {
    let n = g.dim();
    let gamma = g.christoffel();
    let coords = g.chart().coords();
    let mut slots = vec![Slot::Lower];
    slots.extend_from_slice(t.slots());
    let tslots = t.slots().to_vec();
    TensorField::from_fn(g.chart(), slots, |ix| {
        let a = ix[0];
        let idx = &ix[1..];
        let mut acc = t.get(idx).diff(&coords[a]);
        let mut moved = idx.to_vec();
        for (s, slot) in tslots.iter().enumerate() {
            let orig = idx[s];
            for p in 0..n {
                let (gm, sign_lower) = match slot {
                    Slot::Lower => (gamma.get(&[p, a, orig]), true),
                    Slot::Upper => (gamma.get(&[orig, a, p]), false),
                };
                if gm.is_zero() {
                    continue;
                }
                moved[s] = p;
                let c = t.get(&moved);
                if !c.is_zero() {
                    let term = gm * c;
                    acc = if sign_lower { &acc - &term } else { &acc + &term };
                }
            }
            moved[s] = orig;
        }
        acc
    })
}

/// Differential `df` as a covector.
pub fn differential(g: &MetricField, f: &Expr) -> TensorField {
    let coords = g.chart().coords();
    TensorField::from_fn(g.chart(), vec![Slot::Lower], |ix| f.diff(&coords[ix[0]]))
}

/// `∇f` with an upper index.
pub fn gradient(g: &MetricField, f: &Expr) -> TensorField {
    let n = g.dim();
    let df = differential(g, f);
    TensorField::from_fn(g.chart(), vec![Slot::Upper], |ix| {
        (0..n).map(|j| g.inv(ix[0], j) * df.get(&[j])).sum()
    })
}

/// `Hes_f(i,j) = ∂_i∂_j f − Γ^k_ij ∂_k f`.
pub fn hessian(g: &MetricField, f: &Expr) -> TensorField {
    let n = g.dim();
    let gamma = g.christoffel();
    let coords = g.chart().coords();
    let df: Vec<Expr> = coords.iter().map(|c| f.diff(c)).collect();
    TensorField::from_fn(g.chart(), vec![Slot::Lower, Slot::Lower], |ix| {
        let (i, j) = (ix[0], ix[1]);
        let mut acc = df[i].diff(&coords[j]);
        for k in 0..n {
            let gm = gamma.get(&[k, i, j]);
            if !gm.is_zero() && !df[k].is_zero() {
                acc = &acc - &(gm * &df[k]);
            }
        }
        acc
    })
    .assume_symmetry(Symmetry::SymmetricPair)
}

/// Full trace `g^ij T_ij` of a lower 2-tensor.
pub fn trace(g: &MetricField, t: &TensorField) -> Expr {
    let n = g.dim();
    let mut acc = Expr::zero();
    for i in 0..n {
        for j in 0..n {
            let gi = g.inv(i, j);
            if !gi.is_zero() {
                acc = &acc + &(gi * t.get(&[i, j]));
            }
        }
    }
    acc
}

/// `Δf = g^ij Hes_f(i,j)`.
pub fn laplacian(g: &MetricField, f: &Expr) -> Expr {
    trace(g, &hessian(g, f))
}

/// `‖∇f‖² = g^ij ∂_i f ∂_j f`.
pub fn grad_norm_sq(g: &MetricField, f: &Expr) -> Expr {
    let coords = g.chart().coords();
    let df: Vec<Expr> = coords.iter().map(|c| f.diff(c)).collect();
    let n = g.dim();
    let mut acc = Expr::zero();
    for i in 0..n {
        for j in 0..n {
            let gi = g.inv(i, j);
            if !gi.is_zero() && !df[i].is_zero() && !df[j].is_zero() {
                acc = &acc + &(&(gi * &df[i]) * &df[j]);
            }
        }
    }
    acc
}

fn move_index(g: &MetricField, t: &TensorField, slot: usize, to: Slot) -> Result<TensorField, TensorError> {
    if slot >= t.rank() {
        return Err(TensorError::Shape(format!("slot {slot} out of range for rank {}", t.rank())));
    }
    if t.slots()[slot] == to {
        return Err(TensorError::Shape(format!("slot {slot} is already {to:?}")));
    }
    let n = g.dim();
    let mut slots = t.slots().to_vec();
    slots[slot] = to;
    Ok(TensorField::from_fn(g.chart(), slots, |ix| {
        let mut src = ix.to_vec();
        let mut acc = Expr::zero();
        for p in 0..n {
            let m = match to {
                Slot::Lower => g.g(ix[slot], p),
                Slot::Upper => g.inv(ix[slot], p),
            };
            if m.is_zero() {
                continue;
            }
            src[slot] = p;
            acc = &acc + &(m * t.get(&src));
        }
        acc
    }))
}

/// Raise the index at `slot` with `g^{-1}`.
pub fn raise(g: &MetricField, t: &TensorField, slot: usize) -> Result<TensorField, TensorError> {
    move_index(g, t, slot, Slot::Upper)
}

/// Lower the index at `slot` with `g`.
pub fn lower(g: &MetricField, t: &TensorField, slot: usize) -> Result<TensorField, TensorError> {
    move_index(g, t, slot, Slot::Lower)
}

/// Insert a vector (upper components) into one lower slot.
pub fn insert_vector(t: &TensorField, slot: usize, v: &[Expr]) -> TensorField {
    let n = t.dim();
    let slots: Vec<Slot> = t.slots().iter().enumerate().filter(|(k, _)| *k != slot).map(|(_, s)| *s).collect();
    TensorField::from_fn(t.chart(), slots, |ix| {
        let mut full = Vec::with_capacity(ix.len() + 1);
        full.extend_from_slice(&ix[..slot]);
        full.push(0);
        full.extend_from_slice(&ix[slot..]);
        let mut acc = Expr::zero();
        for (p, vp) in v.iter().enumerate().take(n) {
            if vp.is_zero() {
                continue;
            }
            full[slot] = p;
            let c = t.get(&full);
            if !c.is_zero() {
                acc = &acc + &(c * vp);
            }
        }
        acc
    })
}

/// Tensor product of two tensors, slots concatenated.
pub fn outer(a: &TensorField, b: &TensorField) -> TensorField {
    let ra = a.rank();
    let mut slots = a.slots().to_vec();
    slots.extend_from_slice(b.slots());
    TensorField::from_fn(a.chart(), slots, |ix| {
        let x = a.get(&ix[..ra]);
        if x.is_zero() {
            return Expr::zero();
        }
        x * b.get(&ix[ra..])
    })
}

/// Components of a rank-1 tensor as a vector.
pub fn as_vector(t: &TensorField) -> Vec<Expr> {
    assert_eq!(t.rank(), 1, "rank-1 tensor expected");
    t.components().to_vec()
}
