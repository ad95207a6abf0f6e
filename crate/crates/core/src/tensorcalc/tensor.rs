use std::fmt;

use serde::{Deserialize, Serialize};

use super::error::TensorError;
use crate::metricdsl::Chart;
use crate::par;
use crate::symexpr::{is_zero, Expr};

/// Position of an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    Lower,
    Upper,
}

/// Declared index symmetry, verified when a tensor is tagged with it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    None,
    /// Rank 2, `T_ij = T_ji`.
    SymmetricPair,
    /// Rank 4, antisymmetric in each pair and symmetric under pair exchange.
    RiemannType,
}

/// Dense array of components indexed in chart order, row-major over slots.
#[derive(Clone, PartialEq)]
pub struct TensorField {
    chart: Chart,
    slots: Vec<Slot>,
    symmetry: Symmetry,
    comps: Vec<Expr>,
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorField")
            .field("slots", &self.slots)
            .field("symmetry", &self.symmetry)
            .field("nonzero", &self.nonzero_components().len())
            .finish()
    }
}

/// Multi-index of a flat position.
pub fn unflatten(mut flat: usize, n: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for k in (0..rank).rev() {
        idx[k] = flat % n;
        flat /= n;
    }
    idx
}

pub fn flatten(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

impl TensorField {
    /// Build from explicit components; the declared symmetry is checked.
    pub fn new(chart: Chart, slots: Vec<Slot>, symmetry: Symmetry, comps: Vec<Expr>) -> Result<Self, TensorError> {
        let n = chart.dim();
        let want = n.pow(slots.len() as u32);
        if comps.len() != want {
            return Err(TensorError::Shape(format!("expected {want} components, got {}", comps.len())));
        }
        let t = TensorField { chart, slots, symmetry: Symmetry::None, comps };
        t.with_symmetry(symmetry)
    }

    /// Compute every component from its multi-index, in parallel.
    pub fn from_fn<F>(chart: &Chart, slots: Vec<Slot>, f: F) -> Self
    where
        F: Fn(&[usize]) -> Expr + Sync + Send,
    {
        let n = chart.dim();
        let rank = slots.len();
        let comps = par::map_range(n.pow(rank as u32), |flat| f(&unflatten(flat, n, rank)));
        TensorField { chart: chart.clone(), slots, symmetry: Symmetry::None, comps }
    }

    /// Tag with a symmetry that holds by construction.
    pub(crate) fn assume_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    /// Tag with a symmetry after checking every relation it implies. Pairs
    /// that are not structurally equal go through the zero test.
    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Result<Self, TensorError> {
        let rank = self.rank();
        let ok = match symmetry {
            Symmetry::None => true,
            Symmetry::SymmetricPair => {
                if rank != 2 {
                    return Err(TensorError::Shape("symmetric-pair tag needs rank 2".into()));
                }
                self.relation_holds(&[1, 0], false)
            }
            Symmetry::RiemannType => {
                if rank != 4 {
                    return Err(TensorError::Shape("riemann-type tag needs rank 4".into()));
                }
                self.relation_holds(&[1, 0, 2, 3], true)
                    && self.relation_holds(&[0, 1, 3, 2], true)
                    && self.relation_holds(&[2, 3, 0, 1], false)
            }
        };
        if !ok {
            return Err(TensorError::SymmetryViolation(format!("{symmetry:?}")));
        }
        self.symmetry = symmetry;
        Ok(self)
    }

    fn relation_holds(&self, perm: &[usize], anti: bool) -> bool {
        let other = self.permuted(perm);
        let bad = par::map_range(self.comps.len(), |k| {
            let a = &self.comps[k];
            let b = &other.comps[k];
            let r = if anti { a + b } else { a - b };
            !(r.is_zero() || is_zero(&r).map(|s| s.vanishes()).unwrap_or(false))
        });
        !bad.into_iter().any(|b| b)
    }

    pub fn zeros(chart: &Chart, slots: Vec<Slot>) -> Self {
        let count = chart.dim().pow(slots.len() as u32);
        TensorField { chart: chart.clone(), slots, symmetry: Symmetry::None, comps: vec![Expr::zero(); count] }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    /// (number of lower indices, number of upper indices)
    pub fn valence(&self) -> (usize, usize) {
        let lower = self.slots.iter().filter(|s| **s == Slot::Lower).count();
        (lower, self.rank() - lower)
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn get(&self, idx: &[usize]) -> &Expr {
        debug_assert_eq!(idx.len(), self.rank());
        &self.comps[flatten(idx, self.dim())]
    }

    /// Multi-indices paired with components, in canonical order.
    pub fn indexed(&self) -> impl Iterator<Item = (Vec<usize>, &Expr)> {
        let (n, r) = (self.dim(), self.rank());
        self.comps.iter().enumerate().map(move |(k, e)| (unflatten(k, n, r), e))
    }

    /// Components that are not structurally zero.
    pub fn nonzero_components(&self) -> Vec<(Vec<usize>, &Expr)> {
        self.indexed().filter(|(_, e)| !e.is_zero()).collect()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    /// Component-wise map; the slot layout is kept, the symmetry tag dropped.
    pub fn map<F>(&self, f: F) -> TensorField
    where
        F: Fn(&Expr) -> Expr + Sync + Send,
    {
        let comps = par::map_slice(&self.comps, f);
        TensorField { chart: self.chart.clone(), slots: self.slots.clone(), symmetry: Symmetry::None, comps }
    }

    fn check_same_shape(&self, other: &TensorField) -> Result<(), TensorError> {
        if self.slots != other.slots || self.chart != other.chart {
            return Err(TensorError::Shape(format!(
                "shape mismatch: {:?} vs {:?}",
                self.slots, other.slots
            )));
        }
        Ok(())
    }

    pub fn zip_with<F>(&self, other: &TensorField, f: F) -> Result<TensorField, TensorError>
    where
        F: Fn(&Expr, &Expr) -> Expr + Sync + Send,
    {
        self.check_same_shape(other)?;
        let comps = par::map_range(self.comps.len(), |k| f(&self.comps[k], &other.comps[k]));
        Ok(TensorField { chart: self.chart.clone(), slots: self.slots.clone(), symmetry: Symmetry::None, comps })
    }

    pub fn sub(&self, other: &TensorField) -> Result<TensorField, TensorError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &TensorField) -> Result<TensorField, TensorError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: &Expr) -> TensorField {
        self.map(|e| e * c)
    }

    /// Reorder slots: `result[j_0, .., j_r] = self[j_perm[0], .., j_perm[r]]`.
    pub fn permuted(&self, perm: &[usize]) -> TensorField {
        let (n, r) = (self.dim(), self.rank());
        assert_eq!(perm.len(), r, "permutation length");
        let mut slots = self.slots.clone();
        for (m, &p) in perm.iter().enumerate() {
            slots[p] = self.slots[m];
        }
        let comps = (0..self.comps.len())
            .map(|flat| {
                let j = unflatten(flat, n, r);
                let src: Vec<usize> = perm.iter().map(|&p| j[p]).collect();
                self.comps[flatten(&src, n)].clone()
            })
            .collect();
        TensorField { chart: self.chart.clone(), slots, symmetry: Symmetry::None, comps }
    }
}
