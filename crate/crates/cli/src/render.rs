//! Text rendering of tensor components.

use qe_core::metricdsl::Chart;
use qe_core::symexpr::ZeroTest;
use qe_core::tensorcalc::TensorField;

/// Which components of a tensor are printed; the others follow from its
/// symmetries.
#[derive(Clone, Copy, Debug)]
pub enum Layout {
    /// `Γ^k_ij`, printed for `i ≤ j`.
    Connection,
    /// Four lower slots with the Riemann symmetries.
    Curvature,
    /// Symmetric two-tensor.
    Symmetric,
    /// Three slots, antisymmetric in the first two.
    Divergence,
}

impl Layout {
    fn canonical(self, ix: &[usize]) -> bool {
        match self {
            Layout::Connection => ix[1] <= ix[2],
            Layout::Curvature => ix[0] < ix[1] && ix[2] < ix[3] && (ix[0], ix[1]) <= (ix[2], ix[3]),
            Layout::Symmetric => ix[0] <= ix[1],
            Layout::Divergence => ix[0] < ix[1],
        }
    }

    fn label(self, name: &str, chart: &Chart, ix: &[usize]) -> String {
        let names: Vec<&str> = ix.iter().map(|&i| chart.coord(i).name()).collect();
        match self {
            Layout::Connection => format!("{name}^{}_{{{}}}", names[0], names[1..].join(" ")),
            _ => format!("{name}_{{{}}}", names.join(" ")),
        }
    }
}

/// Lines `label = value` for the canonical components that do not vanish
/// under the zero test, in lexicographic index order.
pub fn nonzero_lines(name: &str, t: &TensorField, layout: Layout, zt: &ZeroTest) -> Vec<String> {
    t.indexed()
        .filter(|(ix, e)| layout.canonical(ix) && !e.is_zero())
        .filter(|(_, e)| !zt.check(e).map(|v| v.status.vanishes()).unwrap_or(false))
        .map(|(ix, e)| format!("{} = {e}", layout.label(name, t.chart(), &ix)))
        .collect()
}

/// `[i, j]` as coordinate names, e.g. `[u x1]`.
pub fn index_names(chart: &Chart, ix: &[usize]) -> String {
    let names: Vec<&str> = ix.iter().filter_map(|&i| (i < chart.dim()).then(|| chart.coord(i).name())).collect();
    format!("[{}]", names.join(" "))
}
