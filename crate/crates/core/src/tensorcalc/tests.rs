use proptest::prelude::*;

use super::*;
use crate::metricdsl::{brinkmann_matrix, expression_grammar, Chart};
use crate::symexpr::{Expr, NumericPoint, ZeroStatus, ZeroTest};

fn ex(s: &str) -> Expr {
    expression_grammar(s).unwrap()
}

fn ppwave(h: &str) -> MetricField {
    MetricField::new(Chart::brinkmann(), brinkmann_matrix(&ex(h))).unwrap()
}

fn metric(names: &[&str], rows: &[&[&str]]) -> MetricField {
    let comps = rows.iter().map(|r| r.iter().map(|s| ex(s)).collect()).collect();
    MetricField::new(Chart::new(names).unwrap(), comps).unwrap()
}

fn flat4() -> MetricField {
    metric(&["t", "x", "y", "z"], &[&["-1", "0", "0", "0"], &["0", "1", "0", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]])
}

fn sphere() -> MetricField {
    metric(&["th", "ph"], &[&["1", "0"], &["0", "sin(th)^2"]])
}

fn vanishes(t: &TensorField) -> bool {
    t.assess(&ZeroTest::default()).unwrap().vanishes()
}

fn assert_eq_expr(a: &Expr, b: &str) {
    let d = a - &ex(b);
    assert!(crate::symexpr::is_zero(&d).unwrap().vanishes(), "{a} != {b}");
}

// indices in the Brinkmann chart
const U: usize = 0;
const V: usize = 1;
const X1: usize = 2;
const X2: usize = 3;

#[test]
fn flat_metric_has_no_connection_or_curvature() {
    let g = flat4();
    assert!(g.christoffel().is_structurally_zero());
    assert!(g.riemann().is_structurally_zero());
    assert!(g.ricci().is_structurally_zero());
    assert!(g.scalar_curvature().is_zero());
    assert!(g.signature().is_lorentzian());
}

#[test]
fn ppwave_christoffel_symbols() {
    let g = ppwave("x1^2");
    let gm = g.christoffel();
    // Γ^v_uu = ½ ∂_u H = 0, Γ^v_{u x1} = ½ ∂_1 H = x1, Γ^{x1}_uu = −½ ∂_1 H = −x1
    assert_eq_expr(gm.get(&[V, U, X1]), "x1");
    assert_eq_expr(gm.get(&[V, X1, U]), "x1");
    assert_eq_expr(gm.get(&[X1, U, U]), "-x1");
    assert!(gm.get(&[V, U, U]).is_zero());
    assert!(gm.get(&[X2, U, U]).is_zero());
    let nonzero = gm.nonzero_components().len();
    assert_eq!(nonzero, 3);
}

#[test]
fn christoffel_reproduces_metric_derivatives() {
    // ∂_k g_ij = Γ_{i,kj} + Γ_{j,ki} with Γ_{i,kj} = g_ip Γ^p_kj
    let g = ppwave("u*x1^2 - x2^3 + x1*x2");
    let gm = g.christoffel();
    let n = g.dim();
    let coords = g.chart().coords().to_vec();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut rhs = Expr::zero();
                for p in 0..n {
                    rhs = &rhs + &(g.g(i, p) * gm.get(&[p, k, j]));
                    rhs = &rhs + &(g.g(j, p) * gm.get(&[p, k, i]));
                }
                let lhs = g.g(i, j).diff(&coords[k]);
                assert!((&lhs - &rhs).is_zero(), "mismatch at {i}{j}{k}");
            }
        }
    }
}

#[test]
fn two_dimensional_expanding_metric() {
    let g = metric(&["t", "x"], &[&["-1", "0"], &["0", "exp(2*t)"]]);
    let gm = g.christoffel();
    assert_eq_expr(gm.get(&[0, 1, 1]), "exp(2*t)");
    assert_eq_expr(gm.get(&[1, 0, 1]), "1");
    assert_eq_expr(gm.get(&[1, 1, 0]), "1");
    // 2D de Sitter has constant curvature: τ = 2
    assert_eq_expr(g.scalar_curvature(), "2");
}

#[test]
fn sphere_sign_convention() {
    let g = sphere();
    let r = g.riemann();
    // sectional curvature R(X,Y,X,Y)/(|X|²|Y|² − g(X,Y)²) = +1
    assert_eq_expr(r.get(&[0, 1, 0, 1]), "sin(th)^2");
    assert_eq_expr(g.scalar_curvature(), "2");
    assert_eq_expr(g.ricci().get(&[0, 0]), "1");
    assert!(g.signature().is_riemannian());
}

#[test]
fn ppwave_riemann_ricci_values() {
    let g = ppwave("x1^2 - x2^2");
    assert_eq_expr(g.riemann().get(&[U, X1, U, X1]), "-1");
    assert_eq_expr(g.riemann().get(&[U, X2, U, X2]), "1");
    assert!(g.ricci().is_structurally_zero() || vanishes(g.ricci()));
    let g = ppwave("x1^2 + x2^2");
    assert_eq_expr(g.ricci().get(&[U, U]), "-2");
    assert!(g.scalar_curvature().is_zero());
}

#[test]
fn ricci_of_ppwave_is_minus_half_laplacian() {
    let h = ex("u^2*x1^3 + x1*x2^2 - x2^4");
    let g = MetricField::new(Chart::brinkmann(), brinkmann_matrix(&h)).unwrap();
    let x1 = g.chart().coord(X1).clone();
    let x2 = g.chart().coord(X2).clone();
    let lap = &h.diff(&x1).diff(&x1) + &h.diff(&x2).diff(&x2);
    assert!((g.ricci().get(&[U, U]) + &(&lap * &Expr::frac(1, 2))).is_zero());
}

#[test]
fn riemann_filled_by_symmetry_agrees_with_brute_force() {
    for g in [ppwave("u*x1^2 - x1*x2"), sphere(), metric(&["t", "x"], &[&["-1", "0"], &["0", "exp(2*t)"]])] {
        let d = g.riemann().sub(&g.riemann_brute_force()).unwrap();
        assert!(vanishes(&d));
        for (_, t) in riemann_symmetry_residuals(g.riemann()) {
            assert!(vanishes(&t));
        }
    }
}

#[test]
fn weyl_values_for_ppwaves() {
    let g = ppwave("x1^2 - x2^2");
    assert_eq_expr(g.weyl().unwrap().get(&[U, X1, U, X1]), "-1");
    let g = ppwave("x1*x2");
    assert_eq_expr(g.weyl().unwrap().get(&[U, X1, U, X2]), "-1/2");
    // closed form ¼(H22 − H11) for a non-harmonic profile
    let g = ppwave("x1^2 + 3*x2^2");
    assert_eq_expr(g.weyl().unwrap().get(&[U, X1, U, X1]), "1");
    assert_eq_expr(g.weyl().unwrap().get(&[U, X2, U, X2]), "-1");
}

#[test]
fn weyl_requires_dimension_four() {
    assert!(matches!(sphere().weyl(), Err(TensorError::UnsupportedDimension { .. })));
    assert!(sphere().div_weyl().is_err());
}

#[test]
fn div_weyl_values_for_ppwaves() {
    let g = ppwave("x1^3");
    let dw = g.div_weyl().unwrap();
    assert_eq_expr(dw.get(&[U, X1, U]), "-3/2");
    assert!(dw.get(&[U, X2, U]).is_zero());
    let g = ppwave("x1^2 - x2^2 + u*x1*x2");
    assert!(vanishes(g.div_weyl().unwrap()));
}

#[test]
fn div_weyl_slot_conventions_agree_on_printed_components() {
    let g = ppwave("x1^3 + u*x1*x2^2");
    let last = g.div_weyl().unwrap();
    let first = g.div_weyl_first_slot().unwrap();
    for i in [X1, X2] {
        assert!((last.get(&[U, i, U]) - first.get(&[U, i, U])).is_zero());
    }
    // in general the two are related by swapping the outer slots
    let swapped = first.permuted(&[2, 1, 0]);
    assert!(vanishes(&last.sub(&swapped).unwrap()));
}

#[test]
fn div_weyl_bracketed_reading_matches() {
    for g in [ppwave("x1^3 + u^2*x2^2"), metric(&["t", "a", "b", "c"], &[
        &["-1", "0", "0", "0"],
        &["0", "exp(2*t)", "0", "0"],
        &["0", "0", "exp(2*t)*(1+a^2)", "0"],
        &["0", "0", "0", "exp(2*t)"],
    ])] {
        let readings = div_weyl_readings(&g).unwrap();
        assert!(vanishes(&g.div_weyl().unwrap().sub(&readings.grouped).unwrap()));
    }
    let g = ppwave("x1^3");
    let readings = div_weyl_readings(&g).unwrap();
    assert!(!vanishes(&g.div_weyl().unwrap().sub(&readings.ungrouped).unwrap()));
}

#[test]
fn contracted_bianchi_and_bochner() {
    let g = metric(&["t", "a", "b", "c"], &[
        &["-1", "0", "0", "0"],
        &["0", "1+t^2", "0", "0"],
        &["0", "0", "1+a^2", "0"],
        &["0", "0", "0", "1"],
    ]);
    assert!(vanishes(&contracted_bianchi_residual(&g).unwrap()));
    assert!(vanishes(&bochner_residual(&g, &ex("t*a + b^2")).unwrap()));
    assert!(vanishes(&weyl_trace_residual(&g).unwrap()));
    assert!(vanishes(&metric_compatibility_residual(&g)));
    assert!(vanishes(&hessian_consistency_residual(&g, &ex("t^2*c")).unwrap()));
    assert!(vanishes(&scalar_gradient_residual(&g, &ex("a*b")).unwrap()));
}

#[test]
fn raise_lower_round_trip() {
    let g = ppwave("u*x1^2");
    let rho = g.ricci();
    for slot in 0..2 {
        assert!(vanishes(&raise_lower_residual(&g, rho, slot).unwrap()));
    }
    let up = raise(&g, rho, 0).unwrap();
    assert!(raise(&g, &up, 0).is_err());
    assert!(vanishes(&raise_lower_residual(&g, &up, 0).unwrap()));
}

#[test]
fn scalar_operators_on_flat_space() {
    let g = flat4();
    let f = ex("x^2 + y*z - t^2");
    assert_eq_expr(&laplacian(&g, &f), "4");
    assert_eq_expr(&grad_norm_sq(&g, &f), "4*x^2 + z^2 + y^2 - 4*t^2");
    let grad = gradient(&g, &f);
    assert_eq_expr(grad.get(&[0]), "2*t");
    assert_eq!(hessian(&g, &f).symmetry(), Symmetry::SymmetricPair);
}

#[test]
fn conformal_rules_hold() {
    let g = ppwave("x1^2 - x2^2 + u*x1");
    let f = ex("u^2 + x1");
    assert!(vanishes(&conformal_ricci_residual(&g, &f).unwrap()));
    assert!(vanishes(&conformal_divweyl_residual(&g, &f).unwrap()));
    assert!(vanishes(&conformal_weyl_residual(&g, &f).unwrap()));
    let g = flat4();
    let f = ex("t*x");
    assert!(vanishes(&conformal_ricci_residual(&g, &f).unwrap()));
    assert!(vanishes(&conformal_divweyl_residual(&g, &f).unwrap()));
}

#[test]
fn singular_metric_is_rejected() {
    let r = MetricField::new(Chart::new(&["a", "b"]).unwrap(), vec![vec![ex("1"), ex("1")], vec![ex("1"), ex("1")]]);
    assert!(matches!(r, Err(TensorError::Singular(_))));
    // nonsingular symbolically, singular at the requested point
    let p: NumericPoint = [(crate::symexpr::Symbol::new("a"), 0.0), (crate::symexpr::Symbol::new("b"), 0.5)].into_iter().collect();
    let r = MetricField::with_point(
        Chart::new(&["a", "b"]).unwrap(),
        vec![vec![ex("a"), ex("0")], vec![ex("0"), ex("1")]],
        p,
    );
    assert!(matches!(r, Err(TensorError::Singular(_))));
}

#[test]
fn inverse_is_exact() {
    let g = metric(&["t", "x"], &[&["-1", "t"], &["t", "1+x^2"]]);
    assert!(vanishes(&g.inverse_residual()));
}

#[test]
fn orthogonal_frame_from_gradient() {
    let g = flat4();
    let grad = gradient(&g, &ex("x + 2*t"));
    let frame = FrameField::orthogonal_from(&g, grad.components()).unwrap();
    assert_eq!(frame.len(), 4);
    assert!(frame.orthogonality_residual().iter().all(|(_, e)| e.is_zero()));
}

#[test]
fn null_frame_for_ppwave_gradient() {
    let g = ppwave("x1^2 + u*x2");
    let grad = gradient(&g, &ex("u^3"));
    let frame = FrameField::null_frame(&g, grad.components()).unwrap();
    assert_eq!(frame.len(), 4);
    let target = FrameField::null_frame_target(4);
    let a = assess_exprs(&frame.gram_residual(&target), &ZeroTest::default()).unwrap();
    assert!(a.vanishes(), "{}", a.summary());
    assert!(FrameField::null_frame(&g, &[ex("1"), ex("0"), ex("0"), ex("0")]).is_err());
}

#[test]
fn assessment_reports_witness() {
    let g = ppwave("x1^2");
    let a = g.ricci().assess(&ZeroTest::default()).unwrap();
    assert_eq!(a.status, ZeroStatus::NonZero);
    assert_eq!(a.witness.as_ref().unwrap().0, vec![0, 0]);
    assert!(a.summary().contains("nonzero"));
}

fn small_poly() -> impl Strategy<Value = String> {
    let terms = prop::collection::vec((-3i32..=3, 0u32..=3, 0u32..=3, 0u32..=1), 1..4);
    terms.prop_map(|ts| {
        ts.iter()
            .map(|(c, a, b, k)| format!("({c})*x1^{a}*x2^{b}*u^{k}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn riemann_symmetries_hold_for_random_ppwaves(h in small_poly()) {
        let g = ppwave(&h);
        for (_, t) in riemann_symmetry_residuals(g.riemann()) {
            prop_assert!(vanishes(&t));
        }
        prop_assert!(vanishes(&contracted_bianchi_residual(&g).unwrap()));
    }

    #[test]
    fn ppwave_ricci_and_weyl_closed_forms(h in small_poly()) {
        let he = ex(&h);
        let g = ppwave(&h);
        let x1 = g.chart().coord(X1).clone();
        let x2 = g.chart().coord(X2).clone();
        let h11 = he.diff(&x1).diff(&x1);
        let h22 = he.diff(&x2).diff(&x2);
        let h12 = he.diff(&x1).diff(&x2);
        let half = Expr::frac(1, 2);
        let quarter = Expr::frac(1, 4);
        prop_assert!((g.ricci().get(&[U, U]) + &(&half * &(&h11 + &h22))).is_zero());
        let w = g.weyl().unwrap();
        prop_assert!((w.get(&[U, X1, U, X1]) - &(&quarter * &(&h22 - &h11))).is_zero());
        prop_assert!((w.get(&[U, X1, U, X2]) + &(&half * &h12)).is_zero());
        let dw = g.div_weyl().unwrap();
        let h111 = h11.diff(&x1);
        let h122 = h22.diff(&x1);
        prop_assert!((dw.get(&[U, X1, U]) + &(&quarter * &(&h111 + &h122))).is_zero());
    }

    #[test]
    fn bochner_holds_for_random_potentials(h in small_poly(), f in small_poly()) {
        let g = ppwave(&h);
        prop_assert!(vanishes(&bochner_residual(&g, &ex(&f)).unwrap()));
    }
}
