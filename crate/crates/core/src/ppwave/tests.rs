use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::metricdsl::expression_grammar;
use crate::report::Status;
use crate::symexpr::{Expr, ZeroStatus, ZeroTest};

fn ex(s: &str) -> Expr {
    expression_grammar(s).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn spec(h: &str) -> PpWaveSpec {
    PpWaveSpec::new(ex(h)).unwrap()
}

fn zt() -> ZeroTest {
    ZeroTest::default()
}

#[test]
fn spec_validation() {
    assert!(matches!(PpWaveSpec::new(ex("v*x1")), Err(PpWaveError::DependsOnV)));
    assert!(matches!(PpWaveSpec::new(ex("y^2")), Err(PpWaveError::ForeignSymbol(_))));
    let g = build_ppwave(&ex("0")).unwrap();
    assert!(g.riemann().is_structurally_zero());
    assert_eq!(*g.det(), Expr::int(-1));
    assert!(g.signature().is_lorentzian());
}

#[test]
fn closed_form_examples() {
    let s = spec("x1^2 - x2^2");
    let w = s.closed_form_weyl();
    assert_eq!(w.u1u1, Expr::int(-1));
    assert_eq!(w.u2u2, Expr::int(1));
    assert!(w.u1u2.is_zero());
    let d = s.closed_form_divweyl();
    assert!(d.u1u.is_zero() && d.u2u.is_zero());

    let w = spec("x1*x2").closed_form_weyl();
    assert_eq!(w.u1u2, Expr::frac(-1, 2));
    assert!(w.u1u1.is_zero() && w.u2u2.is_zero());
}

#[test]
fn foreign_parameter_is_rejected() {
    assert!(matches!(PpWaveSpec::new(ex("a0*(x1^2 + x2^2)")), Err(PpWaveError::ForeignSymbol(_))));
    let w = spec("3*(x1^2 + x2^2)").closed_form_weyl();
    assert!(w.values().iter().all(|e| e.is_zero()));
}

#[test]
fn predicates() {
    let s = spec("x1^3");
    assert_eq!(s.is_lcf(&zt()).unwrap(), ZeroStatus::NonZero);
    assert_eq!(s.harmonic_weyl_condition(&zt()).unwrap(), ZeroStatus::NonZero);
    assert_eq!(s.closed_form_divweyl().u1u, Expr::frac(-3, 2));
    let s = spec("x1^2 - x2^2 + 4*u^2*(x1^2 + x2^2)/4");
    assert_eq!(s.is_lcf(&zt()).unwrap(), ZeroStatus::NonZero);
    assert_eq!(s.harmonic_weyl_condition(&zt()).unwrap(), ZeroStatus::Zero);
    assert_eq!(s.potential_source(&zt()).unwrap(), ex("4*u^2"));
    let s = spec("sin(u)*x1 + exp(u)");
    assert!(s.is_lcf(&zt()).unwrap().vanishes());
    assert!(s.harmonic_weyl_condition(&zt()).unwrap().vanishes());
}

#[test]
fn plane_wave_profiles() {
    let h = plane_wave_h(&ex("1"), &Expr::zero(), &Expr::zero(), &Expr::zero()).unwrap();
    assert_eq!(h, ex("x1^2 + x2^2"));
    let h = plane_wave_h(&ex("u^2"), &ex("u"), &ex("-3"), &ex("cos(u)")).unwrap();
    assert!(spec(&h.to_string()).is_lcf(&zt()).unwrap().vanishes());
    let flat = plane_wave_h(&Expr::zero(), &ex("u"), &ex("2*u"), &Expr::zero()).unwrap();
    let g = build_ppwave(&flat).unwrap();
    assert!(g.ricci().assess(&zt()).unwrap().vanishes());
    assert!(plane_wave_h(&ex("x1"), &Expr::zero(), &Expr::zero(), &Expr::zero()).is_err());
    let zero = plane_wave_h(&Expr::zero(), &Expr::zero(), &Expr::zero(), &Expr::zero()).unwrap();
    assert!(zero.is_zero());
}

#[test]
fn closed_forms_match_brute_force_on_examples() {
    for h in ["x1^3", "x1^2 - x2^2 + u*x1*x2", "u^2*x1^4 - x1*x2^3 + 2", "sin(u)*x1^2*x2"] {
        let c = compare_closed_forms(&spec(h), 1, &zt()).unwrap();
        assert!(c.all_vanish(), "{h}");
    }
    let c = compare_closed_forms(&spec("x1^3 + x1*x2"), -1, &zt()).unwrap();
    assert!(!c.weyl_printed.vanishes());
}

#[test]
fn ode_plane_wave() {
    // f'' = 2 with zero data: f = u²
    let t = solve_potential_ode(&PotentialOdeProblem::new(ex("4"), q(0, 1))).unwrap();
    assert!(t.max_error_against(|u| u * u) < 1e-12);
    assert!(t.closed_form_error.unwrap() < 1e-12);
    assert!(t.max_residual() < 1e-8);
    assert_eq!(t.samples.len(), 1001);
    assert_eq!(t.valid_interval(), (0.0, 1.0));
}

#[test]
fn ode_linear_solution() {
    let p = PotentialOdeProblem::new(ex("-2"), q(1, 1)).with_initial(0.0, 1.0);
    let t = solve_potential_ode(&p).unwrap();
    assert!(t.max_error_against(|u| u) < 1e-9);
    assert!(t.max_linearization_gap.unwrap() < 1e-9);
    assert!(t.h_breakdown.is_none());
}

#[test]
fn ode_constant_solution() {
    for mu in [q(1, 2), q(-3, 1), q(0, 1)] {
        let t = solve_potential_ode(&PotentialOdeProblem::new(Expr::zero(), mu).with_initial(1.5, 0.0)).unwrap();
        assert!(t.samples.iter().all(|s| s.f == 1.5 && s.fprime == 0.0));
    }
}

#[test]
fn ode_fourth_order_convergence() {
    // f'' = f'² − 1 with f'(0) = 2: f = log sinh(c) − log sinh(c − u), c = atanh(1/2)
    let c = 0.5f64.atanh();
    let exact = |u: f64| c.sinh().ln() - (c - u).sinh().ln();
    let run = |step: f64| {
        let p = PotentialOdeProblem::new(ex("-2"), q(1, 1)).with_initial(0.0, 2.0).with_interval(0.0, 0.4).with_step(step);
        solve_potential_ode(&p).unwrap().max_error_against(exact)
    };
    let ratio = run(1e-3) / run(5e-4);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn ode_blow_up_is_detected() {
    let p = PotentialOdeProblem::new(ex("-2"), q(1, 1)).with_initial(0.0, 2.0);
    let t = solve_potential_ode(&p).unwrap();
    let u = t.blow_up.unwrap();
    assert!((u - 0.5f64.atanh()).abs() < 1e-2, "{u}");
    assert!(t.valid_interval().1 < 0.55);
    // h = e^{-f} = sinh(c − u)/sinh(c) crosses zero at the same point
    assert!(t.h_breakdown.is_none() || (t.h_breakdown.unwrap() - 0.5f64.atanh()).abs() < 1e-2);
}

#[test]
fn ode_linearization_agrees_for_sine_source() {
    for mu in [q(1, 1), q(-1, 2), q(2, 1)] {
        let p = PotentialOdeProblem::new(ex("sin(u)"), mu).with_initial(0.1, 0.2);
        let t = solve_potential_ode(&p).unwrap();
        assert!(t.max_linearization_gap.unwrap() < 1e-6);
    }
}

#[test]
fn ode_rejects_bad_problems() {
    let bad = |p: PotentialOdeProblem| matches!(solve_potential_ode(&p), Err(PpWaveError::InvalidProblem(_)));
    assert!(bad(PotentialOdeProblem::new(ex("1"), q(0, 1)).with_step(0.0)));
    assert!(bad(PotentialOdeProblem::new(ex("1"), q(0, 1)).with_step(-1e-3)));
    assert!(bad(PotentialOdeProblem::new(ex("1"), q(0, 1)).with_interval(1.0, 0.0)));
    let p = PotentialOdeProblem::new(ex("x1"), q(0, 1));
    assert!(matches!(solve_potential_ode(&p), Err(PpWaveError::NotFunctionOfU(_))));
}

#[test]
fn csv_format() {
    let t = solve_potential_ode(&PotentialOdeProblem::new(ex("4"), q(0, 1)).with_interval(0.0, 0.01).with_step(0.001))
        .unwrap();
    let csv = t.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("u,f,fprime,h,residual"));
    let row: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 5);
    let f: f64 = row[1].parse().unwrap();
    assert!((f - 1e-6).abs() < 1e-18);
    assert_eq!(row[1].split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
}

#[test]
fn certify_plane_wave() {
    let c = qe_certify(&spec("x1^2 + x2^2"), &q(0, 1), PotentialInput::Symbolic(&ex("u^2")), &zt()).unwrap();
    assert_eq!(c.verdict, Status::Zero);
    assert_eq!(c.lambda.as_deref(), Some("0"));
    assert!(c.equivalence_consistent);
    assert_eq!(c.weyl_gradient, Some(Status::Zero));
}

#[test]
fn certify_harmonic_non_lcf_with_constant_potential() {
    let s = spec("x1^2 - x2^2 + u*x1*x2");
    let c = qe_certify(&s, &q(0, 1), PotentialInput::Symbolic(&ex("3")), &zt()).unwrap();
    assert!(c.passes());
    assert!(c.equivalence_consistent);
    assert!(c.laplacian_of_u.passes() && c.harmonic_weyl.passes() && c.solvable.passes());
}

#[test]
fn certify_refuses_non_harmonic() {
    for h in ["x1^4", "x1^3"] {
        let c = qe_certify(&spec(h), &q(0, 1), PotentialInput::Solve, &zt()).unwrap();
        assert_eq!(c.verdict, Status::Refused);
        assert!(c.equivalence_consistent);
        assert_eq!(c.solvable, Status::NonZero);
        assert_eq!(c.harmonic_weyl, Status::NonZero);
    }
}

#[test]
fn certify_flags_transverse_potential() {
    let c = qe_certify(&spec("x1^2 - x2^2"), &q(0, 1), PotentialInput::Symbolic(&ex("x1")), &zt()).unwrap();
    assert!(!c.passes());
    assert!(c.findings.iter().any(|f| f.name == "potential_depends_on_u_only"));
}

#[test]
fn certify_trajectory() {
    let s = spec("x1^2 + x1*x2 - u*x2^2");
    let source = s.potential_source(&zt()).unwrap();
    let t = solve_potential_ode(&PotentialOdeProblem::new(source, q(1, 1))).unwrap();
    let c = qe_certify(&s, &q(1, 1), PotentialInput::Trajectory(&t), &zt()).unwrap();
    assert_eq!(c.verdict, Status::ProbablyZero);
}

#[test]
fn conformally_einstein_exponent_still_certifies() {
    for h in ["x1^2 - x2^2 + u*x1*x2", "x1^2 + x2^2", "u*x1"] {
        let c = qe_certify(&spec(h), &q(-1, 2), PotentialInput::Solve, &zt()).unwrap();
        assert!(c.passes(), "{h}");
    }
}

fn random_profile() -> impl Strategy<Value = String> {
    let term = (-5i32..=5, 1i32..=3, 0u32..=4, 0u32..=4, 0u32..=2);
    prop::collection::vec(term, 1..6).prop_map(|ts| {
        ts.iter()
            .filter(|(_, _, a, b, _)| a + b <= 4)
            .map(|(n, d, a, b, k)| format!("({n}/{d})*x1^{a}*x2^{b}*u^{k}"))
            .chain(std::iter::once("0".to_string()))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn closed_forms_are_exact(h in random_profile()) {
        let c = compare_closed_forms(&spec(&h), 1, &zt()).unwrap();
        prop_assert!(c.all_exact_zero());
    }

    #[test]
    fn harmonic_iff_laplacian_of_u(h in random_profile()) {
        let s = spec(&h);
        let a = s.harmonic_weyl_condition(&zt()).unwrap().vanishes();
        let b = s.closed_form_harmonic(&zt()).unwrap().vanishes();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn plane_waves_are_lcf(a in -5i32..=5, b in -5i32..=5, c in -5i32..=5) {
        let h = plane_wave_h(&ex(&format!("{a}*u^2")), &ex(&format!("{b}*u")), &ex(&c.to_string()), &ex("u^3")).unwrap();
        prop_assert_eq!(spec(&h.to_string()).is_lcf(&zt()).unwrap(), ZeroStatus::Zero);
    }
}

#[test]
fn seeded_profiles_are_reproducible_and_bounded() {
    let a = seeded_profiles(42, 10);
    assert_eq!(a, seeded_profiles(42, 10));
    assert_ne!(a, seeded_profiles(43, 10));
    let mut curved = 0;
    for h in &a {
        let s = PpWaveSpec::new(h.clone()).unwrap();
        assert!(h.is_polynomial());
        if !s.closed_form_weyl().values().iter().all(|e| e.is_zero()) {
            curved += 1;
        }
    }
    assert!(curved >= 8, "{curved}");
}
