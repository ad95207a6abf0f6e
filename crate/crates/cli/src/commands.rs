//! The four subcommands. Each returns `Ok(passed)` or `Err(message)` for
//! input errors.

use std::fs;
use std::io::Write;
use std::path::Path;

use qe_core::metricdsl::{Geometry, MetricDocument};
use qe_core::ppwave::{qe_certify, solve_potential_ode, PotentialInput, PotentialOdeProblem, PpWaveSpec};
use qe_core::qecore::{
    causal_character, harmonicity_checks, identity_residuals, isotropic_invariant_suite, isotropic_preconditions,
    nonisotropic_preconditions, nonisotropic_structure_checks, CausalType, MuClass, QeError, QeStructure,
};
use qe_core::report::{sha256_hex, CheckRecord, Expectation, Finding, Status, VerificationReport};
use qe_core::suite::{run_suite, Corpus, SuiteOptions};
use qe_core::symexpr::{NumericPoint, Symbol, ZeroTest, DEFAULT_SEED};
use qe_core::tensorcalc::{default_point, Assessment, MetricField};

use crate::render::{index_names, nonzero_lines, Layout};

type CmdResult = Result<bool, String>;

const SEED_VAR: &str = "QE_SEED";
const ANCHOR_QE: &str = "Eq. \"general quasi-Einstein\"";
const ANCHOR_PP: &str = "Theorem \"isotropic-pp-wave\"";
const ANCHOR_ODE: &str = "Eq. \"qE-final\"";
const ANCHOR_EQ: [&str; 4] = [
    "Lemma \"formulae\" Eq. (5)",
    "Lemma \"formulae\" Eq. (6)",
    "Lemma \"formulae\" Eq. (7)",
    "Lemma \"formulae\" Eq. \"weylandcotton\"",
];
const EQ_NAMES: [&str; 4] = ["eq5", "eq6", "eq7", "eq8"];

/// Seed from the flag, else `QE_SEED`, else the default.
fn seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{SEED_VAR} must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn load(file: &Path) -> Result<(Vec<u8>, MetricDocument), String> {
    let bytes = fs::read(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| format!("{}: not valid UTF-8", file.display()))?;
    let doc = MetricDocument::parse(&text).map_err(|e| format!("{}: {e}", file.display()))?;
    Ok((bytes, doc))
}

fn write_json(path: Option<&Path>, report: &VerificationReport) -> Result<(), String> {
    if let Some(p) = path {
        fs::write(p, report.to_json() + "\n").map_err(|e| format!("cannot write {}: {e}", p.display()))?;
    }
    Ok(())
}

fn push(report: &mut VerificationReport, prefix: &str, f: Finding, expected: Expectation) {
    report.push(CheckRecord::from_finding(prefix, f, expected), 0.0);
}

fn first_component(a: &Assessment, chart: &qe_core::metricdsl::Chart) -> String {
    match &a.witness {
        Some((ix, e)) => format!("{} = {e}", index_names(chart, ix)),
        None => a.summary(),
    }
}

pub fn curvature(file: &Path, json: Option<&Path>) -> CmdResult {
    let (bytes, doc) = load(file)?;
    let zt = ZeroTest::with_seed(seed(None)?);
    let g = MetricField::from_document(&doc).map_err(|e| format!("{}: {e}", file.display()))?;
    let mut report = VerificationReport::new("curvature", sha256_hex(&bytes), zt.seed);

    let mut sections: Vec<(&str, Vec<String>)> = vec![
        ("christoffel", nonzero_lines("Gamma", g.christoffel(), Layout::Connection, &zt)),
        ("riemann", nonzero_lines("R", g.riemann(), Layout::Curvature, &zt)),
        ("ricci", nonzero_lines("Ric", g.ricci(), Layout::Symmetric, &zt)),
    ];
    let tau = g.scalar_curvature();
    let tau_zero = tau.is_zero() || zt.check(tau).map(|v| v.status.vanishes()).unwrap_or(false);
    sections.push(("scalar", if tau_zero { vec![] } else { vec![format!("tau = {tau}")] }));
    if g.dim() == 4 {
        let w = g.weyl().map_err(|e| e.to_string())?;
        sections.push(("weyl", nonzero_lines("W", w, Layout::Curvature, &zt)));
        let dw = g.div_weyl().map_err(|e| e.to_string())?;
        sections.push(("div_weyl", nonzero_lines("divW", dw, Layout::Divergence, &zt)));
    }

    let mut out = String::new();
    let curvature_zero = sections.iter().skip(1).all(|(_, l)| l.is_empty());
    for (name, lines) in &sections {
        let status = if lines.is_empty() { Status::Zero } else { Status::NonZero };
        push(
            &mut report,
            "curvature",
            Finding::info(*name, "Section 2 (curvature conventions)", status, format!("{} nonzero components", lines.len())),
            Expectation::Info,
        );
        for l in lines {
            out.push_str(l);
            out.push('\n');
        }
    }
    if curvature_zero {
        out.push_str("all curvature components zero\n");
    }
    print!("{out}");
    write_json(json, &report)?;
    Ok(true)
}

fn parse_point(spec: &str, g_chart: &qe_core::metricdsl::Chart) -> Result<NumericPoint, String> {
    let mut p = default_point(g_chart);
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("--point entry `{part}` is not of the form name=value"))?;
        let k = k.trim();
        if g_chart.index_of(k).is_none() {
            return Err(format!("--point names `{k}`, which is not a chart coordinate"));
        }
        let v: f64 = v.trim().parse().map_err(|_| format!("--point value `{v}` is not a number"))?;
        p.set(Symbol::new(k), v);
    }
    Ok(p)
}

pub fn check(file: &Path, point: Option<&str>, json: Option<&Path>) -> CmdResult {
    let (bytes, doc) = load(file)?;
    let zt = ZeroTest::with_seed(seed(None)?);
    let f = doc.resolved_potential().ok_or_else(|| format!("{}: the document declares no potential", file.display()))?;
    let mu = doc.mu.clone().ok_or_else(|| format!("{}: the document declares no mu", file.display()))?;
    let p = match point {
        Some(s) => parse_point(s, &doc.chart)?,
        None => default_point(&doc.chart),
    };
    let g = MetricField::from_document_at(&doc, p.clone()).map_err(|e| format!("{}: {e}", file.display()))?;
    let chart = g.chart().clone();
    let s = QeStructure::new(g, f, mu, &zt).map_err(|e| e.to_string())?;
    let mut report = VerificationReport::new("check", sha256_hex(&bytes), zt.seed);
    let mut text = String::new();

    let q = s.residual_status();
    let q_text = if q.vanishes() { q.summary() } else { format!("Q{}", first_component(q, &chart)) };
    push(&mut report, "check", Finding::info("q_vanishes", ANCHOR_QE, q.status.into(), q_text.clone()), Expectation::Pass);
    text.push_str(&format!("Q(f): {:?} ({q_text})\n", Status::from(q.status)));
    text.push_str(&format!("lambda = {}\n", s.lambda()));
    push(&mut report, "check", Finding::info("lambda", ANCHOR_QE, Status::Zero, s.lambda().to_string()), Expectation::Info);

    let cc = causal_character(s.metric(), s.potential(), &p, &zt);
    match &cc {
        Ok(c) => {
            text.push_str(&format!("grad f: {:?} (|grad f|^2 = {:.6e} at the point)\n", c.kind, c.norm_sq));
            push(
                &mut report,
                "check",
                Finding::info("causal_character", ANCHOR_QE, Status::Zero, format!("{:?}", c.kind)),
                Expectation::Info,
            );
        }
        Err(e) => {
            text.push_str(&format!("grad f: {e}\n"));
            push(&mut report, "check", Finding::error("causal_character", ANCHOR_QE, e.to_string()), Expectation::Info);
        }
    }

    if s.is_qe() && s.metric().dim() == 4 {
        match identity_residuals(&s).and_then(|r| r.assess(&zt)) {
            Ok(list) => {
                for (k, (_, a)) in list.iter().enumerate() {
                    push(&mut report, "formulae", Finding::from_assessment(EQ_NAMES[k], ANCHOR_EQ[k], a), Expectation::Pass);
                }
            }
            Err(e) => push(&mut report, "formulae", Finding::error("identities", ANCHOR_EQ[0], e.to_string()), Expectation::Pass),
        }
        if s.mu_class() == MuClass::ConformallyEinstein {
            text.push_str("mu = -1/2: structure theorems inapplicable\n");
            if let Ok(h) = harmonicity_checks(s.metric(), s.potential(), &zt) {
                let anchor = "Section 2 \"no longer true if mu=-1/2\"";
                push(&mut report, "notice", Finding::from_assessment("harmonic_weyl", anchor, &h.div_weyl), Expectation::Info);
                push(
                    &mut report,
                    "notice",
                    Finding::refused("structure_theorems", anchor, "mu = -1/2: structure theorems inapplicable"),
                    Expectation::Refuse,
                );
            }
        } else if let Ok(c) = &cc {
            let (prefix, pre, run): (&str, _, Box<dyn Fn() -> Result<Vec<Finding>, QeError>>) = match c.kind {
                CausalType::Null => {
                    ("isotropic", isotropic_preconditions(&s, &zt), Box::new(|| isotropic_invariant_suite(&s, &zt)))
                }
                CausalType::Spacelike | CausalType::Timelike => (
                    "nonisotropic",
                    nonisotropic_preconditions(&s, &zt),
                    Box::new(|| nonisotropic_structure_checks(&s, &zt)),
                ),
                CausalType::ZeroVector => ("", Ok(Some("grad f vanishes".into())), Box::new(|| Ok(vec![]))),
            };
            match pre {
                Ok(Some(why)) => text.push_str(&format!("structure checks skipped: {why}\n")),
                Ok(None) => match run() {
                    Ok(findings) => {
                        text.push_str(&format!("{prefix} structure checks: {} run\n", findings.len()));
                        for f in findings {
                            push(&mut report, prefix, f, Expectation::Pass);
                        }
                    }
                    Err(e) => push(&mut report, prefix, Finding::error("checks", ANCHOR_QE, e.to_string()), Expectation::Pass),
                },
                Err(e) => text.push_str(&format!("structure checks skipped: {e}\n")),
            }
        }
    }

    for c in report.checks.iter().filter(|c| !c.met()) {
        text.push_str(&format!("unmet: {} [{}] {:?}: {}\n", c.id, c.anchor, c.status, c.residual));
    }
    let ok = report.success();
    text.push_str(if ok { "PASS\n" } else { "FAIL\n" });
    print!("{text}");
    write_json(json, &report)?;
    Ok(ok)
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("--interval must be `a,b`, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("--interval bound `{x}` is not a number"));
    Ok((num(a)?, num(b)?))
}

#[allow(clippy::too_many_arguments)]
pub fn solve(
    file: &Path,
    interval: &str,
    step: f64,
    f0: f64,
    fp0: f64,
    csv: Option<&Path>,
    json: Option<&Path>,
) -> CmdResult {
    let (bytes, doc) = load(file)?;
    let zt = ZeroTest::with_seed(seed(None)?);
    let h = match &doc.geometry {
        Geometry::PpWave(_) => doc.resolved_profile().expect("pp-wave documents have a profile"),
        Geometry::Metric(_) => return Err(format!("{}: solve needs a pp-wave document (ppwave_H = ...)", file.display())),
    };
    let mu = doc.mu.clone().ok_or_else(|| format!("{}: the document declares no mu", file.display()))?;
    let spec = PpWaveSpec::new(h).map_err(|e| format!("{}: {e}", file.display()))?;
    let (a, b) = parse_interval(interval)?;
    let mut report = VerificationReport::new("solve", sha256_hex(&bytes), zt.seed);

    let harmonic = spec.harmonic_weyl_assessment(&zt).map_err(|e| e.to_string())?;
    if !harmonic.vanishes() {
        push(
            &mut report,
            "solve",
            Finding::refused("laplacian_function_of_u", ANCHOR_PP, harmonic.summary()),
            Expectation::Pass,
        );
        eprintln!(
            "no isotropic qE potential exists: condition (iii) fails, the transverse Laplacian {} is not a function of u alone ({})",
            spec.transverse_laplacian(),
            harmonic.summary()
        );
        write_json(json, &report)?;
        return Ok(false);
    }
    let source = spec.potential_source(&zt).map_err(|e| e.to_string())?;
    let problem = PotentialOdeProblem::new(source, mu.clone()).with_interval(a, b).with_step(step).with_initial(f0, fp0);
    let t = solve_potential_ode(&problem).map_err(|e| e.to_string())?;

    let csv_text = t.to_csv();
    match csv {
        Some(p) => fs::write(p, &csv_text).map_err(|e| format!("cannot write {}: {e}", p.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(csv_text.as_bytes()).map_err(|e| e.to_string())?;
        }
    }

    let cert = qe_certify(&spec, &mu, PotentialInput::Trajectory(&t), &zt).map_err(|e| e.to_string())?;
    for f in cert.findings.iter().cloned() {
        let expected = if f.name == "potential_exists" { Expectation::Info } else { Expectation::Pass };
        push(&mut report, "solve", f, expected);
    }
    let (ua, ub) = t.valid_interval();
    let mut summary = vec![
        format!("phi(u) = {}", problem.source),
        format!("max |Q(du,du)| = {:.3e} on [{ua}, {ub}]", t.max_residual()),
    ];
    if let Some(u) = t.blow_up {
        summary.push(format!("|f'| exceeded the blow-up bound at u = {u}"));
    }
    if let Some(gap) = t.max_linearization_gap {
        summary.push(format!("max |f - (-1/mu) log h| = {gap:.3e}"));
    }
    if let Some(u) = t.h_breakdown {
        summary.push(format!("linearized solution h reached zero at u = {u}"));
    }
    if let Some(e) = t.closed_form_error {
        summary.push(format!("max error against the closed form = {e:.3e}"));
    }
    push(
        &mut report,
        "solve",
        Finding::info("trajectory", ANCHOR_ODE, Status::Zero, summary.join("; ")),
        Expectation::Info,
    );
    let ok = cert.passes() && report.success();
    summary.push(if ok { "PASS".into() } else { "FAIL".into() });
    let text = summary.join("\n") + "\n";
    if csv.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    write_json(json, &report)?;
    Ok(ok)
}

pub fn suite(seed_flag: Option<u64>, json: Option<&Path>, corpus: Option<&Path>, inject: bool) -> CmdResult {
    let seed = seed(seed_flag)?;
    let dir = corpus.map(Path::to_path_buf).unwrap_or_else(Corpus::default_dir);
    let corpus = Corpus::load(&dir).map_err(|e| e.to_string())?;
    let opts = SuiteOptions { seed, inject_weyl_sign_error: inject, ..SuiteOptions::default() };
    let report = run_suite(&corpus, &opts);
    print!("{}", report.render_text());
    write_json(json, &report)?;
    if !report.success() {
        for c in report.checks.iter().filter(|c| !c.met()) {
            eprintln!("unmet: {} [{}] {:?}", c.id, c.anchor, c.status);
        }
    }
    Ok(report.success())
}
