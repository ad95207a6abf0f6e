use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use num_rational::BigRational;

use super::error::{DslError, DslErrorKind, Pos};
use super::lexer::tokenize;
use super::parser::{Parser, Stmt};
use super::resolve::{constant_value, resolve, to_usize_index, Scope, FUNCTIONS};
use crate::symexpr::{Expr, Symbol};

const KEYWORDS: [&str; 6] = ["chart", "metric", "ppwave_H", "potential", "mu", "param"];

/// Names of the Brinkmann chart a pp-wave profile requires, in order.
pub const PPWAVE_CHART: [&str; 4] = ["u", "v", "x1", "x2"];

/// Ordered coordinate names; the order fixes component indexing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    coords: Vec<Symbol>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Chart, String> {
        if names.len() < 2 {
            return Err(format!("a chart needs at least 2 coordinates, got {}", names.len()));
        }
        let mut seen = BTreeSet::new();
        for n in names {
            let n = n.as_ref();
            if n.is_empty() {
                return Err("empty coordinate name".into());
            }
            if !seen.insert(n.to_string()) {
                return Err(format!("duplicate coordinate `{n}`"));
            }
        }
        Ok(Chart { coords: names.iter().map(|n| Symbol::new(n.as_ref())).collect() })
    }

    /// The pp-wave chart (u, v, x1, x2).
    pub fn brinkmann() -> Chart {
        Chart::new(&PPWAVE_CHART).expect("valid chart")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Symbol {
        &self.coords[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name() == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.coords.iter().map(|c| c.name()).collect()
    }

    pub fn is_brinkmann(&self) -> bool {
        self.names() == PPWAVE_CHART
    }
}

/// How the metric is given.
#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    /// Full symmetric component matrix, 0-based.
    Metric(Vec<Vec<Expr>>),
    /// Profile `H(u, x1, x2)` of `2 du dv + H du^2 + dx1^2 + dx2^2`.
    PpWave(Expr),
}

/// A parsed metric file. Expressions may still mention parameters; the
/// `resolved_*` accessors substitute their declared values.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricDocument {
    pub chart: Chart,
    pub params: Vec<(Symbol, BigRational)>,
    pub geometry: Geometry,
    pub potential: Option<Expr>,
    pub mu: Option<BigRational>,
}

impl MetricDocument {
    pub fn parse(source: &str) -> Result<MetricDocument, DslError> {
        parse(source)
    }

    fn param_subs(&self) -> BTreeMap<Symbol, Expr> {
        self.params.iter().map(|(s, v)| (s.clone(), Expr::rational(v.clone()))).collect()
    }

    /// Substitute declared parameter values.
    pub fn resolve_params(&self, e: &Expr) -> Expr {
        e.subs(&self.param_subs())
    }

    /// Metric components with parameters substituted; pp-wave profiles are
    /// expanded to the full Brinkmann matrix.
    pub fn resolved_metric(&self) -> Vec<Vec<Expr>> {
        match &self.geometry {
            Geometry::Metric(m) => m.iter().map(|row| row.iter().map(|e| self.resolve_params(e)).collect()).collect(),
            Geometry::PpWave(h) => brinkmann_matrix(&self.resolve_params(h)),
        }
    }

    pub fn resolved_profile(&self) -> Option<Expr> {
        match &self.geometry {
            Geometry::PpWave(h) => Some(self.resolve_params(h)),
            Geometry::Metric(_) => None,
        }
    }

    pub fn resolved_potential(&self) -> Option<Expr> {
        self.potential.as_ref().map(|f| self.resolve_params(f))
    }

    /// Render as DSL text that parses back to an identical document.
    pub fn to_source(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "chart {};", self.chart.names().join(" "));
        for (p, v) in &self.params {
            let _ = writeln!(s, "param {p} = {};", Expr::rational(v.clone()));
        }
        match &self.geometry {
            Geometry::PpWave(h) => {
                let _ = writeln!(s, "ppwave_H = {h};");
            }
            Geometry::Metric(m) => {
                let mut first = true;
                for (i, row) in m.iter().enumerate() {
                    for (j, e) in row.iter().enumerate().skip(i) {
                        if i == j || !e.is_zero() {
                            let kw = if first { "metric " } else { "" };
                            first = false;
                            let _ = writeln!(s, "{kw}g[{}][{}] = {e};", i + 1, j + 1);
                        }
                    }
                }
            }
        }
        if let Some(f) = &self.potential {
            let _ = writeln!(s, "potential f = {f};");
        }
        if let Some(mu) = &self.mu {
            let _ = writeln!(s, "mu = {};", Expr::rational(mu.clone()));
        }
        s
    }
}

/// Metric matrix of `2 du dv + H du^2 + dx1^2 + dx2^2` in chart order (u, v, x1, x2).
pub fn brinkmann_matrix(h: &Expr) -> Vec<Vec<Expr>> {
    let mut m = vec![vec![Expr::zero(); 4]; 4];
    m[0][0] = h.clone();
    m[0][1] = Expr::one();
    m[1][0] = Expr::one();
    m[2][2] = Expr::one();
    m[3][3] = Expr::one();
    m
}

/// Parse a metric document.
///
/// Resolution runs in two passes: the chart and parameters are collected
/// first, so statements may appear in any order.
pub fn parse(source: &str) -> Result<MetricDocument, DslError> {
    let toks = tokenize(source)?;
    let stmts = Parser::new(&toks).statements()?;
    let start = Pos { line: 1, col: 1 };

    let mut chart: Option<(Chart, Pos)> = None;
    let mut params: Vec<(Symbol, BigRational)> = Vec::new();
    let mut param_values: BTreeMap<String, BigRational> = BTreeMap::new();
    for st in &stmts {
        if let Stmt::Chart(names, pos) = st {
            if chart.is_some() {
                return Err(DslError::new(DslErrorKind::Conflict, *pos, "chart declared more than once"));
            }
            for (n, npos) in names {
                if FUNCTIONS.contains(&n.as_str()) || KEYWORDS.contains(&n.as_str()) {
                    return Err(DslError::syntax(*npos, format!("`{n}` is reserved and cannot name a coordinate")));
                }
            }
            let just: Vec<&str> = names.iter().map(|(n, _)| n.as_str()).collect();
            let c = Chart::new(&just).map_err(|m| DslError::new(DslErrorKind::Invalid, *pos, m))?;
            chart = Some((c, *pos));
        }
    }
    let Some((chart, chart_pos)) = chart else {
        return Err(DslError::new(DslErrorKind::Invalid, start, "missing `chart` declaration"));
    };
    let no_symbols = BTreeSet::new();
    let empty = BTreeMap::new();
    for st in &stmts {
        if let Stmt::Param(name, value, pos) = st {
            if chart.index_of(name).is_some() {
                return Err(DslError::new(DslErrorKind::Conflict, *pos, format!("parameter `{name}` shadows a coordinate")));
            }
            if FUNCTIONS.contains(&name.as_str()) || KEYWORDS.contains(&name.as_str()) {
                return Err(DslError::syntax(*pos, format!("`{name}` is reserved and cannot name a parameter")));
            }
            if param_values.contains_key(name) {
                return Err(DslError::new(DslErrorKind::Conflict, *pos, format!("parameter `{name}` declared twice")));
            }
            let scope = Scope::Closed { symbols: &no_symbols, params: &empty };
            let v = constant_value(value, &scope, *pos, "parameter value")?;
            param_values.insert(name.clone(), v.clone());
            params.push((Symbol::new(name), v));
        }
    }

    let mut symbols: BTreeSet<String> = chart.names().iter().map(|s| s.to_string()).collect();
    symbols.extend(param_values.keys().cloned());
    let scope = Scope::Closed { symbols: &symbols, params: &param_values };

    let n = chart.dim();
    let mut entries: BTreeMap<(usize, usize), (Expr, Pos)> = BTreeMap::new();
    let mut profile: Option<(Expr, Pos)> = None;
    let mut potential: Option<Expr> = None;
    let mut mu: Option<BigRational> = None;
    for st in &stmts {
        match st {
            Stmt::Chart(..) | Stmt::Param(..) => {}
            Stmt::Metric { i, j, value, pos } => {
                let ii = metric_index(i, n)?;
                let jj = metric_index(j, n)?;
                let e = resolve(value, &scope)?;
                let key = (ii.min(jj), ii.max(jj));
                if let Some((prev, ppos)) = entries.get(&key) {
                    if *prev != e {
                        return Err(DslError::new(
                            DslErrorKind::Conflict,
                            *pos,
                            format!(
                                "g[{}][{}] conflicts with the entry at {ppos} (metric must be symmetric)",
                                ii + 1,
                                jj + 1
                            ),
                        ));
                    }
                }
                entries.insert(key, (e, *pos));
            }
            Stmt::PpWave(value, pos) => {
                if profile.is_some() {
                    return Err(DslError::new(DslErrorKind::Conflict, *pos, "`ppwave_H` given more than once"));
                }
                profile = Some((resolve(value, &scope)?, *pos));
            }
            Stmt::Potential(value, pos) => {
                if potential.is_some() {
                    return Err(DslError::new(DslErrorKind::Conflict, *pos, "potential given more than once"));
                }
                potential = Some(resolve(value, &scope)?);
            }
            Stmt::Mu(value, pos) => {
                if mu.is_some() {
                    return Err(DslError::new(DslErrorKind::Conflict, *pos, "`mu` given more than once"));
                }
                mu = Some(constant_value(value, &scope, *pos, "mu")?);
            }
        }
    }

    let geometry = match (profile, entries.is_empty()) {
        (Some((_, pos)), false) => {
            return Err(DslError::new(DslErrorKind::Conflict, pos, "a document cannot give both `metric` entries and `ppwave_H`"))
        }
        (Some((h, pos)), true) => {
            if !chart.is_brinkmann() {
                return Err(DslError::new(
                    DslErrorKind::DimensionMismatch,
                    pos,
                    format!("`ppwave_H` requires `chart u v x1 x2`, found `chart {}`", chart.names().join(" ")),
                ));
            }
            if h.depends_on(&Symbol::new("v")) {
                return Err(DslError::new(DslErrorKind::Invalid, pos, "pp-wave profile must not depend on v"));
            }
            Geometry::PpWave(h)
        }
        (None, true) => {
            return Err(DslError::new(DslErrorKind::Invalid, chart_pos, "document defines neither `metric` entries nor `ppwave_H`"))
        }
        (None, false) => {
            let mut m = vec![vec![Expr::zero(); n]; n];
            for ((i, j), (e, _)) in entries {
                m[i][j] = e.clone();
                m[j][i] = e;
            }
            Geometry::Metric(m)
        }
    };

    Ok(MetricDocument { chart, params, geometry, potential, mu })
}

fn metric_index((r, pos): &(BigRational, Pos), n: usize) -> Result<usize, DslError> {
    match to_usize_index(r) {
        Some(k) if (1..=n).contains(&k) => Ok(k - 1),
        _ => Err(DslError::new(
            DslErrorKind::DimensionMismatch,
            *pos,
            format!("metric index {r} outside 1..={n} for a {n}-dimensional chart"),
        )),
    }
}

/// Parse a standalone infix expression. Every identifier that is not a
/// function name is taken as a symbol.
pub fn expression_grammar(source: &str) -> Result<Expr, DslError> {
    parse_expression_with(source, &Scope::Open)
}

/// Parse an infix expression that may only mention the given symbols.
pub fn parse_expression_in(source: &str, symbols: &[&str]) -> Result<Expr, DslError> {
    let set: BTreeSet<String> = symbols.iter().map(|s| s.to_string()).collect();
    let params = BTreeMap::new();
    parse_expression_with(source, &Scope::Closed { symbols: &set, params: &params })
}

fn parse_expression_with(source: &str, scope: &Scope<'_>) -> Result<Expr, DslError> {
    let toks = tokenize(source)?;
    let mut p = Parser::new(&toks);
    let ast = p.expr()?;
    if !p.at_eof() {
        return Err(DslError::syntax(p.pos(), "unexpected trailing input (unbalanced parentheses?)"));
    }
    resolve(&ast, scope)
}
