//! Verification suites: golden appendix rows, completed cycles against
//! shifted power sums, the genus-0 equality and basis round trips.
//!
//! Each suite returns a [`Report`]; a failing check carries a line-by-line
//! diff of expected against computed terms.

use std::collections::BTreeMap;
use std::fmt;

use crate::classes::{
    basic_to_sing, psi_power_sing, sing_to_basic, theorem1_expansion, Basis, ClassExpr,
};
use crate::combinatorics::{shifted_power_sum, Partition, Profile};
use crate::cycles::{completed_cycle, equality1_check, evaluate, multiply_central, verify_in_group_algebra, CycleExpr};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::syntax::{parse_class, parse_cycle, render_text};
use crate::trees::{trees_of_codim, MarkedTree};

/// The appendix identities in the public grammar.
pub const APPENDIX: &str = include_str!("../fixtures/appendix.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub diff: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>, diff: Vec<String>) -> Self {
        Check {
            name: name.into(),
            passed: diff.is_empty(),
            diff,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Known discrepancies that are reported but do not fail the suite.
    pub notes: Vec<String>,
}

impl Report {
    fn new(suite: &str) -> Self {
        Report {
            suite: suite.to_string(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.checks.iter().filter(|c| c.passed).count();
        writeln!(f, "{}: {ok}/{} checks passed", self.suite, self.checks.len())?;
        for c in self.failures() {
            writeln!(f, "FAIL {}", c.name)?;
            for line in &c.diff {
                writeln!(f, "  {line}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// What a golden row claims about its left-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Exact(String),
    /// Star and stick terms exactly, plus the coefficients of the remaining
    /// nested trees as a multiset.
    Partial { scalar: String, nested: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureRow {
    pub line: usize,
    pub erratum: bool,
    pub verb: String,
    pub argument: String,
    pub expected: Expected,
}

pub fn parse_fixture(text: &str) -> Result<Vec<FixtureRow>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (erratum, line) = match line.strip_prefix("erratum ") {
            Some(rest) => (true, rest),
            None => (false, line),
        };
        let bad = |msg: &str| Error::parse(0, format!("fixture line {}: {msg}", i + 1));
        let (lhs, expected) = if let Some((lhs, rhs)) = line.split_once(" =~ ") {
            let (scalar, nested) = rhs.split_once(" | ").ok_or_else(|| bad("`=~` needs `| coefficients`"))?;
            let nested = nested.split(", ").map(str::to_string).collect();
            (lhs, Expected::Partial { scalar: scalar.to_string(), nested })
        } else {
            let (lhs, rhs) = line.split_once(" = ").ok_or_else(|| bad("missing `=`"))?;
            (lhs, Expected::Exact(rhs.to_string()))
        };
        let (verb, argument) = lhs.split_once(' ').ok_or_else(|| bad("missing argument"))?;
        rows.push(FixtureRow {
            line: i + 1,
            erratum,
            verb: verb.to_string(),
            argument: argument.to_string(),
            expected,
        });
    }
    Ok(rows)
}

fn monomial_text(basis: Basis, tree: &MarkedTree, xi: usize) -> String {
    let mut e = ClassExpr::zero(basis, tree.codim() + xi as u32);
    e.add_monomial(tree.clone(), Rational::one(), xi).expect("homogeneous by construction");
    render_text(&e)
}

fn term_map(e: &ClassExpr) -> BTreeMap<(MarkedTree, usize), Rational> {
    e.ordered_terms()
        .into_iter()
        .map(|(xi, c, t)| ((t.clone(), xi), c))
        .collect()
}

/// One line per term whose coefficients disagree.
pub fn class_diff(expected: &ClassExpr, computed: &ClassExpr) -> Vec<String> {
    let mut out = Vec::new();
    if expected.basis() != computed.basis() {
        out.push(format!(
            "basis: expected {}, computed {}",
            expected.basis().name(),
            computed.basis().name()
        ));
        return out;
    }
    let (a, b) = (term_map(expected), term_map(computed));
    let mut keys: Vec<_> = a.keys().chain(b.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    for key in keys {
        let (x, y) = (a.get(&key).cloned().unwrap_or_default(), b.get(&key).cloned().unwrap_or_default());
        if x != y {
            out.push(format!(
                "{}: expected {x}, computed {y}",
                monomial_text(computed.basis(), &key.0, key.1)
            ));
        }
    }
    out
}

pub fn cycle_diff(expected: &CycleExpr, computed: &CycleExpr) -> Vec<String> {
    let mut keys: Vec<&Profile> = expected.iter().chain(computed.iter()).map(|(p, _)| p).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|p| {
            let (x, y) = (expected.coefficient(p), computed.coefficient(p));
            (x != y).then(|| format!("C{p}: expected {x}, computed {y}"))
        })
        .collect()
}

fn flat_tree(t: &MarkedTree) -> bool {
    t.is_stick() || t.is_star()
}

fn partial_diff(scalar: &ClassExpr, nested: &[String], computed: &ClassExpr) -> Result<Vec<String>> {
    let mut flat = computed.clone();
    let mut found: Vec<(usize, Rational)> = Vec::new();
    for (xi, c, t) in computed.ordered_terms() {
        if !flat_tree(t) {
            found.push((xi, c.clone()));
            let mut minus = ClassExpr::zero(computed.basis(), computed.codim());
            minus.add_monomial(t.clone(), -c, xi)?;
            flat = flat.add(&minus)?;
        }
    }
    let mut diff = class_diff(scalar, &flat);
    // Listed nested coefficients, each a number times a power of xi.
    let mut listed: Vec<(usize, Rational)> = Vec::new();
    for text in nested {
        let e = parse_class(text)?;
        for (xi, c, t) in e.ordered_terms() {
            if *t != MarkedTree::stick(0) {
                return Err(Error::Constraint(format!("nested coefficient `{text}` names a class")));
            }
            listed.push((xi, c));
        }
    }
    found.sort();
    listed.sort();
    if found != listed {
        let show = |v: &[(usize, Rational)]| {
            v.iter().map(|(xi, c)| format!("{c}*xi^{xi}")).collect::<Vec<_>>().join(", ")
        };
        diff.push(format!("nested trees: expected [{}], computed [{}]", show(&listed), show(&found)));
    }
    Ok(diff)
}

fn parse_m(arg: &str) -> Result<u32> {
    arg.trim().parse().map_err(|_| Error::parse(0, format!("expected an integer, found `{arg}`")))
}

/// Computes the left-hand side of a class row.
fn class_lhs(row: &FixtureRow) -> Result<ClassExpr> {
    match row.verb.as_str() {
        "product" => theorem1_expansion(parse_m(&row.argument)?),
        "psi" => psi_power_sing(parse_m(&row.argument)?),
        "to-sing" => basic_to_sing(&parse_class(&row.argument)?),
        "to-basic" => sing_to_basic(&parse_class(&row.argument)?),
        v => Err(Error::parse(0, format!("unknown fixture verb `{v}`"))),
    }
}

fn cycle_lhs(row: &FixtureRow) -> Result<CycleExpr> {
    match row.verb.as_str() {
        "cycle" => Ok(completed_cycle(parse_m(&row.argument)?)),
        "multiply" => {
            let (a, b) = row
                .argument
                .split_once(' ')
                .ok_or_else(|| Error::parse(0, "multiply needs two profiles"))?;
            multiply_central(&a.parse()?, &b.parse()?)
        }
        v => Err(Error::parse(0, format!("unknown fixture verb `{v}`"))),
    }
}

/// Diff of one row against the engine; empty when the row holds.
pub fn check_row(row: &FixtureRow) -> Result<Vec<String>> {
    if matches!(row.verb.as_str(), "cycle" | "multiply") {
        let Expected::Exact(rhs) = &row.expected else {
            return Err(Error::parse(0, "cycle rows must be exact"));
        };
        return Ok(cycle_diff(&parse_cycle(rhs)?, &cycle_lhs(row)?));
    }
    let computed = class_lhs(row)?;
    match &row.expected {
        Expected::Exact(rhs) => Ok(class_diff(&parse_class(rhs)?, &computed)),
        Expected::Partial { scalar, nested } => partial_diff(&parse_class(scalar)?, nested, &computed),
    }
}

pub fn row_name(row: &FixtureRow) -> String {
    format!("line {}: {} {}", row.line, row.verb, row.argument)
}

/// Runs every row of a fixture. Rows marked `erratum` must disagree with
/// the engine; their diffs are kept as notes.
pub fn fixture(suite: &str, text: &str) -> Result<Report> {
    let mut report = Report::new(suite);
    for row in parse_fixture(text)? {
        let diff = check_row(&row)?;
        let name = row_name(&row);
        if row.erratum {
            if diff.is_empty() {
                report
                    .checks
                    .push(Check::new(name, vec!["row marked erratum agrees with the engine".into()]));
            } else {
                report.notes.push(format!("{name} is a known erratum: {}", diff.join("; ")));
            }
        } else {
            report.checks.push(Check::new(name, diff));
        }
    }
    Ok(report)
}

pub fn appendix() -> Result<Report> {
    fixture("appendix", APPENDIX)
}

/// `evaluate(C̄_{m+1}, λ) = p_m(λ)` for `m ≤ max_m` and `|λ| ≤ max_size`.
pub fn ko(max_m: u32, max_size: u32) -> Report {
    let mut report = Report::new("ko");
    for m in 0..=max_m {
        let c = completed_cycle(m);
        let mut diff = Vec::new();
        for n in 0..=max_size {
            for lambda in Partition::all_of(n) {
                let (lhs, rhs) = (evaluate(&c, &lambda), shifted_power_sum(&lambda, m));
                if lhs != rhs {
                    diff.push(format!("λ = {lambda}: completed cycle gives {lhs}, power sum {rhs}"));
                }
            }
        }
        report.checks.push(Check::new(format!("m = {m}, |λ| ≤ {max_size}"), diff));
    }
    report
}

/// Genus-0 completed-cycle coefficients against `ψ^m` point coefficients.
pub fn equality(max_m: u32) -> Result<Report> {
    let mut report = Report::new("equality");
    for m in 1..=max_m {
        let diff = if equality1_check(m)? {
            Vec::new()
        } else {
            vec!["genus-0 coefficients differ from the ψ-power point coefficients".into()]
        };
        report.checks.push(Check::new(format!("m = {m}"), diff));
    }
    Ok(report)
}

/// The completed-cycle rows of the fixture plus the group-algebra check of
/// `C_2 · C_2` at `N = 4, 5`.
pub fn cycles() -> Result<Report> {
    let cycle_rows: String = APPENDIX
        .lines()
        .filter(|l| l.starts_with("cycle ") || l.starts_with("multiply "))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut report = fixture("cycles", &cycle_rows)?;
    let two = Profile::from_parts(&[2]);
    let product = multiply_central(&two, &two)?;
    for n in [4, 5] {
        let ok = verify_in_group_algebra(&two, &two, &product, n)?;
        let diff = if ok { Vec::new() } else { vec![format!("C[2]*C[2] = {product} fails in S_{n}")] };
        report.checks.push(Check::new(format!("C[2]*C[2] in the group algebra of S_{n}"), diff));
    }
    Ok(report)
}

/// `sing_to_basic ∘ basic_to_sing = id` on every basic generator, and the
/// reverse composite on every singularity generator, up to `max_codim`.
pub fn roundtrip(max_codim: u32) -> Result<Report> {
    let mut report = Report::new("roundtrip");
    for c in 1..=max_codim {
        for tree in trees_of_codim(c) {
            let basic = ClassExpr::from_tree(Basis::Basic, tree.clone());
            let back = sing_to_basic(&basic_to_sing(&basic)?)?;
            report
                .checks
                .push(Check::new(format!("basic {}", render_text(&basic)), class_diff(&basic, &back)));
            let sing = ClassExpr::from_tree(Basis::Singularity, tree);
            let back = basic_to_sing(&sing_to_basic(&sing)?)?;
            report
                .checks
                .push(Check::new(format!("sing {}", render_text(&sing)), class_diff(&sing, &back)));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_rows_parse() {
        let rows = parse_fixture(APPENDIX).unwrap();
        assert!(rows.iter().any(|r| r.erratum));
        assert!(rows.iter().any(|r| matches!(r.expected, Expected::Partial { .. })));
        assert!(parse_fixture("product 2 a_2").is_err());
    }

    #[test]
    fn diff_names_terms() {
        let a = parse_class("a_2 + 1/2*i[1,1]").unwrap();
        let b = parse_class("a_2 + 1/4*i[1,1]").unwrap();
        assert_eq!(class_diff(&a, &b), vec!["i[1,1]: expected 1/2, computed 1/4"]);
        assert!(class_diff(&a, &a).is_empty());
    }

    #[test]
    fn broken_row_fails() {
        let report = fixture("t", "product 2 = a_2 + i[1,1]\n").unwrap();
        assert!(!report.passed());
        let report = fixture("t", "erratum product 2 = a_2 + 1/2*i[1,1]\n").unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn appendix_passes_with_one_erratum() {
        let report = appendix().unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.notes.len(), 1);
    }

    #[test]
    fn small_suites() {
        assert!(ko(3, 5).passed());
        assert!(equality(4).unwrap().passed());
        assert!(roundtrip(3).unwrap().passed());
    }
}
