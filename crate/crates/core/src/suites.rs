//! Verification suites with deterministic JSON reports.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::diagram::{
    expected_hyp_size, expected_marked_labeled_size, expected_marked_reduced_size, verify_added_permutations,
    verify_rauzy_recursion, DiagramMode, Family, RauzyDiagram, DEFAULT_VERTEX_BUDGET,
};
use crate::error::{Error, Result};
use crate::families::{
    family_path, family_permutations, family_moves, matrix_family, sphere_orders, strictly_decreasing,
    verify_bounds, verify_envelope, verify_polynomial_identity, FamilyChoice, FamilyKind, FamilySpec,
};
use crate::linalg::{rational_from_f64, PerronRoot, DEFAULT_PRECISION};
use crate::loops::{
    check_loop_structure, enumerate_loops, loop_matrix, secondary_step_rules, systole_over, DEFAULT_LOOP_BUDGET,
};
use crate::suspension::{rotation_closure_pa, spin_parity};

pub const DEFAULT_MAX_LEN: usize = 10;

/// Lower bound asserted for every primitive loop.
pub const FLOOR: f64 = 2.0;
pub const FLOOR_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cardinalities,
    Structure,
    Floor2,
    #[serde(rename = "appendixA")]
    AppendixA,
    #[serde(rename = "appendixB")]
    AppendixB,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Cardinalities => "cardinalities",
            Suite::Structure => "structure",
            Suite::Floor2 => "floor2",
            Suite::AppendixA => "appendixA",
            Suite::AppendixB => "appendixB",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cardinalities" => Suite::Cardinalities,
            "structure" => Suite::Structure,
            "floor2" => Suite::Floor2,
            "appendixA" | "appendixa" => Suite::AppendixA,
            "appendixB" | "appendixb" => Suite::AppendixB,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

/// Inclusive range `a..b`, or a single value.
pub fn parse_range(s: &str) -> Result<(u32, u32)> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad range {s:?}")));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Error::Parse(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub n_range: Option<(u32, u32)>,
    pub g_range: Option<(u32, u32)>,
    pub precision: f64,
    pub max_len: usize,
    pub vertex_budget: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            n_range: None,
            g_range: None,
            precision: DEFAULT_PRECISION,
            max_len: DEFAULT_MAX_LEN,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub pass: bool,
    #[serde(flatten)]
    pub details: Map<String, Value>,
}

impl Case {
    fn new(name: impl Into<String>, pass: bool, details: Value) -> Case {
        let details = match details {
            Value::Object(m) => m,
            other => Map::from_iter([("value".to_string(), other)]),
        };
        Case { name: name.into(), pass, details }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub version: String,
    pub parameters: Value,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl Report {
    fn new(suite: &str, parameters: Value, cases: Vec<Case>) -> Report {
        let passed = cases.iter().filter(|c| c.pass).count();
        let summary = Summary { total: cases.len(), passed, failed: cases.len() - passed, pass: passed == cases.len() };
        Report { suite: suite.to_string(), version: env!("CARGO_PKG_VERSION").to_string(), parameters, cases, summary }
    }

    pub fn pass(&self) -> bool {
        self.summary.pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn root_json(r: &PerronRoot) -> Value {
    json!({ "value": r.value, "lo": r.lo.to_string(), "hi": r.hi.to_string() })
}

fn parameters(opts: &SuiteOptions) -> Value {
    json!({
        "n_range": opts.n_range.map(|r| format!("{}..{}", r.0, r.1)),
        "g_range": opts.g_range.map(|r| format!("{}..{}", r.0, r.1)),
        "precision": opts.precision,
        "max_len": opts.max_len,
        "vertex_budget": opts.vertex_budget,
    })
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Report> {
    let cases = match suite {
        Suite::Cardinalities => cardinalities(opts)?,
        Suite::Structure => structure(opts)?,
        Suite::Floor2 => floor2(opts)?,
        Suite::AppendixA => appendix_a(opts)?,
        Suite::AppendixB => appendix_b(opts)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Cardinalities, Suite::Structure, Suite::Floor2, Suite::AppendixA, Suite::AppendixB] {
                for mut c in run_suite(s, opts)?.cases {
                    c.name = format!("{s}/{}", c.name);
                    all.push(c);
                }
            }
            all
        }
    };
    Ok(Report::new(suite.name(), parameters(opts), cases))
}

fn cardinalities(opts: &SuiteOptions) -> Result<Vec<Case>> {
    let (hyp, marked) = match opts.n_range {
        Some(r) => (r, r),
        None => ((4, 14), (4, 10)),
    };
    let mut jobs: Vec<(Family, DiagramMode, u32)> = (hyp.0..=hyp.1).map(|n| (Family::Hyp, DiagramMode::Reduced, n)).collect();
    for n in marked.0..=marked.1 {
        jobs.push((Family::Marked, DiagramMode::Reduced, n));
        jobs.push((Family::Marked, DiagramMode::Labeled, n));
    }
    jobs.into_par_iter()
        .map(|(family, mode, n)| {
            let d = RauzyDiagram::build_with_budget(&family.base(n)?, mode, opts.vertex_budget)?;
            let expected = match (family, mode) {
                (Family::Hyp, _) => expected_hyp_size(n),
                (Family::Marked, DiagramMode::Reduced) => expected_marked_reduced_size(n),
                (Family::Marked, DiagramMode::Labeled) => expected_marked_labeled_size(n),
            };
            let size = d.len() as u64;
            let name = format!("{}-{}-{n}", family.name(), mode_name(mode));
            Ok(Case::new(name, size == expected && d.check_invariants(), json!({ "n": n, "size": size, "expected": expected })))
        })
        .collect()
}

fn mode_name(mode: DiagramMode) -> &'static str {
    match mode {
        DiagramMode::Labeled => "labeled",
        DiagramMode::Reduced => "reduced",
    }
}

/// Loop-level checks on one diagram: winner criterion against the power test,
/// structural checks.
pub fn loop_checks(family: Family, n: u32, mode: DiagramMode, max_len: usize, budget: usize) -> Result<Case> {
    let d = RauzyDiagram::build_with_budget(&family.base(n)?, mode, budget)?;
    let loops = enumerate_loops(&d, max_len, DEFAULT_LOOP_BUDGET)?;
    let rules = secondary_step_rules(n)?;
    let outcomes: Vec<(bool, Option<String>)> = loops
        .par_iter()
        .map(|lp| -> Result<(bool, Option<String>)> {
            let agrees = loop_matrix(&d, lp)?.is_primitive()? == lp.primitive;
            let s = check_loop_structure(family, n, &d, lp, &rules)?;
            let violation = (!s.pass()).then(|| format!("{} at {}: {}", s.moves, s.start, s.violation.unwrap_or_default()));
            Ok((agrees, violation))
        })
        .collect::<Result<_>>()?;
    let discrepancies = outcomes.iter().filter(|o| !o.0).count();
    let violations: Vec<&String> = outcomes.iter().filter_map(|o| o.1.as_ref()).collect();
    let name = format!("loops-{}-{}-{n}", family.name(), mode_name(mode));
    Ok(Case::new(
        name,
        discrepancies == 0 && violations.is_empty(),
        json!({
            "n": n,
            "max_len": max_len,
            "loops": loops.len(),
            "primitive": loops.iter().filter(|l| l.primitive).count(),
            "criterion_discrepancies": discrepancies,
            "structural_violations": violations.len(),
            "first_violation": violations.first(),
        }),
    ))
}

fn structure(opts: &SuiteOptions) -> Result<Vec<Case>> {
    let (lo, hi) = opts.n_range.unwrap_or((4, 5));
    let mut cases = Vec::new();
    for n in lo..=hi {
        for (family, mode) in [
            (Family::Hyp, DiagramMode::Labeled),
            (Family::Marked, DiagramMode::Labeled),
            (Family::Marked, DiagramMode::Reduced),
        ] {
            cases.push(loop_checks(family, n, mode, opts.max_len, opts.vertex_budget)?);
        }
        let added = verify_added_permutations(n)?;
        cases.push(Case::new(
            format!("added-permutations-{n}"),
            added.pass(),
            json!({ "n": n, "sigma_exceptions": added.sigma_exceptions(), "cases": added.cases.len() }),
        ));
        let rec = verify_rauzy_recursion(n)?;
        let bad: Vec<String> = rec.iter().filter(|c| !c.isomorphic).map(|c| format!("k={} {}", c.k, c.eps)).collect();
        cases.push(Case::new(format!("recursion-{n}"), bad.is_empty(), json!({ "n": n, "cases": rec.len(), "failing": bad })));
        let labeled = RauzyDiagram::build_with_budget(&Family::Marked.base(n)?, DiagramMode::Labeled, opts.vertex_budget)?;
        let cover = labeled.covering()?;
        cases.push(Case::new(
            format!("covering-{n}"),
            cover.uniform_degree() == Some(n as usize - 1),
            json!({ "n": n, "degree": cover.uniform_degree() }),
        ));
    }
    Ok(cases)
}

/// Least certified dilatation over the primitive loops of one diagram,
/// compared with the floor.
pub fn floor_case(family: Family, n: u32, mode: DiagramMode, max_len: usize, precision: f64) -> Result<Case> {
    let d = RauzyDiagram::build(&family.base(n)?, mode)?;
    let loops = enumerate_loops(&d, max_len, DEFAULT_LOOP_BUDGET)?;
    let name = format!("floor-{}-{}-{n}", family.name(), mode_name(mode));
    let floor = rational_from_f64(FLOOR - FLOOR_TOLERANCE);
    match systole_over(&d, &loops, max_len, precision) {
        Ok(s) => {
            let all_above = crate::loops::loop_roots(&d, &loops, precision)?
                .iter()
                .all(|(_, r)| r.as_ref().map_or(true, |r| r.lo >= floor));
            Ok(Case::new(
                name,
                all_above && s.primitive_min.root.lo >= floor,
                json!({
                    "n": n,
                    "max_len": max_len,
                    "loops": s.loops,
                    "primitive_loops": s.primitive_loops,
                    "minimum": root_json(&s.primitive_min.root),
                    "witness": { "base": s.primitive_min.start, "moves": s.primitive_min.moves },
                    "raw_minimum": s.raw_min.as_ref().map(|r| root_json(&r.root)),
                }),
            ))
        }
        Err(Error::NoPrimitiveLoop) => Ok(Case::new(
            name,
            true,
            json!({ "n": n, "max_len": max_len, "loops": loops.len(), "primitive_loops": 0, "vacuous": true }),
        )),
        Err(e) => Err(e),
    }
}

fn floor2(opts: &SuiteOptions) -> Result<Vec<Case>> {
    let (lo, hi) = opts.n_range.unwrap_or((4, 5));
    let mut cases = Vec::new();
    for n in lo..=hi {
        cases.push(floor_case(Family::Hyp, n, DiagramMode::Labeled, opts.max_len, opts.precision)?);
        cases.push(floor_case(Family::Marked, n, DiagramMode::Reduced, opts.max_len, opts.precision)?);
    }
    Ok(cases)
}

/// One member of a hyperelliptic family: identity, path, bounds and, when
/// `closure` holds, the half-turn certificate.
pub fn hyperelliptic_case(spec: FamilySpec, precision: f64, closure: bool) -> Result<Case> {
    let id = verify_polynomial_identity(spec)?;
    let path = family_path(spec)?;
    let path_match = match spec.which {
        FamilyKind::A2Odd => None,
        _ => Some(path.v == matrix_family(spec)?.matrix),
    };
    let bounds = verify_bounds(spec, precision)?;
    let mut pass = id.holds && path_match.unwrap_or(true) && bounds.pass;
    let mut details = json!({
        "g": spec.g,
        "family": spec.which.name(),
        "identity": id.holds,
        "charpoly": id.charpoly.to_string(),
        "bounds": {
            "theta": root_json(&bounds.theta),
            "target": bounds.target,
            "margin": bounds.margin,
            "width": bounds.width,
            "escalations": bounds.escalations,
            "pass": bounds.pass,
        },
        "path_match": path_match,
        "moves": path.moves,
    });
    if closure {
        let (pi, rotated) = family_permutations(spec)?;
        let outcome = rotation_closure_pa(&pi, &rotated, &family_moves(spec), precision);
        let closure_json = match &outcome {
            Ok(c) => json!({
                "pass": true,
                "margin": c.residuals.margin,
                "round_trip": c.residuals.round_trip_lambda.max(c.residuals.round_trip_tau),
                "rotation": c.residuals.rotation,
                "tau_sign": c.residuals.tau_sign,
            }),
            Err(e) => json!({ "pass": false, "error": e.to_string() }),
        };
        pass &= outcome.is_ok();
        details["closure"] = closure_json;
    }
    Ok(Case::new(format!("{}-g{}", spec.which.name(), spec.g), pass, details))
}

fn appendix_a(opts: &SuiteOptions) -> Result<Vec<Case>> {
    let a1 = opts.g_range.unwrap_or((2, 20));
    let a2 = opts.g_range.unwrap_or((2, 12));
    let mut specs: Vec<FamilySpec> = FamilyChoice::A1.genera(a1.0, a1.1).into_iter().map(|g| FamilyChoice::A1.spec(g)).collect::<Result<_>>()?;
    for g in FamilyChoice::A2.genera(a2.0, a2.1) {
        specs.push(FamilyChoice::A2.spec(g)?);
    }
    let mut cases: Vec<Case> = specs
        .par_iter()
        .map(|&s| hyperelliptic_case(s, opts.precision, true))
        .collect::<Result<_>>()?;
    if a1.0 <= 2 && 2 <= a1.1 {
        let r = verify_bounds(FamilySpec::new(FamilyKind::A1, 2)?, opts.precision)?;
        cases.push(Case::new(
            "A1-g2-value",
            (r.theta.value - 1.722_083_805).abs() < 1e-9,
            json!({ "theta": root_json(&r.theta), "expected": 1.722_083_805, "tolerance": 1e-9 }),
        ));
    }
    Ok(cases)
}

/// Quadratic family over the odd `g` in a range.
pub fn quadratic_cases(lo: u32, hi: u32, precision: f64) -> Result<Vec<Case>> {
    let genera = FamilyChoice::B.genera(lo, hi);
    let per_g: Vec<(Case, PerronRoot)> = genera
        .par_iter()
        .map(|&g| -> Result<(Case, PerronRoot)> {
            let spec = FamilySpec::new(FamilyKind::B, g)?;
            let id = verify_polynomial_identity(spec)?;
            let m = matrix_family(spec)?;
            let primitive = m.matrix.is_primitive()?;
            let path = family_path(spec)?;
            let path_match = Some(&path.v_hat) == m.v_hat.as_ref() && Some(&path.p) == m.p.as_ref();
            let env = verify_envelope(g, precision)?;
            let spin = spin_parity(&sphere_orders(g))?;
            let pass = id.holds && primitive && path_match && env.bound.pass && spin == 1;
            let case = Case::new(
                format!("B-g{g}"),
                pass,
                json!({
                    "g": g,
                    "identity": id.holds,
                    "primitive": primitive,
                    "path_match": path_match,
                    "bounds": {
                        "theta": root_json(&env.bound.theta),
                        "target": env.bound.target,
                        "margin": env.bound.margin,
                        "pass": env.bound.pass,
                    },
                    "below_one_plus_inverse_g": env.below_one_plus_inverse_g,
                    "spin_parity": spin,
                }),
            );
            Ok((case, env.bound.theta))
        })
        .collect::<Result<_>>()?;
    let roots: Vec<PerronRoot> = per_g.iter().map(|c| c.1.clone()).collect();
    let mut cases: Vec<Case> = per_g.into_iter().map(|c| c.0).collect();
    cases.push(Case::new(
        "B-decreasing",
        strictly_decreasing(&roots),
        json!({ "genera": genera, "values": roots.iter().map(|r| r.value).collect::<Vec<_>>() }),
    ));
    if genera.contains(&19) {
        let r = &roots[genera.iter().position(|&g| g == 19).expect("present")];
        let bound = BigRational::new(BigInt::from(6), BigInt::from(5));
        cases.push(Case::new("B-g19-below-1.2", r.below(&bound), json!({ "theta": root_json(r) })));
    }
    Ok(cases)
}

fn appendix_b(opts: &SuiteOptions) -> Result<Vec<Case>> {
    let (lo, hi) = opts.g_range.unwrap_or((3, 19));
    quadratic_cases(lo, hi, opts.precision)
}

/// Report of the `families` command.
pub fn families_report(choice: FamilyChoice, lo: u32, hi: u32, precision: f64) -> Result<Report> {
    let cases = match choice {
        FamilyChoice::B => quadratic_cases(lo, hi, precision)?,
        _ => choice
            .genera(lo, hi)
            .par_iter()
            .map(|&g| hyperelliptic_case(choice.spec(g)?, precision, true))
            .collect::<Result<_>>()?,
    };
    let name = match choice {
        FamilyChoice::A1 => "families-A1",
        FamilyChoice::A2 => "families-A2",
        FamilyChoice::B => "families-B",
    };
    Ok(Report::new(name, json!({ "g_range": format!("{lo}..{hi}"), "precision": precision }), cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..10"), Ok((4, 10)));
        assert_eq!(parse_range("4..=10"), Ok((4, 10)));
        assert_eq!(parse_range("7"), Ok((7, 7)));
        assert!(parse_range("9..3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Cardinalities, Suite::Structure, Suite::Floor2, Suite::AppendixA, Suite::AppendixB, Suite::All] {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
    }

    #[test]
    fn small_cardinalities() {
        let opts = SuiteOptions { n_range: Some((4, 5)), ..Default::default() };
        let r = run_suite(Suite::Cardinalities, &opts).unwrap();
        assert!(r.pass());
        assert_eq!(r.summary.total, 6);
    }
}
