//! Verification suite: every acceptance criterion as a list of check records.
//!
//! Each criterion expands to records `{check_id, paper_anchor, status,
//! details}`. Check ids start with the zero-padded criterion number
//! (`c01/…` to `c10/…`), and the report is sorted by id, so output is
//! canonical. Checks of conjectural statements are labelled
//! `conjectural-pass`/`conjectural-fail` and never count as failures. Errors
//! raised inside a check become failing records rather than aborting the run.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::affine_cartan::{load_algebra, AlgebraDatum, AlgebraLabel, Family, FiniteType};
use crate::classical_characters::{
    conjectured_graded_decomposition, graded_closed_form, graded_decomposition_w, verify_completeness,
    verify_qsystem, GradedCombo,
};
use crate::crystal::{
    check_x_equals_m, compare_with_golden, dominant_support, onedsum_x, yang_baxter_check, AlgebraCrystals,
    GOLDEN_TABLES, SHIPPED_ALGEBRAS,
};
use crate::dilog::{check_dilog_sum, PI2_6};
use crate::fermionic::{
    check_mn_stabilization, check_recursion, check_weyl_skew, fermionic_m, fermionic_mtilde, limit_dualspinon_check,
    limit_spinon_check, spinon_rank_one_lhs, spinon_rank_one_sum, string_n, Level, LimitReport, QuantumSpace,
};
use crate::qseries::LaurentSeries;
use crate::{Result, Q};

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    ConjecturalPass,
    ConjecturalFail,
    Skipped,
}

impl Status {
    fn from_outcome(ok: bool, conjectural: bool) -> Status {
        match (ok, conjectural) {
            (true, false) => Status::Pass,
            (false, false) => Status::Fail,
            (true, true) => Status::ConjecturalPass,
            (false, true) => Status::ConjecturalFail,
        }
    }

    /// Text form used in reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ConjecturalPass => "conjectural-pass",
            Status::ConjecturalFail => "conjectural-fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One check of the suite.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub check_id: String,
    /// Short description of the statement under test.
    pub paper_anchor: String,
    pub status: Status,
    pub details: Value,
}

impl CheckRecord {
    /// JSON object of the record.
    pub fn to_json(&self) -> Value {
        json!({
            "check_id": self.check_id,
            "paper_anchor": self.paper_anchor,
            "status": self.status.as_str(),
            "details": self.details,
        })
    }
}

/// All records of a run, sorted by `check_id`.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    /// Builds a report, sorting the records canonically.
    pub fn new(mut records: Vec<CheckRecord>) -> SuiteReport {
        records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        SuiteReport { records }
    }

    /// Number of records per status.
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry(r.status.as_str()).or_insert(0) += 1;
        }
        out
    }

    /// True if any non-conjectural check failed.
    pub fn has_failure(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    /// JSON form `{summary, records}`.
    pub fn to_json(&self) -> Value {
        json!({
            "summary": self.counts(),
            "records": self.records.iter().map(CheckRecord::to_json).collect::<Vec<_>>(),
        })
    }

    /// One line per record: `status  check_id  paper_anchor`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{:<17} {}  ({})\n", r.status.as_str(), r.check_id, r.paper_anchor));
        }
        let counts: Vec<String> = self.counts().iter().map(|(k, v)| format!("{} {}", v, k)).collect();
        out.push_str(&format!("summary: {}\n", counts.join(", ")));
        out
    }
}

/// Run options.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Skip the slowest check (the `E^(2)_6` conjectured form of `W^(2)_3`).
    pub quick: bool,
    /// Seed of the randomized instances.
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { quick: false, seed: 20240611 }
    }
}

/// Sum-rule tolerance `|lhs − rhs|` over the algebra/level grid.
pub const DILOG_TOL: f64 = 1e-9;
/// Tolerance of the two closed-form sum-rule values.
pub const DILOG_CLOSED_FORM_TOL: f64 = 1e-12;

/// Titles of the ten acceptance criteria, indexed from 1.
pub const CRITERIA: [&str; 10] = [
    "reference R/H tables reproduced",
    "fermionic tensor-product examples",
    "string-function series",
    "graded decompositions",
    "one-dimensional sums equal fermionic forms",
    "Q-systems",
    "completeness at q = 1",
    "dilogarithm sum rule",
    "recursion and Weyl skew symmetry",
    "Yang-Baxter, order independence and limits",
];

/// Runs one check, turning errors into failing records.
fn check(id: String, anchor: &str, conjectural: bool, f: impl FnOnce() -> Result<(bool, Value)>) -> CheckRecord {
    let (status, details) = match f() {
        Ok((ok, details)) => (Status::from_outcome(ok, conjectural), details),
        Err(e) => (Status::from_outcome(false, conjectural), json!({ "error": e.to_string() })),
    };
    CheckRecord { check_id: id, paper_anchor: anchor.to_string(), status, details }
}

fn skipped(id: String, anchor: &str, reason: &str) -> CheckRecord {
    CheckRecord { check_id: id, paper_anchor: anchor.to_string(), status: Status::Skipped, details: json!({ "reason": reason }) }
}

fn datum(label: &str) -> Result<AlgebraDatum> {
    load_algebra(&AlgebraLabel::parse(label)?)
}

fn qi(x: i64) -> Q {
    Q::from_integer(x)
}

fn poly(pairs: &[(i64, i64)]) -> LaurentSeries {
    LaurentSeries::from_int_terms(pairs)
}

fn graded(pairs: &[(&[i64], &[(i64, i64)])]) -> GradedCombo {
    let mut g = GradedCombo::zero();
    for (w, c) in pairs {
        g.add_term(w.to_vec(), &poly(c));
    }
    g
}

fn limit_json(r: &LimitReport) -> Value {
    json!({ "lhs_by_L": r.lhs_by_l, "rhs": r.rhs, "stabilized": r.stabilized, "equal": r.equal })
}

/// Records of criterion `i` (1-based).
pub fn run_criterion(i: usize, opts: &SuiteOptions) -> Vec<CheckRecord> {
    match i {
        1 => criterion_tables(),
        2 => criterion_tensor_examples(),
        3 => criterion_string_series(),
        4 => criterion_graded(opts),
        5 => criterion_x_equals_m(),
        6 => criterion_qsystems(),
        7 => criterion_completeness(opts),
        8 => criterion_dilog(),
        9 => criterion_recursion_skew(opts),
        10 => criterion_properties(),
        _ => Vec::new(),
    }
}

/// Runs every criterion.
pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    SuiteReport::new((1..=CRITERIA.len()).flat_map(|i| run_criterion(i, opts)).collect())
}

fn criterion_tables() -> Vec<CheckRecord> {
    GOLDEN_TABLES
        .iter()
        .map(|&(alg, s1, s2)| {
            check(format!("c01/rtable/{}/B1{}xB1{}", alg, s1, s2), "combinatorial R and energy tables", false, || {
                let r = compare_with_golden(&AlgebraLabel::parse(alg)?, s1, s2)?;
                Ok((r.passed(), json!({ "entries": r.entries, "mismatches": r.mismatches, "labels_match": r.labels_match })))
            })
        })
        .collect()
}

fn criterion_tensor_examples() -> Vec<CheckRecord> {
    let cases: Vec<(&str, i64, LaurentSeries)> = vec![
        ("A1~1", 4, poly(&[(0, 1)])),
        ("A1~1", 2, poly(&[(1, 1), (2, 1)])),
        ("A1~1", 0, poly(&[(2, 1)])),
        ("A2~2", 4, poly(&[(0, 1)])),
        ("A2~2", 3, poly(&[(1, 1), (3, 1), (5, 1)])),
        ("A2~2", 2, poly(&[(2, 1), (4, 2), (6, 2), (8, 1)])),
        ("A2~2", 1, poly(&[(3, 1), (5, 2), (7, 2), (9, 2)])),
        ("A2~2", 0, poly(&[(4, 1), (6, 1), (8, 2), (10, 1)])),
    ];
    cases
        .into_iter()
        .map(|(alg, lam, expect)| {
            check(format!("c02/tensor/{}/lambda={}", alg, lam), "M_inf(W_1^2 (x) W_2, lambda, 1/q) examples", false, || {
                let d = datum(alg)?;
                let w = QuantumSpace::parse("1:1:2,1:2:1")?;
                let got = fermionic_m(&d, &w, &[lam], Level::Infinite)?.invert_q()?;
                Ok((got == expect, json!({ "got": got.to_string(), "expected": expect.to_string() })))
            })
        })
        .collect()
}

fn criterion_string_series() -> Vec<CheckRecord> {
    // (algebra, l, λ, leading exponent, exponent step, coefficients)
    let cases: Vec<(&str, i64, i64, Q, i64, Vec<i64>)> = vec![
        ("A1~1", 2, 0, qi(0), 1, vec![1, 1, 3, 5, 10, 16, 28, 43, 70]),
        ("A1~1", 2, 2, Q::new(1, 2), 1, vec![1, 2, 4, 7, 13, 21, 35, 55, 86]),
        ("A1~1", 3, 0, qi(0), 1, vec![1, 1, 3, 6, 12, 21, 39, 64, 108]),
        ("A1~1", 3, 2, Q::new(2, 3), 1, vec![1, 2, 5, 9, 18, 31, 55, 90, 149]),
        ("A2~2", 2, 0, qi(0), 2, vec![1, 2, 4, 8, 15, 26, 44, 72, 115]),
        ("A2~2", 2, 1, Q::new(1, 2), 2, vec![1, 2, 5, 9, 17, 29, 50, 80, 129]),
        ("A2~2", 3, 0, qi(0), 2, vec![1, 2, 5, 12, 24, 46, 85, 150]),
        ("A2~2", 3, 1, Q::new(2, 3), 2, vec![1, 3, 7, 15, 30, 57, 103, 180]),
    ];
    cases
        .into_iter()
        .map(|(alg, l, lam, lead, step, coeffs)| {
            check(format!("c03/string/{}/l={}/lambda={}", alg, l, lam), "N_l series examples", false, || {
                let d = datum(alg)?;
                let order = qi(step * coeffs.len() as i64);
                let expect = LaurentSeries::from_coeffs(lead, qi(step), &coeffs, Some(order));
                let got = string_n(&d, &[lam], l, order)?;
                Ok((got == expect, json!({ "got": got.to_string(), "expected": expect.to_string() })))
            })
        })
        .collect()
}

fn criterion_graded(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for alg in ["A3~2", "A5~2", "A2~2", "A4~2", "A6~2", "D3~2", "D4~2"] {
        let n = AlgebraLabel::parse(alg).map(|l| l.n).unwrap_or(0);
        for a in 1..=n {
            for s in 1..=3 {
                out.push(check(format!("c04/closed-form/{}/W{}_{}", alg, a, s), "graded decomposition closed forms", false, || {
                    let d = datum(alg)?;
                    let got = graded_decomposition_w(&d, a, s)?;
                    let expect = graded_closed_form(&d, a, s)?;
                    Ok((got == expect, json!({ "got": got.to_json(), "expected": expect.to_json() })))
                }));
            }
        }
    }
    let e6: Vec<(usize, i64, GradedCombo)> = vec![
        (1, 1, graded(&[(&[0, 0, 0, 0], &[(1, 1)]), (&[1, 0, 0, 0], &[(0, 1)])])),
        (
            2,
            1,
            graded(&[
                (&[0, 0, 0, 0], &[(3, 1)]),
                (&[1, 0, 0, 0], &[(1, 1), (2, 1)]),
                (&[0, 0, 0, 1], &[(1, 1)]),
                (&[0, 1, 0, 0], &[(0, 1)]),
            ]),
        ),
        (
            3,
            1,
            graded(&[
                (&[0, 0, 0, 0], &[(4, 1), (6, 1)]),
                (&[1, 0, 0, 0], &[(3, 2), (4, 1), (5, 1)]),
                (&[0, 0, 0, 1], &[(2, 2), (4, 1)]),
                (&[0, 1, 0, 0], &[(1, 1), (2, 1), (3, 1)]),
                (&[2, 0, 0, 0], &[(2, 1)]),
                (&[1, 0, 0, 1], &[(1, 1)]),
                (&[0, 0, 1, 0], &[(0, 1)]),
            ]),
        ),
        (4, 1, graded(&[(&[0, 0, 0, 0], &[(2, 1)]), (&[1, 0, 0, 0], &[(1, 1)]), (&[0, 0, 0, 1], &[(0, 1)])])),
        (3, 2, e6_w32()),
    ];
    let d43: Vec<(usize, i64, GradedCombo)> = vec![
        (1, 1, graded(&[(&[0, 0], &[(1, 1)]), (&[1, 0], &[(0, 1)])])),
        (2, 1, graded(&[(&[0, 0], &[(3, 1)]), (&[1, 0], &[(1, 1), (2, 1)]), (&[0, 1], &[(0, 1)])])),
    ];
    for (alg, list) in [("E6~2", e6), ("D4~3", d43)] {
        for (a, s, expect) in list {
            out.push(check(format!("c04/table/{}/W{}_{}", alg, a, s), "printed graded decompositions", false, || {
                let got = graded_decomposition_w(&datum(alg)?, a, s)?;
                Ok((got == expect, json!({ "got": got.to_json(), "expected": expect.to_json() })))
            }));
        }
    }
    for (alg, nodes) in [("E6~2", vec![1usize, 2, 4]), ("D4~3", vec![1, 2])] {
        for &a in &nodes {
            for s in 1..=3 {
                let id = format!("c04/conjectured/{}/W{}_{}", alg, a, s);
                let anchor = "conjectured graded decompositions";
                if opts.quick && alg == "E6~2" && a == 2 && s == 3 {
                    out.push(skipped(id, anchor, "slow case omitted in quick mode"));
                    continue;
                }
                out.push(check(id, anchor, true, || {
                    let d = datum(alg)?;
                    let got = graded_decomposition_w(&d, a, s)?;
                    let expect = conjectured_graded_decomposition(&d.label, a, s)?;
                    Ok((got == expect, json!({ "got": got.to_json(), "expected": expect.to_json() })))
                }));
            }
        }
    }
    out
}

fn e6_w32() -> GradedCombo {
    graded(&[
        (&[0, 0, 0, 0], &[(8, 1), (10, 1), (12, 1)]),
        (&[0, 0, 0, 1], &[(6, 2), (8, 4), (10, 1)]),
        (&[0, 0, 0, 2], &[(4, 3), (6, 3), (8, 1)]),
        (&[0, 0, 1, 0], &[(4, 2), (5, 1), (6, 6), (7, 1), (8, 1)]),
        (&[0, 0, 1, 1], &[(2, 2), (4, 2)]),
        (&[0, 0, 2, 0], &[(0, 1)]),
        (&[0, 1, 0, 0], &[(5, 1), (6, 2), (7, 5), (8, 3), (9, 2)]),
        (&[0, 1, 0, 1], &[(3, 2), (4, 3), (5, 5), (6, 2), (7, 1)]),
        (&[0, 1, 1, 0], &[(1, 1), (2, 1), (3, 1)]),
        (&[0, 2, 0, 0], &[(2, 1), (3, 1), (4, 3), (5, 1), (6, 1)]),
        (&[1, 0, 0, 0], &[(7, 2), (8, 1), (9, 3), (10, 1), (11, 1)]),
        (&[1, 0, 0, 1], &[(5, 5), (6, 3), (7, 6), (8, 1), (9, 1)]),
        (&[1, 0, 0, 2], &[(3, 2), (5, 1)]),
        (&[1, 0, 1, 0], &[(3, 3), (4, 2), (5, 3)]),
        (&[1, 0, 1, 1], &[(1, 1)]),
        (&[1, 1, 0, 0], &[(4, 2), (5, 5), (6, 5), (7, 3), (8, 1)]),
        (&[1, 1, 0, 1], &[(2, 1), (3, 2), (4, 1)]),
        (&[2, 0, 0, 0], &[(6, 4), (7, 2), (8, 4), (9, 1), (10, 1)]),
        (&[2, 0, 0, 1], &[(4, 4), (5, 1), (6, 2)]),
        (&[2, 0, 0, 2], &[(2, 1)]),
        (&[2, 0, 1, 0], &[(2, 1)]),
        (&[2, 1, 0, 0], &[(3, 1), (4, 1), (5, 1)]),
        (&[3, 0, 0, 0], &[(5, 2), (6, 1), (7, 1)]),
        (&[3, 0, 0, 1], &[(3, 1)]),
        (&[4, 0, 0, 0], &[(4, 1)]),
    ])
}

/// Ordered factor sequences over `{B^{1,1}, B^{1,2}}` of length 1 to 3.
fn factor_sequences() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..3 {
        layer = layer.into_iter().flat_map(|p| [1, 2].map(|s| [p.clone(), vec![s]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn kinds_id(kinds: &[usize]) -> String {
    kinds.iter().map(|s| format!("B1{}", s)).collect::<Vec<_>>().join("x")
}

fn criterion_x_equals_m() -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for alg in SHIPPED_ALGEBRAS {
        let ac = AlgebraLabel::parse(alg).and_then(|l| AlgebraCrystals::new(&l));
        let conjectural = !alg.starts_with('A') || !alg.ends_with("~1");
        for kinds in factor_sequences() {
            out.push(check(format!("c05/x=m/{}/{}", alg, kinds_id(&kinds)), "X = M for KR crystal paths", conjectural, || {
                let ac = ac.as_ref().map_err(Clone::clone)?;
                let lev = kinds.iter().map(|&s| ac.crystal(s).map(|c| c.level())).collect::<Result<Vec<_>>>()?;
                let lev = lev.into_iter().max().unwrap_or(1);
                let mut cases = Vec::new();
                for lam in dominant_support(ac, &kinds)? {
                    cases.push((lam, Level::Infinite));
                }
                let zero = vec![0i64; ac.datum.n()];
                cases.push((zero.clone(), Level::Finite(lev)));
                cases.push((zero, Level::Finite(lev + 1)));
                let mut failures = Vec::new();
                for (lam, level) in &cases {
                    let rep = check_x_equals_m(ac, &kinds, lam, *level)?;
                    if !rep.equal {
                        failures.push(rep.to_json());
                    }
                }
                Ok((failures.is_empty(), json!({ "cases": cases.len(), "failures": failures })))
            }));
        }
    }
    out
}

/// `(g, g')` pairs with a shipped Q-system solution, rank at most 4.
pub fn qsystem_pairs() -> Vec<(String, FiniteType)> {
    use Family::*;
    let ft = FiniteType::new;
    let mut out = vec![("A1~1".to_string(), ft(A, 1))];
    for n in 1..=4 {
        out.push((format!("A{}~2", 2 * n), ft(C, n)));
        out.push((format!("A{}~2", 2 * n), ft(B, n)));
        if n >= 2 {
            out.push((format!("A{}~2", 2 * n - 1), ft(C, n)));
            out.push((format!("A{}~2", 2 * n - 1), ft(D, n)));
            out.push((format!("D{}~2", n + 1), ft(B, n)));
            out.push((format!("A{}~1", n), ft(A, n)));
            out.push((format!("C{}~1", n), ft(C, n)));
        }
        if n >= 3 {
            out.push((format!("B{}~1", n), ft(D, n)));
            out.push((format!("B{}~1", n), ft(B, n)));
        }
    }
    out.push(("D4~1".to_string(), ft(D, 4)));
    out.push(("D4~3".to_string(), ft(G, 2)));
    out
}

fn criterion_qsystems() -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (g, f) in qsystem_pairs() {
        let n = AlgebraLabel::parse(&g).map(|l| l.n).unwrap_or(0);
        for a in 1..=n {
            out.push(check(format!("c06/qsystem/{}/{}/a={}", g, f, a), "Q-system solutions", false, || {
                let label = AlgebraLabel::parse(&g)?;
                let mut failures = Vec::new();
                for j in 1..=4 {
                    let r = verify_qsystem(&label, f, a, j)?;
                    if !r.holds {
                        failures.push(json!({ "j": j, "lhs": r.lhs.to_string(), "rhs": r.rhs.to_string() }));
                    }
                }
                Ok((failures.is_empty(), json!({ "j_max": 4, "failures": failures })))
            }));
        }
    }
    out
}

/// Random quantum space with `1 ≤ |W| ≤ max_size` and strings up to `max_j`.
fn random_space(rng: &mut ChaCha8Rng, d: &AlgebraDatum, max_size: usize, max_j: i64) -> QuantumSpace {
    let mut w = QuantumSpace::new();
    for _ in 0..rng.gen_range(1..=max_size) {
        w.add(rng.gen_range(1..=d.n()), rng.gen_range(1..=max_j), 1);
    }
    w
}

fn criterion_completeness(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let algebras = ["A2~2", "A3~2", "D3~2", "D4~3", "C2~1"];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..30)
        .map(|k| {
            let alg = algebras[rng.gen_range(0..algebras.len())];
            let d = datum(alg);
            let w = d.as_ref().map(|d| random_space(&mut rng, d, 4, 2)).unwrap_or_default();
            check(format!("c07/completeness/{:02}", k), "completeness at q = 1", false, || {
                let r = verify_completeness(&d?, &w)?;
                Ok((r.equal, json!({ "algebra": alg, "W": w.to_string(), "product": r.product.to_json(), "fermionic": r.fermionic.to_json() })))
            })
        })
        .collect()
}

fn criterion_dilog() -> Vec<CheckRecord> {
    let anchor = "dilogarithm sum rule";
    let mut out = Vec::new();
    for label in AlgebraLabel::all_up_to_rank(3) {
        for l in 2..=4 {
            out.push(check(format!("c08/dilog/{}/l={}", label, l), anchor, true, || {
                let r = check_dilog_sum(&load_algebra(&label)?, l, DILOG_TOL)?;
                Ok((r.pass, r.to_json()))
            }));
        }
    }
    for (alg, value) in [("A1~1", PI2_6 / 2.0), ("A2~2", PI2_6 * 6.0 / 5.0)] {
        out.push(check(format!("c08/closed-form/{}/l=2", alg), anchor, true, || {
            let r = check_dilog_sum(&datum(alg)?, 2, DILOG_CLOSED_FORM_TOL)?;
            let ok = r.pass && (r.lhs - value).abs() < DILOG_CLOSED_FORM_TOL && (r.rhs - value).abs() < DILOG_CLOSED_FORM_TOL;
            Ok((ok, json!({ "lhs": r.lhs, "rhs": r.rhs, "expected": value })))
        }));
    }
    out
}

fn criterion_recursion_skew(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let algebras = ["A1~1", "A2~2", "C2~1", "A3~2", "D3~2", "D4~3"];
    let levels = [Level::Finite(2), Level::Finite(3), Level::Infinite];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
    let mut k = 0;
    while k < 50 {
        let alg = algebras[rng.gen_range(0..algebras.len())];
        let Ok(d) = datum(alg) else { break };
        let level = levels[rng.gen_range(0..levels.len())];
        let mut w = QuantumSpace::new();
        for _ in 0..rng.gen_range(0..=4) {
            let a = rng.gen_range(1..=d.n());
            let top = level.scaled(d.t(a)).unwrap_or(3);
            w.add(a, rng.gen_range(1..=top), 1);
        }
        let a = rng.gen_range(1..=d.n());
        let jmax = level.scaled(d.t(a)).map_or(2, |t| (t - 1).min(2));
        if jmax < 1 {
            continue;
        }
        let j = rng.gen_range(1..=jmax);
        // λ near the weight of W_1, lowered by a few units.
        let mut w1 = w.clone();
        w1.add(a, j, 2);
        let lam: Vec<i64> = w1.weight(d.n()).iter().map(|&x| (x - rng.gen_range(0..=2)).max(0)).collect();
        out.push(check(format!("c09/recursion/{:02}", k), "recursion relation", false, || {
            let r = check_recursion(&d, a, j, &w, &lam, level)?;
            Ok((r.equal && r.tilde_equal, json!({ "algebra": alg, "a": a, "j": j, "level": level.to_json(), "lambda": lam, "report": r })))
        }));
        k += 1;
    }
    let algebras = ["A1~1", "A2~1", "A2~2", "C2~1", "A3~2", "D3~2", "D4~3", "G2~1"];
    for k in 0..50 {
        let alg = algebras[rng.gen_range(0..algebras.len())];
        let Ok(d) = datum(alg) else { break };
        let w = random_space(&mut rng, &d, 3, 2);
        let lam: Vec<i64> = w.weight(d.n()).iter().map(|&x| rng.gen_range(0..=x)).collect();
        let word: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=d.n())).collect();
        out.push(check(format!("c09/weyl-skew/{:02}", k), "Weyl skew symmetry of M-tilde", true, || {
            let ok = check_weyl_skew(&d, &w, &lam, &word)?;
            let nontrivial = !fermionic_mtilde(&d, &w, &lam, Level::Infinite)?.is_zero();
            Ok((ok, json!({ "algebra": alg, "W": w.to_string(), "lambda": lam, "word": word, "nontrivial": nontrivial })))
        }));
    }
    out
}

fn criterion_properties() -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for alg in SHIPPED_ALGEBRAS {
        let ac = AlgebraLabel::parse(alg).and_then(|l| AlgebraCrystals::new(&l));
        let triples: Vec<[usize; 3]> =
            factor_sequences().into_iter().filter(|k| k.len() == 3).map(|k| [k[0], k[1], k[2]]).collect();
        for kinds in triples {
            out.push(check(format!("c10/yang-baxter/{}/{}", alg, kinds_id(&kinds)), "Yang-Baxter equation", false, || {
                let ac = ac.as_ref().map_err(Clone::clone)?;
                let r = yang_baxter_check(ac, kinds)?;
                Ok((r.holds(), json!({ "triples": r.triples, "map_failures": r.map_failures, "energy_failures": r.energy_failures })))
            }));
        }
        for kinds in [[1usize, 1, 2], [1, 2, 2]] {
            out.push(check(format!("c10/order-independence/{}/{}", alg, kinds_id(&kinds)), "X_l independent of factor order", false, || {
                let ac = ac.as_ref().map_err(Clone::clone)?;
                let lev = ac.crystal(1)?.level().max(ac.crystal(2)?.level());
                let mut orders: Vec<Vec<usize>> = Vec::new();
                for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                    let k: Vec<usize> = p.iter().map(|&i| kinds[i]).collect();
                    if !orders.contains(&k) {
                        orders.push(k);
                    }
                }
                let mut cases = 0;
                let mut failures = Vec::new();
                for lam in dominant_support(ac, &kinds)? {
                    for level in [Level::Infinite, Level::Finite(lev), Level::Finite(lev + 1)] {
                        let sums: Vec<LaurentSeries> = orders.iter().map(|k| onedsum_x(ac, k, &lam, level)).collect::<Result<_>>()?;
                        cases += 1;
                        if sums.iter().any(|x| *x != sums[0]) {
                            failures.push(json!({ "lambda": lam, "level": level.to_json() }));
                        }
                    }
                }
                Ok((failures.is_empty(), json!({ "cases": cases, "failures": failures })))
            }));
        }
    }
    // M_l → N_l stabilization at order 6.
    let order = qi(6);
    let ladder = |sizes: &[i64]| -> Vec<QuantumSpace> { sizes.iter().map(|&k| QuantumSpace::from_triples(&[(1, 1, k)])).collect() };
    for (alg, lam, sizes) in [("A1~1", 0i64, [24i64, 36, 48]), ("A1~1", 2, [24, 36, 48]), ("A2~2", 0, [12, 16, 20]), ("A2~2", 1, [25, 37, 49])] {
        out.push(check(format!("c10/mn-stabilization/{}/l=2/lambda={}", alg, lam), "M_l stabilizes to N_l", true, || {
            let r = check_mn_stabilization(&datum(alg)?, &[lam], 2, order, &ladder(&sizes))?;
            Ok((r.stabilized && r.equal, limit_json(&r)))
        }));
    }
    // Spinon limits at order 4: the two rank-one examples and the general statement.
    let order = qi(4);
    for (alg, ls) in [("A1~1", [12i64, 16]), ("A2~2", [6, 8])] {
        for s in 1..=2 {
            out.push(check(format!("c10/spinon/{}/s={}", alg, s), "spinon limit examples", false, || {
                let d = datum(alg)?;
                let lhs: Vec<LaurentSeries> = ls.iter().map(|&l| spinon_rank_one_lhs(&d, s, l, order)).collect::<Result<_>>()?;
                let rhs = spinon_rank_one_sum(&d, s, s + 4, order)?;
                let ok = lhs[0] == lhs[1] && lhs[1] == rhs;
                Ok((ok, json!({ "lhs_by_L": lhs.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "rhs": rhs.to_string() })))
            }));
        }
        for l in 1..=2 {
            out.push(check(format!("c10/spinon/{}/b=1/l={}", alg, l), "spinon limit", false, || {
                let d = datum(alg)?;
                let r = limit_spinon_check(&d, 1, l, &vec![0; d.n()], &ls, order)?;
                Ok((r.stabilized && r.equal, limit_json(&r)))
            }));
        }
    }
    // Dual-spinon limits at order 4.
    for (alg, mu) in [("A2~1", vec![1i64, 0]), ("A2~1", vec![2, 1]), ("A2~2", vec![2]), ("A2~2", vec![1])] {
        let mu_id = mu.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        out.push(check(format!("c10/dual-spinon/{}/b=1/mu={}", alg, mu_id), "dual-spinon limit", false, || {
            let mu: Vec<Q> = mu.iter().map(|&x| qi(x)).collect();
            let r = limit_dualspinon_check(&datum(alg)?, 1, &[1, 2], &mu, &[8, 10], order)?;
            Ok((r.stabilized && r.equal, limit_json(&r)))
        }));
    }
    out
}
