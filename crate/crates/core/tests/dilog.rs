//! Rogers dilogarithm, the restricted system solver, sum rules and folding.

use affine_fermionic::affine_cartan::{load_algebra, AlgebraLabel};
use affine_fermionic::dilog::*;
use std::f64::consts::PI;

fn datum(label: &str) -> affine_fermionic::affine_cartan::AlgebraDatum {
    load_algebra(&AlgebraLabel::parse(label).unwrap()).unwrap()
}

/// Independent oracle: `L(x) = −∫_0^x log(1−t)/t dt + ½ log x log(1−x)` by
/// composite Simpson on a smooth integrand (valid for `x < 1`).
fn rogers_by_quadrature(x: f64) -> f64 {
    let g = |t: f64| if t == 0.0 { 1.0 } else { -(1.0 - t).ln() / t };
    let n = 20_000;
    let h = x / n as f64;
    let mut s = g(0.0) + g(x);
    for i in 1..n {
        s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0 + 0.5 * x.ln() * (1.0 - x).ln()
}

#[test]
fn rogers_dilogarithm_special_values() {
    assert!((rogers_l(0.5).unwrap() - PI * PI / 12.0).abs() < 1e-14);
    assert!((rogers_l(1.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
    assert_eq!(rogers_l(0.0).unwrap(), 0.0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    assert!((rogers_by_quadrature(g) - PI * PI / 10.0).abs() < 1e-12);
    assert!((rogers_l(g).unwrap() - PI * PI / 10.0).abs() < 1e-13);
    assert!(rogers_l(-0.1).is_err());
    assert!(rogers_l(1.1).is_err());
}

#[test]
fn rogers_dilogarithm_matches_quadrature() {
    for i in 1..20 {
        let x = i as f64 / 20.0;
        assert!((rogers_l(x).unwrap() - rogers_by_quadrature(x)).abs() < 1e-12, "x = {}", x);
    }
}

#[test]
fn rogers_dilogarithm_monotone_and_reflection() {
    let mut prev = -1.0;
    for i in 0..=100 {
        let x = i as f64 / 100.0;
        let v = rogers_l(x).unwrap();
        assert!(v > prev, "not increasing at {}", x);
        prev = v;
        let refl = v + rogers_l(1.0 - x).unwrap();
        assert!((refl - PI * PI / 6.0).abs() < 1e-12, "reflection at {}", x);
    }
}

#[test]
fn solver_closed_forms() {
    let s = solve_restricted_f(&datum("A1~1"), 2, 1e-14).unwrap();
    assert!((s.get(1, 1).unwrap() - 0.5).abs() < 1e-12);
    let s = solve_restricted_f(&datum("A2~2"), 2, 1e-14).unwrap();
    assert!((s.get(1, 1).unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
}

#[test]
fn solutions_lie_in_unit_interval_with_small_residual() {
    for label in AlgebraLabel::all_up_to_rank(3) {
        let d = load_algebra(&label).unwrap();
        for l in 2..=4 {
            let s = solve_restricted_f(&d, l, 1e-12).unwrap();
            assert!(s.residual < 1e-12, "{} l={}", label, l);
            assert_eq!(s.f.len(), d.h_set(l, true).len());
            assert!(s.f.iter().all(|&(_, _, x)| x > 0.0 && x < 1.0), "{} l={}", label, l);
        }
    }
}

#[test]
fn limit_is_independent_of_tolerance_and_seed() {
    for label in ["A3~1", "C2~1", "B3~1", "G2~1", "D4~3"] {
        let d = datum(label);
        let fine = solve_restricted_f(&d, 3, 1e-14).unwrap();
        let coarse = solve_restricted_f(&d, 3, 1e-6).unwrap();
        for seed in [0.1, 0.9] {
            let other = solve_from(&d, 3, 1e-14, seed).unwrap();
            for ((_, _, x), (_, _, y)) in fine.f.iter().zip(&other.f) {
                assert!((x - y).abs() < 1e-10, "{} seed {}", label, seed);
            }
        }
        for ((_, _, x), (_, _, y)) in fine.f.iter().zip(&coarse.f) {
            assert!((x - y).abs() < 1e-5, "{}", label);
        }
    }
}

#[test]
fn sum_rule_closed_forms() {
    let r = check_dilog_sum(&datum("A1~1"), 2, 1e-12).unwrap();
    assert!((r.lhs - PI * PI / 12.0).abs() < 1e-12 && (r.rhs - PI * PI / 12.0).abs() < 1e-12);
    assert!(r.pass);
    let r = check_dilog_sum(&datum("A2~2"), 2, 1e-12).unwrap();
    assert!((r.lhs - PI * PI / 5.0).abs() < 1e-12 && (r.rhs - PI * PI / 5.0).abs() < 1e-12);
    assert!(r.pass);
    // Level 1, simply laced: empty system, both sides vanish.
    let r = check_dilog_sum(&datum("A1~1"), 1, 1e-12).unwrap();
    assert!(r.solution.f.is_empty() && r.lhs == 0.0 && r.rhs.abs() < 1e-12 && r.pass);
}

#[test]
fn sum_rule_on_rank_three_grid() {
    for label in AlgebraLabel::all_up_to_rank(3) {
        let d = load_algebra(&label).unwrap();
        for l in 2..=4 {
            let r = check_dilog_sum(&d, l, 1e-9).unwrap();
            assert!(r.pass, "{} l={}: {} vs {}", label, l, r.lhs, r.rhs);
            assert!((r.lhs_full - r.rhs_full).abs() < 1e-9);
        }
    }
}

#[test]
fn report_json_fields() {
    let v = check_dilog_sum(&datum("A2~2"), 2, 1e-9).unwrap().to_json();
    for key in ["algebra", "level", "f", "lhs", "rhs", "abs_err"] {
        assert!(v.get(key).is_some(), "{}", key);
    }
    assert_eq!(v["algebra"], "A2~2");
    assert_eq!(v["f"][0][0], 1);
}

#[test]
fn folding_onto_untwisted_solutions() {
    let tol = 1e-13;
    for label in ["A2~2", "A3~2", "A4~2", "A5~2", "D3~2", "D4~2", "D4~3"] {
        for l in 2..=3 {
            let dev = folding_deviation(&AlgebraLabel::parse(label).unwrap(), l, tol).unwrap();
            assert!(dev < 10.0 * tol.max(1e-12), "{} l={} dev={}", label, l, dev);
        }
    }
    assert!(folding_deviation(&AlgebraLabel::parse("B3~1").unwrap(), 2, tol).is_err());
}

#[test]
fn slope_diagnostic() {
    let r = asymptotic_slope_check(&datum("A1~1"), &[0], 2, 40).unwrap();
    assert!((r.predicted - PI * PI / 6.0 * 1.5).abs() < 1e-12);
    assert!(r.relative_deviation.unwrap() < 0.25, "{:?}", r);
    let r = asymptotic_slope_check(&datum("A2~2"), &[0], 2, 40).unwrap();
    // (π²/12)(2·8/5): the twist divides the prefactor by r = 2.
    assert!((r.predicted - PI * PI / 12.0 * 16.0 / 5.0).abs() < 1e-12);
    assert!(r.fitted.is_some());
    let r = asymptotic_slope_check(&datum("A1~1"), &[0], 2, 1).unwrap();
    assert_eq!(r.note, "insufficient data");
    assert!(r.fitted.is_none());
}
