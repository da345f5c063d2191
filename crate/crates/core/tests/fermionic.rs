//! Fermionic forms against the printed rank-one examples and against each
//! other's rewritten forms.

use affine_fermionic::affine_cartan::{load_algebra, AlgebraDatum, AlgebraLabel};
use affine_fermionic::fermionic::*;
use affine_fermionic::qseries::LaurentSeries;
use affine_fermionic::Q;

fn datum(s: &str) -> AlgebraDatum {
    load_algebra(&AlgebraLabel::parse(s).unwrap()).unwrap()
}

fn poly(pairs: &[(i64, i64)]) -> LaurentSeries {
    LaurentSeries::from_int_terms(pairs)
}

#[test]
fn a11_tensor_example() {
    let d = datum("A1~1");
    let w = QuantumSpace::parse("1:1:2,1:2:1").unwrap();
    let expect = [(4, poly(&[(0, 1)])), (2, poly(&[(1, 1), (2, 1)])), (0, poly(&[(2, 1)]))];
    for (lam, e) in expect {
        let m = fermionic_m(&d, &w, &[lam], Level::Infinite).unwrap();
        assert_eq!(m.invert_q().unwrap(), e, "lambda = {}", lam);
    }
    for lam in [1, 3, 5, 6] {
        assert!(fermionic_m(&d, &w, &[lam], Level::Infinite).unwrap().is_zero());
    }
}

#[test]
fn a22_tensor_example() {
    let d = datum("A2~2");
    let w = QuantumSpace::parse("1:1:2,1:2:1").unwrap();
    let expect = [
        (4, poly(&[(0, 1)])),
        (3, poly(&[(1, 1), (3, 1), (5, 1)])),
        (2, poly(&[(2, 1), (4, 2), (6, 2), (8, 1)])),
        (1, poly(&[(3, 1), (5, 2), (7, 2), (9, 2)])),
        (0, poly(&[(4, 1), (6, 1), (8, 2), (10, 1)])),
    ];
    for (lam, e) in expect {
        let m = fermionic_m(&d, &w, &[lam], Level::Infinite).unwrap();
        assert_eq!(m.invert_q().unwrap(), e, "lambda = {}", lam);
    }
}

#[test]
fn three_forms_agree() {
    for (alg, ws) in [
        ("A1~1", vec!["1:1:4", "1:1:2,1:2:1", "1:2:3"]),
        ("A2~2", vec!["1:1:3", "1:1:2,1:2:1"]),
        ("C2~1", vec!["1:1:2", "2:1:2", "1:1,2:1"]),
        ("A3~2", vec!["1:1:2", "2:1:2", "1:1,2:1"]),
        ("D4~3", vec!["1:1:2", "2:1", "1:1,2:1"]),
        ("A2~1", vec!["1:1:3", "1:1,2:1:2"]),
        ("D3~2", vec!["1:1:2", "2:1:2"]),
        ("G2~1", vec!["1:1", "2:1:2"]),
    ] {
        let d = datum(alg);
        for ws in ws {
            let w = QuantumSpace::parse(ws).unwrap();
            let wt = w.weight(d.n());
            // every dominant weight below the top
            let n = d.n();
            let mut lams = vec![vec![0i64; n]];
            for _ in 0..n {
                lams = lams
                    .into_iter()
                    .flat_map(|v| (0..=wt.iter().sum::<i64>()).map(move |x| { let mut v = v.clone(); v.push(x); v }))
                    .collect();
            }
            for lam in lams.into_iter().map(|v| v[n..].to_vec()) {
                let a = fermionic_m(&d, &w, &lam, Level::Infinite).unwrap().invert_q().unwrap();
                let b = fermionic_m_infinite_form(&d, &w, &lam).unwrap();
                assert_eq!(a, b, "{} {} {:?}", alg, ws, lam);
                let eps = support_class(&d, &w, &lam);
                assert!(has_expected_support(&d, &fermionic_m(&d, &w, &lam, Level::Infinite).unwrap(), eps));
            }
            for l in 1..=3 {
                if w.validate(&d, Level::Finite(l)).is_err() {
                    continue;
                }
                let zero = vec![0i64; n];
                let a = fermionic_m(&d, &w, &zero, Level::Finite(l)).unwrap().invert_q().unwrap();
                let b = fermionic_m_level_form(&d, &w, l).unwrap();
                assert_eq!(a, b, "{} {} l={}", alg, ws, l);
                let big = b.max_exponent().unwrap_or(Q::from_integer(0)) + Q::from_integer(1);
                let c = fermionic_ms(&d, &w, &Default::default(), l, big).unwrap();
                assert_eq!(b.truncate(big), c, "{} {} l={} (S empty)", alg, ws, l);
            }
        }
    }
}

/// `q^{lead} Σ_k c_k q^{step·k}` truncated below `order`.
fn series(lead: Q, step: i64, coeffs: &[i64], order: Q) -> LaurentSeries {
    LaurentSeries::from_coeffs(lead, Q::from_integer(step), coeffs, Some(order))
}

#[test]
fn string_series_rank_one() {
    let a11 = datum("A1~1");
    let a22 = datum("A2~2");
    let o1 = Q::from_integer(9);
    let o2 = Q::from_integer(18);
    let cases: Vec<(&AlgebraDatum, i64, i64, LaurentSeries)> = vec![
        (&a11, 2, 0, series(Q::from_integer(0), 1, &[1, 1, 3, 5, 10, 16, 28, 43, 70], o1)),
        (&a11, 2, 2, series(Q::new(1, 2), 1, &[1, 2, 4, 7, 13, 21, 35, 55, 86], o1)),
        (&a11, 3, 0, series(Q::from_integer(0), 1, &[1, 1, 3, 6, 12, 21, 39, 64, 108], o1)),
        (&a11, 3, 2, series(Q::new(2, 3), 1, &[1, 2, 5, 9, 18, 31, 55, 90, 149], o1)),
        (&a22, 2, 0, series(Q::from_integer(0), 2, &[1, 2, 4, 8, 15, 26, 44, 72, 115], o2)),
        (&a22, 2, 1, series(Q::new(1, 2), 2, &[1, 2, 5, 9, 17, 29, 50, 80, 129], o2)),
    ];
    for (d, l, lam, expect) in cases {
        let got = string_n(d, &[lam], l, expect.order().unwrap()).unwrap();
        assert_eq!(got, expect, "{} l={} lambda={}", d.label, l, lam);
    }
    let o3 = Q::from_integer(16);
    let got = string_n(&a22, &[0], 3, o3).unwrap();
    assert_eq!(got, series(Q::from_integer(0), 2, &[1, 2, 5, 12, 24, 46, 85, 150], o3));
    let got = string_n(&a22, &[1], 3, o3).unwrap();
    assert_eq!(got, series(Q::new(2, 3), 2, &[1, 3, 7, 15, 30, 57, 103, 180], o3));
}
