//! Exact q-series arithmetic, q-binomials and inverse q-Pochhammer symbols.

use affine_fermionic::qseries::*;
use affine_fermionic::Q;
use num_bigint::BigInt;
use proptest::prelude::*;

fn poly(pairs: &[(i64, i64)]) -> LaurentSeries {
    LaurentSeries::from_int_terms(pairs)
}

/// Number of partitions of `k` into at most `m` parts each ≤ `p`
/// (the coefficient of `q^k` in `[p+m over m]`), by direct recursion.
fn box_partitions(k: i64, m: i64, p: i64) -> i64 {
    if k == 0 {
        return 1;
    }
    if m == 0 || p == 0 || k < 0 {
        return 0;
    }
    // Largest part is exactly `x`, remaining parts ≤ x.
    (1..=p.min(k)).map(|x| box_partitions(k - x, m - 1, x)).sum()
}

/// Number of partitions of `k` into parts of size ≤ `max`, each a multiple of `t`.
fn partitions_count(k: i64, max: i64, t: i64) -> i64 {
    if k == 0 {
        return 1;
    }
    if k < 0 || max == 0 {
        return 0;
    }
    (1..=max).filter(|x| t * x <= k).map(|x| partitions_count(k - t * x, x, t)).sum()
}

#[test]
fn qbinomial_examples() {
    assert_eq!(qbinomial(2, 1, 1).unwrap(), poly(&[(0, 1), (1, 1), (2, 1)]));
    assert!(qbinomial(-1, 2, 1).unwrap().is_zero());
    assert_eq!(qbinomial(-3, 1, 1).unwrap(), poly(&[(-2, -1), (-1, -1)]));
    assert!(qbinomial(1, -1, 1).is_err());
}

#[test]
fn qbinomial_matches_box_partition_count() {
    for p in 0..=7 {
        for m in 0..=6 {
            for t in 1..=3 {
                let b = qbinomial(p, m, t).unwrap();
                for k in 0..=p * m {
                    let c = b.coeff(Q::from_integer(t * k)).unwrap();
                    assert_eq!(c, BigInt::from(box_partitions(k, m, p)), "p={} m={} t={} k={}", p, m, t, k);
                }
            }
        }
    }
}

#[test]
fn qbinomial_pascal_product_recurrence() {
    // (1 − q^{tm}) [p+m over m] = (1 − q^{t(p+m)}) [p+m−1 over m−1]
    for p in 0..=10 {
        for m in 1..=10 {
            for t in 1..=2 {
                let lhs = poly(&[(0, 1), (t * m, -1)]).mul(&qbinomial(p, m, t).unwrap());
                let rhs = poly(&[(0, 1), (t * (p + m), -1)]).mul(&qbinomial(p, m - 1, t).unwrap());
                assert_eq!(lhs, rhs, "p={} m={} t={}", p, m, t);
            }
        }
    }
}

#[test]
fn qbinomial_negative_p_at_one() {
    fn binom(n: i64, k: i64) -> i64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for m in 1..=6 {
        for p in (-12)..=(-m - 1) {
            let v = qbinomial(p, m, 1).unwrap().eval_at_one().unwrap();
            let sign = if m % 2 == 0 { 1 } else { -1 };
            assert_eq!(v, BigInt::from(sign * binom(-p - 1, m)), "p={} m={}", p, m);
            // Exponents stay in t·ℤ for t = 2.
            assert!(qbinomial(p, m, 2).unwrap().terms().all(|(e, _)| e.is_integer() && e.to_integer() % 2 == 0));
        }
    }
}

#[test]
fn inv_pochhammer_counts_partitions() {
    let o = Q::from_integer(15);
    for t in 1..=3 {
        for k in [Some(0), Some(1), Some(3), None] {
            let s = inv_pochhammer(k, t, o).unwrap();
            assert_eq!(s.order(), Some(o));
            for e in 0..15 {
                let max = k.unwrap_or(15);
                let c = s.coeff(Q::from_integer(e)).unwrap();
                assert_eq!(c, BigInt::from(partitions_count(e, max, t)), "k={:?} t={} e={}", k, t, e);
            }
        }
    }
    assert_eq!(inv_pochhammer(Some(0), 1, Q::from_integer(3)).unwrap().to_string(), "1 + O(q^(3))");
    assert_eq!(
        inv_pochhammer(None, 2, Q::from_integer(5)).unwrap().to_string(),
        "1 + q^2 + 2*q^4 + O(q^(5))"
    );
}

#[test]
fn laurent_examples() {
    assert_eq!(poly(&[(1, 1), (2, 1)]).invert_q().unwrap(), poly(&[(-1, 1), (-2, 1)]));
    assert_eq!(poly(&[(0, 1), (1, 1)]).mul(&poly(&[(0, 1), (1, -1)])), poly(&[(0, 1), (2, -1)]));
    assert_eq!(poly(&[(3, 1), (5, 2)]).eval_at_one().unwrap(), BigInt::from(3));
    // Truncated series refuse operations that would invent precision.
    let t = poly(&[(0, 1)]).truncate(Q::from_integer(2));
    assert!(t.invert_q().is_err());
    assert!(t.eval_at_one().is_err());
    assert!(t.coeff(Q::from_integer(3)).is_err());
    // Order of a product: min(o_a + v_b, o_b + v_a).
    let a = poly(&[(1, 1)]).truncate(Q::from_integer(4));
    let b = poly(&[(-1, 1)]).truncate(Q::from_integer(3));
    assert_eq!(a.mul(&b).order(), Some(Q::from_integer(3)));
    // Rational exponents.
    let h = LaurentSeries::q_pow(Q::new(1, 2)).mul(&LaurentSeries::q_pow(Q::new(2, 3)));
    assert_eq!(h, LaurentSeries::q_pow(Q::new(7, 6)));
    assert_eq!(h.to_canonical_string(), "1*q^(7/6)");
}

#[test]
fn json_round_trip() {
    let s = poly(&[(-2, 3), (0, -1), (5, 7)]).shift(Q::new(1, 3)).truncate(Q::from_integer(4));
    let back = LaurentSeries::from_json(&s.to_json()).unwrap();
    assert_eq!(back, s);
    assert_eq!(parse_rational("-3/6").unwrap(), Q::new(-1, 2));
}

fn arb_poly() -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((-10i64..10, -5i64..6), 0..20).prop_map(|v| poly(&v))
}

proptest! {
    #[test]
    fn mul_commutative(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn mul_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn distributive(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn invert_twice_is_identity(a in arb_poly()) {
        prop_assert_eq!(a.invert_q().unwrap().invert_q().unwrap(), a.clone());
        prop_assert_eq!(a.sub(&a), LaurentSeries::zero());
    }

    #[test]
    fn substitution_is_a_ring_map(a in arb_poly(), b in arb_poly(), t in 1i64..4) {
        let t = Q::from_integer(t);
        prop_assert_eq!(a.mul(&b).subs_power(t).unwrap(), a.subs_power(t).unwrap().mul(&b.subs_power(t).unwrap()));
        prop_assert_eq!(a.subs_power(t).unwrap().eval_at_one().unwrap(), a.eval_at_one().unwrap());
    }

    #[test]
    fn truncation_commutes_with_mul(a in arb_poly(), b in arb_poly(), o in 1i64..10) {
        let o = Q::from_integer(o);
        let (lo_a, lo_b) = (a.min_exponent(), b.min_exponent());
        if let (Some(va), Some(vb)) = (lo_a, lo_b) {
            let exact = a.mul(&b).truncate(o + va + vb);
            let approx = a.truncate(o + va).mul(&b.truncate(o + vb));
            prop_assert!(exact.agrees_below(&approx, o + va + vb).unwrap());
        }
    }
}
