//! Weyl characters, tensor decompositions and branching.

#![allow(clippy::type_complexity)]
use affine_fermionic::affine_cartan::{load_algebra, AlgebraLabel, Family, FiniteType};
use affine_fermionic::classical_characters::*;
use affine_fermionic::fermionic::QuantumSpace;
use affine_fermionic::qseries::LaurentSeries;
use affine_fermionic::Q;
use std::collections::{BTreeMap, HashSet};

fn label(s: &str) -> AlgebraLabel {
    AlgebraLabel::parse(s).unwrap()
}

fn gcirc(s: &str) -> ClassicalAlgebra {
    ClassicalAlgebra::gcirc(&load_algebra(&label(s)).unwrap()).unwrap()
}

fn ft(f: Family, n: usize) -> FiniteType {
    FiniteType::new(f, n)
}

/// Weyl dimension formula, with the positive roots generated independently
/// as the positive part of the Weyl orbit of the simple roots.
fn weyl_dimension(cartan: &[Vec<i64>], lambda: &[i64]) -> i64 {
    let n = cartan.len();
    // symmetriser: d_i A_ij = d_j A_ji, by relaxation
    let mut d = vec![Q::from_integer(0); n];
    d[0] = Q::from_integer(1);
    for _ in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i != j && cartan[i][j] != 0 && d[i] != Q::from_integer(0) && d[j] == Q::from_integer(0) {
                    d[j] = d[i] * Q::new(cartan[i][j], cartan[j][i]);
                }
            }
        }
    }
    for x in d.iter_mut() {
        if *x == Q::from_integer(0) {
            *x = Q::from_integer(1);
        }
    }
    // reflections on root coordinates: s_i(β) = β − ⟨β, α_i^∨⟩ α_i
    let mut roots: HashSet<Vec<i64>> = HashSet::new();
    let mut stack: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    while let Some(b) = stack.pop() {
        if !roots.insert(b.clone()) {
            continue;
        }
        for i in 0..n {
            let p: i64 = (0..n).map(|j| cartan[i][j] * b[j]).sum();
            let mut r = b.clone();
            r[i] -= p;
            if !roots.contains(&r) {
                stack.push(r);
            }
        }
    }
    let mut num = Q::from_integer(1);
    for b in roots.iter().filter(|b| b.iter().all(|&x| x >= 0)) {
        // (λ|β) = Σ_i λ_i b_i d_i
        let lr: Q = (0..n).map(|i| Q::from_integer((lambda[i] + 1) * b[i]) * d[i]).sum();
        let r: Q = (0..n).map(|i| Q::from_integer(b[i]) * d[i]).sum();
        num *= lr / r;
    }
    assert!(num.is_integer());
    num.to_integer()
}

fn combo(pairs: &[(&[i64], i64)]) -> CharacterCombo {
    let mut c = CharacterCombo::zero();
    for (w, k) in pairs {
        c.add_term(w.to_vec(), *k);
    }
    c
}

fn graded(pairs: &[(&[i64], &[(i64, i64)])]) -> GradedCombo {
    let mut c = GradedCombo::zero();
    for (w, terms) in pairs {
        c.add_term(w.to_vec(), &LaurentSeries::from_int_terms(terms));
    }
    c
}

#[test]
fn weight_multiplicity_examples() {
    let a1 = ClassicalAlgebra::from_finite_type(ft(Family::A, 1)).unwrap();
    assert_eq!(a1.weight_mult(&[2], &[0]).unwrap(), 1);
    assert_eq!(a1.dim(&[2]).unwrap(), 3);
    // G2 with node 1 short, as the classical part of D^(3)_4.
    let g2 = gcirc("D4~3");
    assert_eq!(g2.dim(&[1, 0]).unwrap(), 7);
    assert_eq!(g2.dim(&[0, 1]).unwrap(), 14);
    let c2 = gcirc("C2~1");
    assert_eq!(c2.dim(&[1, 0]).unwrap(), 4);
    assert_eq!(g2.positive_roots().len(), 6);
}

#[test]
fn dimensions_match_weyl_formula() {
    let algebras = [
        gcirc("D4~3"),
        gcirc("G2~1"),
        gcirc("C3~1"),
        gcirc("B3~1"),
        gcirc("D4~1"),
        gcirc("A3~1"),
        gcirc("E6~2"),
        ClassicalAlgebra::from_finite_type(ft(Family::D, 3)).unwrap(),
        ClassicalAlgebra::from_finite_type(ft(Family::B, 4)).unwrap(),
    ];
    for alg in &algebras {
        let n = alg.rank();
        let mut tested = 0;
        for code in 0..3i64.pow(n as u32) {
            let lambda: Vec<i64> = (0..n).map(|i| (code / 3i64.pow(i as u32)) % 3).collect();
            if lambda.iter().sum::<i64>() > 3 {
                continue;
            }
            assert_eq!(alg.dim(&lambda).unwrap(), weyl_dimension(&alg.cartan, &lambda), "{} {:?}", alg.name, lambda);
            tested += 1;
        }
        assert!(tested > 0);
    }
}

#[test]
fn multiplicities_are_weyl_invariant() {
    for alg in [gcirc("D4~3"), gcirc("C3~1"), gcirc("B3~1")] {
        let n = alg.rank();
        let mut lambda = vec![0; n];
        lambda[0] = 2;
        lambda[n - 1] = 1;
        for (mu, &m) in alg.weights(&lambda).unwrap().iter() {
            for i in 0..n {
                assert_eq!(alg.weight_mult(&lambda, &alg.reflect(i, mu)).unwrap(), m);
            }
        }
        assert_eq!(alg.weight_mult(&lambda, &lambda).unwrap(), 1);
    }
}

#[test]
fn tensor_product_examples() {
    let a1 = ClassicalAlgebra::from_finite_type(ft(Family::A, 1)).unwrap();
    assert_eq!(a1.tensor_decompose(&[1], &[1]).unwrap(), combo(&[(&[2], 1), (&[0], 1)]));
    let g2 = gcirc("D4~3");
    let prod = g2.tensor_decompose(&[1, 0], &[1, 0]).unwrap();
    assert_eq!(prod, combo(&[(&[2, 0], 1), (&[0, 1], 1), (&[1, 0], 1), (&[0, 0], 1)]));
    let dims: Vec<i64> = prod.terms.keys().map(|w| weyl_dimension(&g2.cartan, w)).collect();
    assert_eq!(dims.iter().sum::<i64>(), 49);
    assert!(dims.contains(&27));
    for alg in [g2, gcirc("C2~1"), gcirc("D4~1")] {
        let n = alg.rank();
        let mut lambda = vec![0; n];
        lambda[n - 1] = 2;
        assert_eq!(alg.tensor_decompose(&lambda, &vec![0; n]).unwrap(), CharacterCombo::irreducible(&lambda));
    }
}

/// The weight multiset of a product equals the convolution of the factors.
#[test]
fn tensor_product_matches_weight_convolution() {
    for (alg, l, m) in [
        (gcirc("D4~3"), vec![1, 1], vec![0, 1]),
        (gcirc("C3~1"), vec![1, 0, 1], vec![0, 1, 0]),
        (gcirc("B3~1"), vec![0, 0, 1], vec![1, 0, 1]),
        (gcirc("D4~1"), vec![0, 0, 1, 1], vec![1, 0, 0, 0]),
    ] {
        let mut conv: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (x, &a) in alg.weights(&l).unwrap().iter() {
            for (y, &b) in alg.weights(&m).unwrap().iter() {
                let z: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                *conv.entry(z).or_insert(0) += a * b;
            }
        }
        let dec = alg.tensor_decompose(&l, &m).unwrap();
        assert!(dec.terms.values().all(|&c| c > 0));
        assert_eq!(dec.weight_multiset(&alg).unwrap(), conv, "{}", alg.name);
        assert_eq!(dec.dim(&alg).unwrap(), alg.dim(&l).unwrap() * alg.dim(&m).unwrap());
    }
}

#[test]
fn qsystem_chi_examples() {
    let d43 = label("D4~3");
    let g2 = ft(Family::G, 2);
    assert_eq!(qsystem_chi(&d43, g2, 2, 1).unwrap(), combo(&[(&[0, 0], 1), (&[1, 0], 2), (&[0, 1], 1)]));
    assert_eq!(qsystem_chi(&d43, g2, 1, 1).unwrap(), combo(&[(&[0, 0], 1), (&[1, 0], 1)]));
    for (g, f) in [("A4~2", ft(Family::B, 2)), ("A5~2", ft(Family::D, 3)), ("B3~1", ft(Family::D, 3)), ("D4~3", g2)] {
        let g = label(g);
        for a in 1..=g.n {
            assert_eq!(qsystem_chi(&g, f, a, 0).unwrap(), CharacterCombo::one(g.n));
        }
    }
    // The two extreme spin terms of the B^(1)_n / D_n solution at a = n.
    let b3 = label("B3~1");
    let chi = qsystem_chi(&b3, ft(Family::D, 3), 3, 2).unwrap();
    assert_eq!(chi.coeff(&[0, 2, 0]), 1);
    assert_eq!(chi.coeff(&[0, 0, 2]), 1);
    assert!(qsystem_chi(&label("E6~2"), ft(Family::F, 4), 1, 1).is_err());
    assert!(qsystem_chi(&label("A4~2"), ft(Family::D, 2), 1, 1).is_err());
}

fn shipped_pairs() -> Vec<(AlgebraLabel, FiniteType)> {
    use Family::*;
    let mut out = Vec::new();
    for n in 1..=4 {
        let a_even = label(&format!("A{}~2", 2 * n));
        out.push((a_even, ft(C, n)));
        out.push((a_even, ft(B, n)));
        if n >= 2 {
            let a_odd = label(&format!("A{}~2", 2 * n - 1));
            out.push((a_odd, ft(C, n)));
            out.push((a_odd, ft(D, n)));
            out.push((label(&format!("D{}~2", n + 1)), ft(B, n)));
            out.push((label(&format!("A{}~1", n)), ft(A, n)));
            out.push((label(&format!("C{}~1", n)), ft(C, n)));
        }
        if n >= 3 {
            out.push((label(&format!("B{}~1", n)), ft(D, n)));
            out.push((label(&format!("B{}~1", n)), ft(B, n)));
        }
    }
    out.push((label("A1~1"), ft(Family::A, 1)));
    out.push((label("D4~1"), ft(Family::D, 4)));
    out.push((label("D4~3"), ft(Family::G, 2)));
    out
}

#[test]
fn qsystem_holds_for_every_shipped_pair() {
    let mut checked = 0;
    for (g, f) in shipped_pairs() {
        let jmax = if g.n >= 4 { 3 } else { 4 };
        for a in 1..=g.n {
            for j in 1..=jmax {
                let r = verify_qsystem(&g, f, a, j).unwrap();
                assert!(r.holds, "({}, {}) a={} j={}: {} vs {}", g, f, a, j, r.lhs, r.rhs);
                checked += 1;
            }
        }
    }
    assert!(checked > 250);
}

#[test]
fn qsystem_examples() {
    assert!(verify_qsystem(&label("D4~3"), ft(Family::G, 2), 1, 1).unwrap().holds);
    let r = verify_qsystem(&label("A2~2"), ft(Family::C, 1), 1, 1).unwrap();
    assert!(r.holds);
    // Q^(1)_1² = Q^(1)_2 Q^(1)_0 + Q^(1)_1
    assert_eq!(r.product, vec![(1, 1, 1)]);
    // D^(3)_4: the product term at a = 2 is (Q^(1)_j)³
    assert_eq!(verify_qsystem(&label("D4~3"), ft(Family::G, 2), 2, 2).unwrap().product, vec![(1, 2, 3)]);
    assert!(verify_qsystem(&label("D4~3"), ft(Family::G, 2), 1, 0).is_err());
}

#[test]
fn leading_term_and_dominance_surrogate() {
    for g in ["A2~2", "A4~2", "A6~2", "A3~2", "A5~2", "D3~2", "D4~2", "D4~3", "A2~1", "B3~1", "C3~1", "D4~1"] {
        let g = label(g);
        for a in 1..=g.n {
            for j in 0..=4 {
                assert!(check_leading_term(&g, a, j).unwrap(), "{} a={} j={}", g, a, j);
                assert!(check_dominance_surrogate(&g, a, j).unwrap(), "{} a={} j={}", g, a, j);
            }
        }
    }
}

#[test]
fn characters_multiply_with_dimensions() {
    let g = label("A4~2");
    let alg = character_algebra(&g, ft(Family::B, 2)).unwrap();
    let x = qsystem_chi(&g, ft(Family::B, 2), 2, 2).unwrap();
    let y = qsystem_chi(&g, ft(Family::B, 2), 1, 3).unwrap();
    assert_eq!(x.mul(&y, &alg).unwrap().dim(&alg).unwrap(), x.dim(&alg).unwrap() * y.dim(&alg).unwrap());
}

#[test]
fn completeness_examples() {
    let d43 = load_algebra(&label("D4~3")).unwrap();
    let r = verify_completeness(&d43, &QuantumSpace::parse("2:1").unwrap()).unwrap();
    assert!(r.equal);
    assert_eq!(r.fermionic, combo(&[(&[0, 0], 1), (&[1, 0], 2), (&[0, 1], 1)]));
    let a22 = load_algebra(&label("A2~2")).unwrap();
    assert!(verify_completeness(&a22, &QuantumSpace::parse("1:1:2").unwrap()).unwrap().equal);
    let empty = verify_completeness(&a22, &QuantumSpace::new()).unwrap();
    assert!(empty.equal);
    assert_eq!(empty.product, CharacterCombo::one(1));
    assert!(verify_completeness(&load_algebra(&label("E6~2")).unwrap(), &QuantumSpace::parse("1:1").unwrap()).is_err());
}

#[test]
fn completeness_over_small_quantum_spaces() {
    let cases = [
        ("A2~2", "1:2:1,1:1:1"),
        ("A4~2", "1:1,2:1"),
        ("A4~2", "2:2"),
        ("A3~2", "2:2"),
        ("A3~2", "1:1:2,2:1"),
        ("A5~2", "1:1,3:1"),
        ("D3~2", "1:1:2,2:1"),
        ("D4~2", "3:2"),
        ("D4~3", "1:1:2,2:1"),
        ("D4~3", "2:2"),
        ("A2~1", "1:1:3"),
        ("B3~1", "3:1:2"),
        ("B3~1", "1:1,3:2"),
        ("C2~1", "1:1,2:2"),
        ("D4~1", "2:1,4:1"),
    ];
    for (g, w) in cases {
        let d = load_algebra(&label(g)).unwrap();
        let r = verify_completeness(&d, &QuantumSpace::parse(w).unwrap()).unwrap();
        assert!(r.equal, "{} {}: {} vs {}", g, w, r.product, r.fermionic);
    }
}

#[test]
fn graded_decomposition_closed_forms() {
    for g in ["A3~2", "A5~2", "A7~2", "A2~2", "A4~2", "A6~2", "D3~2", "D4~2", "D5~2"] {
        let d = load_algebra(&label(g)).unwrap();
        let smax = if d.n() >= 4 { 2 } else { 3 };
        for a in 1..=d.n() {
            for s in 1..=smax {
                let got = graded_decomposition_w(&d, a, s).unwrap();
                assert_eq!(got, graded_closed_form(&d, a, s).unwrap(), "{} W^({})_{}", g, a, s);
                // q = 1 reduces to the Q-system solution
                assert_eq!(got.eval_at_one().unwrap(), qsystem_chi(&d.label, d.gcirc_type, a, s).unwrap());
            }
        }
    }
    let d32 = load_algebra(&label("D3~2")).unwrap();
    assert_eq!(graded_decomposition_w(&d32, 2, 3).unwrap(), graded(&[(&[0, 3], &[(0, 1)])]));
}

#[test]
fn graded_decomposition_printed_tables() {
    let e6 = load_algebra(&label("E6~2")).unwrap();
    let expect = [
        (1, graded(&[(&[0, 0, 0, 0], &[(1, 1)]), (&[1, 0, 0, 0], &[(0, 1)])])),
        (
            2,
            graded(&[
                (&[0, 0, 0, 0], &[(3, 1)]),
                (&[1, 0, 0, 0], &[(1, 1), (2, 1)]),
                (&[0, 0, 0, 1], &[(1, 1)]),
                (&[0, 1, 0, 0], &[(0, 1)]),
            ]),
        ),
        (
            3,
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
        (4, graded(&[(&[0, 0, 0, 0], &[(2, 1)]), (&[1, 0, 0, 0], &[(1, 1)]), (&[0, 0, 0, 1], &[(0, 1)])])),
    ];
    for (a, e) in expect {
        assert_eq!(graded_decomposition_w(&e6, a, 1).unwrap(), e, "E6~2 W^({})_1", a);
    }
    let d43 = load_algebra(&label("D4~3")).unwrap();
    assert_eq!(
        graded_decomposition_w(&d43, 1, 1).unwrap(),
        graded(&[(&[0, 0], &[(1, 1)]), (&[1, 0], &[(0, 1)])])
    );
    assert_eq!(
        graded_decomposition_w(&d43, 2, 1).unwrap(),
        graded(&[(&[0, 0], &[(3, 1)]), (&[1, 0], &[(1, 1), (2, 1)]), (&[0, 1], &[(0, 1)])])
    );
}

#[test]
fn graded_decomposition_e6_w32() {
    let e6 = load_algebra(&label("E6~2")).unwrap();
    let table: &[(&[i64], &[(i64, i64)])] = &[
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
    ];
    assert_eq!(graded_decomposition_w(&e6, 3, 2).unwrap(), graded(table));
}

#[test]
fn conjectured_forms_small_s() {
    let d43 = load_algebra(&label("D4~3")).unwrap();
    for a in 1..=2 {
        for s in 1..=5 {
            assert_eq!(
                graded_decomposition_w(&d43, a, s).unwrap(),
                conjectured_graded_decomposition(&d43.label, a, s).unwrap(),
                "D4~3 W^({})_{}",
                a,
                s
            );
        }
    }
    let e6 = load_algebra(&label("E6~2")).unwrap();
    for (a, smax) in [(1, 3), (4, 3), (2, 2)] {
        for s in 1..=smax {
            assert_eq!(
                graded_decomposition_w(&e6, a, s).unwrap(),
                conjectured_graded_decomposition(&e6.label, a, s).unwrap(),
                "E6~2 W^({})_{}",
                a,
                s
            );
        }
    }
}

/// About a minute with optimisations; run with `--ignored`.
#[test]
#[ignore]
fn conjectured_form_e6_w2_s3() {
    let e6 = load_algebra(&label("E6~2")).unwrap();
    assert_eq!(
        graded_decomposition_w(&e6, 2, 3).unwrap(),
        conjectured_graded_decomposition(&e6.label, 2, 3).unwrap()
    );
}

#[test]
fn json_shape() {
    let c = combo(&[(&[1, 0], 2)]);
    assert_eq!(c.to_json(), serde_json::json!([{"weight": [1, 0], "coeff": [[0, 2]]}]));
    let d43 = load_algebra(&label("D4~3")).unwrap();
    let v = graded_decomposition_w(&d43, 1, 1).unwrap().to_json();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert!(arr.iter().all(|t| t["weight"].is_array() && t["coeff"].is_array()));
}
