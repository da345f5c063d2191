//! Recursion relation, Weyl skew-symmetry of `M̃_∞` and diagram symmetry.

#![allow(clippy::type_complexity)]
use affine_fermionic::affine_cartan::{load_algebra, AlgebraDatum, AlgebraLabel};
use affine_fermionic::fermionic::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn datum(s: &str) -> AlgebraDatum {
    load_algebra(&AlgebraLabel::parse(s).unwrap()).unwrap()
}

fn qs(s: &str) -> QuantumSpace {
    QuantumSpace::parse(s).unwrap()
}

#[test]
fn recursion_fixed_instances() {
    let cases: Vec<(&str, usize, i64, &str, Vec<i64>, Level)> = vec![
        ("A1~1", 1, 1, "1:2:1", vec![0], Level::Infinite),
        ("A2~2", 1, 1, "", vec![1], Level::Infinite),
        ("A2~2", 1, 1, "", vec![1], Level::Finite(2)),
        ("C2~1", 2, 1, "1:1:1", vec![0, 0], Level::Finite(2)),
        ("C2~1", 1, 1, "2:1:1", vec![0, 1], Level::Infinite),
        ("A3~2", 2, 1, "1:1:2", vec![0, 0], Level::Finite(2)),
        ("D4~3", 1, 1, "2:1:1", vec![0, 1], Level::Finite(2)),
        ("D4~3", 2, 1, "1:1:1", vec![1, 0], Level::Infinite),
    ];
    for (alg, a, j, w, lam, level) in cases {
        let d = datum(alg);
        let r = check_recursion(&d, a, j, &qs(w), &lam, level).unwrap();
        assert!(r.equal, "{} ({},{}) W={} λ={:?} l={}: {} vs {}", alg, a, j, w, lam, level, r.lhs, r.rhs);
        assert!(r.tilde_equal, "M̃ recursion failed for {} W={}", alg, w);
    }
}

#[test]
fn recursion_theta_half_integral_on_short_node() {
    // A^(2)_2: ε_1 = 2 so θ carries a half; q_1 = q² keeps exponents integral.
    let d = datum("A2~2");
    let (_, _, _, theta) = recursion_spaces(&d, 1, 1, &QuantumSpace::new(), Level::Infinite).unwrap();
    assert_eq!(theta, affine_fermionic::Q::new(3, 2));
}

/// Random `W` with `|W| ≤ 4` supported on `H_l` (strings up to 3 at `l = ∞`).
fn random_space(rng: &mut ChaCha8Rng, d: &AlgebraDatum, level: Level) -> QuantumSpace {
    let mut w = QuantumSpace::new();
    let size = rng.gen_range(0..=4);
    for _ in 0..size {
        let a = rng.gen_range(1..=d.n());
        let top = level.scaled(d.t(a)).unwrap_or(3);
        w.add(a, rng.gen_range(1..=top), 1);
    }
    w
}

#[test]
fn recursion_randomized() {
    let algebras = ["A1~1", "A2~2", "C2~1", "A3~2", "D3~2", "D4~3"];
    let levels = [Level::Finite(2), Level::Finite(3), Level::Infinite];
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut nontrivial = 0;
    let mut done = 0;
    while done < 50 {
        let d = datum(algebras[rng.gen_range(0..algebras.len())]);
        let level = levels[rng.gen_range(0..levels.len())];
        let w = random_space(&mut rng, &d, level);
        let a = rng.gen_range(1..=d.n());
        let jmax = level.scaled(d.t(a)).map_or(2, |t| (t - 1).min(2));
        if jmax < 1 {
            continue;
        }
        let j = rng.gen_range(1..=jmax);
        // Aim λ at the weight of W_1 minus a small root combination.
        let mut w1 = w.clone();
        w1.add(a, j, 2);
        let wt = w1.weight(d.n());
        let lam: Vec<i64> = wt.iter().map(|&x| (x - rng.gen_range(0..=2)).max(0)).collect();
        let r = check_recursion(&d, a, j, &w, &lam, level).unwrap();
        assert!(r.equal && r.tilde_equal, "{} ({},{}) W={} λ={:?} l={}: {} vs {}", d.label, a, j, w, lam, level, r.lhs, r.rhs);
        if r.lhs != "0" {
            nontrivial += 1;
        }
        done += 1;
    }
    assert!(nontrivial >= 15, "only {} non-trivial instances", nontrivial);
}

#[test]
fn weyl_skew_examples() {
    let a11 = datum("A1~1");
    assert!(check_weyl_skew(&a11, &qs("1:1:2"), &[0], &[1]).unwrap());
    assert!(check_weyl_skew(&a11, &qs("1:1:2"), &[0], &[]).unwrap());
    let c2 = datum("C2~1");
    assert!(check_weyl_skew(&c2, &qs("1:1:2"), &[0, 0], &[1, 2]).unwrap());
    assert!(check_weyl_skew(&c2, &qs("1:1:2,2:1:1"), &[1, 0], &[2, 1, 2]).unwrap());
    let g2 = datum("G2~1");
    assert!(check_weyl_skew(&g2, &qs("1:1:2"), &[0, 0], &[1, 2, 1]).unwrap());
    let a22 = datum("A2~2");
    assert!(check_weyl_skew(&a22, &qs("1:1:2,1:2:1"), &[2], &[1]).unwrap());
}

#[test]
fn diagram_symmetry_examples() {
    let a2 = datum("A2~1");
    assert!(check_diagram_symmetry(&a2, &qs("1:1:1"), &[1, 0], Level::Finite(2)).unwrap());
    assert!(check_diagram_symmetry(&a2, &qs("1:1:2,2:2:1"), &[0, 1], Level::Infinite).unwrap());
    let d4 = datum("D4~1");
    assert!(check_diagram_symmetry(&d4, &qs("3:1:1"), &[0, 0, 1, 0], Level::Infinite).unwrap());
    assert!(check_symmetry_under(&d4, &[1, 2, 3, 4], &qs("3:1:1"), &[0, 0, 1, 0], Level::Finite(2)).unwrap());
    // Non-simply-laced algebras carry no automorphism here.
    assert!(check_diagram_symmetry(&datum("C2~1"), &qs("1:1:1"), &[1, 0], Level::Infinite).is_err());
}
