//! Paths in tensor products of shipped crystals: the coenergy `D`,
//! one-dimensional sums `X_l` and their comparison with the fermionic side.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::rmatrix::AlgebraCrystals;
use super::{eps_phi, CrystalGraph};
use crate::affine_cartan::Family;
use crate::fermionic::{fermionic_m, Level, QuantumSpace};
use crate::qseries::LaurentSeries;
use crate::{Error, Q, Result};

/// `b^{(i)}_j` for `i ≤ j` (1-based): `b_j` carried leftwards through
/// `b_{j−1}, …, b_i` by successive R-matrices.
fn carried(ac: &AlgebraCrystals, kinds: &[usize], p: &[usize], i: usize, j: usize) -> Result<usize> {
    let mut x = p[j - 1];
    for m in (i..j).rev() {
        x = ac.table(kinds[m - 1], kinds[j - 1])?.apply(p[m - 1], x).0;
    }
    Ok(x)
}

/// Coenergy
/// `D(p) = Σ_{i<j} H(b_i ⊗ b^{(i+1)}_j) + Σ_j H(b^♮_j ⊗ b^{(1)}_j)`
/// of a path `p = b_1 ⊗ … ⊗ b_d` in `B^{1,s_1} ⊗ … ⊗ B^{1,s_d}` (`kinds = [s_1, …]`).
pub fn coenergy_d(ac: &AlgebraCrystals, kinds: &[usize], p: &[usize]) -> Result<i64> {
    if kinds.len() != p.len() {
        return Err(Error::InvalidArgument("path length differs from the number of factors".into()));
    }
    let d = kinds.len();
    let mut total = 0;
    for j in 1..=d {
        for i in 1..j {
            let x = carried(ac, kinds, p, i + 1, j)?;
            total += ac.table(kinds[i - 1], kinds[j - 1])?.h(p[i - 1], x);
        }
        let natural = ac.crystal(kinds[j - 1])?.natural()?;
        let x = carried(ac, kinds, p, 1, j)?;
        total += ac.table(kinds[j - 1], kinds[j - 1])?.h(natural, x);
    }
    Ok(total)
}

fn factors<'a>(ac: &'a AlgebraCrystals, kinds: &[usize]) -> Result<Vec<&'a CrystalGraph>> {
    kinds.iter().map(|&s| ac.crystal(s).map(|c| &**c)).collect()
}

/// Calls `visit` on every path whose classical weight equals `lambda` and
/// which is highest weight for the level: `ε_i(p) = 0` for `i ≥ 1` and
/// `ε_0(p) ≤ l` (no condition at `l = ∞`).
fn for_each_restricted_path(
    ac: &AlgebraCrystals,
    kinds: &[usize],
    lambda: &[i64],
    level: Level,
    mut visit: impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let cs = factors(ac, kinds)?;
    let n = ac.datum.n();
    if lambda.len() != n {
        return Err(Error::InvalidArgument(format!("weight needs {} coordinates", n)));
    }
    if cs.is_empty() {
        return Err(Error::InvalidArgument("empty tensor product".into()));
    }
    let mut p = vec![0usize; cs.len()];
    loop {
        let mut w = vec![0i64; n];
        for (c, &b) in cs.iter().zip(&p) {
            for (wi, ci) in w.iter_mut().zip(c.classical_wt(b)) {
                *wi += ci;
            }
        }
        if w == lambda {
            let hw = (1..=n).all(|i| eps_phi(&cs, &p, i).0 == 0)
                && match level {
                    Level::Infinite => true,
                    Level::Finite(l) => eps_phi(&cs, &p, 0).0 <= l,
                };
            if hw {
                visit(&p)?;
            }
        }
        // Odometer increment.
        let mut k = cs.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            p[k] += 1;
            if p[k] < cs[k].len() {
                break;
            }
            p[k] = 0;
        }
    }
}

/// One-dimensional sum `X_l(B, λ, q) = Σ* q^{D(p)}` over highest weight paths
/// of classical weight `λ`.
pub fn onedsum_x(ac: &AlgebraCrystals, kinds: &[usize], lambda: &[i64], level: Level) -> Result<LaurentSeries> {
    if let Level::Finite(l) = level {
        let max = kinds.iter().map(|&s| ac.crystal(s).map(|c| c.level())).collect::<Result<Vec<_>>>()?;
        if max.iter().any(|&m| m > l) {
            return Err(Error::InvalidArgument(format!("level {} is below a factor level", l)));
        }
    }
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for_each_restricted_path(ac, kinds, lambda, level, |p| {
        *counts.entry(coenergy_d(ac, kinds, p)?).or_insert(0) += 1;
        Ok(())
    })?;
    let pairs: Vec<(i64, i64)> = counts.into_iter().collect();
    Ok(LaurentSeries::from_int_terms(&pairs))
}

/// `D^ext = D(b^ext_1 ⊗ … ⊗ b^ext_d)`.
pub fn d_ext(ac: &AlgebraCrystals, kinds: &[usize]) -> Result<i64> {
    let p: Vec<usize> = kinds.iter().map(|&s| ac.crystal(s)?.ext()).collect::<Result<_>>()?;
    coenergy_d(ac, kinds, &p)
}

/// Quantum space `W^{(1)}_{s_1} ⊗ … ⊗ W^{(1)}_{s_d}` matching the path factors.
pub fn quantum_space(kinds: &[usize]) -> QuantumSpace {
    let mut w = QuantumSpace::new();
    for &s in kinds {
        w.add(1, s as i64, 1);
    }
    w
}

/// Comparison of `q^{−D^ext} X_l(B, λ, q)` with `M_l(W, λ, q)`.
#[derive(Debug, Clone)]
pub struct XmReport {
    pub kinds: Vec<usize>,
    pub lambda: Vec<i64>,
    pub level: Level,
    pub d_ext: i64,
    /// `q^{−D^ext} X`.
    pub x: LaurentSeries,
    pub m: LaurentSeries,
    pub equal: bool,
    /// The identity is proved only for `A^(1)_n`; elsewhere a pass is conjectural.
    pub conjectural: bool,
}

impl XmReport {
    /// Structured JSON diff.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kinds": self.kinds,
            "lambda": self.lambda,
            "level": self.level.to_json(),
            "d_ext": self.d_ext,
            "x_shifted": self.x.to_json(),
            "m": self.m.to_json(),
            "difference": self.x.sub(&self.m).to_json(),
            "equal": self.equal,
            "conjectural": self.conjectural,
        })
    }
}

/// Compares `q^{−D^ext} X_l` with the fermionic `M_l` of the same data.
pub fn check_x_equals_m(ac: &AlgebraCrystals, kinds: &[usize], lambda: &[i64], level: Level) -> Result<XmReport> {
    let dext = d_ext(ac, kinds)?;
    let x = onedsum_x(ac, kinds, lambda, level)?.shift(Q::from_integer(-dext));
    let m = fermionic_m(&ac.datum, &quantum_space(kinds), lambda, level)?;
    let equal = x == m;
    let conjectural = !(ac.label.family == Family::A && ac.label.r == 1);
    Ok(XmReport { kinds: kinds.to_vec(), lambda: lambda.to_vec(), level, d_ext: dext, x, m, equal, conjectural })
}

/// Candidates `c` for which `H_{BB}(c ⊗ b) − D(b)` is independent of `b`.
#[derive(Debug, Clone)]
pub struct HdScanReport {
    pub kinds: Vec<usize>,
    pub candidates: usize,
    /// Witnesses `c` (as labels joined by `⊗`) with the constant difference.
    pub witnesses: Vec<(String, i64)>,
}

/// `H_{BB}` for `B` a single shipped crystal or a two-fold tensor product,
/// the latter through
/// `H_{BB}((b_1⊗b_2)⊗(b'_1⊗b'_2)) = H_{12}(b_1⊗b_2) + H_{11}(b̃_1⊗b'_1)
///   + H_{22}(b_2⊗b̃'_2) + H_{12}(b'_1⊗b'_2)`.
fn h_bb(ac: &AlgebraCrystals, kinds: &[usize], c: &[usize], b: &[usize]) -> Result<i64> {
    match kinds {
        [s] => Ok(ac.table(*s, *s)?.h(c[0], b[0])),
        [s1, s2] => {
            let t12 = ac.table(*s1, *s2)?;
            let (_, c1t) = t12.apply(c[0], c[1]);
            let (b2t, _) = t12.apply(b[0], b[1]);
            Ok(t12.h(c[0], c[1]) + ac.table(*s1, *s1)?.h(c1t, b[0]) + ac.table(*s2, *s2)?.h(c[1], b2t) + t12.h(b[0], b[1]))
        }
        _ => Err(Error::Unsupported("H_BB is implemented for one or two factors".into())),
    }
}

/// Scans every `c ∈ B` and reports those for which `H_{BB}(c ⊗ b) − D(b)`
/// takes one value over all `b ∈ B`.
pub fn hd_constancy_scan(ac: &AlgebraCrystals, kinds: &[usize]) -> Result<HdScanReport> {
    let cs = factors(ac, kinds)?;
    let all = all_paths(&cs);
    let d: Vec<i64> = all.iter().map(|p| coenergy_d(ac, kinds, p)).collect::<Result<_>>()?;
    let mut witnesses = Vec::new();
    for c in &all {
        let mut diff = None;
        let mut constant = true;
        for (b, db) in all.iter().zip(&d) {
            let v = h_bb(ac, kinds, c, b)? - db;
            if *diff.get_or_insert(v) != v {
                constant = false;
                break;
            }
        }
        if constant {
            let label: Vec<&str> = cs.iter().zip(c).map(|(g, &x)| g.label(x)).collect();
            witnesses.push((label.join("⊗"), diff.unwrap_or(0)));
        }
    }
    Ok(HdScanReport { kinds: kinds.to_vec(), candidates: all.len(), witnesses })
}

fn all_paths(cs: &[&CrystalGraph]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for c in cs {
        out = out.into_iter().flat_map(|p| (0..c.len()).map(move |b| [p.clone(), vec![b]].concat())).collect();
    }
    out
}

/// `X_l(B, λ, 1)`: number of highest weight paths of weight `λ`.
pub fn count_paths(ac: &AlgebraCrystals, kinds: &[usize], lambda: &[i64], level: Level) -> Result<BigInt> {
    let mut k = 0i64;
    for_each_restricted_path(ac, kinds, lambda, level, |_| {
        k += 1;
        Ok(())
    })?;
    Ok(BigInt::from(k))
}

/// Dominant classical weights in the support of `B` (weights of classical
/// highest weight paths).
pub fn dominant_support(ac: &AlgebraCrystals, kinds: &[usize]) -> Result<Vec<Vec<i64>>> {
    let cs = factors(ac, kinds)?;
    let n = ac.datum.n();
    let mut out = std::collections::BTreeSet::new();
    for p in all_paths(&cs) {
        if (1..=n).all(|i| eps_phi(&cs, &p, i).0 == 0) {
            let mut w = vec![0i64; n];
            for (c, &b) in cs.iter().zip(&p) {
                for (wi, ci) in w.iter_mut().zip(c.classical_wt(b)) {
                    *wi += ci;
                }
            }
            out.insert(w);
        }
    }
    Ok(out.into_iter().collect())
}
