//! Fermionic forms `M_l`, `M̃_l`, `M^S_l` and the string-function series
//! `N_l`, together with the symmetry, recursion and limit checks stated for
//! them.
//!
//! A configuration `{m^(a)_i}` is stored per node as a vector indexed by
//! `i − 1`. Vacancy numbers `p^(a)_i` and the cocharge `c({m})` are computed
//! exactly; q-binomials are taken in the base `q_a = q^{t∨_a}`.
//!
//! Two evaluation directions are supported: the defining sum in `q`, and the
//! `q → q⁻¹` image, which uses `[p+m over m]_{q⁻¹} = q^{−pm}[p+m over m]_q`
//! termwise so that large quantum spaces can be truncated from below.

mod checks;
mod lattice;
mod limits;
mod rewritten;
mod string;

pub use checks::*;
pub use lattice::{partitions, points_below};
pub use limits::*;
pub use rewritten::*;
pub use string::*;

use crate::affine_cartan::AlgebraDatum;
use crate::qseries::{qbinomial_dense, DensePoly, LaurentSeries};
use crate::{Error, Result, Q};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Level `l` of a fermionic form: a positive integer or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Finite(i64),
    Infinite,
}

impl Level {
    /// Parse `"3"` or `"inf"`.
    pub fn parse(s: &str) -> Result<Level> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" || s.eq_ignore_ascii_case("infinity") {
            return Ok(Level::Infinite);
        }
        let l: i64 = s.parse().map_err(|_| Error::Parse(format!("bad level '{}'", s)))?;
        if l < 1 {
            return Err(Error::InvalidArgument(format!("level {} < 1", l)));
        }
        Ok(Level::Finite(l))
    }

    /// `t·l`, or `None` for `l = ∞`.
    pub fn scaled(&self, t: i64) -> Option<i64> {
        match self {
            Level::Finite(l) => Some(t * l),
            Level::Infinite => None,
        }
    }

    /// JSON value: the integer or the string `"inf"`.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Level::Finite(l) => serde_json::Value::from(*l),
            Level::Infinite => serde_json::Value::from("inf"),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(l) => write!(f, "{}", l),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

/// Quantum space data `ν^(a)_j` of `W = ⊗ (W^(a)_j)^{⊗ν^(a)_j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumSpace {
    nu: BTreeMap<(usize, i64), i64>,
}

impl QuantumSpace {
    /// The trivial quantum space.
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from `(a, j, multiplicity)` triples (repeats accumulate).
    pub fn from_triples(triples: &[(usize, i64, i64)]) -> Self {
        let mut w = Self::new();
        for &(a, j, k) in triples {
            w.add(a, j, k);
        }
        w
    }

    /// Parse `"a:j:mult,a:j:mult,..."` (`mult` defaults to 1; empty string is
    /// the trivial space).
    pub fn parse(s: &str) -> Result<Self> {
        let mut w = Self::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = item.split(':').collect();
            let bad = || Error::Parse(format!("bad quantum space entry '{}'", item));
            if parts.len() < 2 || parts.len() > 3 {
                return Err(bad());
            }
            let a: usize = parts[0].trim().parse().map_err(|_| bad())?;
            let j: i64 = parts[1].trim().parse().map_err(|_| bad())?;
            let k: i64 = if parts.len() == 3 { parts[2].trim().parse().map_err(|_| bad())? } else { 1 };
            if a == 0 || j < 1 || k < 0 {
                return Err(bad());
            }
            w.add(a, j, k);
        }
        Ok(w)
    }

    /// Add `mult` copies of `W^(a)_j` (negative `mult` removes copies; the
    /// entry saturates at zero).
    pub fn add(&mut self, a: usize, j: i64, mult: i64) {
        if j < 1 {
            return;
        }
        let e = self.nu.entry((a, j)).or_insert(0);
        *e = (*e + mult).max(0);
        if *e == 0 {
            self.nu.remove(&(a, j));
        }
    }

    /// `ν^(a)_j`.
    pub fn nu(&self, a: usize, j: i64) -> i64 {
        self.nu.get(&(a, j)).copied().unwrap_or(0)
    }

    /// Non-zero entries as `(a, j, ν^(a)_j)`, sorted.
    pub fn triples(&self) -> Vec<(usize, i64, i64)> {
        self.nu.iter().map(|(&(a, j), &k)| (a, j, k)).collect()
    }

    /// True for the trivial space.
    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    /// Total number of tensor factors.
    pub fn size(&self) -> i64 {
        self.nu.values().sum()
    }

    /// `Σ j ν^(a)_j Λ̄_a` in `Λ̄`-coordinates.
    pub fn weight(&self, n: usize) -> Vec<i64> {
        let mut w = vec![0; n];
        for (&(a, j), &k) in &self.nu {
            if a >= 1 && a <= n {
                w[a - 1] += j * k;
            }
        }
        w
    }

    /// Tensor product (sum of multiplicities).
    pub fn tensor(&self, other: &QuantumSpace) -> QuantumSpace {
        let mut w = self.clone();
        for (&(a, j), &k) in &other.nu {
            w.add(a, j, k);
        }
        w
    }

    /// `W^{⊗L}`.
    pub fn power(&self, l: i64) -> QuantumSpace {
        QuantumSpace { nu: self.nu.iter().map(|(&key, &k)| (key, k * l)).filter(|(_, k)| *k > 0).collect() }
    }

    /// Apply a node relabelling `a ↦ sigma[a−1]`.
    pub fn relabel(&self, sigma: &[usize]) -> QuantumSpace {
        let mut w = QuantumSpace::new();
        for (&(a, j), &k) in &self.nu {
            w.add(sigma[a - 1], j, k);
        }
        w
    }

    /// Per-node vectors `ν^(a)_{j}` indexed by `j − 1`.
    pub fn per_node(&self, n: usize) -> Vec<Vec<i64>> {
        let mut v = vec![Vec::new(); n];
        for (&(a, j), &k) in &self.nu {
            let row: &mut Vec<i64> = &mut v[a - 1];
            if row.len() < j as usize {
                row.resize(j as usize, 0);
            }
            row[(j - 1) as usize] = k;
        }
        v
    }

    /// Check node range and, for finite level, `j ≤ t_a l`.
    pub fn validate(&self, datum: &AlgebraDatum, level: Level) -> Result<()> {
        let n = datum.n();
        for &(a, j) in self.nu.keys() {
            if a == 0 || a > n {
                return Err(Error::IndexOutOfRange(format!("node {} of W outside 1..={}", a, n)));
            }
            if let Some(top) = level.scaled(datum.t(a)) {
                if j > top {
                    return Err(Error::InvalidArgument(format!(
                        "W^({})_{} lies outside H_l for level {} (j ≤ {})",
                        a, j, level, top
                    )));
                }
            }
        }
        Ok(())
    }

    /// JSON form `[[a, j, mult], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.triples().into_iter().map(|(a, j, k)| serde_json::json!([a, j, k])).collect())
    }
}

impl fmt::Display for QuantumSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.triples().iter().map(|(a, j, k)| format!("{}:{}:{}", a, j, k)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// One admissible configuration `{m^(a)_i}` with its vacancy numbers and
/// cocharge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiggingConfig {
    /// `m[a−1][i−1] = m^(a)_i`.
    pub m: Vec<Vec<i64>>,
    /// `p[a−1][i−1] = p^(a)_i` for `i` up to the node's horizon
    /// (`t_a l`, or past the last non-constant value when `l = ∞`).
    pub p: Vec<Vec<i64>>,
    /// `c({m})`.
    pub cocharge: Q,
}

impl RiggingConfig {
    /// True if every vacancy number is non-negative.
    pub fn is_admissible(&self) -> bool {
        self.p.iter().flatten().all(|&x| x >= 0)
    }
}

/// Direction in which a fermionic sum is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The defining sum in `q`.
    Q,
    /// Its image under `q → q⁻¹`.
    InverseQ,
}

/// Per-node data of a datum used by every fermionic formula.
pub(crate) struct Nodes {
    pub n: usize,
    pub t: Vec<i64>,
    pub td: Vec<i64>,
    pub pair: Vec<Vec<Q>>,
}

impl Nodes {
    pub fn new(d: &AlgebraDatum) -> Nodes {
        let n = d.n();
        Nodes {
            n,
            t: (1..=n).map(|a| d.t(a)).collect(),
            td: (1..=n).map(|a| d.t_dual(a)).collect(),
            pair: d.pairing.clone(),
        }
    }
}

fn min(a: i64, b: i64) -> i64 {
    a.min(b)
}

pub(crate) fn q_to_int(x: Q, what: &str) -> Result<i64> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::Data(format!("{} = {} is not an integer", what, x)))
    }
}

/// `α̃`-coordinates of `ι(Σ jνΛ̄ − λ)` when they are non-negative integers.
pub fn target_root_coords(datum: &AlgebraDatum, w: &QuantumSpace, lambda: &[i64]) -> Option<Vec<i64>> {
    let n = datum.n();
    let wt: Vec<i64> = w.weight(n).iter().zip(lambda).map(|(a, b)| a - b).collect();
    let coords = datum.iota_root_coords(&wt);
    let mut out = Vec::with_capacity(n);
    for c in coords {
        if !c.is_integer() || c < Q::zero() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(out)
}

/// Vacancy numbers (defining form) and cocharge of a configuration.
pub(crate) fn vacancies_and_cocharge(
    nodes: &Nodes,
    nu: &[Vec<i64>],
    m: &[Vec<i64>],
    level: Level,
) -> Result<(Vec<Vec<i64>>, Q)> {
    let n = nodes.n;
    let mut p = Vec::with_capacity(n);
    for a in 0..n {
        let horizon = match level.scaled(nodes.t[a]) {
            Some(h) => h,
            None => {
                let mut h = nu[a].len() as i64;
                for b in 0..n {
                    if let Some(k) = m[b].iter().rposition(|&x| x != 0) {
                        let k = (k + 1) as i64;
                        h = h.max((nodes.t[a] * k + nodes.t[b] - 1) / nodes.t[b]);
                    }
                }
                h + 1
            }
        };
        let mut row = Vec::with_capacity(horizon as usize);
        for i in 1..=horizon {
            let mut v = Q::zero();
            for (j0, &x) in nu[a].iter().enumerate() {
                if x != 0 {
                    v += Q::from_integer(x * min(i, j0 as i64 + 1));
                }
            }
            let mut s = Q::zero();
            for b in 0..n {
                if nodes.pair[a][b].is_zero() {
                    continue;
                }
                let mut acc = 0i64;
                for (k0, &x) in m[b].iter().enumerate() {
                    if x != 0 {
                        acc += x * min(nodes.t[b] * i, nodes.t[a] * (k0 as i64 + 1));
                    }
                }
                s += nodes.pair[a][b] * Q::from_integer(acc);
            }
            v -= s / Q::from_integer(nodes.td[a]);
            row.push(q_to_int(v, "vacancy number")?);
        }
        p.push(row);
    }
    // c = ½ Σ (α̃a|α̃b) min(t_b j, t_a k) m^a_j m^b_k − Σ_a t∨_a Σ min(j,k) ν^a_j m^a_k
    let mut quad = Q::zero();
    for a in 0..n {
        for b in 0..n {
            if nodes.pair[a][b].is_zero() {
                continue;
            }
            let mut acc = 0i64;
            for (j0, &x) in m[a].iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (k0, &y) in m[b].iter().enumerate() {
                    if y != 0 {
                        acc += x * y * min(nodes.t[b] * (j0 as i64 + 1), nodes.t[a] * (k0 as i64 + 1));
                    }
                }
            }
            quad += nodes.pair[a][b] * Q::from_integer(acc);
        }
    }
    let mut lin = 0i64;
    for a in 0..n {
        let mut acc = 0i64;
        for (j0, &x) in nu[a].iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k0, &y) in m[a].iter().enumerate() {
                if y != 0 {
                    acc += x * y * min(j0 as i64 + 1, k0 as i64 + 1);
                }
            }
        }
        lin += nodes.td[a] * acc;
    }
    Ok((p, quad / Q::from_integer(2) - Q::from_integer(lin)))
}

/// Enumerate every configuration satisfying the weight constraint, filtered
/// by `p ≥ 0` when `require_nonneg_p` is set.
pub fn enumerate_configs(
    datum: &AlgebraDatum,
    w: &QuantumSpace,
    lambda: &[i64],
    level: Level,
    require_nonneg_p: bool,
) -> Result<Vec<RiggingConfig>> {
    check_lambda(datum, lambda)?;
    w.validate(datum, level)?;
    let nodes = Nodes::new(datum);
    let nu = w.per_node(nodes.n);
    let mut out = Vec::new();
    for_each_raw_config(datum, w, lambda, level, |m| {
        let (p, c) = vacancies_and_cocharge(&nodes, &nu, m, level)?;
        let cfg = RiggingConfig { m: m.to_vec(), p, cocharge: c };
        if !require_nonneg_p || cfg.is_admissible() {
            out.push(cfg);
        }
        Ok(())
    })?;
    Ok(out)
}

pub(crate) fn check_lambda(datum: &AlgebraDatum, lambda: &[i64]) -> Result<()> {
    if lambda.len() != datum.n() {
        return Err(Error::InvalidArgument(format!(
            "weight has {} coordinates, algebra rank is {}",
            lambda.len(),
            datum.n()
        )));
    }
    Ok(())
}

/// Visit every `{m}` with `Σ i m^(a)_i = μ_a` and parts bounded by `t_a l`.
pub(crate) fn for_each_raw_config<F>(
    datum: &AlgebraDatum,
    w: &QuantumSpace,
    lambda: &[i64],
    level: Level,
    mut f: F,
) -> Result<()>
where
    F: FnMut(&[Vec<i64>]) -> Result<()>,
{
    let mu = match target_root_coords(datum, w, lambda) {
        Some(mu) => mu,
        None => return Ok(()),
    };
    let n = datum.n();
    let per: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|a| {
            let bound = level.scaled(datum.t(a + 1)).unwrap_or(mu[a]);
            partitions(mu[a], bound)
        })
        .collect();
    if per.iter().any(|v| v.is_empty()) {
        return Ok(());
    }
    let mut idx = vec![0usize; n];
    let mut cur: Vec<Vec<i64>> = per.iter().map(|v| v[0].clone()).collect();
    loop {
        f(&cur)?;
        // odometer
        let mut a = 0;
        loop {
            if a == n {
                return Ok(());
            }
            idx[a] += 1;
            if idx[a] < per[a].len() {
                cur[a] = per[a][idx[a]].clone();
                break;
            }
            idx[a] = 0;
            cur[a] = per[a][0].clone();
            a += 1;
        }
    }
}

/// Product of the q-binomials of a configuration, `Π [p+m over m]_{q^{t∨_a}}`,
/// with degrees `≥ cap` dropped when a cap is given.
pub(crate) fn binomial_product(
    nodes: &Nodes,
    p: &[Vec<i64>],
    m: &[Vec<i64>],
    cap: Option<i64>,
) -> Result<DensePoly> {
    let mut factors = Vec::new();
    for a in 0..nodes.n {
        for (i0, &mi) in m[a].iter().enumerate() {
            if mi == 0 {
                continue;
            }
            let pi = p[a].get(i0).copied().unwrap_or_else(|| *p[a].last().unwrap_or(&0));
            let b = qbinomial_dense(pi, mi, nodes.td[a])?;
            if b.is_zero() {
                return Ok(DensePoly { low: 0, coeffs: vec![] });
            }
            factors.push(b);
        }
    }
    multiply_capped(factors, cap)
}

/// Product of dense factors, dropping degrees `≥ cap`. Factors with negative
/// lowest degree are accounted for so that no needed term is lost.
pub(crate) fn multiply_capped(factors: Vec<DensePoly>, cap: Option<i64>) -> Result<DensePoly> {
    // suffix[k] = Σ_{i ≥ k} min(low_i, 0)
    let mut suffix = vec![0i64; factors.len() + 1];
    for k in (0..factors.len()).rev() {
        suffix[k] = suffix[k + 1] + factors[k].low.min(0);
    }
    let mut acc = DensePoly::one();
    for (k, f) in factors.iter().enumerate() {
        acc = acc.mul(f);
        if let Some(cap) = cap {
            acc = truncate_dense(acc, cap - suffix[k + 1]);
        }
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    Ok(acc)
}

/// Drop all terms of degree `≥ cap`.
pub(crate) fn truncate_dense(mut d: DensePoly, cap: i64) -> DensePoly {
    let keep = (cap - d.low).max(0) as usize;
    if d.coeffs.len() > keep {
        d.coeffs.truncate(keep);
    }
    d
}

/// Sum `Σ q^{c} Π binomials` (or its `q⁻¹` image) over configurations,
/// truncated below `order` when given.
#[allow(clippy::too_many_arguments)]
pub(crate) fn fermionic_sum(
    datum: &AlgebraDatum,
    w: &QuantumSpace,
    lambda: &[i64],
    level: Level,
    require_nonneg_p: bool,
    dir: Direction,
    order: Option<Q>,
) -> Result<LaurentSeries> {
    check_lambda(datum, lambda)?;
    w.validate(datum, level)?;
    let nodes = Nodes::new(datum);
    let nu = w.per_node(nodes.n);
    let mut out = LaurentSeries::zero();
    for_each_raw_config(datum, w, lambda, level, |m| {
        let (p, c) = vacancies_and_cocharge(&nodes, &nu, m, level)?;
        if require_nonneg_p && p.iter().flatten().any(|&x| x < 0) {
            return Ok(());
        }
        let shift = match dir {
            Direction::Q => c,
            Direction::InverseQ => {
                let mut s = -c;
                for a in 0..nodes.n {
                    for (i0, &mi) in m[a].iter().enumerate() {
                        if mi != 0 {
                            s -= Q::from_integer(nodes.td[a] * p[a][i0] * mi);
                        }
                    }
                }
                s
            }
        };
        let cap = match order {
            Some(o) => {
                let room = o - shift;
                if room <= Q::zero() {
                    return Ok(());
                }
                Some(room.ceil().to_integer())
            }
            None => None,
        };
        let prod = binomial_product(&nodes, &p, m, cap)?;
        prod.add_into(&mut out, shift);
        Ok(())
    })?;
    Ok(match order {
        Some(o) => out.truncate(o),
        None => out,
    })
}

/// `M_l(W, λ, q)` by its defining sum (exact Laurent polynomial).
pub fn fermionic_m(datum: &AlgebraDatum, w: &QuantumSpace, lambda: &[i64], level: Level) -> Result<LaurentSeries> {
    fermionic_sum(datum, w, lambda, level, true, Direction::Q, None)
}

/// `M_l(W, λ, q⁻¹)`, truncated below `order` if given.
pub fn fermionic_m_inverse(
    datum: &AlgebraDatum,
    w: &QuantumSpace,
    lambda: &[i64],
    level: Level,
    order: Option<Q>,
) -> Result<LaurentSeries> {
    fermionic_sum(datum, w, lambda, level, true, Direction::InverseQ, order)
}

/// `M̃_l(W, λ, q)`: the same sum without the constraint `p ≥ 0`.
pub fn fermionic_mtilde(datum: &AlgebraDatum, w: &QuantumSpace, lambda: &[i64], level: Level) -> Result<LaurentSeries> {
    fermionic_sum(datum, w, lambda, level, false, Direction::Q, None)
}

/// `M̃_l(W, λ, q⁻¹)`, truncated below `order` if given.
pub fn fermionic_mtilde_inverse(
    datum: &AlgebraDatum,
    w: &QuantumSpace,
    lambda: &[i64],
    level: Level,
    order: Option<Q>,
) -> Result<LaurentSeries> {
    fermionic_sum(datum, w, lambda, level, false, Direction::InverseQ, order)
}

/// The class `ε` with `M_l(W,λ,q) ∈ q^{−ε} ℤ[q^{−a_0}]`:
/// `ε ≡ Σ_a a (Σ_i i ν^(a)_i − λ_a) mod a_0`.
pub fn support_class(datum: &AlgebraDatum, w: &QuantumSpace, lambda: &[i64]) -> i64 {
    let wt = w.weight(datum.n());
    let s: i64 = (0..datum.n()).map(|a| (a as i64 + 1) * (wt[a] - lambda[a])).sum();
    s.rem_euclid(datum.a0())
}

/// True if every exponent `e` of `series` satisfies `e ≡ −ε (mod a_0)`, every
/// exponent is non-positive and every coefficient is non-negative.
pub fn has_expected_support(datum: &AlgebraDatum, series: &LaurentSeries, eps: i64) -> bool {
    let a0 = datum.a0();
    series.terms().all(|(e, c)| {
        e.is_integer()
            && e.to_integer() <= 0
            && (e.to_integer() + eps).rem_euclid(a0) == 0
            && c.to_i64().is_none_or(|v| v > 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_cartan::{load_algebra, AlgebraLabel};

    fn datum(s: &str) -> AlgebraDatum {
        load_algebra(&AlgebraLabel::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn quantum_space_parse() {
        let w = QuantumSpace::parse("1:1:2,1:2:1").unwrap();
        assert_eq!(w.triples(), vec![(1, 1, 2), (1, 2, 1)]);
        assert_eq!(w.weight(1), vec![4]);
        assert!(QuantumSpace::parse("0:1").is_err());
    }

    #[test]
    fn a11_small_example() {
        let d = datum("A1~1");
        let w = QuantumSpace::parse("1:1:2,1:2:1").unwrap();
        let m = fermionic_m(&d, &w, &[0], Level::Infinite).unwrap().invert_q().unwrap();
        assert_eq!(m.to_string(), "q^2");
        let cfgs = enumerate_configs(&d, &w, &[4], Level::Infinite, true).unwrap();
        assert_eq!(cfgs.len(), 1);
    }
}
