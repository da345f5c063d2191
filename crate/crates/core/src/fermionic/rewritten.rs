//! The rewritten fermionic forms: the finite-level form at `λ = 0` with the
//! top-string multiplicities eliminated, the `l = ∞` form in `q⁻¹`, and the
//! generalisation `M^S_l` with free integer multiplicities on a subset `S`.

use super::lattice::{partitions, points_below};
use super::{check_lambda, q_to_int, target_root_coords, Nodes, QuantumSpace};
use crate::affine_cartan::{k_coeff, AlgebraDatum};
use crate::qseries::{inv_pochhammer_dense, qbinomial_dense, DensePoly, LaurentSeries};
use crate::{Error, Result, Q};
use num_traits::Zero;
use std::collections::BTreeSet;

/// Index list of `H̄_l` as `(a, i)` with `a` 1-based.
pub fn h_bar(datum: &AlgebraDatum, l: i64) -> Vec<(usize, i64)> {
    datum.h_set(l, true)
}

/// Gram matrix `G_{(a,j),(b,k)} = (α̃_a|α̃_b) K^{(t_a t_b l)}_{t_b j, t_a k}` on
/// `H̄_l`, the quadratic part of the level-`l` cocharge.
pub fn level_gram(datum: &AlgebraDatum, l: i64) -> (Vec<(usize, i64)>, Vec<Vec<Q>>) {
    let idx = h_bar(datum, l);
    let g = idx
        .iter()
        .map(|&(a, j)| {
            idx.iter()
                .map(|&(b, k)| {
                    let (ta, tb) = (datum.t(a), datum.t(b));
                    datum.pairing[a - 1][b - 1] * k_coeff(ta * tb * l, tb * j, ta * k)
                })
                .collect()
        })
        .collect();
    (idx, g)
}

/// Shared evaluation of the level-`l` rewritten vacancy numbers and cocharge.
struct LevelForm {
    idx: Vec<(usize, i64)>,
    g: Vec<Vec<Q>>,
    nu: Vec<Vec<i64>>,
    td: Vec<i64>,
    t: Vec<i64>,
    l: i64,
    constant: Q,
    mu: Vec<Q>,
}

impl LevelForm {
    fn new(datum: &AlgebraDatum, w: &QuantumSpace, l: i64) -> Result<LevelForm> {
        let nodes = Nodes::new(datum);
        w.validate(datum, super::Level::Finite(l))?;
        let (idx, g) = level_gram(datum, l);
        let wt = w.weight(nodes.n);
        let constant = datum.iota_form(&wt, &wt) / Q::from_integer(2 * l);
        Ok(LevelForm {
            idx,
            g,
            nu: w.per_node(nodes.n),
            td: nodes.td,
            t: nodes.t,
            l,
            constant,
            mu: datum.iota_root_coords(&wt),
        })
    }

    /// `p^(a)_i` on `H̄_l` for `m` given on `H̄_l` (same ordering as `idx`).
    fn vacancies(&self, m: &[i64]) -> Result<Vec<i64>> {
        let mut out = Vec::with_capacity(self.idx.len());
        for (r, &(a, i)) in self.idx.iter().enumerate() {
            let tal = self.t[a - 1] * self.l;
            let mut v = Q::zero();
            for (j0, &x) in self.nu[a - 1].iter().enumerate() {
                let j = j0 as i64 + 1;
                if x != 0 && j < tal {
                    v += k_coeff(tal, i, j) * Q::from_integer(x);
                }
            }
            let mut s = Q::zero();
            for (c, &y) in m.iter().enumerate() {
                if y != 0 {
                    s += self.g[r][c] * Q::from_integer(y);
                }
            }
            v -= s / Q::from_integer(self.td[a - 1]);
            out.push(q_to_int(v, "vacancy number")?);
        }
        Ok(out)
    }

    fn cocharge(&self, m: &[i64]) -> Q {
        let mut s = Q::zero();
        for (r, &x) in m.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (c, &y) in m.iter().enumerate() {
                if y != 0 {
                    s += self.g[r][c] * Q::from_integer(x * y);
                }
            }
        }
        s / Q::from_integer(2) + self.constant
    }

    /// `m^(a)_{t_a l}` from the elimination identity, if a non-negative integer.
    fn top_multiplicities(&self, m: &[i64]) -> Option<Vec<i64>> {
        let n = self.t.len();
        let mut rest = self.mu.clone();
        for (r, &(a, i)) in self.idx.iter().enumerate() {
            rest[a - 1] -= Q::from_integer(i * m[r]);
        }
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            let v = rest[a] / Q::from_integer(self.t[a] * self.l);
            if !v.is_integer() || v < Q::zero() {
                return None;
            }
            out.push(v.to_integer());
        }
        Some(out)
    }
}

/// `M_l(W, 0, q⁻¹)` through the rewritten finite-level form: configurations
/// on `H̄_l` with the top multiplicities eliminated and the quadratic form
/// built from `K^{(l)}_{jk} = min(j,k) − jk/l`.
pub fn fermionic_m_level_form(datum: &AlgebraDatum, w: &QuantumSpace, l: i64) -> Result<LaurentSeries> {
    let form = LevelForm::new(datum, w, l)?;
    let n = datum.n();
    // Enumerate, per node, partitions of μ_a − t_a l·k into parts < t_a l.
    let mut per_node: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n);
    for a in 0..n {
        let mu = form.mu[a];
        if !mu.is_integer() || mu < Q::zero() {
            return Ok(LaurentSeries::zero());
        }
        let mu = mu.to_integer();
        let tal = form.t[a] * l;
        let mut opts = Vec::new();
        let mut k = 0;
        while k * tal <= mu {
            for mut part in partitions(mu - k * tal, tal - 1) {
                part.resize((tal - 1) as usize, 0);
                opts.push(part);
            }
            k += 1;
        }
        per_node.push(opts);
    }
    let mut out = LaurentSeries::zero();
    let mut choice = vec![0usize; n];
    loop {
        let m: Vec<i64> = (0..n).flat_map(|a| per_node[a][choice[a]].iter().copied()).collect();
        let p = form.vacancies(&m)?;
        if p.iter().all(|&x| x >= 0) {
            let mut acc = DensePoly::one();
            for (r, &(a, _)) in form.idx.iter().enumerate() {
                if m[r] != 0 {
                    acc = acc.mul(&qbinomial_dense(p[r], m[r], form.td[a - 1])?);
                }
            }
            acc.add_into(&mut out, form.cocharge(&m));
        }
        let mut a = 0;
        loop {
            if a == n {
                return Ok(out);
            }
            choice[a] += 1;
            if choice[a] < per_node[a].len() {
                break;
            }
            choice[a] = 0;
            a += 1;
        }
    }
}

/// `M_∞(W, λ, q⁻¹)` through the `l = ∞` rewritten form
/// `Σ q^{ĉ} Π [p+m over m]_{q_a}` with `ĉ = ½ Σ (α̃a|α̃b) min(t_b j, t_a k) m m`.
pub fn fermionic_m_infinite_form(datum: &AlgebraDatum, w: &QuantumSpace, lambda: &[i64]) -> Result<LaurentSeries> {
    check_lambda(datum, lambda)?;
    if lambda.iter().any(|&x| x < 0) {
        return Ok(LaurentSeries::zero());
    }
    let nodes = Nodes::new(datum);
    let n = nodes.n;
    let mu = match target_root_coords(datum, w, lambda) {
        Some(mu) => mu,
        None => return Ok(LaurentSeries::zero()),
    };
    let nu = w.per_node(n);
    let per_node: Vec<Vec<Vec<i64>>> = (0..n).map(|a| partitions(mu[a], mu[a])).collect();
    let mut out = LaurentSeries::zero();
    let mut choice = vec![0usize; n];
    loop {
        let m: Vec<&Vec<i64>> = (0..n).map(|a| &per_node[a][choice[a]]).collect();
        let mut ok = true;
        let mut acc = DensePoly::one();
        let mut chat = Q::zero();
        for a in 0..n {
            for b in 0..n {
                for (j0, &x) in m[a].iter().enumerate() {
                    for (k0, &y) in m[b].iter().enumerate() {
                        if x != 0 && y != 0 {
                            let mn = (nodes.t[b] * (j0 as i64 + 1)).min(nodes.t[a] * (k0 as i64 + 1));
                            chat += nodes.pair[a][b] * Q::from_integer(mn * x * y);
                        }
                    }
                }
            }
        }
        chat /= Q::from_integer(2);
        // Vacancy numbers are needed for every i; beyond the largest string
        // length they are constant and equal to λ_a ≥ 0.
        'outer: for a in 0..n {
            let horizon = (nu[a].len()).max(m.iter().map(|v| v.len()).max().unwrap_or(0) * 3) as i64 + 1;
            for i in 1..=horizon {
                let mut v = Q::zero();
                for (j0, &x) in nu[a].iter().enumerate() {
                    v += Q::from_integer(x * i.min(j0 as i64 + 1));
                }
                for b in 0..n {
                    for (k0, &y) in m[b].iter().enumerate() {
                        if y != 0 {
                            let mn = (nodes.t[b] * i).min(nodes.t[a] * (k0 as i64 + 1));
                            v -= nodes.pair[a][b] * Q::from_integer(mn * y) / Q::from_integer(nodes.td[a]);
                        }
                    }
                }
                let p = q_to_int(v, "vacancy number")?;
                if p < 0 {
                    ok = false;
                    break 'outer;
                }
                let mi = m[a].get((i - 1) as usize).copied().unwrap_or(0);
                if mi != 0 {
                    acc = acc.mul(&qbinomial_dense(p, mi, nodes.td[a])?);
                }
            }
        }
        if ok {
            acc.add_into(&mut out, chat);
        }
        let mut a = 0;
        loop {
            if a == n {
                return Ok(out);
            }
            choice[a] += 1;
            if choice[a] < per_node[a].len() {
                break;
            }
            choice[a] = 0;
            a += 1;
        }
    }
}

/// `M^S_l(W, q⁻¹)` truncated below `order`: configurations on `H̄_l` with
/// `m ∈ ℤ` on `S` and `m ≥ 0` elsewhere, weight `q^{c̄}` times q-binomials off
/// `S` and `1/(q_a)_{p}` on `S`.
pub fn fermionic_ms(
    datum: &AlgebraDatum,
    w: &QuantumSpace,
    s: &BTreeSet<(usize, i64)>,
    l: i64,
    order: Q,
) -> Result<LaurentSeries> {
    let form = LevelForm::new(datum, w, l)?;
    for &(a, i) in s {
        if !form.idx.contains(&(a, i)) {
            return Err(Error::InvalidArgument(format!("({}, {}) is not in H̄_{}", a, i, l)));
        }
    }
    let lower: Vec<Option<i64>> = form.idx.iter().map(|key| if s.contains(key) { None } else { Some(0) }).collect();
    let budget = order - form.constant;
    let mut out = LaurentSeries::zero();
    if budget > Q::zero() {
        for m in points_below(&form.g, budget, &lower)? {
            if form.top_multiplicities(&m).is_none() {
                continue;
            }
            let p = form.vacancies(&m)?;
            if p.iter().any(|&x| x < 0) {
                continue;
            }
            let c = form.cocharge(&m);
            let cap = (order - c).ceil().to_integer();
            if cap <= 0 {
                continue;
            }
            let mut factors = Vec::new();
            for (r, &(a, i)) in form.idx.iter().enumerate() {
                let td = form.td[a - 1];
                if s.contains(&(a, i)) {
                    let coeffs = inv_pochhammer_dense(Some(p[r]), td, cap);
                    factors.push(DensePoly { low: 0, coeffs });
                } else if m[r] != 0 {
                    factors.push(qbinomial_dense(p[r], m[r], td)?);
                }
            }
            super::multiply_capped(factors, Some(cap))?.add_into(&mut out, c);
        }
    }
    Ok(out.truncate(order))
}
