//! The q-series `N_l(λ, q)`, conjecturally a level-`l` string function.

use super::lattice::points_below;
use super::rewritten::level_gram;
use crate::affine_cartan::AlgebraDatum;
use crate::qseries::{inv_pochhammer, inv_pochhammer_dense, DensePoly, LaurentSeries};
use crate::{Error, Result, Q};
use num_traits::Zero;

/// `N_l(λ, q)` truncated below `order` (an exponent of `q`).
///
/// `N_l = Π_a (q_a)_∞^{-1} Σ_{m} q^{φ(m)} / Π_{H̄_l} (q_a)_{m^(a)_j}` over
/// `m ≥ 0` on `H̄_l` with `Σ j m^(a)_j α̃_a ≡ ι(λ)` modulo `l·⊕ℤ t_a α̃_a`.
pub fn string_n(datum: &AlgebraDatum, lambda: &[i64], l: i64, order: Q) -> Result<LaurentSeries> {
    if l < 1 {
        return Err(Error::InvalidArgument(format!("level {} < 1", l)));
    }
    super::check_lambda(datum, lambda)?;
    let n = datum.n();
    let iota = datum.iota_root_coords(lambda);
    let mut out = LaurentSeries::zero();
    if iota.iter().all(|x| x.is_integer()) && order > Q::zero() {
        let (idx, g) = level_gram(datum, l);
        let lower = vec![Some(0); idx.len()];
        for m in points_below(&g, order, &lower)? {
            let mut ok = true;
            let mut sums = vec![0i64; n];
            for (r, &(a, j)) in idx.iter().enumerate() {
                sums[a - 1] += j * m[r];
            }
            for a in 0..n {
                let modulus = l * datum.t(a + 1);
                if (sums[a] - iota[a].to_integer()).rem_euclid(modulus) != 0 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let mut phi = Q::zero();
            for (r, &x) in m.iter().enumerate() {
                for (c, &y) in m.iter().enumerate() {
                    if x != 0 && y != 0 {
                        phi += g[r][c] * Q::from_integer(x * y);
                    }
                }
            }
            phi /= Q::from_integer(2);
            let cap = (order - phi).ceil().to_integer();
            if cap <= 0 {
                continue;
            }
            let mut factors = Vec::new();
            for (r, &(a, _)) in idx.iter().enumerate() {
                if m[r] > 0 {
                    let coeffs = inv_pochhammer_dense(Some(m[r]), datum.t_dual(a), cap);
                    factors.push(DensePoly { low: 0, coeffs });
                }
            }
            super::multiply_capped(factors, Some(cap))?.add_into(&mut out, phi);
        }
    }
    let mut out = out.truncate(order);
    for a in 1..=n {
        out = out.mul(&inv_pochhammer(None, datum.t_dual(a), order)?);
    }
    Ok(out.truncate(order))
}

/// `ε'` of the support statement `N_l(λ) ∈ q^{ε'} ℤ[[q^{a_0}]]`:
/// `ε' ≡ −|ι(λ)|²/(2l) + Σ a λ_a  (mod a_0)`, reduced into `[0, a_0)`.
pub fn string_leading_class(datum: &AlgebraDatum, lambda: &[i64], l: i64) -> Q {
    let a0 = Q::from_integer(datum.a0());
    let mut e = -datum.iota_form(lambda, lambda) / Q::from_integer(2 * l);
    for (a, &x) in lambda.iter().enumerate() {
        e += Q::from_integer((a as i64 + 1) * x);
    }
    let k = (e / a0).floor();
    e - k * a0
}

/// `Λ̄`-coordinates of `ι⁻¹(t_a α̃_a)`, the generators of the lattice `M`
/// (`None` if not integral).
pub fn m_lattice_generator(datum: &AlgebraDatum, a: usize) -> Option<Vec<i64>> {
    // ι⁻¹(α̃_a) = Σ_b (t_b / t∨_b)(α̃_a|α̃_b) Λ̄_b
    let n = datum.n();
    let mut out = Vec::with_capacity(n);
    for b in 1..=n {
        let v = Q::from_integer(datum.t(a) * datum.t(b)) * datum.pairing[a - 1][b - 1] / Q::from_integer(datum.t_dual(b));
        if !v.is_integer() {
            return None;
        }
        out.push(v.to_integer());
    }
    Some(out)
}
