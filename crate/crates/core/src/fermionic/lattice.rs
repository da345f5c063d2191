//! Enumeration of integer points below a positive-definite quadratic form,
//! and of multiplicity vectors of integer partitions.

use crate::{Error, Result, Q};
use num_traits::{ToPrimitive, Zero};

/// All integer vectors `x` with `½ xᵀ G x < bound` and `x_i ≥ lower_i`
/// whenever `lower_i` is given. `G` must be symmetric positive definite.
///
/// Uses an exact `L D Lᵀ` factorisation; floating point is only used to
/// bracket the candidate range of each coordinate, every accepted point is
/// re-checked exactly.
pub fn points_below(g: &[Vec<Q>], bound: Q, lower: &[Option<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = g.len();
    if n == 0 {
        return Ok(if bound > Q::zero() { vec![vec![]] } else { vec![] });
    }
    let (l, d) = ldl(g)?;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let budget = bound * Q::from_integer(2);
    recurse(n, &l, &d, lower, budget, &mut x, &mut out);
    Ok(out)
}

fn ldl(g: &[Vec<Q>]) -> Result<(Vec<Vec<Q>>, Vec<Q>)> {
    let n = g.len();
    let mut l = vec![vec![Q::zero(); n]; n];
    let mut d = vec![Q::zero(); n];
    for i in 0..n {
        let mut di = g[i][i];
        for k in 0..i {
            di -= l[i][k] * l[i][k] * d[k];
        }
        if di <= Q::zero() {
            return Err(Error::InvalidArgument("quadratic form is not positive definite".into()));
        }
        d[i] = di;
        l[i][i] = Q::from_integer(1);
        for j in i + 1..n {
            let mut s = g[j][i];
            for k in 0..i {
                s -= l[j][k] * l[i][k] * d[k];
            }
            l[j][i] = s / di;
        }
    }
    Ok((l, d))
}

fn to_f(x: Q) -> f64 {
    x.numer().to_f64().unwrap_or(0.0) / x.denom().to_f64().unwrap_or(1.0)
}

// Coordinates are fixed from the last to the first: with `G = L D Lᵀ`,
// `xᵀGx = Σ_k d_k (x_k + Σ_{i>k} L_ik x_i)²`.
fn recurse(
    k: usize,
    l: &[Vec<Q>],
    d: &[Q],
    lower: &[Option<i64>],
    budget: Q,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if k == 0 {
        out.push(x.clone());
        return;
    }
    let k = k - 1;
    let n = x.len();
    let mut c = Q::zero();
    for i in k + 1..n {
        c += l[i][k] * Q::from_integer(x[i]);
    }
    let r = (to_f(budget) / to_f(d[k])).max(0.0).sqrt();
    let cf = to_f(c);
    let mut lo = (-cf - r).floor() as i64 - 1;
    let hi = (-cf + r).ceil() as i64 + 1;
    if let Some(lb) = lower[k] {
        lo = lo.max(lb);
    }
    for v in lo..=hi {
        let s = Q::from_integer(v) + c;
        let used = d[k] * s * s;
        if used < budget {
            x[k] = v;
            recurse(k, l, d, lower, budget - used, x, out);
        }
    }
    x[k] = 0;
}

/// Multiplicity vectors `m` (index `i−1` ↦ number of parts equal to `i`) of
/// all partitions of `total` into parts `≤ max_part`.
pub fn partitions(total: i64, max_part: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if total < 0 {
        return out;
    }
    let max_part = max_part.min(total).max(0);
    let mut m = vec![0i64; max_part as usize];
    fn go(rem: i64, part: i64, m: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rem == 0 {
            out.push(m.clone());
            return;
        }
        if part == 0 {
            return;
        }
        let mut k = rem / part;
        while k >= 0 {
            m[(part - 1) as usize] = k;
            go(rem - k * part, part - 1, m, out);
            k -= 1;
        }
        m[(part - 1) as usize] = 0;
    }
    go(total, max_part, &mut m, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(5, 5).len(), 7);
        assert_eq!(partitions(6, 2).len(), 4);
        assert_eq!(partitions(0, 3), vec![Vec::<i64>::new()]);
        assert_eq!(partitions(0, 0), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn disc_points() {
        // ½(x² + y²)·2 < 3 : x² + y² < 3
        let g = vec![vec![Q::from_integer(2), Q::zero()], vec![Q::zero(), Q::from_integer(2)]];
        let pts = points_below(&g, Q::from_integer(3), &[None, None]).unwrap();
        assert_eq!(pts.len(), 9);
        let pts = points_below(&g, Q::from_integer(3), &[Some(0), Some(0)]).unwrap();
        assert_eq!(pts.len(), 4);
    }
}
