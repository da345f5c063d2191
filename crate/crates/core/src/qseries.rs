//! Exact Laurent polynomials and truncated power series in `q` with rational
//! exponents and arbitrary-precision integer coefficients.
//!
//! A [`LaurentSeries`] optionally carries a truncation order `O`: every term
//! with exponent `≥ O` is unknown and is never reported. Arithmetic keeps the
//! order honest; operations never silently extend precision.

use crate::{Error, Result, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

/// Exact series `Σ c_e q^e` with optional truncation order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentSeries {
    terms: BTreeMap<Q, BigInt>,
    order: Option<Q>,
}

impl LaurentSeries {
    /// The zero polynomial.
    pub fn zero() -> Self {
        LaurentSeries::default()
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self::monomial(Q::zero(), BigInt::one())
    }

    /// `c q^e`.
    pub fn monomial(e: Q, c: BigInt) -> Self {
        let mut s = Self::zero();
        s.add_term(e, c);
        s
    }

    /// `q^e`.
    pub fn q_pow(e: Q) -> Self {
        Self::monomial(e, BigInt::one())
    }

    /// Polynomial from `(exponent, coefficient)` pairs with integer exponents.
    pub fn from_int_terms(pairs: &[(i64, i64)]) -> Self {
        let mut s = Self::zero();
        for &(e, c) in pairs {
            s.add_term(Q::from_integer(e), BigInt::from(c));
        }
        s
    }

    /// Series `Σ_k coeffs[k] q^{start + k·step}` truncated at `order`.
    pub fn from_coeffs(start: Q, step: Q, coeffs: &[i64], order: Option<Q>) -> Self {
        let mut s = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            s.add_term(start + step * Q::from_integer(k as i64), BigInt::from(c));
        }
        s.order = order;
        s.prune();
        s
    }

    /// Add `c q^e` in place (terms beyond the truncation order are dropped).
    pub fn add_term(&mut self, e: Q, c: BigInt) {
        if c.is_zero() {
            return;
        }
        if let Some(o) = self.order {
            if e >= o {
                return;
            }
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn prune(&mut self) {
        let order = self.order;
        self.terms.retain(|e, c| !c.is_zero() && order.is_none_or(|o| *e < o));
    }

    /// Truncation order, if any.
    pub fn order(&self) -> Option<Q> {
        self.order
    }

    /// Drop all terms with exponent `≥ order` and record the truncation.
    pub fn truncate(&self, order: Q) -> Self {
        let order = match self.order {
            Some(o) => o.min(order),
            None => order,
        };
        LaurentSeries {
            terms: self.terms.iter().filter(|(e, _)| **e < order).map(|(e, c)| (*e, c.clone())).collect(),
            order: Some(order),
        }
    }

    /// Same terms, truncation forgotten (only meaningful for polynomials).
    pub fn untruncated(&self) -> Self {
        LaurentSeries { terms: self.terms.clone(), order: None }
    }

    /// True if no term is stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate over `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Q, &BigInt)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True if empty.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^e`; errors if `e` lies beyond the truncation order.
    pub fn coeff(&self, e: Q) -> Result<BigInt> {
        if let Some(o) = self.order {
            if e >= o {
                return Err(Error::Truncation(format!("coefficient of q^({}) requested beyond order {}", e, o)));
            }
        }
        Ok(self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero))
    }

    /// Lowest exponent present.
    pub fn min_exponent(&self) -> Option<Q> {
        self.terms.keys().next().copied()
    }

    /// Highest exponent present.
    pub fn max_exponent(&self) -> Option<Q> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent that is either present or the truncation order.
    fn valuation(&self) -> Option<Q> {
        match (self.min_exponent(), self.order) {
            (Some(e), _) => Some(e),
            (None, o) => o,
        }
    }

    /// Sum of two series.
    pub fn add(&self, other: &Self) -> Self {
        let order = min_opt(self.order, other.order);
        let mut out = LaurentSeries { terms: BTreeMap::new(), order };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*e, c.clone());
        }
        out
    }

    /// Difference of two series.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        LaurentSeries { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(), order: self.order }
    }

    /// Multiply by an integer.
    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return LaurentSeries { terms: BTreeMap::new(), order: self.order };
        }
        LaurentSeries { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(), order: self.order }
    }

    /// Product of two series; the truncation order is the largest one that
    /// both factors determine.
    pub fn mul(&self, other: &Self) -> Self {
        let order = match (self.order, other.order) {
            (None, None) => None,
            (Some(a), None) => other.valuation().map(|v| a + v).or(Some(a)),
            (None, Some(b)) => self.valuation().map(|v| b + v).or(Some(b)),
            (Some(a), Some(b)) => {
                let va = self.valuation().unwrap_or(a);
                let vb = other.valuation().unwrap_or(b);
                Some((a + vb).min(b + va))
            }
        };
        let mut out = LaurentSeries { terms: BTreeMap::new(), order };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: Q) -> Self {
        LaurentSeries {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
            order: self.order.map(|o| o + e),
        }
    }

    /// Substitute `q → q^{-1}`; only defined for untruncated polynomials.
    pub fn invert_q(&self) -> Result<Self> {
        if self.order.is_some() {
            return Err(Error::Truncation("q -> 1/q on a truncated series".into()));
        }
        Ok(LaurentSeries { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(), order: None })
    }

    /// Substitute `q → q^t` for positive rational `t`.
    pub fn subs_power(&self, t: Q) -> Result<Self> {
        if t <= Q::zero() {
            return Err(Error::InvalidArgument(format!("q -> q^{} needs a positive power", t)));
        }
        Ok(LaurentSeries {
            terms: self.terms.iter().map(|(e, c)| (e * t, c.clone())).collect(),
            order: self.order.map(|o| o * t),
        })
    }

    /// Value at `q = 1` (sum of coefficients); errors on truncated series.
    pub fn eval_at_one(&self) -> Result<BigInt> {
        if self.order.is_some() {
            return Err(Error::Truncation("evaluation at q = 1 of a truncated series".into()));
        }
        Ok(self.terms.values().sum())
    }

    /// Equality of the terms below `order` (both series must know them).
    pub fn agrees_below(&self, other: &Self, order: Q) -> Result<bool> {
        for s in [self, other] {
            if let Some(o) = s.order {
                if o < order {
                    return Err(Error::Truncation(format!("series known only below {}, compared below {}", o, order)));
                }
            }
        }
        Ok(self.truncate(order).terms == other.truncate(order).terms)
    }

    /// Largest denominator among exponents (1 for integral series).
    pub fn exponent_modulus(&self) -> i64 {
        self.terms.keys().map(|e| *e.denom()).max().unwrap_or(1)
    }

    /// Canonical text form `c0*q^(e0) + c1*q^(e1) + …`.
    pub fn to_canonical_string(&self) -> String {
        let mut parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{}*q^({})", c, e)).collect();
        if let Some(o) = self.order {
            parts.push(format!("O(q^({}))", o));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// JSON form: `{"terms": [[exponent "num/den", coefficient], ...],
    /// "order": "num/den" | null}` with exponents ascending.
    pub fn to_json(&self) -> serde_json::Value {
        let arr: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let cv = match c.to_i64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(c.to_string()),
                };
                serde_json::json!([format!("{}/{}", e.numer(), e.denom()), cv])
            })
            .collect();
        let order = self.order.map(|o| serde_json::Value::from(format!("{}/{}", o.numer(), o.denom())));
        serde_json::json!({ "terms": arr, "order": order })
    }

    /// Parse the JSON form produced by [`LaurentSeries::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad series JSON: {}", v));
        // A bare pair list is accepted as an untruncated series.
        let (terms, order) = match v {
            serde_json::Value::Array(_) => (v, None),
            serde_json::Value::Object(map) => {
                let order = match map.get("order") {
                    None | Some(serde_json::Value::Null) => None,
                    Some(o) => Some(parse_rational(o.as_str().ok_or_else(bad)?)?),
                };
                (map.get("terms").ok_or_else(bad)?, order)
            }
            _ => return Err(bad()),
        };
        let mut s = Self::zero();
        for item in terms.as_array().ok_or_else(bad)? {
            let pair = item.as_array().ok_or_else(bad)?;
            if pair.len() != 2 {
                return Err(bad());
            }
            let e = parse_rational(pair[0].as_str().ok_or_else(bad)?)?;
            let c: BigInt = match &pair[1] {
                serde_json::Value::Number(n) => BigInt::from(n.as_i64().ok_or_else(bad)?),
                serde_json::Value::String(t) => t.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            };
            s.add_term(e, c);
        }
        Ok(match order {
            Some(o) => s.truncate(o),
            None => s,
        })
    }
}

impl fmt::Display for LaurentSeries {
    /// Human form: `q + q^2`, `2*q^(1/2)`, `1`, with `O(q^k)` when truncated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = if e.is_zero() {
                String::new()
            } else if *e == Q::one() {
                "q".to_string()
            } else if e.is_integer() && *e > Q::zero() {
                format!("q^{}", e)
            } else {
                format!("q^({})", e)
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", abs, mono));
            }
        }
        if let Some(o) = self.order {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("O(q^({}))", o));
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{}", out)
    }
}

fn min_opt(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{}'", s));
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        Ok(Q::new(a, b))
    } else {
        Ok(Q::from_integer(s.parse().map_err(|_| bad())?))
    }
}

thread_local! {
    static GAUSS_CACHE: RefCell<HashMap<(i64, i64), Rc<Vec<BigInt>>>> = RefCell::new(HashMap::new());
}

/// Coefficients (in `q`, from degree 0) of the Gaussian binomial
/// `[p+m over m]_q` for `p, m ≥ 0`, memoized per thread.
pub fn gaussian_coeffs(p: i64, m: i64) -> Rc<Vec<BigInt>> {
    debug_assert!(p >= 0 && m >= 0);
    // Symmetric in (p, m).
    let key = (p.min(m), p.max(m));
    if let Some(v) = GAUSS_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return v;
    }
    let (small, big) = key;
    let v = if small == 0 {
        Rc::new(vec![BigInt::one()])
    } else {
        // [n over k] = [n-1 over k-1] + q^k [n-1 over k], with n = small+big, k = small:
        // in (p, m) form: G(p, m) = G(p, m-1) + q^m G(p-1, m).
        let a = gaussian_coeffs(big, small - 1);
        let b = gaussian_coeffs(big - 1, small);
        let deg = (small * big) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (i, c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            out[i + small as usize] += c;
        }
        Rc::new(out)
    };
    GAUSS_CACHE.with(|c| c.borrow_mut().insert(key, v.clone()));
    v
}

/// Dense integer-exponent polynomial `q^low · Σ coeffs[k] q^k`, the working
/// representation of q-binomial products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePoly {
    pub low: i64,
    pub coeffs: Vec<BigInt>,
}

impl DensePoly {
    /// The constant 1.
    pub fn one() -> Self {
        DensePoly { low: 0, coeffs: vec![BigInt::one()] }
    }

    /// True if identically zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Product.
    pub fn mul(&self, other: &DensePoly) -> DensePoly {
        if self.is_zero() || other.is_zero() {
            return DensePoly { low: 0, coeffs: vec![] };
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DensePoly { low: self.low + other.low, coeffs: out }
    }

    /// Substitute `q → q^t`, `t ≥ 1`.
    pub fn stretch(&self, t: i64) -> DensePoly {
        if t == 1 || self.coeffs.len() <= 1 {
            return DensePoly { low: self.low * t, coeffs: self.coeffs.clone() };
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * t as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * t as usize] = c.clone();
        }
        DensePoly { low: self.low * t, coeffs: out }
    }

    /// Add `q^shift · self` into a sparse series.
    pub fn add_into(&self, target: &mut LaurentSeries, shift: Q) {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                target.add_term(shift + Q::from_integer(self.low + i as i64), c.clone());
            }
        }
    }

    /// Sparse form.
    pub fn to_series(&self) -> LaurentSeries {
        let mut s = LaurentSeries::zero();
        self.add_into(&mut s, Q::zero());
        s
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

/// `[p+m over m]` in the base `q^t` as a dense polynomial, for every integer
/// `p` (zero for `−m ≤ p ≤ −1`, the reflected form for `p ≤ −m−1`).
pub fn qbinomial_dense(p: i64, m: i64, t: i64) -> Result<DensePoly> {
    if m < 0 {
        return Err(Error::InvalidArgument(format!("q-binomial with m = {} < 0", m)));
    }
    if t < 1 {
        return Err(Error::InvalidArgument(format!("q-binomial base exponent t = {} < 1", t)));
    }
    if m == 0 {
        return Ok(DensePoly::one());
    }
    if p >= 0 {
        let c = gaussian_coeffs(p, m);
        return Ok(DensePoly { low: 0, coeffs: (*c).clone() }.stretch(t));
    }
    if p >= -m {
        return Ok(DensePoly { low: 0, coeffs: vec![] });
    }
    // (−q^{p+(m+1)/2})^m [−p−1 over m]
    let top = -p - 1;
    let c = gaussian_coeffs(top - m, m);
    let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let shift = m * p + m * (m + 1) / 2;
    let coeffs = c.iter().map(|v| v * &sign).collect();
    let mut d = DensePoly { low: 0, coeffs }.stretch(t);
    d.low = shift * t;
    Ok(d)
}

/// `[p+m over m]_{q^t}` as a [`LaurentSeries`].
pub fn qbinomial(p: i64, m: i64, t: i64) -> Result<LaurentSeries> {
    Ok(qbinomial_dense(p, m, t)?.to_series())
}

/// Truncated expansion of `1/(q^t;q^t)_k` (`k = None` for `k = ∞`) below
/// exponent `order`.
pub fn inv_pochhammer(k: Option<i64>, t: i64, order: Q) -> Result<LaurentSeries> {
    if t < 1 {
        return Err(Error::InvalidArgument(format!("base exponent t = {} < 1", t)));
    }
    if let Some(k) = k {
        if k < 0 {
            return Err(Error::InvalidArgument(format!("(q)_k with k = {} < 0", k)));
        }
    }
    let d = inv_pochhammer_dense(k, t, ceil_q(order).max(0));
    let mut s = LaurentSeries::zero();
    s.order = Some(order);
    for (i, c) in d.iter().enumerate() {
        s.add_term(Q::from_integer(i as i64), c.clone());
    }
    Ok(s)
}

/// Coefficients `0..len` of `1/(q^t;q^t)_k` as a dense vector.
pub fn inv_pochhammer_dense(k: Option<i64>, t: i64, len: i64) -> Vec<BigInt> {
    let len = len.max(0) as usize;
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::one();
    let max_part = match k {
        Some(k) => k,
        None => len as i64,
    };
    // Multiply by 1/(1 − q^{t i}) for parts i = 1..k: c[n] += c[n − t i].
    for i in 1..=max_part {
        let step = (t * i) as usize;
        if step >= len {
            break;
        }
        for n in step..len {
            let v = c[n - step].clone();
            c[n] += v;
        }
    }
    c
}

fn ceil_q(x: Q) -> i64 {
    x.ceil().to_integer()
}
