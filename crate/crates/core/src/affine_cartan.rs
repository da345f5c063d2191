//! Registry of affine Lie algebras `X^(r)_N` and the integer/rational data
//! derived from them.
//!
//! Node labels follow Kac's tables (node 0 is the affine node). The Kac marks
//! `a_i` are stored as the coefficient lists of the null root `δ`; the dual
//! marks `a∨_i` are read from the δ-list of the dual algebra (transposed
//! Cartan matrix). Both lists are cross-checked against null vectors of the
//! affine Cartan matrix when a datum is loaded. Everything here is exact.

use crate::{Error, Result, Q};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

/// Upper bound on the rank `n` accepted by [`AlgebraLabel::new`].
pub const MAX_RANK: usize = 8;

/// Simply-laced (or classical) family letter of `X_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_char(c: char) -> Option<Family> {
        match c.to_ascii_uppercase() {
            'A' => Some(Family::A),
            'B' => Some(Family::B),
            'C' => Some(Family::C),
            'D' => Some(Family::D),
            'E' => Some(Family::E),
            'F' => Some(Family::F),
            'G' => Some(Family::G),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Label `X^(r)_N` of an admitted affine algebra together with its rank `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AlgebraLabel {
    pub family: Family,
    /// Twist `r ∈ {1,2,3}`.
    pub r: usize,
    /// Rank of the simple algebra `X_N` behind the twist.
    #[serde(rename = "N")]
    pub big_n: usize,
    /// Number of non-zero nodes of the affine diagram.
    pub n: usize,
}

impl AlgebraLabel {
    /// Validate `(family, r, N)` against the admitted list and compute `n`.
    pub fn new(family: Family, r: usize, big_n: usize) -> Result<AlgebraLabel> {
        use Family::*;
        let bad = || Error::UnknownAlgebra(format!("{}{}~{}", family, big_n, r));
        let n = match (family, r) {
            (A, 1) if big_n >= 1 => big_n,
            (B, 1) if big_n >= 3 => big_n,
            (C, 1) if big_n >= 2 => big_n,
            (D, 1) if big_n >= 4 => big_n,
            (E, 1) if (6..=8).contains(&big_n) => big_n,
            (F, 1) if big_n == 4 => 4,
            (G, 1) if big_n == 2 => 2,
            (A, 2) if big_n >= 2 && big_n.is_multiple_of(2) => big_n / 2,
            (A, 2) if big_n >= 3 => big_n.div_ceil(2),
            (D, 2) if big_n >= 3 => big_n - 1,
            (E, 2) if big_n == 6 => 4,
            (D, 3) if big_n == 4 => 2,
            _ => return Err(bad()),
        };
        if n > MAX_RANK {
            return Err(bad());
        }
        Ok(AlgebraLabel { family, r, big_n, n })
    }

    /// Parse `"A2~2"`, `"A(2)_2"`, `"d4~3"`, ... (case-insensitive).
    pub fn parse(s: &str) -> Result<AlgebraLabel> {
        let err = || Error::Parse(format!("cannot parse algebra label '{}'", s));
        let t: String = s.trim().chars().filter(|c| !c.is_whitespace()).collect();
        let mut chars = t.chars();
        let family = chars.next().and_then(Family::from_char).ok_or_else(err)?;
        let rest: String = chars.collect();
        let (big_n, r) = if let Some(idx) = rest.find('~') {
            let n: usize = rest[..idx].parse().map_err(|_| err())?;
            let r: usize = rest[idx + 1..].parse().map_err(|_| err())?;
            (n, r)
        } else if rest.starts_with('(') {
            let close = rest.find(')').ok_or_else(err)?;
            let r: usize = rest[1..close].parse().map_err(|_| err())?;
            let tail = rest[close + 1..].trim_start_matches('_');
            let n: usize = tail.parse().map_err(|_| err())?;
            (n, r)
        } else {
            return Err(err());
        };
        AlgebraLabel::new(family, r, big_n)
    }

    /// The label of the algebra with transposed Cartan matrix.
    pub fn dual(&self) -> AlgebraLabel {
        use Family::*;
        let n = self.n;
        let (f, r, big_n) = match (self.family, self.r) {
            (B, 1) => (A, 2, 2 * n - 1),
            (A, 2) if self.big_n % 2 == 1 => (B, 1, n),
            (C, 1) => (D, 2, n + 1),
            (D, 2) => (C, 1, n),
            (F, 1) => (E, 2, 6),
            (E, 2) => (F, 1, 4),
            (G, 1) => (D, 3, 4),
            (D, 3) => (G, 1, 2),
            _ => (self.family, self.r, self.big_n),
        };
        // The dual of A^(2)_3 is the formal "B^(1)_2", which lies outside the
        // admitted list; it is only used to read off its δ-list.
        AlgebraLabel { family: f, r, big_n, n }
    }

    /// True for `A^(2)_{2n}`.
    pub fn is_a_even_twisted(&self) -> bool {
        self.family == Family::A && self.r == 2 && self.big_n.is_multiple_of(2)
    }

    /// True for the nontwisted simply-laced families.
    pub fn is_simply_laced(&self) -> bool {
        self.r == 1 && matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// All admitted labels with rank `n ≤ max_rank`, in canonical order.
    pub fn all_up_to_rank(max_rank: usize) -> Vec<AlgebraLabel> {
        use Family::*;
        let mut out = Vec::new();
        for big_n in 1..=2 * max_rank + 2 {
            for (f, r) in [
                (A, 1),
                (B, 1),
                (C, 1),
                (D, 1),
                (E, 1),
                (F, 1),
                (G, 1),
                (A, 2),
                (D, 2),
                (E, 2),
                (D, 3),
            ] {
                if let Ok(l) = AlgebraLabel::new(f, r, big_n) {
                    if l.n <= max_rank {
                        out.push(l);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for AlgebraLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}~{}", self.family, self.big_n, self.r)
    }
}

impl std::str::FromStr for AlgebraLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AlgebraLabel::parse(s)
    }
}

/// Coefficients of `δ = Σ a_i α_i` for each admitted family, as listed for
/// Kac's node enumeration.
pub fn delta_expansion(label: &AlgebraLabel) -> Vec<i64> {
    use Family::*;
    let n = label.n;
    let twos = |k: usize| std::iter::repeat_n(2, k);
    match (label.family, label.r) {
        (A, 1) => vec![1; n + 1],
        (B, 1) => [1, 1].into_iter().chain(twos(n - 1)).collect(),
        (C, 1) => [1].into_iter().chain(twos(n - 1)).chain([1]).collect(),
        (D, 1) => [1, 1].into_iter().chain(twos(n - 3)).chain([1, 1]).collect(),
        (E, 1) => match n {
            6 => vec![1, 1, 2, 3, 2, 1, 2],
            7 => vec![1, 2, 3, 4, 3, 2, 1, 2],
            _ => vec![1, 2, 3, 4, 5, 6, 4, 2, 3],
        },
        (F, 1) => vec![1, 2, 3, 4, 2],
        (G, 1) => vec![1, 2, 3],
        (A, 2) if label.big_n.is_multiple_of(2) => twos(n).chain([1]).collect(),
        (A, 2) => {
            if n == 2 {
                vec![1, 1, 1]
            } else {
                [1, 1].into_iter().chain(twos(n - 2)).chain([1]).collect()
            }
        }
        (D, 2) => vec![1; n + 1],
        (E, 2) => vec![1, 2, 3, 2, 1],
        (D, 3) => vec![1, 2, 1],
        _ => unreachable!("label validated on construction"),
    }
}

/// Affine Cartan matrix `A_{ij} = ⟨h_i, α_j⟩` in Kac's node enumeration.
pub fn affine_cartan_matrix(label: &AlgebraLabel) -> Vec<Vec<i64>> {
    use Family::*;
    let n = label.n;
    let mut m = vec![vec![0i64; n + 1]; n + 1];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    // bond(i, j, aij, aji)
    let mut bond = |i: usize, j: usize, aij: i64, aji: i64| {
        m[i][j] = aij;
        m[j][i] = aji;
    };
    let chain = |b: &mut dyn FnMut(usize, usize, i64, i64), from: usize, to: usize| {
        for i in from..to {
            b(i, i + 1, -1, -1);
        }
    };
    match (label.family, label.r) {
        (A, 1) => {
            if n == 1 {
                bond(0, 1, -2, -2);
            } else {
                chain(&mut bond, 0, n);
                bond(n, 0, -1, -1);
            }
        }
        (B, 1) => {
            chain(&mut bond, 1, n - 1);
            bond(0, 2, -1, -1);
            bond(n - 1, n, -1, -2);
        }
        (C, 1) => {
            bond(0, 1, -1, -2);
            chain(&mut bond, 1, n - 1);
            bond(n - 1, n, -2, -1);
        }
        (D, 1) => {
            chain(&mut bond, 1, n - 2);
            bond(0, 2, -1, -1);
            bond(n - 2, n - 1, -1, -1);
            bond(n - 2, n, -1, -1);
        }
        (E, 1) => match n {
            6 => {
                chain(&mut bond, 1, 5);
                bond(3, 6, -1, -1);
                bond(6, 0, -1, -1);
            }
            7 => {
                chain(&mut bond, 0, 6);
                bond(3, 7, -1, -1);
            }
            _ => {
                chain(&mut bond, 0, 7);
                bond(5, 8, -1, -1);
            }
        },
        (F, 1) => {
            chain(&mut bond, 0, 2);
            bond(2, 3, -1, -2);
            bond(3, 4, -1, -1);
        }
        (G, 1) => {
            bond(0, 1, -1, -1);
            bond(1, 2, -1, -3);
        }
        (A, 2) if label.big_n.is_multiple_of(2) => {
            if n == 1 {
                bond(0, 1, -4, -1);
            } else {
                bond(0, 1, -2, -1);
                chain(&mut bond, 1, n - 1);
                bond(n - 1, n, -2, -1);
            }
        }
        (A, 2) => {
            if n == 2 {
                bond(0, 2, -2, -1);
                bond(1, 2, -2, -1);
            } else {
                chain(&mut bond, 1, n - 1);
                bond(0, 2, -1, -1);
                bond(n - 1, n, -2, -1);
            }
        }
        (D, 2) => {
            bond(0, 1, -2, -1);
            chain(&mut bond, 1, n - 1);
            bond(n - 1, n, -1, -2);
        }
        (E, 2) => {
            chain(&mut bond, 0, 2);
            bond(2, 3, -2, -1);
            bond(3, 4, -1, -1);
        }
        (D, 3) => {
            bond(0, 1, -1, -1);
            bond(1, 2, -3, -1);
        }
        _ => unreachable!("label validated on construction"),
    }
    m
}

/// Map from nodes of `g` to nodes of its dual algebra (identity except for
/// the self-dual `A^(2)_{2n}`, whose transposed diagram is reversed).
fn dual_node_map(label: &AlgebraLabel) -> Vec<usize> {
    let n = label.n;
    if label.is_a_even_twisted() {
        (0..=n).map(|i| n - i).collect()
    } else {
        (0..=n).collect()
    }
}

/// Kind of a finite-dimensional simple Lie algebra used as `g̊`, `g_0̄` or
/// as the character algebra `g'` of a Q-system solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteType {
    pub family: Family,
    pub rank: usize,
}

impl FiniteType {
    pub fn new(family: Family, rank: usize) -> FiniteType {
        FiniteType { family, rank }
    }

    /// Parse a label such as `B2` or `G2`.
    pub fn parse(s: &str) -> Result<FiniteType> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars.next().and_then(Family::from_char);
        let rank = chars.as_str().parse::<usize>().ok().filter(|&r| r >= 1);
        match (family, rank) {
            (Some(family), Some(rank)) => Ok(FiniteType { family, rank }),
            _ => Err(Error::Parse(format!("bad finite type '{}'", s))),
        }
    }

    /// Cartan matrix `A_{ij} = 2(α_i|α_j)/(α_i|α_i)` in Bourbaki enumeration
    /// (the last node is the short root for `B_n` and the long root for `C_n`;
    /// for `G_2` node 1 is long unless `short_first` is requested through
    /// [`FiniteType::g2_short_first`]).
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        use Family::*;
        let n = self.rank;
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = 2;
            if i + 1 < n {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
        match self.family {
            A => {}
            B if n >= 2 => m[n - 1][n - 2] = -2,
            C if n >= 2 => m[n - 2][n - 1] = -2,
            D if n >= 3 => {
                m[n - 2][n - 1] = 0;
                m[n - 1][n - 2] = 0;
                m[n - 3][n - 1] = -1;
                m[n - 1][n - 3] = -1;
            }
            E => {
                // Kac's enumeration: chain 1..n-1, node n attached to node 3
                // (node 5 for E_8).
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            m[i][j] = 0;
                        }
                    }
                }
                for i in 0..n - 2 {
                    m[i][i + 1] = -1;
                    m[i + 1][i] = -1;
                }
                let hub = if n == 8 { 4 } else { 2 };
                m[hub][n - 1] = -1;
                m[n - 1][hub] = -1;
            }
            F => m[1][2] = -2,
            G => m[1][0] = -3,
            _ => {}
        }
        m
    }

    /// Dimension of the adjoint representation.
    pub fn dim(&self) -> i64 {
        use Family::*;
        let n = self.rank as i64;
        match self.family {
            A => n * (n + 2),
            B | C => n * (2 * n + 1),
            D => n * (2 * n - 1),
            E => match n {
                6 => 78,
                7 => 133,
                _ => 248,
            },
            F => 52,
            G => 14,
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Basis of a [`WeightVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Basis {
    /// Fundamental weights `Λ̄_a` of `g̊`.
    FundamentalWeights,
    /// Simple roots `α_a` of `g̊`.
    SimpleRoots,
}

/// Weight of `g̊` with exact coordinates in a chosen basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightVector {
    pub coords: Vec<Q>,
    pub basis: Basis,
}

impl WeightVector {
    /// Weight with integer coordinates in the fundamental-weight basis.
    pub fn fundamental(coords: &[i64]) -> WeightVector {
        WeightVector {
            coords: coords.iter().map(|&c| Q::from_integer(c)).collect(),
            basis: Basis::FundamentalWeights,
        }
    }

    /// Weight with exact coordinates in the simple-root basis.
    pub fn roots(coords: Vec<Q>) -> WeightVector {
        WeightVector { coords, basis: Basis::SimpleRoots }
    }

    /// Integer coordinates, if all coordinates are integral.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| if c.is_integer() { Some(c.to_integer()) } else { None }).collect()
    }
}

/// Complete Cartan/Kac description of one affine algebra.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraDatum {
    pub label: AlgebraLabel,
    /// Affine Cartan matrix on nodes `0..=n`.
    pub affine_cartan: Vec<Vec<i64>>,
    /// Kac marks `a_i`, `i ∈ 0..=n`.
    pub kac_marks: Vec<i64>,
    /// Dual Kac marks `a∨_i`, `i ∈ 0..=n`.
    pub dual_marks: Vec<i64>,
    /// Dual Coxeter number `h∨ = Σ a∨_i`.
    pub dual_coxeter: i64,
    /// `t_i` for all nodes `i ∈ 0..=n`.
    pub t_all: Vec<i64>,
    /// `t∨_i` for all nodes `i ∈ 0..=n`.
    pub t_dual_all: Vec<i64>,
    /// `ε_a`, `a ∈ 1..=n` (stored at index `a-1`).
    pub eps: Vec<i64>,
    /// `(α̃_a|α̃_b)` on `1..=n` (0-based indices).
    pub pairing: Vec<Vec<Q>>,
    /// Cartan matrix of `g_0̄`.
    pub cartan_g0: Vec<Vec<i64>>,
    /// Cartan matrix of `g̊` (affine matrix with node 0 removed).
    pub cartan_gcirc: Vec<Vec<i64>>,
    /// Type of `g̊`.
    pub gcirc_type: FiniteType,
    /// Type of `g_0̄`.
    pub g0_type: FiniteType,
    /// `dim X_N`.
    pub dim_xn: i64,
    /// Diagram automorphism `σ` of `X_N` on `1..=n` for the nontwisted
    /// simply-laced families (1-based images, index `a-1`).
    pub sigma: Option<Vec<usize>>,
    #[serde(skip)]
    gcirc_inverse: Vec<Vec<Q>>,
    #[serde(skip)]
    g0_inverse: Vec<Vec<Q>>,
}

/// Null vector (smallest positive integer vector `x` with `M x = 0`).
fn null_vector(m: &[Vec<i64>]) -> Option<Vec<i64>> {
    let size = m.len();
    // Drop node 0 and solve the remaining system with x_0 = 1.
    let sub: Vec<Vec<Q>> =
        (1..size).map(|i| (1..size).map(|j| Q::from_integer(m[i][j])).collect()).collect();
    let rhs: Vec<Q> = (1..size).map(|i| Q::from_integer(-m[i][0])).collect();
    let inv = invert(&sub)?;
    let mut x = vec![Q::one()];
    x.extend(mat_vec(&inv, &rhs));
    let den = x.iter().fold(1i64, |acc, v| acc.lcm(v.denom()));
    let ints: Vec<i64> = x.iter().map(|v| (v * Q::from_integer(den)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, v| acc.gcd(v));
    let ints: Vec<i64> = ints.iter().map(|v| v / g).collect();
    // Check the remaining row.
    let ok = (0..size).all(|i| (0..size).map(|j| m[i][j] * ints[j]).sum::<i64>() == 0);
    if ok && ints.iter().all(|v| *v > 0) {
        Some(ints)
    } else {
        None
    }
}

/// Exact inverse of a square rational matrix (None if singular).
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn to_q(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().map(|&v| Q::from_integer(v)).collect()).collect()
}

/// Load the datum for an admitted label.
pub fn load_algebra(label: &AlgebraLabel) -> Result<AlgebraDatum> {
    AlgebraDatum::new(label)
}

impl AlgebraDatum {
    /// Build and validate the datum of `label`.
    pub fn new(label: &AlgebraLabel) -> Result<AlgebraDatum> {
        let label = AlgebraLabel::new(label.family, label.r, label.big_n)?;
        let n = label.n;
        let cartan = affine_cartan_matrix(&label);
        let kac_marks = delta_expansion(&label);
        // Dual marks: δ-list of the dual algebra, read through the node map.
        let dual_marks: Vec<i64> = {
            let dual = label.dual();
            let dl = delta_expansion(&dual);
            let map = dual_node_map(&label);
            (0..=n).map(|i| dl[map[i]]).collect()
        };
        let transposed: Vec<Vec<i64>> = (0..=n).map(|i| (0..=n).map(|j| cartan[j][i]).collect()).collect();
        let internal = |what: &str| Error::UnknownAlgebra(format!("{}: inconsistent {}", label, what));
        if null_vector(&cartan).as_deref() != Some(&kac_marks[..]) {
            return Err(internal("Kac marks"));
        }
        if null_vector(&transposed).as_deref() != Some(&dual_marks[..]) {
            return Err(internal("dual marks"));
        }
        let dual_coxeter = dual_marks.iter().sum();
        let a0 = kac_marks[0];
        let av0 = dual_marks[0];
        let t_all: Vec<i64> = (0..=n)
            .map(|i| {
                let ratio = Q::new(kac_marks[i], dual_marks[i]);
                ratio.max(Q::from_integer(av0)).to_integer()
            })
            .collect();
        let t_dual_all: Vec<i64> = (0..=n)
            .map(|i| {
                let ratio = Q::new(dual_marks[i], kac_marks[i]);
                ratio.max(Q::from_integer(a0)).to_integer()
            })
            .collect();
        let eps: Vec<i64> =
            (1..=n).map(|a| if label.is_a_even_twisted() && a == n { 2 } else { 1 }).collect();
        let cartan_gcirc: Vec<Vec<i64>> = (1..=n).map(|i| (1..=n).map(|j| cartan[i][j]).collect()).collect();
        let gcirc_type = classify_finite(&cartan_gcirc, &label)?;
        let g0_type = if label.is_a_even_twisted() { FiniteType::new(Family::B, n) } else { gcirc_type };
        let cartan_g0 = if label.is_a_even_twisted() { g0_type.cartan() } else { cartan_gcirc.clone() };
        // (α̃_a|α̃_b) = t∨_a C^{g0}_{ab} / (ε_a t_a)
        let pairing: Vec<Vec<Q>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| Q::new(t_dual_all[a + 1] * cartan_g0[a][b], eps[a] * t_all[a + 1]))
                    .collect()
            })
            .collect();
        let dim_xn = match (label.family, label.r) {
            (Family::A, 2) => FiniteType::new(Family::A, label.big_n).dim(),
            (Family::D, 2) | (Family::D, 3) => FiniteType::new(Family::D, label.big_n).dim(),
            (Family::E, 2) => FiniteType::new(Family::E, 6).dim(),
            _ => gcirc_type.dim(),
        };
        let sigma = match (label.family, label.r) {
            (Family::A, 1) if n >= 2 => Some((1..=n).map(|a| n + 1 - a).collect()),
            (Family::D, 1) if n == 4 => Some(vec![3, 2, 4, 1]),
            (Family::D, 1) => Some((1..=n).map(|a| if a == n - 1 { n } else if a == n { n - 1 } else { a }).collect()),
            (Family::E, 1) if n == 6 => Some(vec![5, 4, 3, 2, 1, 6]),
            _ => None,
        };
        let gcirc_inverse = invert(&to_q(&cartan_gcirc)).ok_or_else(|| internal("g̊ Cartan"))?;
        let g0_inverse = invert(&to_q(&cartan_g0)).ok_or_else(|| internal("g0 Cartan"))?;
        let datum = AlgebraDatum {
            label,
            affine_cartan: cartan,
            kac_marks,
            dual_marks,
            dual_coxeter,
            t_all,
            t_dual_all,
            eps,
            pairing,
            cartan_g0,
            cartan_gcirc,
            gcirc_type,
            g0_type,
            dim_xn,
            sigma,
            gcirc_inverse,
            g0_inverse,
        };
        datum.validate()?;
        Ok(datum)
    }

    /// Check the structural identities relating marks, `t`, `ε` and pairings.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let fail = |what: &str| Err(Error::UnknownAlgebra(format!("{}: {} violated", self.label, what)));
        // r a_0 Σ 1/t∨_a = N
        let s: Q = (1..=n).map(|a| Q::new(1, self.t_dual(a))).sum();
        if s * Q::from_integer(self.label.r as i64 * self.a0()) != Q::from_integer(self.label.big_n as i64) {
            return fail("r a0 Σ 1/t∨ = N");
        }
        for a in 1..=n {
            for b in 1..=n {
                if self.pairing(a, b)? != self.pairing(b, a)? {
                    return fail("pairing symmetry");
                }
                let lhs = Q::new(self.eps(a) * self.t(a), self.t_dual(a)) * self.pairing(a, b)?;
                if lhs != Q::from_integer(self.cartan_g0[a - 1][b - 1]) {
                    return fail("g0 Cartan reconstruction");
                }
            }
            let acc = Q::new(2 * self.t_dual(a), self.t(a)) / self.pairing(a, a)?;
            if acc != Q::from_integer(self.eps(a)) {
                return fail("2t∨/(t|α̃|²) = ε");
            }
        }
        let long = (1..=n).map(|a| self.pairing(a, a).unwrap()).max().unwrap();
        let expect_long = if self.label.is_a_even_twisted() && n == 1 { 2 } else { 2 * self.label.r as i64 };
        if long != Q::from_integer(expect_long) {
            return fail("long-root normalization");
        }
        Ok(())
    }

    /// Rank `n`.
    pub fn n(&self) -> usize {
        self.label.n
    }

    /// `a_0`.
    pub fn a0(&self) -> i64 {
        self.kac_marks[0]
    }

    /// `t_a` for `a ∈ 1..=n`.
    pub fn t(&self, a: usize) -> i64 {
        self.t_all[a]
    }

    /// `t∨_a` for `a ∈ 1..=n`.
    pub fn t_dual(&self, a: usize) -> i64 {
        self.t_dual_all[a]
    }

    /// `ε_a` for `a ∈ 1..=n`.
    pub fn eps(&self, a: usize) -> i64 {
        self.eps[a - 1]
    }

    /// `(α̃_a|α̃_b)` for `1 ≤ a, b ≤ n`.
    pub fn pairing(&self, a: usize, b: usize) -> Result<Q> {
        let n = self.n();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::IndexOutOfRange(format!("pairing({}, {}) with n = {}", a, b, n)));
        }
        Ok(self.pairing[a - 1][b - 1])
    }

    /// Convert a weight given in `Λ̄`-coordinates to `α`-coordinates of `g̊`.
    pub fn to_root_coords(&self, lambda: &WeightVector) -> WeightVector {
        match lambda.basis {
            Basis::SimpleRoots => lambda.clone(),
            Basis::FundamentalWeights => {
                // λ = Σ x_j α_j with α_j = Σ_i A_{ij} Λ̄_i, so A x = λ.
                WeightVector::roots(mat_vec(&self.gcirc_inverse, &lambda.coords))
            }
        }
    }

    /// Convert a weight in `α`-coordinates back to `Λ̄`-coordinates.
    pub fn to_fundamental_coords(&self, lambda: &WeightVector) -> WeightVector {
        match lambda.basis {
            Basis::FundamentalWeights => lambda.clone(),
            Basis::SimpleRoots => WeightVector {
                coords: mat_vec(&to_q(&self.cartan_gcirc), &lambda.coords),
                basis: Basis::FundamentalWeights,
            },
        }
    }

    /// `α`-coordinates of an integral weight (exact rationals).
    pub fn root_coords(&self, lambda: &[i64]) -> Vec<Q> {
        self.to_root_coords(&WeightVector::fundamental(lambda)).coords
    }

    /// `α̃`-coordinates of `ι(λ)` for `λ` in `Λ̄`-coordinates.
    pub fn iota_root_coords(&self, lambda: &[i64]) -> Vec<Q> {
        let tilde: Vec<Q> = lambda.iter().enumerate().map(|(a, &x)| Q::from_integer(x * self.eps[a])).collect();
        mat_vec(&self.g0_inverse, &tilde)
    }

    /// `(ι(λ)|ι(μ))` for weights in `Λ̄`-coordinates.
    pub fn iota_form(&self, lambda: &[i64], mu: &[i64]) -> Q {
        let x = self.iota_root_coords(lambda);
        let y = self.iota_root_coords(mu);
        self.root_form(&x, &y)
    }

    /// Bilinear form on `α̃`-coordinates.
    pub fn root_form(&self, x: &[Q], y: &[Q]) -> Q {
        let n = self.n();
        let mut s = Q::zero();
        for a in 0..n {
            for b in 0..n {
                s += x[a] * y[b] * self.pairing[a][b];
            }
        }
        s
    }

    /// `(α_a|α_b)` of `g̊` with long roots of squared length `2r`.
    pub fn gcirc_pairing(&self, a: usize, b: usize) -> Q {
        // (α_a|α_a) = 2 ε_a t∨_a / (a_0 t_a)
        let len = Q::new(2 * self.eps(a) * self.t_dual(a), self.a0() * self.t(a));
        Q::from_integer(self.cartan_gcirc[a - 1][b - 1]) * len / Q::from_integer(2)
    }

    /// `(λ|μ)` of `g̊` for weights in `Λ̄`-coordinates.
    pub fn gcirc_form(&self, lambda: &[i64], mu: &[i64]) -> Q {
        let x = self.root_coords(lambda);
        let y = self.root_coords(mu);
        let n = self.n();
        let mut s = Q::zero();
        for a in 1..=n {
            for b in 1..=n {
                s += x[a - 1] * y[b - 1] * self.gcirc_pairing(a, b);
            }
        }
        s
    }

    /// Simple reflection `s_i` of `g̊` acting on `Λ̄`-coordinates.
    pub fn weyl_reflect(&self, i: usize, lambda: &[i64]) -> Result<Vec<i64>> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange(format!("reflection s_{} with n = {}", i, n)));
        }
        let li = lambda[i - 1];
        // α_i = Σ_j A_{ji} Λ̄_j
        Ok((0..n).map(|j| lambda[j] - li * self.cartan_gcirc[j][i - 1]).collect())
    }

    /// Apply a reduced or unreduced word `s_{w_1} s_{w_2} ... s_{w_k}`
    /// (rightmost letter acts first).
    pub fn weyl_apply(&self, word: &[usize], lambda: &[i64]) -> Result<Vec<i64>> {
        let mut v = lambda.to_vec();
        for &i in word.iter().rev() {
            v = self.weyl_reflect(i, &v)?;
        }
        Ok(v)
    }

    /// The dot action `w(λ + ρ̄) − ρ̄`.
    pub fn weyl_dot(&self, word: &[usize], lambda: &[i64]) -> Result<Vec<i64>> {
        let shifted: Vec<i64> = lambda.iter().map(|x| x + 1).collect();
        Ok(self.weyl_apply(word, &shifted)?.into_iter().map(|x| x - 1).collect())
    }

    /// `B_{bk,aj}` computed from the min-expression.
    pub fn b_coeff(&self, b: usize, k: i64, a: usize, j: i64) -> i64 {
        b_coeff_min(self.t(b), self.t(a), k, j)
    }

    /// Level-`l` index set `H_l` (or `H̄_l` when `bar` is set) as `(a, i)`.
    pub fn h_set(&self, l: i64, bar: bool) -> Vec<(usize, i64)> {
        let mut v = Vec::new();
        for a in 1..=self.n() {
            let top = self.t(a) * l - if bar { 1 } else { 0 };
            for i in 1..=top {
                v.push((a, i));
            }
        }
        v
    }

    /// JSON document describing the datum.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("datum serializes")
    }
}

fn classify_finite(c: &[Vec<i64>], label: &AlgebraLabel) -> Result<FiniteType> {
    use Family::*;
    let n = c.len();
    let candidates: Vec<FiniteType> = match (label.family, label.r) {
        (A, 1) => vec![FiniteType::new(A, n)],
        (B, 1) => vec![FiniteType::new(B, n)],
        (C, 1) | (A, 2) => vec![FiniteType::new(C, n)],
        (D, 1) => vec![FiniteType::new(D, n)],
        (E, 1) => vec![FiniteType::new(E, n)],
        (F, 1) | (E, 2) => vec![FiniteType::new(F, 4)],
        (G, 1) | (D, 3) => vec![FiniteType::new(G, 2)],
        (D, 2) => vec![FiniteType::new(B, n)],
        _ => vec![],
    };
    candidates
        .into_iter()
        .next()
        .ok_or_else(|| Error::UnknownAlgebra(label.to_string()))
}

/// `B_{bk,aj} = 2min(t_a k, t_b j) − min(t_a k, t_b(j+1)) − min(t_a k, t_b(j−1))`.
pub fn b_coeff_min(tb: i64, ta: i64, k: i64, j: i64) -> i64 {
    2 * (ta * k).min(tb * j) - (ta * k).min(tb * (j + 1)) - (ta * k).min(tb * (j - 1))
}

/// The same coefficient through its Kronecker-delta case form.
pub fn b_coeff_cases(tb: i64, ta: i64, k: i64, j: i64) -> i64 {
    let d = |x: i64, y: i64| i64::from(x == y);
    match (tb, ta) {
        (2, 1) => 2 * d(k, 2 * j) + d(k, 2 * j + 1) + d(k, 2 * j - 1),
        (3, 1) => {
            3 * d(k, 3 * j) + 2 * d(k, 3 * j + 1) + 2 * d(k, 3 * j - 1) + d(k, 3 * j + 2) + d(k, 3 * j - 2)
        }
        _ => tb * d(ta * k, tb * j),
    }
}

/// `K^{(l)}_{jk} = min(j,k) − jk/l`.
pub fn k_coeff(l: i64, j: i64, k: i64) -> Q {
    Q::from_integer(j.min(k)) - Q::new(j * k, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(s: &str) -> AlgebraDatum {
        load_algebra(&AlgebraLabel::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn all_small_labels_load() {
        for l in AlgebraLabel::all_up_to_rank(8) {
            datum(&l.to_string());
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(AlgebraLabel::parse("B2~1").is_err());
        assert!(AlgebraLabel::parse("D3~1").is_err());
        assert!(AlgebraLabel::parse("E9~1").is_err());
        assert!(AlgebraLabel::parse("A1~2").is_err());
    }

    #[test]
    fn parse_spellings() {
        assert_eq!(AlgebraLabel::parse("A(2)_2").unwrap(), AlgebraLabel::parse("a2~2").unwrap());
        assert_eq!(AlgebraLabel::parse("D4~3").unwrap().n, 2);
        assert_eq!(AlgebraLabel::parse("d(2)_3").unwrap().n, 2);
    }

    #[test]
    fn t_values() {
        let d = datum("A2~2");
        assert_eq!((d.t(1), d.t_dual(1)), (1, 2));
        let d = datum("C2~1");
        assert_eq!((d.t(1), d.t(2)), (2, 1));
        assert_eq!((d.t_dual(1), d.t_dual(2)), (1, 1));
        let d = datum("A1~1");
        assert_eq!(d.kac_marks, vec![1, 1]);
        assert_eq!(d.dual_marks, vec![1, 1]);
        assert_eq!(d.dual_coxeter, 2);
    }
}
