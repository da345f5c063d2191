//! Level-`l` restricted Q-system in the `f`-variables and the Rogers
//! dilogarithm sum rule.
//!
//! This is the only module using floating point: the sum rule is
//! transcendental. The `f`-variables solve
//! `log f^(a)_j = Σ_{(b,k) ∈ H̄_l} (α̃_a|α̃_b)/t∨_b · K^{(t_a t_b l)}_{t_b j, t_a k} log(1 − f^(b)_k)`
//! and are found by damped fixed-point iteration from `f ≡ 1/2`, followed by
//! damped Newton steps where the fixed-point map fails to contract.

use num_traits::ToPrimitive;

use crate::affine_cartan::{k_coeff, load_algebra, AlgebraDatum, AlgebraLabel, Family};
use crate::fermionic::string_n;
use crate::{Error, Result, Q};

/// Iteration cap of the solver.
pub const MAX_ITERATIONS: usize = 100_000;

/// Damped fixed-point steps tried before switching to Newton steps.
pub const FIXED_POINT_STEPS: usize = 2_000;

/// `π²/6`.
pub const PI2_6: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// Solution of the restricted Q-system in `f`-variables.
#[derive(Debug, Clone)]
pub struct FSolution {
    /// `(a, j, f^(a)_j)` over `H̄_l`.
    pub f: Vec<(usize, i64, f64)>,
    /// Sup-norm residual of the defining equations.
    pub residual: f64,
    pub iterations: usize,
}

impl FSolution {
    /// `f^(a)_j`, if `(a, j) ∈ H̄_l`.
    pub fn get(&self, a: usize, j: i64) -> Option<f64> {
        self.f.iter().find(|(b, k, _)| *b == a && *k == j).map(|x| x.2)
    }
}

/// Coefficient matrix `C[(a,j),(b,k)] = (α̃_a|α̃_b)/t∨_b · K^{(t_a t_b l)}_{t_b j, t_a k}`.
fn coefficients(datum: &AlgebraDatum, idx: &[(usize, i64)], l: i64) -> Result<Vec<Vec<f64>>> {
    idx.iter()
        .map(|&(a, j)| {
            idx.iter()
                .map(|&(b, k)| {
                    let (ta, tb) = (datum.t(a), datum.t(b));
                    let c = datum.pairing(a, b)? / Q::from_integer(datum.t_dual(b)) * k_coeff(ta * tb * l, tb * j, ta * k);
                    Ok(c.to_f64().expect("finite rational"))
                })
                .collect()
        })
        .collect()
}

fn residual(c: &[Vec<f64>], f: &[f64]) -> f64 {
    let logs: Vec<f64> = f.iter().map(|x| (1.0 - x).ln()).collect();
    c.iter()
        .zip(f)
        .map(|(row, &fa)| (row.iter().zip(&logs).map(|(c, l)| c * l).sum::<f64>() - fa.ln()).abs())
        .fold(0.0, f64::max)
}

/// Solves the level-`l` restricted Q-system for `f^(a)_j ∈ (0,1)` on `H̄_l`,
/// iterating until the sup-norm residual of the log equations is below `tol`.
/// An empty `H̄_l` (level 1, all `t_a = 1`) yields the empty solution.
pub fn solve_restricted_f(datum: &AlgebraDatum, l: i64, tol: f64) -> Result<FSolution> {
    solve_from(datum, l, tol, 0.5)
}

/// Same as [`solve_restricted_f`] with a constant starting value `f ≡ seed`.
pub fn solve_from(datum: &AlgebraDatum, l: i64, tol: f64, seed: f64) -> Result<FSolution> {
    if l < 1 {
        return Err(Error::InvalidArgument(format!("level {} must be positive", l)));
    }
    // Written negated so that NaN inputs are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(seed > 0.0 && seed < 1.0) || !(tol > 0.0) {
        return Err(Error::InvalidArgument("seed must lie in (0,1) and tol be positive".into()));
    }
    let idx = datum.h_set(l, true);
    let c = coefficients(datum, &idx, l)?;
    let mut f = vec![seed; idx.len()];
    let mut damping = 0.5;
    let mut res = residual(&c, &f);
    let mut it = 0;
    // Phase 1: damped fixed-point iteration with residual-based step acceptance.
    while res >= tol && it < FIXED_POINT_STEPS {
        it += 1;
        let logs: Vec<f64> = f.iter().map(|x| (1.0 - x).ln()).collect();
        let target: Vec<f64> = c.iter().map(|row| row.iter().zip(&logs).map(|(c, l)| c * l).sum::<f64>().exp()).collect();
        loop {
            let trial: Vec<f64> = f
                .iter()
                .zip(&target)
                .map(|(x, t)| ((1.0 - damping) * x + damping * t).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON))
                .collect();
            let r = residual(&c, &trial);
            if r < res || damping < 1e-6 {
                f = trial;
                res = r;
                damping = (damping * 1.5).min(0.5);
                break;
            }
            damping *= 0.5;
        }
    }
    // Phase 2: where the fixed-point map is not contracting, damped Newton
    // steps on the same equations in the variables u = log f.
    let mut u: Vec<f64> = f.iter().map(|x| x.ln()).collect();
    while res >= tol {
        if it >= MAX_ITERATIONS {
            return Err(Error::NonConvergence { iterations: it, residual: res });
        }
        it += 1;
        let m = u.len();
        let g: Vec<f64> = u.iter().map(|&x| x.exp() / (1.0 - x.exp())).collect();
        let logs: Vec<f64> = u.iter().map(|&x| (1.0 - x.exp()).ln()).collect();
        // F(u) = u − C log(1 − e^u), J = I + C diag(e^u / (1 − e^u)).
        let rhs: Vec<f64> = (0..m).map(|a| -(u[a] - c[a].iter().zip(&logs).map(|(c, l)| c * l).sum::<f64>())).collect();
        let jac: Vec<Vec<f64>> =
            (0..m).map(|a| (0..m).map(|b| f64::from(u8::from(a == b)) + c[a][b] * g[b]).collect()).collect();
        let Some(step) = solve_linear(jac, rhs) else {
            return Err(Error::NonConvergence { iterations: it, residual: res });
        };
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(x, d)| (x + t * d).min(-f64::EPSILON)).collect();
            let tf: Vec<f64> = trial.iter().map(|x| x.exp()).collect();
            let r = residual(&c, &tf);
            if r < res || t < 1e-9 {
                u = trial;
                f = tf;
                res = r;
                break;
            }
            t *= 0.5;
        }
    }
    Ok(FSolution { f: idx.iter().zip(&f).map(|(&(a, j), &x)| (a, j, x)).collect(), residual: res, iterations: it })
}

/// Gaussian elimination with partial pivoting; `None` for a singular system.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Rogers dilogarithm `L(x) = Li_2(x) + ½ log x log(1 − x)` on `[0, 1]`.
pub fn rogers_l(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("Rogers dilogarithm needs 0 ≤ x ≤ 1, got {}", x)));
    }
    if x > 0.5 {
        return Ok(PI2_6 - rogers_l(1.0 - x)?);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut li2 = 0.0;
    let mut p = 1.0;
    for k in 1..200 {
        p *= x;
        let term = p / (k * k) as f64;
        li2 += term;
        if term < 1e-18 {
            break;
        }
    }
    Ok(li2 + 0.5 * x.ln() * (1.0 - x).ln())
}

/// Outcome of the dilogarithm sum rule check.
#[derive(Debug, Clone)]
pub struct DilogReport {
    pub algebra: AlgebraLabel,
    pub level: i64,
    pub solution: FSolution,
    /// `a_0 r Σ_{H̄_l} L(f)/t∨_a`.
    pub lhs: f64,
    /// `(π²/6)(l·dim X_N/(l + h∨) − N)`.
    pub rhs: f64,
    /// The same rule summed over `H_l` (with `f^(a)_{t_a l} = 1`) against
    /// `(π²/6) l·dim X_N/(l + h∨)`.
    pub lhs_full: f64,
    pub rhs_full: f64,
    pub abs_err: f64,
    pub pass: bool,
}

impl DilogReport {
    /// JSON report `{algebra, level, f, lhs, rhs, abs_err, …}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "algebra": self.algebra.to_string(),
            "level": self.level,
            "f": self.solution.f.iter().map(|(a, j, x)| serde_json::json!([a, j, x])).collect::<Vec<_>>(),
            "residual": self.solution.residual,
            "iterations": self.solution.iterations,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs_full": self.lhs_full,
            "rhs_full": self.rhs_full,
            "abs_err": self.abs_err,
            "pass": self.pass,
        })
    }
}

/// Solves the restricted system and compares both sides of the sum rule.
pub fn check_dilog_sum(datum: &AlgebraDatum, l: i64, tol: f64) -> Result<DilogReport> {
    let sol = solve_restricted_f(datum, l, (tol * 1e-3).max(1e-15))?;
    let pref = (datum.a0() * datum.label.r as i64) as f64;
    let mut lhs = 0.0;
    for &(a, _, x) in &sol.f {
        lhs += pref * rogers_l(x)? / datum.t_dual(a) as f64;
    }
    let big_n = datum.label.big_n as f64;
    let ratio = (l * datum.dim_xn) as f64 / (l + datum.dual_coxeter) as f64;
    let rhs = PI2_6 * (ratio - big_n);
    // f^(a)_{t_a l} = 1 contributes L(1) = π²/6 per node.
    let lhs_full = lhs + (1..=datum.n()).map(|a| pref * PI2_6 / datum.t_dual(a) as f64).sum::<f64>();
    let rhs_full = PI2_6 * ratio;
    let abs_err = (lhs - rhs).abs().max((lhs_full - rhs_full).abs());
    Ok(DilogReport {
        algebra: datum.label,
        level: l,
        solution: sol,
        lhs,
        rhs,
        lhs_full,
        rhs_full,
        abs_err,
        pass: abs_err < tol,
    })
}

/// Map `τ` from the nodes `1..N` of `X^(1)_N` to the nodes of `X^(r)_N`.
pub fn folding_map(label: &AlgebraLabel) -> Option<Vec<usize>> {
    let big_n = label.big_n;
    let n = label.n;
    let tau: Vec<usize> = match (label.family, label.r) {
        (Family::A, 2) => (1..=big_n).map(|a| a.min(big_n + 1 - a)).collect(),
        // D_3 = A_3: the vector node of D_3 is the middle node of A_3.
        (Family::D, 2) if big_n == 3 => vec![2, 1, 2],
        (Family::D, 2) => (1..=big_n).map(|a| a.min(n)).collect(),
        (Family::E, 2) => (1..=6).map(|a| if a == 6 { 4 } else { a.min(6 - a) }).collect(),
        (Family::D, 3) => vec![1, 2, 1, 1],
        _ => return None,
    };
    Some(tau)
}

/// Untwisted algebra `X^(1)_N` behind a twisted label.
pub fn untwisted_of(label: &AlgebraLabel) -> Result<AlgebraLabel> {
    if label.family == Family::D && label.big_n == 3 {
        return AlgebraLabel::parse("A3~1");
    }
    AlgebraLabel::parse(&format!("{}{}~1", label.family, label.big_n))
}

/// Largest deviation `|f^(a)_j − f'^(b)_j|` over `τ(b) = a` between the
/// twisted solution and that of `X^(1)_N`, on the common index range.
pub fn folding_deviation(label: &AlgebraLabel, l: i64, tol: f64) -> Result<f64> {
    let tau = folding_map(label).ok_or_else(|| Error::Unsupported(format!("{} is not twisted", label)))?;
    let twisted = solve_restricted_f(&load_algebra(label)?, l, tol)?;
    let untwisted = solve_restricted_f(&load_algebra(&untwisted_of(label)?)?, l, tol)?;
    let mut dev: f64 = 0.0;
    let mut compared = 0;
    for (b, &a) in tau.iter().enumerate() {
        for j in 1..l {
            if let (Some(x), Some(y)) = (twisted.get(a, j), untwisted.get(b + 1, j)) {
                dev = dev.max((x - y).abs());
                compared += 1;
            }
        }
    }
    if compared == 0 {
        return Err(Error::InvalidArgument("no common indices to compare".into()));
    }
    Ok(dev)
}

/// Diagnostic comparison of the growth of the coefficients of
/// `N_l(λ, q^{1/a_0})` with the predicted `lim (1−q) log N_l`.
#[derive(Debug, Clone)]
pub struct SlopeReport {
    /// `(π²/6r) · l dim X_N/(l + h∨)`.
    pub predicted: f64,
    /// Estimate `(log c_k)² / 4k` at the largest computed exponent.
    pub fitted: Option<f64>,
    pub relative_deviation: Option<f64>,
    pub note: String,
}

/// Estimates the asymptotic slope from `N_l` computed below `order` and
/// compares it with the prediction. Diagnostic only: no threshold applies.
pub fn asymptotic_slope_check(datum: &AlgebraDatum, lambda: &[i64], l: i64, order: i64) -> Result<SlopeReport> {
    let r = datum.label.r as f64;
    let predicted =
        PI2_6 / r * (l * datum.dim_xn) as f64 / (l + datum.dual_coxeter) as f64;
    let series = string_n(datum, lambda, l, Q::from_integer(order))?;
    let a0 = datum.a0() as f64;
    // Coefficients c_k of N_l(λ, q^{1/a_0}) with k = exponent / a_0 measured
    // from the leading term.
    let terms: Vec<(f64, f64)> = series
        .terms()
        .map(|(e, c)| (e.to_f64().expect("finite exponent"), c.to_f64().unwrap_or(f64::MAX)))
        .collect();
    let Some(&(e0, _)) = terms.first() else {
        return Ok(SlopeReport { predicted, fitted: None, relative_deviation: None, note: "insufficient data".into() });
    };
    // Partial sums S_k of the coefficients, fitted by least squares to
    // log S_k = α√k + β log k + γ over the upper three quarters of the range;
    // the slope estimate is α²/4.
    let mut partial = 0.0;
    let sums: Vec<(f64, f64)> = terms
        .iter()
        .map(|&(e, c)| {
            partial += c;
            ((e - e0) / a0, partial)
        })
        .filter(|&(k, s)| k > 0.0 && s > 0.0)
        .collect();
    let k_max = sums.last().map_or(0.0, |&(k, _)| k);
    let window: Vec<(f64, f64)> = sums.into_iter().filter(|&(k, _)| k >= k_max / 4.0).collect();
    if window.len() < 6 {
        return Ok(SlopeReport { predicted, fitted: None, relative_deviation: None, note: "insufficient data".into() });
    }
    let mut normal = vec![vec![0.0; 3]; 3];
    let mut rhs = vec![0.0; 3];
    for &(k, s) in &window {
        let basis = [k.sqrt(), k.ln(), 1.0];
        for i in 0..3 {
            rhs[i] += basis[i] * s.ln();
            for j in 0..3 {
                normal[i][j] += basis[i] * basis[j];
            }
        }
    }
    let Some(coef) = solve_linear(normal, rhs) else {
        return Ok(SlopeReport { predicted, fitted: None, relative_deviation: None, note: "degenerate fit".into() });
    };
    let fitted = coef[0] * coef[0] / 4.0;
    Ok(SlopeReport {
        predicted,
        fitted: Some(fitted),
        relative_deviation: Some((fitted - predicted).abs() / predicted),
        note: format!("finite-order fit over {} points up to k = {}", window.len(), k_max),
    })
}
