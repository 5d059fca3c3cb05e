//! When do the inequalities `a_i <= ε'' Σ_j a_j + Σ_{j<i} C'_{ij} a_j`
//! force `a = 0` for nonnegative `a`?
//!
//! With `M = ε'' J + C'` the system reads `a <= M a`. For a nonnegative
//! matrix a nonzero nonnegative solution exists iff the Perron root of `M`
//! is at least 1.

use serde::Serialize;

use super::EstimateError;

/// Strictly lower triangular coefficients: row `i` holds `C'_{i,0..i}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerTriangular {
    rows: Vec<Vec<f64>>,
}

impl LowerTriangular {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, EstimateError> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i {
                return Err(EstimateError::InvalidParameter(format!(
                    "row {i} must have {i} entries, got {}",
                    row.len()
                )));
            }
            if row.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
                return Err(EstimateError::InvalidParameter(format!(
                    "row {i} must contain positive finite entries"
                )));
            }
        }
        if rows.is_empty() {
            return Err(EstimateError::InvalidParameter(
                "need at least one row".into(),
            ));
        }
        Ok(LowerTriangular { rows })
    }

    /// Number of unknowns, `m + 1`.
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn system(&self, eps2: f64) -> Vec<Vec<f64>> {
        let n = self.size();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| eps2 + if j < i { self.rows[i][j] } else { 0.0 })
                    .collect()
            })
            .collect()
    }
}

fn mul(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Perron root by power iteration with Collatz-Wielandt bounds.
pub fn perron_root(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if m.iter().flatten().all(|&x| x == 0.0) {
        return 0.0;
    }
    if m.iter()
        .enumerate()
        .all(|(i, row)| row[i..].iter().all(|&x| x == 0.0))
    {
        // strictly lower triangular
        return 0.0;
    }
    let mut x = vec![1.0; n];
    let mut estimate = 0.0;
    for _ in 0..100_000 {
        let y = mul(m, &x);
        let ratios: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a / b).collect();
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        estimate = (lo + hi) / 2.0;
        let norm: f64 = y.iter().sum();
        x = y.iter().map(|v| v / norm).collect();
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    estimate
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriangularReport {
    pub eps2: f64,
    pub perron_root: f64,
    /// Only `a = 0` solves the system.
    pub forces_zero: bool,
    /// Best point of the simplex search and its slack
    /// `max_i (a_i − (M a)_i)`; a nonpositive slack is a nonzero solution.
    pub simplex_point: Vec<f64>,
    pub simplex_slack: f64,
    pub agree: bool,
}

fn slack(m: &[Vec<f64>], a: &[f64]) -> f64 {
    mul(m, a)
        .iter()
        .zip(a)
        .map(|(ma, x)| x - ma)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Minimizes the slack over the simplex `Σ a_i = 1`: coarse grid, then
/// pairwise mass transfers with shrinking steps.
pub fn simplex_search(m: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = m.len();
    let steps = match n {
        1 => 1,
        2 => 200,
        3 => 60,
        4 => 24,
        5 => 12,
        _ => 8,
    };
    let mut best = (vec![1.0 / n as f64; n], f64::INFINITY);
    best.1 = slack(m, &best.0);
    let mut counts = vec![0usize; n];
    fn visit(
        i: usize,
        left: usize,
        steps: usize,
        counts: &mut Vec<usize>,
        m: &[Vec<f64>],
        best: &mut (Vec<f64>, f64),
    ) {
        let n = counts.len();
        if i + 1 == n {
            counts[i] = left;
            let a: Vec<f64> = counts.iter().map(|&c| c as f64 / steps as f64).collect();
            let s = slack(m, &a);
            if s < best.1 {
                *best = (a, s);
            }
            return;
        }
        for c in 0..=left {
            counts[i] = c;
            visit(i + 1, left - c, steps, counts, m, best);
        }
    }
    visit(0, steps, steps, &mut counts, m, &mut best);
    let (mut a, mut s) = best;
    let mut delta = 1.0 / steps as f64;
    while delta > 1e-10 {
        let mut moved = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = delta.min(a[j]);
                if d <= 0.0 {
                    continue;
                }
                let mut b = a.clone();
                b[i] += d;
                b[j] -= d;
                let t = slack(m, &b);
                if t < s {
                    a = b;
                    s = t;
                    moved = true;
                }
            }
        }
        if !moved {
            delta /= 2.0;
        }
    }
    (a, s)
}

pub fn triangular_check(c: &LowerTriangular, eps2: f64) -> Result<TriangularReport, EstimateError> {
    if !(eps2 >= 0.0) || !eps2.is_finite() {
        return Err(EstimateError::InvalidParameter(format!(
            "eps2 must be >= 0, got {eps2}"
        )));
    }
    let m = c.system(eps2);
    let rho = perron_root(&m);
    let forces_zero = rho < 1.0;
    let (point, s) = simplex_search(&m);
    let feasible = s <= 1e-12;
    Ok(TriangularReport {
        eps2,
        perron_root: rho,
        forces_zero,
        simplex_point: point,
        simplex_slack: s,
        agree: feasible != forces_zero,
    })
}

/// Largest `k 2^-20 < 1/2` for which the system forces `a = 0`, if any.
pub fn find_eps2(c: &LowerTriangular) -> Option<f64> {
    const RES: u32 = 20;
    let unit = 2f64.powi(-(RES as i32));
    let passes = |k: u64| perron_root(&c.system(k as f64 * unit)) < 1.0;
    let top = (1u64 << (RES - 1)) - 1;
    if !passes(1) {
        return None;
    }
    if passes(top) {
        return Some(top as f64 * unit);
    }
    let (mut lo, mut hi) = (1u64, top);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if passes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo as f64 * unit)
}
