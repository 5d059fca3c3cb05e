use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::GVector;

use super::lattice::{box_size, keyed_min, par_box_fold};
use super::section::{a_norm, SectionModel};
use super::strip::StripGrid;
use super::EstimateError;

/// Where the minimum ratio was attained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonArgmin {
    pub h: Vec<i64>,
    pub z: Complex64,
    pub sample: usize,
    /// Level `k` maximizing `|φ − v|_k y^k`.
    pub level: usize,
}

/// A scanned pair whose maximizing level `k > 0` sees no component of `u`
/// at levels `>= k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingViolation {
    pub h: Vec<i64>,
    pub sample: usize,
    pub level: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    /// `min_{u,z} max_k |φ(u; z) − v|_k y^k / A(u, z)` over `u ∉ Ker N`.
    pub epsilon: f64,
    pub argmin: Option<EpsilonArgmin>,
    pub grid: StripGrid,
    pub bound: i64,
    pub vectors_scanned: u64,
    pub pairs_scanned: u64,
    /// Pairs whose maximizing level is positive.
    pub positive_level_pairs: u64,
    pub violations: u64,
    pub first_violation: Option<VanishingViolation>,
}

/// Components below this are treated as zero when testing `u_k = 0`; the
/// bigraded coordinates of lattice vectors are multiples of `1/d` for a
/// small lattice index `d`.
const LEVEL_ZERO: f64 = 1e-9;

/// Checks the dimension of a fiber target and converts it to floats.
pub(crate) fn target_values(
    model: &SectionModel,
    v: &GVector,
) -> Result<Vec<Complex64>, EstimateError> {
    if v.dim() != model.fiber_dim() {
        return Err(EstimateError::TargetDimension {
            expected: model.fiber_dim(),
            found: v.dim(),
        });
    }
    Ok(v.to_complex())
}

#[derive(Default)]
struct Acc {
    best: Option<(f64, (Vec<i64>, usize, usize))>,
    vectors: u64,
    pairs: u64,
    positive: u64,
    violations: u64,
    first_violation: Option<(Vec<i64>, usize, usize, f64)>,
}

fn merge(a: Acc, b: Acc) -> Acc {
    let best = keyed_min(a.best, b.best);
    let first_violation = match (a.first_violation, b.first_violation) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if (&y.0, y.1) < (&x.0, x.1) { y } else { x }),
    };
    Acc {
        best,
        vectors: a.vectors + b.vectors,
        pairs: a.pairs + b.pairs,
        positive: a.positive + b.positive,
        violations: a.violations + b.violations,
        first_violation,
    }
}

/// Empirical constant of the norm estimate for sections approaching a
/// target `v` in the invariant part of the fiber.
pub fn estimate_epsilon(
    model: &SectionModel,
    v: &GVector,
    bound: i64,
    grid: &StripGrid,
) -> Result<EstimateReport, EstimateError> {
    model.require_hodge()?;
    if bound < 1 {
        return Err(EstimateError::InvalidParameter(format!(
            "coefficient bound must be >= 1, got {bound}"
        )));
    }
    let target = target_values(model, v)?;
    if !model.invariant_part().contains(v) {
        return Err(EstimateError::TargetNotInvariant);
    }
    if box_size(model.rank(), bound) == u64::MAX {
        return Err(EstimateError::InvalidParameter(
            "search box is too large".into(),
        ));
    }
    let samples = grid.samples();
    let depth = model.degree();
    let fiber = model.fiber_dim();
    let symmetric = v.is_zero();

    let acc = par_box_fold(
        model.rank(),
        bound,
        Acc::default,
        |acc, h| {
            if model.in_kernel(h) {
                return;
            }
            // with v = 0, -h gives the same ratios; keep the smaller key
            let weight = if symmetric {
                match h.iter().find(|&&x| x != 0) {
                    Some(&x) if x > 0 => return,
                    _ => 2,
                }
            } else {
                1
            };
            let u_levels = model
                .lattice_level_norms(h)
                .expect("Hodge mode has norm coordinates");
            // present_from[k]: some component of u at level >= k is nonzero
            let mut present_from = vec![false; depth + 2];
            for k in (0..=depth).rev() {
                present_from[k] = present_from[k + 1] || u_levels[k] > LEVEL_ZERO;
            }
            let poly = model.poly(h);
            let levels = model.fiber_levels();
            let mut norms = vec![0.0; depth + 1];
            acc.vectors += weight;
            for s in &samples {
                let y = s.y();
                let a = a_norm(&u_levels, y);
                norms.iter_mut().for_each(|n| *n = 0.0);
                for c in 0..fiber {
                    let mut value = Complex64::new(0.0, 0.0);
                    for l in (0..poly.len() / fiber).rev() {
                        value = value * s.z + poly[l * fiber + c];
                    }
                    let d = value - target[c];
                    norms[levels[c]] += (d.re * d.re + d.im * d.im).sqrt();
                }
                let (mut top, mut level) = (f64::NEG_INFINITY, 0);
                let mut yk = 1.0;
                for (k, n) in norms.iter().enumerate() {
                    let r = n * yk / a;
                    if r > top {
                        top = r;
                        level = k;
                    }
                    yk *= y;
                }
                acc.pairs += weight;
                if level > 0 {
                    acc.positive += weight;
                    if !present_from[level] {
                        acc.violations += weight;
                        let replace = match &acc.first_violation {
                            None => true,
                            Some(x) => (h, s.index) < (&x.0[..], x.1),
                        };
                        if replace {
                            acc.first_violation = Some((h.to_vec(), s.index, level, top));
                        }
                    }
                }
                if acc.best.as_ref().is_none_or(|b| top <= b.0) {
                    acc.best =
                        keyed_min(acc.best.take(), Some((top, (h.to_vec(), s.index, level))));
                }
            }
        },
        merge,
    );

    let argmin = acc.best.as_ref().map(|(_, (h, i, level))| EpsilonArgmin {
        h: h.clone(),
        z: samples[*i].z,
        sample: *i,
        level: *level,
    });
    Ok(EstimateReport {
        epsilon: acc.best.map(|b| b.0).unwrap_or(f64::INFINITY),
        argmin,
        grid: *grid,
        bound,
        vectors_scanned: acc.vectors,
        pairs_scanned: acc.pairs,
        positive_level_pairs: acc.positive,
        violations: acc.violations,
        first_violation: acc
            .first_violation
            .map(|(h, sample, level, ratio)| VanishingViolation {
                h,
                sample,
                level,
                ratio,
            }),
    })
}
