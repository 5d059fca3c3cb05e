use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::linalg::{ratio_to_f64, GVector, Matrix};

use super::lattice::{keyed_min, par_box_fold};
use super::section::SectionModel;
use super::EstimateError;

/// Smallest `ℓ¹` norm of `U h` over nonzero integer `h` in the box.
#[derive(Clone, Debug, Serialize)]
pub struct MinNormReport {
    pub value: f64,
    /// Exact value as a reduced fraction string.
    pub value_exact: String,
    pub argmin: Vec<i64>,
    pub bound: i64,
    /// Every `h` outside the box has norm at least this.
    pub tail_lower_bound: f64,
    /// True when `tail_lower_bound >= value`, so the box minimum is the
    /// minimum over the whole lattice.
    pub certified: bool,
}

fn exact_l1(u: &Matrix, h: &[i64]) -> BigRational {
    let x = u
        .apply(&GVector::from_ints(h))
        .expect("square coordinate map");
    x.iter().fold(BigRational::zero(), |acc, s| {
        assert!(s.im.is_zero(), "coordinate map must be rational");
        acc + s.re.abs()
    })
}

/// `E = min_{h ≠ 0, |h_i| <= bound} |U h|_1` for a rational coordinate map
/// `U`, with a tail certificate from `|U h|_1 >= |h|_∞ / max |U⁻¹_ij|`.
pub fn lattice_min_norm_with(u: &Matrix, bound: i64) -> Result<MinNormReport, EstimateError> {
    if bound < 1 {
        return Err(EstimateError::InvalidParameter(format!(
            "coefficient bound must be >= 1, got {bound}"
        )));
    }
    if !u.is_real() {
        return Err(EstimateError::InvalidParameter(
            "coordinate map must be rational".into(),
        ));
    }
    let n = u.rows();
    let uf: Vec<f64> = u.to_complex().iter().map(|c| c.re).collect();
    let best = par_box_fold(
        n,
        bound,
        || None::<(f64, Vec<i64>)>,
        |acc, h| {
            if h.iter().all(|&x| x == 0) {
                return;
            }
            let v: f64 = (0..n)
                .map(|i| {
                    uf[i * n..(i + 1) * n]
                        .iter()
                        .zip(h)
                        .map(|(a, &b)| a * b as f64)
                        .sum::<f64>()
                        .abs()
                })
                .sum();
            *acc = keyed_min(acc.take(), Some((v, h.to_vec())));
        },
        keyed_min,
    );
    let (_, argmin) =
        best.ok_or_else(|| EstimateError::InvalidParameter("empty lattice".into()))?;
    let exact = exact_l1(u, &argmin);
    let value = ratio_to_f64(&exact);
    let inv = u
        .inverse()
        .ok_or_else(|| EstimateError::InvalidParameter("coordinate map is singular".into()))?;
    let max_inv = inv
        .entries()
        .iter()
        .map(|s| ratio_to_f64(&s.re.abs()))
        .fold(0.0, f64::max);
    let tail = (bound + 1) as f64 / max_inv;
    Ok(MinNormReport {
        value,
        value_exact: crate::linalg::format_ratio(&exact),
        argmin,
        bound,
        tail_lower_bound: tail,
        certified: tail >= value,
    })
}

/// `E(G_Z)` for the rational bigraded norm of a section model.
pub fn lattice_min_norm(model: &SectionModel, bound: i64) -> Result<MinNormReport, EstimateError> {
    let coords = model.norm_coordinates().ok_or_else(|| {
        EstimateError::NotAdmissible("no rational bigrading for this orbit".into())
    })?;
    lattice_min_norm_with(&coords.matrix, bound)
}
