use num_complex::Complex64;
use serde::Serialize;

use super::lattice::{keyed_max, par_box_fold};
use super::section::{a_norm, SectionModel};
use super::strip::StripGrid;
use super::EstimateError;

/// A holomorphic perturbation `M(t) = Σ_l M_l t^l` from the `F^0`
/// complement coordinates to the fiber coordinates; `M_l` is row-major,
/// `fiber × complement`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Perturbation {
    pub rows: usize,
    pub cols: usize,
    pub coefficients: Vec<Vec<Complex64>>,
}

impl Perturbation {
    /// `M(t) = scale · t · E` with `E` the identity on the leading square block.
    pub fn unit(model: &SectionModel, scale: f64) -> Self {
        let (rows, cols) = (model.fiber_dim(), model.complement_dim());
        let mut m1 = vec![Complex64::new(0.0, 0.0); rows * cols];
        for d in 0..rows.min(cols) {
            m1[d * cols + d] = Complex64::new(scale, 0.0);
        }
        Perturbation {
            rows,
            cols,
            coefficients: vec![vec![Complex64::new(0.0, 0.0); rows * cols], m1],
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Perturbation {
            coefficients: self
                .coefficients
                .iter()
                .map(|m| m.iter().map(|x| x * s).collect())
                .collect(),
            ..self.clone()
        }
    }

    /// `M(t) / t` applied to `x`.
    fn apply_divided(&self, t: Complex64, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        let mut tp = Complex64::new(1.0, 0.0);
        for m in self.coefficients.iter().skip(1) {
            for r in 0..self.rows {
                let s: Complex64 = (0..self.cols).map(|c| m[r * self.cols + c] * x[c]).sum();
                out[r] += tp * s;
            }
            tp *= t;
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationReport {
    /// Smallest `C'` with `|M(t) φ''(u; z)|_k <= C' |t| A(u, z)` on the scan.
    pub fitted_constant: f64,
    pub argmax: Option<(Vec<i64>, usize)>,
    /// Largest ratio on the lower and upper halves of the `Im z` levels.
    pub lower_half_max: f64,
    pub upper_half_max: f64,
    /// The ratio does not grow with `Im z` on the scan.
    pub bounded: bool,
    pub bound: i64,
    pub grid: StripGrid,
}

pub fn perturbation_bound_check(
    model: &SectionModel,
    m: &Perturbation,
    bound: i64,
    grid: &StripGrid,
) -> Result<PerturbationReport, EstimateError> {
    model.require_hodge()?;
    if bound < 1 {
        return Err(EstimateError::InvalidParameter(format!(
            "coefficient bound must be >= 1, got {bound}"
        )));
    }
    if m.rows != model.fiber_dim() || m.cols != model.complement_dim() {
        return Err(EstimateError::InvalidParameter(format!(
            "perturbation must be {}x{}, got {}x{}",
            model.fiber_dim(),
            model.complement_dim(),
            m.rows,
            m.cols
        )));
    }
    if m.coefficients.iter().any(|c| c.len() != m.rows * m.cols) {
        return Err(EstimateError::InvalidParameter(
            "perturbation coefficient has the wrong size".into(),
        ));
    }
    if m.coefficients
        .first()
        .is_some_and(|m0| m0.iter().any(|x| *x != Complex64::new(0.0, 0.0)))
    {
        return Err(EstimateError::PerturbationConstant);
    }
    let samples = grid.samples();
    let half = grid.y_levels / 2 * grid.re_steps;
    type Best = Option<(f64, (Vec<i64>, usize))>;
    let (lower, upper): (Best, Best) = par_box_fold(
        model.rank(),
        bound,
        || (None, None),
        |acc, h| {
            if h.iter().all(|&x| x == 0) {
                return;
            }
            let u_levels = model
                .lattice_level_norms(h)
                .expect("Hodge mode has norm coordinates");
            for s in &samples {
                let a = a_norm(&u_levels, s.y());
                let rest = model.complement(h, s.z);
                let image = m.apply_divided(s.t1(), &rest);
                let top = model.level_norms(&image).into_iter().fold(0.0, f64::max) / a;
                let cand = Some((top, (h.to_vec(), s.index)));
                if s.index < half {
                    acc.0 = keyed_max(acc.0.take(), cand);
                } else {
                    acc.1 = keyed_max(acc.1.take(), cand);
                }
            }
        },
        |a, b| (keyed_max(a.0, b.0), keyed_max(a.1, b.1)),
    );
    let lower_half_max = lower.as_ref().map_or(0.0, |b| b.0);
    let upper_half_max = upper.as_ref().map_or(0.0, |b| b.0);
    let best = keyed_max(lower, upper);
    Ok(PerturbationReport {
        fitted_constant: best.as_ref().map_or(0.0, |b| b.0),
        argmax: best.map(|b| b.1),
        lower_half_max,
        upper_half_max,
        bounded: upper_half_max <= lower_half_max * (1.0 + 1e-12),
        bound,
        grid: *grid,
    })
}
