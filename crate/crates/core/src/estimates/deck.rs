use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::GScalar;

use super::section::SectionModel;

/// Comparison of `φ(h; z + 1)` with `φ(exp(N) h; z)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeckCheck {
    pub h: Vec<i64>,
    pub moved: Vec<i64>,
    pub z: Complex64,
    /// Largest coordinate difference relative to `1 + |φ|`.
    pub relative_error: f64,
    pub consistent: bool,
}

fn relative(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = 1.0 + a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Float check at a complex point.
pub fn monodromy_consistency(model: &SectionModel, h: &[i64], z: Complex64, tol: f64) -> DeckCheck {
    let moved = model.exp_n_apply(h);
    let left = model.phi(h, z + 1.0);
    let right = model.phi(&moved, z);
    let relative_error = relative(&left, &right);
    DeckCheck {
        h: h.to_vec(),
        moved,
        z,
        relative_error,
        consistent: relative_error <= tol,
    }
}

/// Exact check at a Gaussian rational point.
pub fn monodromy_consistency_exact(model: &SectionModel, h: &[i64], z: &GScalar) -> bool {
    let moved = model.exp_n_apply(h);
    let shifted = z + &GScalar::one();
    model.phi_exact(h, &shifted) == model.phi_exact(&moved, z)
}

/// Largest relative gap between float and exact evaluation of `φ(h; z)`.
pub fn float_exact_gap(model: &SectionModel, h: &[i64], z: &GScalar) -> f64 {
    let exact = model.phi_exact(h, z).to_complex();
    let float = model.phi(h, z.to_complex());
    let scale = exact.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let gap = exact
        .iter()
        .zip(&float)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        gap
    } else {
        gap / scale
    }
}
