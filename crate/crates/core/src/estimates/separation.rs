use serde::Serialize;

use crate::linalg::GVector;

use super::ball::{BallHit, BallSearch};
use super::epsilon::target_values;
use super::norms::lattice_min_norm;
use super::section::SectionModel;
use super::strip::StripRegion;
use super::EstimateError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparationParams {
    pub radius: f64,
    pub bound: i64,
    pub region: StripRegion,
    /// Empirical constant of the norm estimate, for the heuristic tail
    /// exclusion.
    pub epsilon: Option<f64>,
}

/// Heuristic exclusion of sections outside the box: `ε E >= ρ`.
#[derive(Clone, Debug, Serialize)]
pub struct TailExclusion {
    pub heuristic: bool,
    pub epsilon: f64,
    pub lattice_min_norm: f64,
    pub excluded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub center: Vec<String>,
    pub center_in_invariant_part: bool,
    pub params: SeparationParams,
    pub intruders: Vec<BallHit>,
    /// Sections equal to the center, which are allowed.
    pub sections_through_center: Vec<Vec<i64>>,
    pub unresolved: Vec<Vec<i64>>,
    pub leaves_checked: u64,
    pub prefixes_pruned: u64,
    pub tail: Option<TailExclusion>,
    /// No intruder and nothing unresolved within the declared bounds.
    pub certified: bool,
    pub scope: String,
}

/// Checks that no lattice section other than one through `p` enters the
/// ball of radius `ρ` around `p` over the strip, for coefficients up to the
/// bound and `Im z` up to the ceiling.
pub fn certify_separation(
    model: &SectionModel,
    p: &GVector,
    params: &SeparationParams,
) -> Result<SeparationReport, EstimateError> {
    if !(params.radius > 0.0) || !params.radius.is_finite() {
        return Err(EstimateError::InvalidParameter(format!(
            "radius must be > 0, got {}",
            params.radius
        )));
    }
    if params.bound < 1 {
        return Err(EstimateError::InvalidParameter(format!(
            "coefficient bound must be >= 1, got {}",
            params.bound
        )));
    }
    target_values(model, p)?;
    let scan = BallSearch::new(model, p, params.radius, params.bound, params.region).run();
    let mut intruders = scan.hits;
    intruders.sort_by(|a, b| a.h.cmp(&b.h));
    let mut through = scan.through_center;
    through.sort();
    let mut unresolved = scan.unresolved;
    unresolved.sort();

    let tail = match params.epsilon {
        Some(eps) if model.norm_coordinates().is_some() => {
            let e = lattice_min_norm(model, params.bound.min(3))?;
            Some(TailExclusion {
                heuristic: true,
                epsilon: eps,
                lattice_min_norm: e.value,
                excluded: eps * e.value >= params.radius,
            })
        }
        _ => None,
    };
    let certified = intruders.is_empty() && unresolved.is_empty();
    Ok(SeparationReport {
        center: p.iter().map(ToString::to_string).collect(),
        center_in_invariant_part: model.invariant_part().contains(p),
        params: *params,
        intruders,
        sections_through_center: through,
        unresolved,
        leaves_checked: scan.leaves,
        prefixes_pruned: scan.pruned,
        tail,
        certified,
        scope: format!(
            "relative to |h_i| <= {} and {} < Im z <= {}",
            params.bound, params.region.r, params.region.y_max
        ),
    })
}
