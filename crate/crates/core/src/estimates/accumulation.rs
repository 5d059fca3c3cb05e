use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::GVector;

use super::ball::{exact_root_residual, BallHit, BallSearch};
use super::epsilon::target_values;
use super::section::SectionModel;
use super::strip::StripRegion;
use super::EstimateError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub h: Vec<i64>,
    pub z: Complex64,
    /// `z` as an exact Gaussian rational, when it came from an exact root.
    pub z_exact: Option<String>,
    pub distance: f64,
    /// `φ(h; z) = v` holds exactly.
    pub exact_zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Sections `u_n` with points `z_n` climbing the strip and distances
    /// falling below `tol 2^-n`.
    Sequence,
    /// The target is itself the value of a constant lattice section.
    ConstantSection,
}

#[derive(Clone, Debug, Serialize)]
pub struct AccumulationWitness {
    pub kind: WitnessKind,
    pub target: Vec<String>,
    pub points: Vec<WitnessPoint>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AccumulationParams {
    pub tol: f64,
    pub bound: i64,
    pub region: StripRegion,
}

/// Recomputes a witness point: distance from scratch, exact residual when
/// an exact root is available.
pub fn verify_witness(
    model: &SectionModel,
    target: &GVector,
    region: &StripRegion,
    point: &WitnessPoint,
) -> bool {
    let v = target.to_complex();
    let value = model.phi(&point.h, point.z);
    let d: f64 = value.iter().zip(&v).map(|(a, b)| (a - b).norm()).sum();
    let scale = 1.0 + v.iter().map(|c| c.norm()).sum::<f64>();
    if (d - point.distance).abs() > 1e-12 * scale * (1.0 + point.z.norm()) {
        return false;
    }
    if point.exact_zero {
        match exact_root_residual(model, &point.h, target, region) {
            Some((z, residual)) => residual.is_zero() && Some(z.to_string()) == point.z_exact,
            None => false,
        }
    } else {
        true
    }
}

fn point_from_hit(
    model: &SectionModel,
    target: &GVector,
    region: &StripRegion,
    hit: &BallHit,
) -> WitnessPoint {
    match exact_root_residual(model, &hit.h, target, region) {
        Some((z, residual)) => {
            let zf = z.to_complex();
            let value = model.phi(&hit.h, zf);
            let distance = value
                .iter()
                .zip(target.to_complex())
                .map(|(a, b)| (a - b).norm())
                .sum();
            WitnessPoint {
                h: hit.h.clone(),
                z: zf,
                z_exact: Some(z.to_string()),
                distance,
                exact_zero: residual.is_zero(),
            }
        }
        None => WitnessPoint {
            h: hit.h.clone(),
            z: hit.z,
            z_exact: None,
            distance: hit.distance,
            exact_zero: false,
        },
    }
}

/// Looks for lattice sections accumulating at `v` as `Im z` grows: hits
/// within `tol` are sorted by `Im z`, and the `n`-th accepted one
/// (`n = 1, 2, ...`) must lie within `tol 2^-n` with `Im z` strictly above
/// the previous. At least two points are required.
pub fn find_accumulation(
    model: &SectionModel,
    v: &GVector,
    params: &AccumulationParams,
) -> Result<Option<AccumulationWitness>, EstimateError> {
    if !(params.tol > 0.0) {
        return Err(EstimateError::InvalidParameter(format!(
            "tol must be > 0, got {}",
            params.tol
        )));
    }
    if params.bound < 1 {
        return Err(EstimateError::InvalidParameter(format!(
            "coefficient bound must be >= 1, got {}",
            params.bound
        )));
    }
    target_values(model, v)?;
    let target: Vec<String> = v.iter().map(ToString::to_string).collect();
    let scan = BallSearch::new(model, v, params.tol, params.bound, params.region).run();

    if let Some(h) = scan.through_center.iter().min() {
        let z = Complex64::new(0.0, params.region.y_max);
        return Ok(Some(AccumulationWitness {
            kind: WitnessKind::ConstantSection,
            target,
            points: vec![WitnessPoint {
                h: h.clone(),
                z,
                z_exact: None,
                distance: 0.0,
                exact_zero: true,
            }],
            notes: vec!["target is the value of a constant lattice section".into()],
        }));
    }

    let mut points: Vec<WitnessPoint> = scan
        .hits
        .iter()
        .map(|hit| point_from_hit(model, v, &params.region, hit))
        .collect();
    points.sort_by(|a, b| {
        a.z.im
            .total_cmp(&b.z.im)
            .then(a.distance.total_cmp(&b.distance))
            .then_with(|| a.h.cmp(&b.h))
    });
    let mut sequence: Vec<WitnessPoint> = Vec::new();
    for p in points {
        let n = sequence.len() as i32 + 1;
        let climbs = sequence.last().map_or(true, |last| p.z.im > last.z.im);
        if climbs && p.distance < params.tol * 2f64.powi(-n) {
            sequence.push(p);
        }
    }
    if sequence.len() < 2 {
        return Ok(None);
    }
    let exact = sequence.iter().filter(|p| p.exact_zero).count();
    let mut notes = vec![format!(
        "{} points, Im z from {} to {}",
        sequence.len(),
        sequence[0].z.im,
        sequence[sequence.len() - 1].z.im
    )];
    if exact == sequence.len() {
        notes.push("every distance is exactly zero".into());
    } else {
        notes.push(format!(
            "{exact} of {} distances are exactly zero",
            sequence.len()
        ));
    }
    if !scan.unresolved.is_empty() {
        notes.push(format!(
            "{} sections of higher degree were only sampled",
            scan.unresolved.len()
        ));
    }
    Ok(Some(AccumulationWitness {
        kind: WitnessKind::Sequence,
        target,
        points: sequence,
        notes,
    }))
}
