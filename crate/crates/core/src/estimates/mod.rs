//! Floating-point estimates on lattice sections over the strip.
//!
//! All structural data (coefficient matrices of the section polynomials,
//! bigraded coordinates) is computed exactly and converted to `f64` once.

mod accumulation;
mod ball;
mod deck;
mod epsilon;
mod lattice;
mod norms;
mod perturbation;
mod poly_bound;
mod section;
mod separation;
mod strip;
mod triangular;

pub use accumulation::{
    find_accumulation, verify_witness, AccumulationParams, AccumulationWitness, WitnessKind,
    WitnessPoint,
};
pub use ball::BallHit;
pub use deck::{float_exact_gap, monodromy_consistency, monodromy_consistency_exact, DeckCheck};
pub use epsilon::{estimate_epsilon, EpsilonArgmin, EstimateReport, VanishingViolation};
pub use lattice::{box_size, keyed_max, keyed_min, par_box_fold, BoxIter};
pub use norms::{lattice_min_norm, lattice_min_norm_with, MinNormReport};
pub use perturbation::{perturbation_bound_check, Perturbation, PerturbationReport};
pub use poly_bound::{
    a_poly, c_constant, conditions_hold, derivative_at, poly_bound_harness, PolyBoundParams,
    PolyBoundReport, PolyBoundSample,
};
pub use section::{
    a_norm, b_norm, eval_poly, IotaChoice, NormCoordinates, SectionMode, SectionModel,
};
pub use separation::{certify_separation, SeparationParams, SeparationReport, TailExclusion};
pub use strip::{StripGrid, StripRegion, StripSample};
pub use triangular::{
    find_eps2, perron_root, simplex_search, triangular_check, LowerTriangular, TriangularReport,
};

use crate::hodge::HodgeError;
use crate::linalg::LinalgError;

#[derive(Debug, thiserror::Error)]
pub enum EstimateError {
    /// The orbit lacks the structure the estimate is stated for.
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("target is not in the image of Ker N")]
    TargetNotInvariant,
    #[error("target has {found} coordinates, fiber has {expected}")]
    TargetDimension { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("perturbation does not vanish at t = 0")]
    PerturbationConstant,
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
