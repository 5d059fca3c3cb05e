//! Nilpotent orbits and the structures attached to their limits: the
//! monodromy weight filtration, the limit mixed Hodge structure, the
//! primitive bigrading and the graded-to-filtered splittings.

mod bigrading;
mod mhs;
mod orbit;
mod splitting;
mod weight;

pub use bigrading::{primitive_decomposition, BasisVector, BiGradedSpace, HodgeBigrading};
pub use mhs::{
    build_limit_mhs, graded_hodge_filtration, hodge_decomposition, is_r_split, HodgeType,
    LevelFailure, LimitMhs, PurityDiagnosis,
};
pub use orbit::{
    check_kernel_injectivity, validate_orbit, Check, NilpotentOrbit, ValidationReport,
    CHECK_EXP_INTEGRAL, CHECK_NILPOTENT, CHECK_TRANSVERSAL, CHECK_WEIGHT,
};
pub use splitting::{construct_alpha, rational_representatives, IotaMap};
pub use weight::{
    is_monodromy_filtration, monodromy_weight_filtration, GradedLevel, GradedSpace,
    WeightFiltration,
};

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HodgeError {
    #[error("N is not nilpotent")]
    NotNilpotent,
    #[error("malformed orbit: {0}")]
    Shape(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("limit filtration is not a mixed Hodge structure: {0}")]
    NotPure(PurityDiagnosis),
    #[error("primitive decomposition failed: {0}")]
    ShiftIsomorphism(String),
    #[error("primitive part of Gr_(w+{j}) is not a sum of its Hodge pieces")]
    HodgePrimitiveMismatch { j: usize },
    #[error("no representative in F ∩ ker N^(j+1) for a primitive class ({detail}) at j = {j}")]
    RepresentativeUnsolvable { j: usize, detail: String },
}
