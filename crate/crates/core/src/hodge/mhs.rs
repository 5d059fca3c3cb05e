use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::linalg::Subspace;

use super::orbit::NilpotentOrbit;
use super::weight::{monodromy_weight_filtration, GradedSpace};
use super::HodgeError;

/// Hodge type `(p, q)`.
pub type HodgeType = (i32, i32);

/// An orbit together with its weight filtration and the Hodge decomposition
/// of every graded piece. Only constructed when every `Gr^W_k` is pure of
/// weight `k`.
#[derive(Clone, Debug)]
pub struct LimitMhs {
    orbit: NilpotentOrbit,
    graded: GradedSpace,
    hodge_pieces: BTreeMap<i32, BTreeMap<HodgeType, Subspace>>,
}

impl LimitMhs {
    pub fn orbit(&self) -> &NilpotentOrbit {
        &self.orbit
    }

    pub fn graded(&self) -> &GradedSpace {
        &self.graded
    }

    pub fn weight_filtration(&self) -> &super::WeightFiltration {
        self.graded.weight_filtration()
    }

    /// Nonzero `H^{p,q}` pieces of `Gr^W_k`, in `Gr^W_k` coordinates.
    pub fn hodge_pieces(&self, k: i32) -> BTreeMap<HodgeType, Subspace> {
        self.hodge_pieces.get(&k).cloned().unwrap_or_default()
    }

    pub fn all_hodge_pieces(&self) -> &BTreeMap<i32, BTreeMap<HodgeType, Subspace>> {
        &self.hodge_pieces
    }

    /// Hodge numbers `h^{p,q}` over all weights.
    pub fn hodge_numbers(&self) -> BTreeMap<HodgeType, usize> {
        let mut out = BTreeMap::new();
        for pieces in self.hodge_pieces.values() {
            for (&t, s) in pieces {
                *out.entry(t).or_insert(0) += s.dim();
            }
        }
        out
    }
}

/// Why a graded piece is not a pure Hodge structure of its weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelFailure {
    pub weight: i32,
    pub dim: usize,
    /// Sum of `dim H^{p,q}` over `p + q = weight`.
    pub pieces_dim: usize,
    /// Dimension of the span of all `H^{p,q}`.
    pub span_dim: usize,
    pub hodge_numbers: Vec<(HodgeType, usize)>,
}

/// Every impure graded piece, by descending weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityDiagnosis {
    pub failures: Vec<LevelFailure>,
}

impl PurityDiagnosis {
    pub fn first(&self) -> &LevelFailure {
        &self.failures[0]
    }
}

impl fmt::Display for PurityDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .failures
            .iter()
            .map(|l| {
                format!(
                    "Gr_{} (dim {}): Hodge pieces have total dim {}, span dim {} (deficit {})",
                    l.weight,
                    l.dim,
                    l.pieces_dim,
                    l.span_dim,
                    l.dim - l.span_dim
                )
            })
            .collect();
        write!(f, "not pure: {}", parts.join("; "))
    }
}

/// `F^p Gr^W_k` in `Gr^W_k` coordinates.
pub fn graded_hodge_filtration(
    orbit: &NilpotentOrbit,
    graded: &GradedSpace,
    k: i32,
    p: i32,
) -> Result<Subspace, HodgeError> {
    let meet = orbit
        .f(p)
        .intersection(&graded.weight_filtration().get(k))?;
    graded.graded_image(k, &meet)
}

/// `H^{p,q} = F^p ∩ conj(F^q)` on every `Gr^W_k`; all weights are computed
/// before deciding, so the diagnosis lists every impure level.
pub fn hodge_decomposition(
    orbit: &NilpotentOrbit,
    graded: &GradedSpace,
) -> Result<
    (
        BTreeMap<i32, BTreeMap<HodgeType, Subspace>>,
        Vec<LevelFailure>,
    ),
    HodgeError,
> {
    let (_, hi) = orbit.hodge_bounds();
    let mut pieces = BTreeMap::new();
    let mut failures = Vec::new();
    for level in graded.levels().iter().rev() {
        let k = level.weight;
        let d = level.dim;
        let mut here = BTreeMap::new();
        let mut span = Subspace::zero(d);
        let mut total = 0;
        let mut numbers = Vec::new();
        if d > 0 {
            for p in k - hi..=hi {
                let q = k - p;
                let fp = graded_hodge_filtration(orbit, graded, k, p)?;
                let fq = graded_hodge_filtration(orbit, graded, k, q)?;
                let hpq = fp.intersection(&fq.conj())?;
                if hpq.dim() > 0 {
                    total += hpq.dim();
                    span = span.sum(&hpq)?;
                    numbers.push(((p, q), hpq.dim()));
                    here.insert((p, q), hpq);
                }
            }
        }
        if total != d || span.dim() != d {
            failures.push(LevelFailure {
                weight: k,
                dim: d,
                pieces_dim: total,
                span_dim: span.dim(),
                hodge_numbers: numbers,
            });
        }
        if d > 0 {
            pieces.insert(k, here);
        }
    }
    Ok((pieces, failures))
}

pub fn build_limit_mhs(orbit: &NilpotentOrbit) -> Result<LimitMhs, HodgeError> {
    let w = monodromy_weight_filtration(orbit.n(), orbit.weight())?;
    let graded = GradedSpace::new(orbit.n(), w)?;
    let (hodge_pieces, failures) = hodge_decomposition(orbit, &graded)?;
    if !failures.is_empty() {
        return Err(HodgeError::NotPure(PurityDiagnosis { failures }));
    }
    Ok(LimitMhs {
        orbit: orbit.clone(),
        graded,
        hodge_pieces,
    })
}

/// True iff `H = ⊕_{p,q} F^p ∩ conj(F^q) ∩ W_{p+q}`, i.e. the Deligne
/// splitting is defined over the reals.
pub fn is_r_split(mhs: &LimitMhs) -> Result<bool, HodgeError> {
    let orbit = mhs.orbit();
    let n = orbit.rank();
    let (_, hi) = orbit.hodge_bounds();
    let mut total = 0;
    let mut span = Subspace::zero(n);
    for level in mhs.graded().levels() {
        let k = level.weight;
        let wk = mhs.weight_filtration().get(k);
        for p in k - hi..=hi {
            let piece = orbit
                .f(p)
                .intersection(&orbit.f(k - p).conj())?
                .intersection(&wk)?;
            total += piece.dim();
            span = span.sum(&piece)?;
        }
    }
    Ok(total == n && span.dim() == n)
}
