use std::collections::BTreeMap;

use crate::linalg::{GVector, Matrix, Subspace};

use super::mhs::{HodgeType, LimitMhs};
use super::weight::GradedSpace;
use super::HodgeError;

/// A basis vector `N^{j-k} b` of `G_k^{(j)}`, where `b` is the `s`-th basis
/// vector of the primitive part of `Gr^W_{w+j}`.
#[derive(Clone, Debug)]
pub struct BasisVector {
    pub j: usize,
    pub k: usize,
    pub s: usize,
    /// Standard coordinates on `G`.
    pub vector: GVector,
    /// Hodge type, for Hodge-adapted bases only.
    pub hodge_type: Option<HodgeType>,
}

/// Hodge-adapted version of the bigrading.
#[derive(Clone, Debug)]
pub struct HodgeBigrading {
    /// Ordered by `j`, then Hodge type of the primitive vector, then `s`,
    /// then `k` descending.
    pub basis: Vec<BasisVector>,
    /// Per `(j, k)`, the decomposition of `G_k^{(j)}` into Hodge types.
    pub restriction: BTreeMap<(usize, usize), BTreeMap<HodgeType, Subspace>>,
    /// `G^{<0}`: the sum of all `H^{p,q}` with `p < 0`.
    pub negative_part: Subspace,
    /// For each `j`, the Hodge-primitive vectors (in `Gr^W_{w+j}`
    /// coordinates) with their types, in basis order.
    pub primitive: BTreeMap<usize, Vec<(HodgeType, GVector)>>,
}

/// The primitive decomposition `G = ⊕_{0<=k<=j<=m} G_k^{(j)}`.
#[derive(Clone, Debug)]
pub struct BiGradedSpace {
    depth: usize,
    weight: i32,
    primitive: BTreeMap<usize, Subspace>,
    basis: Vec<BasisVector>,
    pieces: BTreeMap<(usize, usize), Subspace>,
    hodge: Option<HodgeBigrading>,
}

impl BiGradedSpace {
    /// The bigrading from `N` and `W` alone.
    pub fn rational(graded: &GradedSpace) -> Result<Self, HodgeError> {
        let wf = graded.weight_filtration();
        let m = wf.depth();
        let w = wf.center();
        let dim = graded.dim();
        let ng = graded.n_graded();
        let powers = graded_powers(ng, m)?;

        let mut primitive = BTreeMap::new();
        let mut basis = Vec::new();
        for j in 0..=m {
            let k = w + j as i32;
            let prim = primitive_part(graded, &powers, j)?;
            for (s, b) in prim.basis().iter().enumerate() {
                let top = graded.embed(k, b);
                for kk in (0..=j).rev() {
                    basis.push(BasisVector {
                        j,
                        k: kk,
                        s,
                        vector: powers[j - kk].apply(&top)?,
                        hodge_type: None,
                    });
                }
            }
            primitive.insert(j, prim);
        }
        check_basis(dim, &basis)?;
        let pieces = collect_pieces(dim, &basis);
        Ok(BiGradedSpace {
            depth: m,
            weight: w,
            primitive,
            basis,
            pieces,
            hodge: None,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    /// Primitive part of `Gr^W_{w+j}` in `Gr^W_{w+j}` coordinates.
    pub fn primitive(&self, j: usize) -> Option<&Subspace> {
        self.primitive.get(&j)
    }

    pub fn pieces(&self) -> &BTreeMap<(usize, usize), Subspace> {
        &self.pieces
    }

    pub fn piece(&self, j: usize, k: usize) -> Option<&Subspace> {
        self.pieces.get(&(j, k))
    }

    /// Rational bigraded basis, ordered by `j`, then `s`, then `k`
    /// descending.
    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Matrix {
        columns(self.basis.len(), &self.basis)
    }

    pub fn hodge(&self) -> Option<&HodgeBigrading> {
        self.hodge.as_ref()
    }

    pub fn negative_part(&self) -> Option<&Subspace> {
        self.hodge.as_ref().map(|h| &h.negative_part)
    }
}

fn graded_powers(ng: &Matrix, m: usize) -> Result<Vec<Matrix>, HodgeError> {
    let mut powers = vec![Matrix::identity(ng.rows())];
    for _ in 0..=m {
        let next = powers.last().unwrap().mul(ng)?;
        powers.push(next);
    }
    Ok(powers)
}

/// `ker(N^{j+1}: Gr_{w+j} -> Gr_{w-j-2})` in `Gr_{w+j}` coordinates.
fn primitive_part(
    graded: &GradedSpace,
    powers: &[Matrix],
    j: usize,
) -> Result<Subspace, HodgeError> {
    let k = graded.weight_filtration().center() + j as i32;
    let d = graded.level_dim(k);
    let Some(level) = graded.level(k).filter(|_| d > 0) else {
        return Ok(Subspace::zero(0));
    };
    let cols: Vec<usize> = (level.offset..level.offset + d).collect();
    let rows: Vec<usize> = (0..graded.dim()).collect();
    Ok(powers[j + 1].select(&rows, &cols).kernel())
}

fn check_basis(dim: usize, basis: &[BasisVector]) -> Result<(), HodgeError> {
    if basis.len() != dim {
        return Err(HodgeError::ShiftIsomorphism(format!(
            "bigraded pieces have total dimension {}, expected {dim}",
            basis.len()
        )));
    }
    if dim > 0 && columns(dim, basis).inverse().is_none() {
        return Err(HodgeError::ShiftIsomorphism(
            "the N-strings of primitive vectors are linearly dependent".into(),
        ));
    }
    Ok(())
}

fn columns(dim: usize, basis: &[BasisVector]) -> Matrix {
    if dim == 0 {
        return Matrix::zeros(0, 0);
    }
    let cols: Vec<GVector> = basis.iter().map(|b| b.vector.clone()).collect();
    Matrix::from_columns(dim, &cols).expect("consistent dims")
}

fn collect_pieces(dim: usize, basis: &[BasisVector]) -> BTreeMap<(usize, usize), Subspace> {
    let mut grouped: BTreeMap<(usize, usize), Vec<GVector>> = BTreeMap::new();
    for b in basis {
        grouped
            .entry((b.j, b.k))
            .or_default()
            .push(b.vector.clone());
    }
    grouped
        .into_iter()
        .map(|(key, vs)| {
            (
                key,
                Subspace::echelonize(dim, &vs).expect("consistent dims"),
            )
        })
        .collect()
}

/// The bigrading with its Hodge refinement and `G^{<0}`.
pub fn primitive_decomposition(mhs: &LimitMhs) -> Result<BiGradedSpace, HodgeError> {
    let graded = mhs.graded();
    let mut space = BiGradedSpace::rational(graded)?;
    let dim = graded.dim();
    let powers = graded_powers(graded.n_graded(), space.depth)?;

    let mut basis = Vec::new();
    let mut primitive_typed = BTreeMap::new();
    for j in 0..=space.depth {
        let k = space.weight + j as i32;
        let prim = space.primitive[&j].clone();
        let mut typed = Vec::new();
        let mut span = Subspace::zero(prim.ambient_dim());
        for (&t, piece) in &mhs.hodge_pieces(k) {
            let part = prim.intersection(piece)?;
            span = span.sum(&part)?;
            for b in part.basis() {
                typed.push((t, b.clone()));
            }
        }
        if span != prim {
            return Err(HodgeError::HodgePrimitiveMismatch { j });
        }
        for (s, (t, b)) in typed.iter().enumerate() {
            let top = graded.embed(k, b);
            for kk in (0..=j).rev() {
                let shift = (j - kk) as i32;
                basis.push(BasisVector {
                    j,
                    k: kk,
                    s,
                    vector: powers[j - kk].apply(&top)?,
                    hodge_type: Some((t.0 - shift, t.1 - shift)),
                });
            }
        }
        primitive_typed.insert(j, typed);
    }
    check_basis(dim, &basis)?;

    let mut restriction: BTreeMap<(usize, usize), BTreeMap<HodgeType, Vec<GVector>>> =
        BTreeMap::new();
    let mut negative = Vec::new();
    for b in &basis {
        let t = b.hodge_type.expect("typed");
        restriction
            .entry((b.j, b.k))
            .or_default()
            .entry(t)
            .or_default()
            .push(b.vector.clone());
        if t.0 < 0 {
            negative.push(b.vector.clone());
        }
    }
    let restriction = restriction
        .into_iter()
        .map(|(key, by_type)| {
            let spans = by_type
                .into_iter()
                .map(|(t, vs)| (t, Subspace::echelonize(dim, &vs).expect("consistent dims")))
                .collect();
            (key, spans)
        })
        .collect();

    space.hodge = Some(HodgeBigrading {
        basis,
        restriction,
        negative_part: Subspace::echelonize(dim, &negative)?,
        primitive: primitive_typed,
    });
    Ok(space)
}

impl HodgeBigrading {
    pub fn basis_matrix(&self) -> Matrix {
        columns(self.basis.len(), &self.basis)
    }

    /// Indices (into `basis`) of the vectors spanning `G^{<0}`.
    pub fn negative_indices(&self) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.hodge_type.is_some_and(|t| t.0 < 0))
            .map(|(i, _)| i)
            .collect()
    }
}
