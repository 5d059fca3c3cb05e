use std::fmt;

use super::matrix::{rref, GVector, Matrix};
use super::scalar::GScalar;
use super::LinalgError;

/// A linear subspace of Q(i)^n, stored by its reduced row echelon basis.
///
/// The echelon basis is unique, so derived equality is equality of sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<GVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| GVector::unit(ambient_dim, i))
                .collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Canonical span of `vectors` inside an ambient space of dimension
    /// `ambient_dim`.
    pub fn echelonize(ambient_dim: usize, vectors: &[GVector]) -> Result<Self, LinalgError> {
        if let Some(bad) = vectors.iter().find(|v| v.dim() != ambient_dim) {
            return Err(LinalgError::DimensionMismatch {
                expected: ambient_dim,
                found: bad.dim(),
            });
        }
        Ok(Subspace::span_unchecked(ambient_dim, vectors.to_vec()))
    }

    pub(crate) fn span_unchecked(ambient_dim: usize, vectors: Vec<GVector>) -> Self {
        let nonzero: Vec<GVector> = vectors.into_iter().filter(|v| !v.is_zero()).collect();
        let (basis, pivots) = rref(nonzero);
        Subspace {
            ambient_dim,
            basis,
            pivots,
        }
    }

    /// Null space of `m`, as a subspace of its column space dimension.
    pub fn kernel_of(m: &Matrix) -> Self {
        let n = m.cols();
        let (reduced, pivots) = rref(m.row_vectors());
        let mut vectors = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = GVector::zeros(n);
            v[free] = GScalar::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            vectors.push(v);
        }
        Subspace::span_unchecked(n, vectors)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[GVector] {
        &self.basis
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis).expect("consistent dims")
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Canonical representative of `v` modulo this subspace: the pivot
    /// coordinates are cleared.
    pub fn reduce(&self, v: &GVector) -> GVector {
        let mut out = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let f = -out[p].clone();
                out.axpy(&f, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &GVector) -> bool {
        v.dim() == self.ambient_dim && self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b))
    }

    /// Non-pivot coordinates of `reduce(v)`: canonical coordinates on the
    /// quotient `ambient / self`.
    pub fn quotient_coordinates(&self, v: &GVector) -> GVector {
        let r = self.reduce(v);
        GVector(
            (0..self.ambient_dim)
                .filter(|c| !self.pivots.contains(c))
                .map(|c| r[c].clone())
                .collect(),
        )
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &GVector) -> Option<GVector> {
        if !self.contains(v) {
            return None;
        }
        Some(GVector(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Ok(Subspace::span_unchecked(self.ambient_dim, all))
    }

    /// Subspace of vectors pairing to zero with every vector here, under the
    /// bilinear pairing.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient_dim);
        }
        let m = Matrix::from_rows(&self.basis).expect("consistent dims");
        Subspace::kernel_of(&m)
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    pub fn conj(&self) -> Subspace {
        let conj: Vec<GVector> = self.basis.iter().map(GVector::conj).collect();
        Subspace::span_unchecked(self.ambient_dim, conj)
    }

    /// Image `m(self)`.
    pub fn image_under(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.cols() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: m.cols(),
                found: self.ambient_dim,
            });
        }
        let images = self
            .basis
            .iter()
            .map(|b| m.apply(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::span_unchecked(m.rows(), images))
    }

    /// Preimage `{x : m x in self}`.
    pub fn preimage_under(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.rows() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: m.rows(),
                found: self.ambient_dim,
            });
        }
        let ann = self.annihilator();
        if ann.is_zero() {
            return Ok(Subspace::full(m.cols()));
        }
        let composed = Matrix::from_rows(ann.basis())?.mul(m)?;
        Ok(Subspace::kernel_of(&composed))
    }

    /// Greedy complement of `sub` inside `self`: echelon basis vectors of
    /// `self` are taken in order whenever they enlarge the span. Requires
    /// `sub ⊆ self`.
    pub fn complement_basis(&self, sub: &Subspace) -> Result<Vec<GVector>, LinalgError> {
        self.check(sub)?;
        if !sub.is_subspace_of(self) {
            return Err(LinalgError::NotNested);
        }
        let mut acc = sub.clone();
        let mut chosen = Vec::new();
        for b in &self.basis {
            if !acc.contains(b) {
                chosen.push(b.clone());
                acc = Subspace::span_unchecked(
                    self.ambient_dim,
                    acc.basis
                        .iter()
                        .cloned()
                        .chain(std::iter::once(b.clone()))
                        .collect(),
                );
            }
        }
        Ok(chosen)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {}) {:?}",
            self.dim(),
            self.ambient_dim,
            self.basis
        )
    }
}

/// Matrix of the map induced by `m` from `src_quot / src_sub` to
/// `dst_quot / dst_sub`, in the greedy complement bases of both quotients.
///
/// Requires `m(src_quot) ⊆ dst_quot` and `m(src_sub) ⊆ dst_sub`.
pub fn induced_map(
    m: &Matrix,
    src_sub: &Subspace,
    src_quot: &Subspace,
    dst_sub: &Subspace,
    dst_quot: &Subspace,
) -> Result<Matrix, LinalgError> {
    if !src_quot.image_under(m)?.is_subspace_of(dst_quot)
        || !src_sub.image_under(m)?.is_subspace_of(dst_sub)
    {
        return Err(LinalgError::NotPreserved);
    }
    let src = src_quot.complement_basis(src_sub)?;
    let dst = dst_quot.complement_basis(dst_sub)?;
    let mut cols = Vec::with_capacity(src.len());
    for c in &src {
        let image = m.apply(c)?;
        cols.push(coordinates_mod(&image, &dst, dst_sub)?);
    }
    Matrix::from_columns(dst.len(), &cols)
}

/// Endomorphism case of [`induced_map`].
pub fn induced_map_on_quotient(
    m: &Matrix,
    sub: &Subspace,
    quot_of: &Subspace,
) -> Result<Matrix, LinalgError> {
    induced_map(m, sub, quot_of, sub, quot_of)
}

/// Coordinates of `v` on `complement` modulo `sub`, assuming `v` lies in
/// `span(complement) + sub`.
pub fn coordinates_mod(
    v: &GVector,
    complement: &[GVector],
    sub: &Subspace,
) -> Result<GVector, LinalgError> {
    let n = v.dim();
    let mut cols: Vec<GVector> = complement.to_vec();
    cols.extend(sub.basis().iter().cloned());
    let a = Matrix::from_columns(n, &cols)?;
    let x = a.solve(v)?.ok_or(LinalgError::NotInSpan)?;
    Ok(GVector(x.0[..complement.len()].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> GVector {
        GVector::from_ints(xs)
    }

    #[test]
    fn echelonize_examples() {
        let full = Subspace::echelonize(2, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(full.is_full());
        assert_eq!(full.pivot_columns(), &[0, 1]);

        let scaled = Subspace::echelonize(2, &[v(&[2, 4])]).unwrap();
        assert_eq!(scaled.basis(), &[v(&[1, 2])]);

        let i = GScalar::i();
        let first = GVector(vec![GScalar::one(), i.clone()]);
        let second = GVector(vec![i.clone(), GScalar::from_int(-1)]);
        assert_eq!(first.scale(&i), second);
        let line = Subspace::echelonize(2, &[first.clone(), second]).unwrap();
        assert_eq!(line.dim(), 1);
        assert_eq!(line.basis(), &[first]);

        assert!(matches!(
            Subspace::echelonize(2, &[v(&[1, 0, 0])]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_and_intersection_examples() {
        let a = Subspace::echelonize(2, &[v(&[1, 0])]).unwrap();
        let b = Subspace::echelonize(2, &[v(&[0, 1])]).unwrap();
        assert!(a.intersection(&b).unwrap().is_zero());

        // e0 -> e1, e1 -> 0
        let n = Matrix::from_int_rows(&[vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(n.kernel(), b);
        assert_eq!(n.image(), b);
        assert_eq!(b.preimage_under(&n).unwrap(), Subspace::full(2));
        assert_eq!(Subspace::zero(2).preimage_under(&n).unwrap(), b);
    }

    #[test]
    fn induced_maps() {
        // single Jordan block of size 2; W_{-2} = span(e1), W_0 = full.
        let n = Matrix::from_int_rows(&[vec![0, 0], vec![1, 0]]).unwrap();
        let w_low = Subspace::echelonize(2, &[v(&[0, 1])]).unwrap();
        let full = Subspace::full(2);
        let zero = Subspace::zero(2);
        // N on Gr_0 and on Gr_{-2}: both zero
        assert!(induced_map_on_quotient(&n, &w_low, &full)
            .unwrap()
            .is_zero());
        assert!(induced_map(&n, &zero, &w_low, &zero, &w_low)
            .unwrap()
            .is_zero());

        let id = Matrix::identity(2);
        assert_eq!(
            induced_map_on_quotient(&id, &w_low, &full).unwrap(),
            Matrix::identity(1)
        );

        // size-3 block: N^2 : Gr_{2} -> Gr_{-2} is invertible 1x1
        let n3 = Matrix::from_int_rows(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let n2 = n3.pow(2).unwrap();
        let w1 = Subspace::echelonize(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let w_m2 = Subspace::echelonize(3, &[v(&[0, 0, 1])]).unwrap();
        let m = induced_map(&n2, &w1, &Subspace::full(3), &Subspace::zero(3), &w_m2).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!(!m[(0, 0)].is_zero());
    }
}
