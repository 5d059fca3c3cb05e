use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::hodge::{
    build_limit_mhs, construct_alpha, monodromy_weight_filtration, primitive_decomposition,
    rational_representatives, BiGradedSpace, GradedSpace, HodgeError, HodgeType, NilpotentOrbit,
};
use crate::linalg::{to_i64_rows, GScalar, GVector, Matrix, Subspace};

use super::EstimateError;

/// How fiber coordinates are produced from a lattice vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionMode {
    /// Projection to `G^{<0}` along `F^0 G` in Hodge bigraded coordinates;
    /// needs a limit mixed Hodge structure and the splittings.
    Hodge,
    /// Raw coordinates on `H / F^0`; works for any orbit, but no estimate
    /// of the norm-comparison kind is meaningful.
    Rational,
}

/// Which discrepancy map is applied to lattice vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IotaChoice {
    Full,
    /// Only the blocks of `iota` preserving the kernel level.
    Normalized,
}

/// Coordinates of a lattice vector in the rational bigraded basis, with the
/// kernel level of each coordinate.
#[derive(Clone, Debug)]
pub struct NormCoordinates {
    pub matrix: Matrix,
    pub levels: Vec<usize>,
    matrix_f: Vec<f64>,
}

impl NormCoordinates {
    fn new(matrix: Matrix, levels: Vec<usize>) -> Self {
        let matrix_f = matrix.to_complex().iter().map(|c| c.re).collect();
        NormCoordinates {
            matrix,
            levels,
            matrix_f,
        }
    }
}

/// The polynomial sections `z ↦ φ(h; z) = Σ_l z^l Φ_l h` attached to lattice
/// vectors `h ∈ Z^rank`, together with the norm data needed to compare them.
#[derive(Clone, Debug)]
pub struct SectionModel {
    mode: SectionMode,
    label: String,
    rank: usize,
    degree: usize,
    n_int: Vec<Vec<i64>>,
    exp_n: Vec<Vec<i64>>,
    phi: Vec<Matrix>,
    phi_f: Vec<Vec<Complex64>>,
    fiber_levels: Vec<usize>,
    fiber_types: Vec<Option<HodgeType>>,
    rest: Vec<Matrix>,
    rest_f: Vec<Vec<Complex64>>,
    rest_levels: Vec<usize>,
    norm: Option<NormCoordinates>,
    invariant: Subspace,
    lattice_index: BigInt,
    refusal: Option<String>,
}

fn pad(mut coeffs: Vec<Matrix>, len: usize, rows: usize, cols: usize) -> Vec<Matrix> {
    while coeffs.len() < len {
        coeffs.push(Matrix::zeros(rows, cols));
    }
    coeffs
}

fn select_rows(m: &Matrix, rows: &[usize]) -> Matrix {
    let cols: Vec<usize> = (0..m.cols()).collect();
    m.select(rows, &cols)
}

impl SectionModel {
    /// Hodge mode when the orbit has a limit mixed Hodge structure and
    /// splittings, rational mode otherwise (with the reason recorded).
    pub fn for_orbit(orbit: &NilpotentOrbit) -> Result<Self, EstimateError> {
        match SectionModel::hodge(orbit, IotaChoice::Full) {
            Ok(m) => Ok(m),
            Err(EstimateError::Hodge(
                e @ (HodgeError::NotPure(_)
                | HodgeError::RepresentativeUnsolvable { .. }
                | HodgeError::HodgePrimitiveMismatch { .. }),
            )) => {
                let mut m = SectionModel::rational(orbit)?;
                m.refusal = Some(e.to_string());
                Ok(m)
            }
            Err(e) => Err(e),
        }
    }

    pub fn hodge(orbit: &NilpotentOrbit, choice: IotaChoice) -> Result<Self, EstimateError> {
        let mhs = build_limit_mhs(orbit)?;
        let bi = primitive_decomposition(&mhs)?;
        let iota = construct_alpha(&mhs, &bi)?;
        let hodge = bi.hodge().expect("Hodge bigrading");
        let hb = hodge.basis_matrix();
        let hb_inv = hb
            .inverse()
            .ok_or(HodgeError::Linalg(crate::linalg::LinalgError::Singular))?;
        let n_hb = hb_inv.mul(mhs.graded().n_graded())?.mul(&hb)?;
        let lattice = match choice {
            IotaChoice::Full => iota.lattice_to_hodge.clone(),
            IotaChoice::Normalized => hb_inv
                .mul(&iota.normalized(&bi)?)?
                .mul(&bi.basis_matrix())?
                .mul(&iota.lattice_to_rational)?,
        };
        let rank = orbit.rank();
        let degree = bi.depth();
        let exp = pad(
            n_hb.exp_coefficients().ok_or(HodgeError::NotNilpotent)?,
            degree + 1,
            rank,
            rank,
        );
        let neg = hodge.negative_indices();
        let nonneg: Vec<usize> = (0..rank).filter(|i| !neg.contains(i)).collect();
        let mut phi = Vec::new();
        let mut rest = Vec::new();
        for e in &exp {
            let full = e.mul(&lattice)?;
            phi.push(select_rows(&full, &neg));
            rest.push(select_rows(&full, &nonneg));
        }
        let fiber_levels: Vec<usize> = neg.iter().map(|&i| hodge.basis[i].k).collect();
        let fiber_types = neg.iter().map(|&i| hodge.basis[i].hodge_type).collect();
        let rest_levels = nonneg.iter().map(|&i| hodge.basis[i].k).collect();
        let levels_q = iota.rational_labels.iter().map(|l| l.1).collect();
        let invariant_basis: Vec<GVector> = fiber_levels
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == 0)
            .map(|(c, _)| GVector::unit(neg.len(), c))
            .collect();
        Ok(SectionModel {
            mode: SectionMode::Hodge,
            label: orbit.label().to_string(),
            rank,
            degree,
            n_int: orbit.n_int().to_vec(),
            exp_n: exp_n_int(orbit)?,
            phi_f: phi.iter().map(Matrix::to_complex).collect(),
            phi,
            fiber_levels,
            fiber_types,
            rest_f: rest.iter().map(Matrix::to_complex).collect(),
            rest,
            rest_levels,
            norm: Some(NormCoordinates::new(
                iota.lattice_to_rational.clone(),
                levels_q,
            )),
            invariant: Subspace::echelonize(neg.len(), &invariant_basis)?,
            lattice_index: iota.lattice_index.clone(),
            refusal: None,
        })
    }

    /// Coordinates on `H / F^0` given by the non-pivot columns of the
    /// reduced echelon basis of `F^0`.
    pub fn rational(orbit: &NilpotentOrbit) -> Result<Self, EstimateError> {
        let rank = orbit.rank();
        let f0 = orbit.f(0);
        let cols: Vec<GVector> = (0..rank)
            .map(|j| f0.quotient_coordinates(&GVector::unit(rank, j)))
            .collect();
        let fiber = rank - f0.dim();
        let red = Matrix::from_columns(fiber, &cols)?;
        let exp = orbit
            .n()
            .exp_coefficients()
            .ok_or(HodgeError::NotNilpotent)?;
        let degree = exp.len() - 1;
        let phi = exp
            .iter()
            .map(|e| red.mul(e))
            .collect::<Result<Vec<_>, _>>()?;
        let invariant = orbit.kernel().image_under(&red)?;

        let norm = (|| -> Result<NormCoordinates, HodgeError> {
            let w = monodromy_weight_filtration(orbit.n(), orbit.weight())?;
            let graded = GradedSpace::new(orbit.n(), w)?;
            let bi = BiGradedSpace::rational(&graded)?;
            let r_q = rational_representatives(orbit.n(), &graded, &bi)?;
            let inv = r_q.inverse().ok_or(crate::linalg::LinalgError::Singular)?;
            Ok(NormCoordinates::new(
                inv,
                bi.basis().iter().map(|b| b.k).collect(),
            ))
        })()
        .ok();
        let lattice_index = phi
            .iter()
            .fold(BigInt::one(), |acc, m| acc.lcm(&m.denominator_lcm()));

        Ok(SectionModel {
            mode: SectionMode::Rational,
            label: orbit.label().to_string(),
            rank,
            degree,
            n_int: orbit.n_int().to_vec(),
            exp_n: exp_n_int(orbit)?,
            phi_f: phi.iter().map(Matrix::to_complex).collect(),
            phi,
            fiber_levels: vec![0; fiber],
            fiber_types: vec![None; fiber],
            rest: Vec::new(),
            rest_f: Vec::new(),
            rest_levels: Vec::new(),
            norm,
            invariant,
            lattice_index,
            refusal: None,
        })
    }

    pub fn mode(&self) -> SectionMode {
        self.mode
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Why Hodge mode was not available, when it was not.
    pub fn refusal(&self) -> Option<&str> {
        self.refusal.as_deref()
    }

    /// Fails with `NotAdmissible` unless the model is in Hodge mode.
    pub fn require_hodge(&self) -> Result<(), EstimateError> {
        match self.mode {
            SectionMode::Hodge => Ok(()),
            SectionMode::Rational => Err(EstimateError::NotAdmissible(
                self.refusal
                    .clone()
                    .unwrap_or_else(|| "orbit was loaded in rational-structure mode".into()),
            )),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Bound on the degree of every section polynomial.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_levels.len()
    }

    pub fn fiber_levels(&self) -> &[usize] {
        &self.fiber_levels
    }

    pub fn fiber_types(&self) -> &[Option<HodgeType>] {
        &self.fiber_types
    }

    pub fn complement_dim(&self) -> usize {
        self.rest_levels.len()
    }

    pub fn complement_levels(&self) -> &[usize] {
        &self.rest_levels
    }

    /// Exact coefficient matrices `Φ_l`, `l = 0..=degree`.
    pub fn coefficients(&self) -> &[Matrix] {
        &self.phi
    }

    /// Exact coefficient matrices of `φ''` (empty in rational mode).
    pub fn complement_coefficients(&self) -> &[Matrix] {
        &self.rest
    }

    pub fn norm_coordinates(&self) -> Option<&NormCoordinates> {
        self.norm.as_ref()
    }

    /// The invariant part of the fiber: image of `Ker N`.
    pub fn invariant_part(&self) -> &Subspace {
        &self.invariant
    }

    pub fn lattice_index(&self) -> &BigInt {
        &self.lattice_index
    }

    pub fn n_int(&self) -> &[Vec<i64>] {
        &self.n_int
    }

    pub fn in_kernel(&self, h: &[i64]) -> bool {
        self.n_int
            .iter()
            .all(|row| row.iter().zip(h).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    /// `exp(N) h`.
    pub fn exp_n_apply(&self, h: &[i64]) -> Vec<i64> {
        self.exp_n
            .iter()
            .map(|row| row.iter().zip(h).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Coefficient vectors of `φ(h; ·)`, flattened as `l * fiber_dim + c`.
    pub fn poly(&self, h: &[i64]) -> Vec<Complex64> {
        poly_from(&self.phi_f, self.fiber_dim(), self.rank, h)
    }

    /// Per lattice coordinate `j`, the flattened polynomial of `e_j`.
    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.rank)
            .map(|j| {
                let mut e = vec![0i64; self.rank];
                e[j] = 1;
                self.poly(&e)
            })
            .collect()
    }

    pub fn eval(&self, poly: &[Complex64], z: Complex64) -> Vec<Complex64> {
        eval_poly(poly, self.fiber_dim(), z)
    }

    pub fn phi(&self, h: &[i64], z: Complex64) -> Vec<Complex64> {
        self.eval(&self.poly(h), z)
    }

    /// `φ''`: the `F^0 G` component of `exp(zN) ι(h)` (Hodge mode only).
    pub fn complement(&self, h: &[i64], z: Complex64) -> Vec<Complex64> {
        let d = self.complement_dim();
        eval_poly(&poly_from(&self.rest_f, d, self.rank, h), d, z)
    }

    pub fn poly_exact(&self, h: &[i64]) -> Vec<GVector> {
        let hv = GVector::from_ints(h);
        self.phi
            .iter()
            .map(|m| m.apply(&hv).expect("rank-sized lattice vector"))
            .collect()
    }

    /// Exact `φ(h; z)` at a point of Q(i).
    pub fn phi_exact(&self, h: &[i64], z: &GScalar) -> GVector {
        let coeffs = self.poly_exact(h);
        let mut acc = GVector::zeros(self.fiber_dim());
        for c in coeffs.iter().rev() {
            acc = GVector(acc.iter().map(|a| a * z).collect()).add(c);
        }
        acc
    }

    /// `|x|_k` for fiber values `x`, for `k = 0..=degree`.
    pub fn level_norms(&self, x: &[Complex64]) -> Vec<f64> {
        let mut out = vec![0.0; self.degree + 1];
        for (v, &k) in x.iter().zip(&self.fiber_levels) {
            out[k] += v.norm();
        }
        out
    }

    /// `|u_k|` for the bigraded components of a lattice vector.
    pub fn lattice_level_norms(&self, h: &[i64]) -> Option<Vec<f64>> {
        let norm = self.norm.as_ref()?;
        let mut out = vec![0.0; self.degree + 1];
        for (i, &k) in norm.levels.iter().enumerate() {
            let row = &norm.matrix_f[i * self.rank..(i + 1) * self.rank];
            let x: f64 = row.iter().zip(h).map(|(a, &b)| a * b as f64).sum();
            out[k] += x.abs();
        }
        Some(out)
    }

    /// Exact bigraded coordinates of a lattice vector.
    pub fn lattice_coordinates(&self, h: &[i64]) -> Option<GVector> {
        let norm = self.norm.as_ref()?;
        norm.matrix.apply(&GVector::from_ints(h)).ok()
    }
}

/// `A(u, z) = Σ_k |u_k| y^k`.
pub fn a_norm(levels: &[f64], y: f64) -> f64 {
    levels.iter().rev().fold(0.0, |acc, &u| acc * y + u)
}

/// `B(u, z) = Σ_{k>=1} |u_k| y^(k-1)`.
pub fn b_norm(levels: &[f64], y: f64) -> f64 {
    levels.iter().skip(1).rev().fold(0.0, |acc, &u| acc * y + u)
}

fn exp_n_int(orbit: &NilpotentOrbit) -> Result<Vec<Vec<i64>>, EstimateError> {
    let e = orbit.n().exp_nilpotent().ok_or(HodgeError::NotNilpotent)?;
    to_i64_rows(&e).ok_or_else(|| EstimateError::InvalidParameter("exp(N) is not integral".into()))
}

fn poly_from(coeffs: &[Vec<Complex64>], fiber: usize, rank: usize, h: &[i64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); coeffs.len() * fiber];
    for (l, m) in coeffs.iter().enumerate() {
        for c in 0..fiber {
            let row = &m[c * rank..(c + 1) * rank];
            out[l * fiber + c] = row
                .iter()
                .zip(h)
                .fold(Complex64::new(0.0, 0.0), |acc, (a, &b)| acc + a * b as f64);
        }
    }
    out
}

/// Horner evaluation of a flattened vector polynomial.
pub fn eval_poly(poly: &[Complex64], fiber: usize, z: Complex64) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); fiber];
    if fiber == 0 {
        return acc;
    }
    for l in (0..poly.len() / fiber).rev() {
        for c in 0..fiber {
            acc[c] = acc[c] * z + poly[l * fiber + c];
        }
    }
    acc
}
