use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::linalg::{GVector, Matrix, Subspace};

use super::bigrading::{BasisVector, BiGradedSpace};
use super::mhs::LimitMhs;
use super::HodgeError;

/// Graded-to-filtered splittings and their discrepancy.
///
/// `alpha_c` and `alpha_q` map `G` (standard graded coordinates) to `H`.
/// Both commute with `N` and induce the identity on every `Gr^W_k`;
/// `alpha_c` additionally carries the Hodge decomposition of `G` into `F`,
/// while `alpha_q` is rational. `iota = alpha_c⁻¹ ∘ alpha_q` is an
/// automorphism of `G` (the composite in the other order lives on `H`).
#[derive(Clone, Debug)]
pub struct IotaMap {
    pub alpha_c: Matrix,
    pub alpha_q: Matrix,
    pub iota: Matrix,
    /// `(i, j, k)`: entries of `iota` in the rational bigraded basis from
    /// `G^{(j)}` into `G^{(i)}` lowering the kernel level by `k`. Only
    /// nonzero blocks are stored; each is a full-size matrix supported on
    /// its block, so the blocks sum to `iota` in that basis.
    pub components: BTreeMap<(usize, usize, i32), Matrix>,
    /// Smallest `d > 0` with `d·R_Q⁻¹` and `d·R_C⁻¹` integral, where `R_Q`,
    /// `R_C` have the representatives as columns.
    pub lattice_index: BigInt,
    /// Columns `N^l r_b` for Hodge-primitive `b`, in Hodge basis order.
    pub hodge_representatives: Matrix,
    /// Columns `N^l r_b` for rational primitive `b`, in rational basis order.
    pub rational_representatives: Matrix,
    /// `R_C⁻¹`: a lattice vector to the Hodge bigraded coordinates of its
    /// image under `iota`.
    pub lattice_to_hodge: Matrix,
    /// `R_Q⁻¹`: a lattice vector to rational bigraded coordinates.
    pub lattice_to_rational: Matrix,
    /// `(j, k)` label of every rational basis index.
    pub rational_labels: Vec<(usize, usize)>,
}

impl IotaMap {
    /// `iota` keeping only the blocks that preserve the kernel level.
    pub fn normalized(&self, bigrading: &BiGradedSpace) -> Result<Matrix, HodgeError> {
        let n = self.iota.rows();
        let mut acc = Matrix::zeros(n, n);
        for ((_, _, k), block) in &self.components {
            if *k == 0 {
                acc = acc.add(block)?;
            }
        }
        let qb = bigrading.basis_matrix();
        let qb_inv = qb.inverse().ok_or(crate::linalg::LinalgError::Singular)?;
        Ok(qb.mul(&acc)?.mul(&qb_inv)?)
    }

    /// True iff every stored block has `k >= 0`.
    pub fn preserves_kernel_filtration(&self) -> bool {
        self.components.keys().all(|&(_, _, k)| k >= 0)
    }

    pub fn is_identity(&self) -> bool {
        self.iota == Matrix::identity(self.iota.rows())
    }
}

/// Lifts of the primitive strings: for primitive `b` of `Gr_{w+j}` with
/// constraint space `K` (inside `ker N^{j+1}`), find `r ∈ K` with
/// `r ≡ lift(b) mod W_{w+j-1}` and return `N^l r` for `l = 0..=j`.
fn lift_string(
    mhs_graded: &super::GradedSpace,
    n_powers: &[Matrix],
    constraint: &Subspace,
    j: usize,
    b: &GVector,
    label: &str,
) -> Result<Vec<GVector>, HodgeError> {
    let w = mhs_graded.weight_filtration();
    let k = w.center() + j as i32;
    let x0 = mhs_graded.lift(k, b);
    let lower = w.get(k - 1);
    let dim = x0.dim();
    let mut cols: Vec<GVector> = constraint.basis().to_vec();
    cols.extend(lower.basis().iter().cloned());
    let unsolvable = || HodgeError::RepresentativeUnsolvable {
        j,
        detail: label.to_string(),
    };
    if cols.is_empty() {
        return Err(unsolvable());
    }
    let a = Matrix::from_columns(dim, &cols)?;
    let sol = a.solve(&x0)?.ok_or_else(unsolvable)?;
    let mut r = GVector::zeros(dim);
    for (c, v) in sol.iter().take(constraint.dim()).zip(constraint.basis()) {
        r.axpy(c, v);
    }
    (0..=j)
        .map(|l| {
            n_powers_get(n_powers, l, dim)
                .apply(&r)
                .map_err(HodgeError::from)
        })
        .collect()
}

fn n_powers_get(powers: &[Matrix], l: usize, dim: usize) -> Matrix {
    powers
        .get(l)
        .cloned()
        .unwrap_or_else(|| Matrix::zeros(dim, dim))
}

fn ordered_columns(dim: usize, strings: Vec<Vec<GVector>>) -> Result<Matrix, HodgeError> {
    // Each string is N^0 r, ..., N^j r; the bigraded order lists k from j
    // down to 0, i.e. N^{j-k} r for k = j..0, which is the string order.
    let cols: Vec<GVector> = strings.into_iter().flatten().collect();
    Ok(Matrix::from_columns(dim, &cols)?)
}

fn lcm_denominators(ms: &[&Matrix]) -> BigInt {
    ms.iter()
        .fold(BigInt::one(), |acc, m| acc.lcm(&m.denominator_lcm()))
}

/// `R_Q`: the columns `N^l r_b` of rational lifts `r_b ∈ ker N^{j+1}` of the
/// rational primitive basis, in rational bigraded basis order. Needs only
/// `N` and `W`, so it exists for impure orbits too.
pub fn rational_representatives(
    n: &Matrix,
    graded: &super::GradedSpace,
    bigrading: &BiGradedSpace,
) -> Result<Matrix, HodgeError> {
    let dim = n.rows();
    let n_powers = n.nilpotent_powers().ok_or(HodgeError::NotNilpotent)?;
    let mut strings = Vec::new();
    for j in 0..=bigrading.depth() {
        let kernel = n_powers_get(&n_powers, j + 1, dim).kernel();
        let prim = bigrading
            .primitive(j)
            .expect("every j has a primitive part");
        for b in prim.basis() {
            strings.push(lift_string(graded, &n_powers, &kernel, j, b, "rational")?);
        }
    }
    ordered_columns(dim, strings)
}

pub fn construct_alpha(mhs: &LimitMhs, bigrading: &BiGradedSpace) -> Result<IotaMap, HodgeError> {
    let orbit = mhs.orbit();
    let graded = mhs.graded();
    let dim = orbit.rank();
    let hodge = bigrading.hodge().ok_or(HodgeError::Shape(
        "construct_alpha needs the Hodge-adapted bigrading".into(),
    ))?;
    if dim == 0 {
        return Err(HodgeError::Shape("rank 0 orbit".into()));
    }
    let n_powers = orbit
        .n()
        .nilpotent_powers()
        .ok_or(HodgeError::NotNilpotent)?;
    let kernels: Vec<Subspace> = (0..=bigrading.depth())
        .map(|j| n_powers_get(&n_powers, j + 1, dim).kernel())
        .collect();

    let mut c_strings = Vec::new();
    for j in 0..=bigrading.depth() {
        for ((p, q), b) in hodge.primitive.get(&j).into_iter().flatten() {
            let constraint = orbit.f(*p).intersection(&kernels[j])?;
            c_strings.push(lift_string(
                graded,
                &n_powers,
                &constraint,
                j,
                b,
                &format!("Hodge type ({p},{q})"),
            )?);
        }
    }
    let r_c = ordered_columns(dim, c_strings)?;
    let r_q = rational_representatives(orbit.n(), graded, bigrading)?;
    let hb = hodge.basis_matrix();
    let qb = bigrading.basis_matrix();
    let singular = || HodgeError::Linalg(crate::linalg::LinalgError::Singular);
    let hb_inv = hb.inverse().ok_or_else(singular)?;
    let qb_inv = qb.inverse().ok_or_else(singular)?;
    let r_c_inv = r_c.inverse().ok_or_else(singular)?;
    let r_q_inv = r_q.inverse().ok_or_else(singular)?;

    let alpha_c = r_c.mul(&hb_inv)?;
    let alpha_q = r_q.mul(&qb_inv)?;
    let alpha_c_inv = hb.mul(&r_c_inv)?;
    let iota = alpha_c_inv.mul(&alpha_q)?;

    let labels: Vec<(usize, usize)> = bigrading
        .basis()
        .iter()
        .map(|b: &BasisVector| (b.j, b.k))
        .collect();
    let in_basis = qb_inv.mul(&iota)?.mul(&qb)?;
    let mut components: BTreeMap<(usize, usize, i32), Matrix> = BTreeMap::new();
    for (r, &(i, kr)) in labels.iter().enumerate() {
        for (c, &(j, kc)) in labels.iter().enumerate() {
            let x = &in_basis[(r, c)];
            if x.is_zero() {
                continue;
            }
            let shift = kc as i32 - kr as i32;
            components
                .entry((i, j, shift))
                .or_insert_with(|| Matrix::zeros(dim, dim))[(r, c)] = x.clone();
        }
    }

    let lattice_index = lcm_denominators(&[&r_q_inv, &r_c_inv]);
    Ok(IotaMap {
        alpha_c,
        alpha_q,
        iota,
        components,
        lattice_index,
        hodge_representatives: r_c,
        rational_representatives: r_q,
        lattice_to_hodge: r_c_inv,
        lattice_to_rational: r_q_inv,
        rational_labels: labels,
    })
}
