use serde::Serialize;

use crate::linalg::{Filtration, GVector, Matrix, Subspace};

use super::HodgeError;

/// The degeneration datum: a nilpotent log-monodromy `N` on the standard
/// lattice Z^rank, a decreasing limit Hodge filtration `F` over Q(i), and the
/// weight `w` of the degenerating family.
///
/// Construction only checks shapes. Whether the datum really is a nilpotent
/// orbit is decided by [`validate_orbit`], so invalid inputs can still be
/// represented and diagnosed.
#[derive(Clone, Debug)]
pub struct NilpotentOrbit {
    rank: usize,
    weight: i32,
    n_int: Vec<Vec<i64>>,
    n: Matrix,
    hodge: Filtration,
    label: String,
}

impl NilpotentOrbit {
    pub fn new(
        weight: i32,
        n: Vec<Vec<i64>>,
        hodge: Filtration,
        label: impl Into<String>,
    ) -> Result<Self, HodgeError> {
        let rank = n.len();
        if let Some(row) = n.iter().find(|r| r.len() != rank) {
            return Err(HodgeError::Shape(format!(
                "N must be {rank}x{rank}, found a row of length {}",
                row.len()
            )));
        }
        if hodge.ambient_dim() != rank {
            return Err(HodgeError::Shape(format!(
                "Hodge filtration lives in dimension {}, rank is {rank}",
                hodge.ambient_dim()
            )));
        }
        if hodge.direction() != crate::linalg::Direction::Decreasing {
            return Err(HodgeError::Shape(
                "Hodge filtration must be decreasing".into(),
            ));
        }
        let matrix = Matrix::from_int_rows(&n).map_err(HodgeError::Linalg)?;
        Ok(NilpotentOrbit {
            rank,
            weight,
            n_int: n,
            n: if rank == 0 {
                Matrix::zeros(0, 0)
            } else {
                matrix
            },
            hodge,
            label: label.into(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn n(&self) -> &Matrix {
        &self.n
    }

    pub fn n_int(&self) -> &[Vec<i64>] {
        &self.n_int
    }

    pub fn hodge(&self) -> &Filtration {
        &self.hodge
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `F^p` with the decreasing-filtration extension rules.
    pub fn f(&self, p: i32) -> Subspace {
        self.hodge.get(p)
    }

    /// Range of `p` outside which `F^p` is constant (full below, zero above).
    pub fn hodge_bounds(&self) -> (i32, i32) {
        self.hodge.bounds().unwrap_or((0, -1))
    }

    /// `N h` for an integer lattice vector.
    pub fn apply_n_int(&self, h: &[i64]) -> Vec<i64> {
        self.n_int
            .iter()
            .map(|row| row.iter().zip(h).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn in_kernel(&self, h: &[i64]) -> bool {
        self.apply_n_int(h).iter().all(|&x| x == 0)
    }

    pub fn kernel(&self) -> Subspace {
        self.n.kernel()
    }

    pub fn lattice_vector(h: &[i64]) -> GVector {
        GVector::from_ints(h)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Per-check outcome of [`validate_orbit`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_NILPOTENT: &str = "nilpotency";
pub const CHECK_TRANSVERSAL: &str = "transversality";
pub const CHECK_WEIGHT: &str = "weight_negative";
pub const CHECK_EXP_INTEGRAL: &str = "exp_n_integral";

pub fn validate_orbit(orbit: &NilpotentOrbit) -> ValidationReport {
    let mut checks = Vec::new();
    let n = orbit.n();

    let powers = n.nilpotent_powers();
    checks.push(Check {
        name: CHECK_NILPOTENT,
        passed: powers.is_some(),
        detail: match &powers {
            Some(p) => format!("N^{} = 0", p.len()),
            None => format!("N^{} != 0", orbit.rank()),
        },
    });

    let (lo, hi) = orbit.hodge_bounds();
    let mut failing = Vec::new();
    for p in lo..=hi + 1 {
        let image = orbit.f(p).image_under(n).expect("square N");
        if !image.is_subspace_of(&orbit.f(p - 1)) {
            failing.push(p);
        }
    }
    checks.push(Check {
        name: CHECK_TRANSVERSAL,
        passed: failing.is_empty(),
        detail: if failing.is_empty() {
            "N F^p ⊆ F^{p-1} for every p".into()
        } else {
            format!("N F^p ⊄ F^(p-1) for p in {failing:?}")
        },
    });

    checks.push(Check {
        name: CHECK_WEIGHT,
        passed: orbit.weight() < 0,
        detail: format!("w = {}", orbit.weight()),
    });

    let exp_ok = powers.is_some() && n.exp_nilpotent().is_some_and(|e| e.is_integral());
    checks.push(Check {
        name: CHECK_EXP_INTEGRAL,
        passed: exp_ok,
        detail: if powers.is_none() {
            "exp(N) undefined: N is not nilpotent".into()
        } else if exp_ok {
            "exp(N) has integer entries".into()
        } else {
            "exp(N) has non-integer entries".into()
        },
    });

    ValidationReport { checks }
}

/// True iff no nonzero lattice vector of `Ker N` lies in `F^0`.
///
/// The rational points of a subspace `S` of Q(i)^n are nonzero exactly when
/// `S ∩ conj(S)` is nonzero, and `Ker N` is rational, so the test reduces to
/// `Ker N ∩ F^0 ∩ conj(F^0) = 0`.
pub fn check_kernel_injectivity(orbit: &NilpotentOrbit) -> bool {
    let f0 = orbit.f(0);
    let k = orbit.kernel();
    let meet = k
        .intersection(&f0)
        .and_then(|s| s.intersection(&f0.conj()))
        .expect("same ambient dimension");
    meet.is_zero()
}
