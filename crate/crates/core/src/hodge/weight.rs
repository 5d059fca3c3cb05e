use std::collections::BTreeMap;

use crate::linalg::{Direction, Filtration, GVector, Matrix, Subspace};

use super::HodgeError;

/// The monodromy weight filtration of `N` centered at `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    center: i32,
    depth: usize,
    levels: Filtration,
}

impl WeightFiltration {
    pub fn center(&self) -> i32 {
        self.center
    }

    /// Largest `m` with `N^m != 0`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn filtration(&self) -> &Filtration {
        &self.levels
    }

    /// `W_k` for any integer `k`.
    pub fn get(&self, k: i32) -> Subspace {
        self.levels.get(k)
    }

    pub fn graded_dim(&self, k: i32) -> usize {
        self.get(k).dim() - self.get(k - 1).dim()
    }

    /// Weights `w - m ..= w + m` in increasing order.
    pub fn weights(&self) -> std::ops::RangeInclusive<i32> {
        let m = self.depth as i32;
        self.center - m..=self.center + m
    }

    /// Checks `N W_k ⊆ W_{k-2}` for all `k` and that `N^i` induces an
    /// isomorphism `Gr_{w+i} -> Gr_{w-i}` for all `i > 0`.
    pub fn satisfies_conditions(&self, n: &Matrix) -> bool {
        let lo = self.center - self.depth as i32 - 1;
        let hi = self.center + self.depth as i32;
        is_monodromy_filtration(n, self.center, |k| {
            if k < lo {
                Subspace::zero(n.rows())
            } else if k > hi {
                Subspace::full(n.rows())
            } else {
                self.get(k)
            }
        })
    }
}

/// The two defining conditions of the monodromy weight filtration, for an
/// arbitrary candidate increasing filtration given levelwise.
pub fn is_monodromy_filtration(n: &Matrix, w: i32, level: impl Fn(i32) -> Subspace) -> bool {
    let dim = n.rows();
    let Some(powers) = n.nilpotent_powers() else {
        return false;
    };
    let reach = dim as i32 + 1;
    for k in w - reach..=w + reach {
        let image = match level(k).image_under(n) {
            Ok(s) => s,
            Err(_) => return false,
        };
        if !image.is_subspace_of(&level(k - 2)) {
            return false;
        }
    }
    for i in 1..=reach {
        let (top, top_low) = (level(w + i), level(w + i - 1));
        let (bot, bot_low) = (level(w - i), level(w - i - 1));
        let d_top = top.dim() as i64 - top_low.dim() as i64;
        let d_bot = bot.dim() as i64 - bot_low.dim() as i64;
        if d_top != d_bot || d_top < 0 {
            return false;
        }
        if d_top == 0 {
            continue;
        }
        let ni = if (i as usize) < powers.len() {
            powers[i as usize].clone()
        } else {
            Matrix::zeros(dim, dim)
        };
        match crate::linalg::induced_map(&ni, &top_low, &top, &bot_low, &bot) {
            Ok(m) if m.rank() == d_top as usize => {}
            _ => return false,
        }
    }
    true
}

/// `M_k = Σ_{j >= max(0,-k)} Ker N^{j+k+1} ∩ Im N^j`, then `W_{w+k} = M_k`.
pub fn monodromy_weight_filtration(n: &Matrix, w: i32) -> Result<WeightFiltration, HodgeError> {
    let dim = n.rows();
    let powers = n.nilpotent_powers().ok_or(HodgeError::NotNilpotent)?;
    let m = powers.len() - 1;
    let kernels: Vec<Subspace> = powers.iter().map(Matrix::kernel).collect();
    let images: Vec<Subspace> = powers.iter().map(Matrix::image).collect();
    let kernel = |t: usize| {
        if t < kernels.len() {
            kernels[t].clone()
        } else {
            Subspace::full(dim)
        }
    };

    let mut levels = BTreeMap::new();
    for k in -(m as i64) - 1..=m as i64 {
        let mut acc = Subspace::zero(dim);
        for j in (-k).max(0) as usize..=m {
            let t = (j as i64 + k + 1) as usize;
            let piece = kernel(t).intersection(&images[j])?;
            acc = acc.sum(&piece)?;
        }
        levels.insert(w + k as i32, acc);
    }
    Ok(WeightFiltration {
        center: w,
        depth: m,
        levels: Filtration::new(Direction::Increasing, dim, levels)?,
    })
}

/// One graded piece `Gr^W_k` of the graded space.
#[derive(Clone, Debug)]
pub struct GradedLevel {
    pub weight: i32,
    pub offset: usize,
    pub dim: usize,
}

/// `G = ⊕_k Gr^W_k`, realized through a rational splitting of `W`.
///
/// The columns of the splitting matrix `T` are, level by level in increasing
/// weight, the greedy complement of `W_{k-1}` in `W_k`. Standard coordinates
/// on `G` are the coordinates in these columns, so `G` and `H` share
/// dimension and the graded classes of `x ∈ W_k` are read off `T⁻¹ x`.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    weight_filtration: WeightFiltration,
    levels: Vec<GradedLevel>,
    splitting: Matrix,
    splitting_inv: Matrix,
    n_graded: Matrix,
}

impl GradedSpace {
    pub fn new(n: &Matrix, w: WeightFiltration) -> Result<Self, HodgeError> {
        let dim = n.rows();
        let mut levels = Vec::new();
        let mut columns: Vec<GVector> = Vec::new();
        for k in w.weights() {
            let complement = w.get(k).complement_basis(&w.get(k - 1))?;
            levels.push(GradedLevel {
                weight: k,
                offset: columns.len(),
                dim: complement.len(),
            });
            columns.extend(complement);
        }
        if columns.len() != dim {
            return Err(HodgeError::Shape(format!(
                "weight filtration graded pieces have total dimension {}, expected {dim}",
                columns.len()
            )));
        }
        let splitting = if dim == 0 {
            Matrix::zeros(0, 0)
        } else {
            Matrix::from_columns(dim, &columns)?
        };
        let splitting_inv = if dim == 0 {
            Matrix::zeros(0, 0)
        } else {
            splitting
                .inverse()
                .ok_or(crate::linalg::LinalgError::Singular)?
        };

        let full = if dim == 0 {
            Matrix::zeros(0, 0)
        } else {
            splitting_inv.mul(&n.mul(&splitting)?)?
        };
        // Keep only the level k -> k-2 blocks: the graded map of N.
        let mut n_graded = Matrix::zeros(dim, dim);
        for src in &levels {
            if let Some(dst) = levels.iter().find(|l| l.weight == src.weight - 2) {
                for c in src.offset..src.offset + src.dim {
                    for r in dst.offset..dst.offset + dst.dim {
                        n_graded[(r, c)] = full[(r, c)].clone();
                    }
                }
            }
        }
        Ok(GradedSpace {
            weight_filtration: w,
            levels,
            splitting,
            splitting_inv,
            n_graded,
        })
    }

    pub fn weight_filtration(&self) -> &WeightFiltration {
        &self.weight_filtration
    }

    pub fn dim(&self) -> usize {
        self.splitting.rows()
    }

    pub fn levels(&self) -> &[GradedLevel] {
        &self.levels
    }

    pub fn level(&self, k: i32) -> Option<&GradedLevel> {
        self.levels.iter().find(|l| l.weight == k)
    }

    pub fn level_dim(&self, k: i32) -> usize {
        self.level(k).map_or(0, |l| l.dim)
    }

    /// Weight of the standard basis vector `index` of `G`.
    pub fn weight_of_index(&self, index: usize) -> i32 {
        self.levels
            .iter()
            .find(|l| index >= l.offset && index < l.offset + l.dim)
            .map(|l| l.weight)
            .expect("index within the graded space")
    }

    pub fn splitting(&self) -> &Matrix {
        &self.splitting
    }

    pub fn splitting_inverse(&self) -> &Matrix {
        &self.splitting_inv
    }

    /// The graded map `Gr N: G -> G` (shifts weight by -2).
    pub fn n_graded(&self) -> &Matrix {
        &self.n_graded
    }

    /// Coordinates on `Gr^W_k` of the class of `x ∈ W_k`.
    pub fn graded_coordinates(&self, k: i32, x: &GVector) -> Result<GVector, HodgeError> {
        if !self.weight_filtration.get(k).contains(x) {
            return Err(HodgeError::Linalg(crate::linalg::LinalgError::NotInSpan));
        }
        let Some(level) = self.level(k) else {
            return Ok(GVector::zeros(0));
        };
        let all = self.splitting_inv.apply(x)?;
        Ok(GVector(
            all.0[level.offset..level.offset + level.dim].to_vec(),
        ))
    }

    /// Image of a subspace of `W_k` in `Gr^W_k` coordinates.
    pub fn graded_image(&self, k: i32, s: &Subspace) -> Result<Subspace, HodgeError> {
        let vs = s
            .basis()
            .iter()
            .map(|v| self.graded_coordinates(k, v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::echelonize(self.level_dim(k), &vs)?)
    }

    /// Standard coordinates on `G` of a vector given in `Gr^W_k` coordinates.
    pub fn embed(&self, k: i32, local: &GVector) -> GVector {
        let mut out = GVector::zeros(self.dim());
        if let Some(level) = self.level(k) {
            for (i, x) in local.iter().enumerate() {
                out[level.offset + i] = x.clone();
            }
        }
        out
    }

    /// The local `Gr^W_k` part of a vector of `G`.
    pub fn restrict(&self, k: i32, g: &GVector) -> GVector {
        match self.level(k) {
            Some(l) => GVector(g.0[l.offset..l.offset + l.dim].to_vec()),
            None => GVector::zeros(0),
        }
    }

    /// The representative in `W_k ⊆ H` of a class given in `Gr^W_k`
    /// coordinates, via the splitting.
    pub fn lift(&self, k: i32, local: &GVector) -> GVector {
        self.splitting
            .apply(&self.embed(k, local))
            .expect("splitting is square")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan(size: usize) -> Matrix {
        let mut rows = vec![vec![0i64; size]; size];
        for t in 0..size.saturating_sub(1) {
            rows[t + 1][t] = 1;
        }
        Matrix::from_int_rows(&rows).unwrap()
    }

    #[test]
    fn zero_monodromy_is_a_single_level() {
        let w = monodromy_weight_filtration(&Matrix::zeros(2, 2), -1).unwrap();
        assert!(w.get(-1).is_full());
        assert!(w.get(-2).is_zero());
        assert_eq!(w.depth(), 0);
    }

    #[test]
    fn size_three_block() {
        let n = jordan(3);
        let w = monodromy_weight_filtration(&n, 0).unwrap();
        let e2 = Subspace::echelonize(3, &[GVector::unit(3, 2)]).unwrap();
        let e12 = Subspace::echelonize(3, &[GVector::unit(3, 1), GVector::unit(3, 2)]).unwrap();
        assert!(w.get(-3).is_zero());
        assert_eq!(w.get(-2), e2);
        assert_eq!(w.get(-1), e2);
        assert_eq!(w.get(0), e12);
        assert_eq!(w.get(1), e12);
        assert!(w.get(2).is_full());
        assert!(w.satisfies_conditions(&n));
    }

    #[test]
    fn graded_n_of_size_two_block() {
        let n = jordan(2);
        let w = monodromy_weight_filtration(&n, -1).unwrap();
        let g = GradedSpace::new(&n, w).unwrap();
        assert_eq!(g.level_dim(0), 1);
        assert_eq!(g.level_dim(-2), 1);
        assert_eq!(g.level_dim(-1), 0);
        let top = g.embed(0, &GVector::from_ints(&[1]));
        let image = g.n_graded().apply(&top).unwrap();
        assert_eq!(g.restrict(-2, &image), GVector::from_ints(&[1]));
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert!(matches!(
            monodromy_weight_filtration(&Matrix::identity(2), 0),
            Err(HodgeError::NotNilpotent)
        ));
    }
}
