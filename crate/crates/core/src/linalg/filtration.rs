use std::collections::BTreeMap;

use super::subspace::Subspace;
use super::LinalgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A finite filtration by subspaces.
///
/// Only the stored indices carry data. An increasing filtration is zero
/// below its lowest stored index and the whole space above its highest; a
/// decreasing one is the whole space below its lowest stored index and zero
/// above its highest. Indices between stored ones take the nearest stored
/// level on the side that keeps the filtration nested (the next lower index
/// for increasing, the next higher index for decreasing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    direction: Direction,
    ambient_dim: usize,
    levels: BTreeMap<i32, Subspace>,
}

impl Filtration {
    pub fn new(
        direction: Direction,
        ambient_dim: usize,
        levels: BTreeMap<i32, Subspace>,
    ) -> Result<Self, LinalgError> {
        if let Some(bad) = levels.values().find(|s| s.ambient_dim() != ambient_dim) {
            return Err(LinalgError::DimensionMismatch {
                expected: ambient_dim,
                found: bad.ambient_dim(),
            });
        }
        let ordered: Vec<&Subspace> = levels.values().collect();
        for pair in ordered.windows(2) {
            let nested = match direction {
                Direction::Increasing => pair[0].is_subspace_of(pair[1]),
                Direction::Decreasing => pair[1].is_subspace_of(pair[0]),
            };
            if !nested {
                return Err(LinalgError::NotNested);
            }
        }
        Ok(Filtration {
            direction,
            ambient_dim,
            levels,
        })
    }

    /// Decreasing filtration generated by spanning sets: level `p` is the
    /// span of everything listed at indices `>= p`.
    pub fn decreasing_closure(
        ambient_dim: usize,
        generators: &BTreeMap<i32, Vec<super::GVector>>,
    ) -> Result<Self, LinalgError> {
        let mut levels = BTreeMap::new();
        let mut acc: Vec<super::GVector> = Vec::new();
        for (&p, vs) in generators.iter().rev() {
            acc.extend(vs.iter().cloned());
            levels.insert(p, Subspace::echelonize(ambient_dim, &acc)?);
        }
        Filtration::new(Direction::Decreasing, ambient_dim, levels)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn levels(&self) -> &BTreeMap<i32, Subspace> {
        &self.levels
    }

    /// Lowest and highest stored index.
    pub fn bounds(&self) -> Option<(i32, i32)> {
        Some((
            *self.levels.keys().next()?,
            *self.levels.keys().next_back()?,
        ))
    }

    /// The level at any integer index, following the extension rules above.
    pub fn get(&self, index: i32) -> Subspace {
        let n = self.ambient_dim;
        match self.direction {
            Direction::Increasing => match self.levels.range(..=index).next_back() {
                Some((_, s)) if index <= self.bounds().unwrap().1 => s.clone(),
                Some(_) => Subspace::full(n),
                None => Subspace::zero(n),
            },
            Direction::Decreasing => match self.levels.range(index..).next() {
                Some((_, s)) if index >= self.bounds().unwrap().0 => s.clone(),
                Some(_) => Subspace::full(n),
                None => Subspace::zero(n),
            },
        }
    }

    /// Dimension of every stored level, in index order.
    pub fn dims(&self) -> Vec<(i32, usize)> {
        self.levels.iter().map(|(&k, s)| (k, s.dim())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::GVector;

    #[test]
    fn extension_rules() {
        let line = Subspace::echelonize(2, &[GVector::from_ints(&[1, 0])]).unwrap();
        let f = Filtration::new(
            Direction::Decreasing,
            2,
            BTreeMap::from([(0, line.clone()), (2, Subspace::zero(2))]),
        )
        .unwrap();
        assert!(f.get(-1).is_full());
        assert_eq!(f.get(0), line);
        assert_eq!(f.get(1), Subspace::zero(2));
        assert!(f.get(3).is_zero());

        let w = Filtration::new(
            Direction::Increasing,
            2,
            BTreeMap::from([(-2, line.clone()), (0, Subspace::full(2))]),
        )
        .unwrap();
        assert!(w.get(-3).is_zero());
        assert_eq!(w.get(-1), line);
        assert!(w.get(5).is_full());
    }

    #[test]
    fn rejects_non_nested_levels() {
        let a = Subspace::echelonize(2, &[GVector::from_ints(&[1, 0])]).unwrap();
        let b = Subspace::echelonize(2, &[GVector::from_ints(&[0, 1])]).unwrap();
        assert!(matches!(
            Filtration::new(Direction::Increasing, 2, BTreeMap::from([(0, a), (1, b)])),
            Err(LinalgError::NotNested)
        ));
    }
}
