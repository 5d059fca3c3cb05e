use rayon::prelude::*;

/// Odometer over `[-bound, bound]^n` in lexicographic order.
pub struct BoxIter {
    bound: i64,
    current: Option<Vec<i64>>,
}

impl BoxIter {
    pub fn new(n: usize, bound: i64) -> Self {
        BoxIter {
            bound,
            current: Some(vec![-bound; n]),
        }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.bound {
                next[i] += 1;
                self.current = Some(next);
                break;
            }
            next[i] = -self.bound;
        }
        Some(out)
    }
}

/// Number of points in the box, saturating.
pub fn box_size(n: usize, bound: i64) -> u64 {
    (2 * bound as u64 + 1).saturating_pow(n as u32)
}

/// Map-reduce over the box, split by the first coordinate. The reduction
/// must be associative and commutative for the result to be independent of
/// scheduling.
pub fn par_box_fold<R, F, M>(
    n: usize,
    bound: i64,
    identity: impl Fn() -> R + Sync + Send,
    fold: F,
    merge: M,
) -> R
where
    R: Send,
    F: Fn(&mut R, &[i64]) + Sync + Send,
    M: Fn(R, R) -> R + Sync + Send,
{
    if n == 0 {
        return identity();
    }
    (-bound..=bound)
        .into_par_iter()
        .map(|first| {
            let mut acc = identity();
            for mut rest in BoxIter::new(n - 1, bound) {
                rest.insert(0, first);
                fold(&mut acc, &rest);
            }
            acc
        })
        .reduce(&identity, &merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_covers_box() {
        let all: Vec<_> = BoxIter::new(2, 1).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![-1, -1]);
        assert_eq!(all[8], vec![1, 1]);
        assert_eq!(
            par_box_fold(3, 2, || 0u64, |a, _| *a += 1, |a, b| a + b),
            box_size(3, 2)
        );
    }
}

/// Keeps the smaller of two keyed candidates: by value, then by key.
pub fn keyed_min<T: Ord>(a: Option<(f64, T)>, b: Option<(f64, T)>) -> Option<(f64, T)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => match a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)) {
            std::cmp::Ordering::Greater => Some(b),
            _ => Some(a),
        },
    }
}

/// Keeps the larger of two keyed candidates: by value, then smaller key.
pub fn keyed_max<T: Ord>(a: Option<(f64, T)>, b: Option<(f64, T)>) -> Option<(f64, T)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => match b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)) {
            std::cmp::Ordering::Greater => Some(b),
            _ => Some(a),
        },
    }
}
