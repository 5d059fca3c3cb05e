//! Search for lattice sections entering a ball around a fiber point.
//!
//! Lattice coordinates are fixed one at a time. Once every lattice
//! coordinate feeding a fiber coordinate is fixed, that coordinate is a
//! known polynomial in `z`, and its distance to the target over the closed
//! strip rectangle gives a lower bound; prefixes whose accumulated bound
//! reaches the radius are dropped.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{GScalar, GVector};

use super::section::{eval_poly, SectionModel};
use super::strip::StripRegion;

/// A section passing within the radius at `z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallHit {
    pub h: Vec<i64>,
    pub z: Complex64,
    pub distance: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BallScan {
    pub hits: Vec<BallHit>,
    /// Sections that are constant and equal to the center.
    pub through_center: Vec<Vec<i64>>,
    /// Leaves where neither bound settled membership (sections of degree
    /// two or more whose sampled minimum stays above the radius).
    pub unresolved: Vec<Vec<i64>>,
    pub leaves: u64,
    pub pruned: u64,
}

impl BallScan {
    fn merge(mut self, other: BallScan) -> BallScan {
        self.hits.extend(other.hits);
        self.through_center.extend(other.through_center);
        self.unresolved.extend(other.unresolved);
        self.leaves += other.leaves;
        self.pruned += other.pruned;
        self
    }
}

/// Distance from `w` to the closed rectangle `[0,1] × [r, y_max]`.
fn rect_distance(w: Complex64, region: &StripRegion) -> f64 {
    let dx = if w.re < 0.0 {
        -w.re
    } else if w.re > 1.0 {
        w.re - 1.0
    } else {
        0.0
    };
    let dy = if w.im < region.r {
        region.r - w.im
    } else if w.im > region.y_max {
        w.im - region.y_max
    } else {
        0.0
    };
    dx.hypot(dy)
}

/// Closest point of the half-open strip piece to `w`.
fn clamp_to_strip(w: Complex64, region: &StripRegion) -> Complex64 {
    let top_x = 1.0 - f64::EPSILON;
    let low_y = region.r * (1.0 + 4.0 * f64::EPSILON);
    Complex64::new(w.re.clamp(0.0, top_x), w.im.clamp(low_y, region.y_max))
}

/// Degree of a fiber coordinate of a flattened polynomial.
fn degree(poly: &[Complex64], fiber: usize, c: usize) -> Option<usize> {
    (0..poly.len() / fiber)
        .rev()
        .find(|&l| poly[l * fiber + c] != Complex64::new(0.0, 0.0))
}

/// Lower bound for `|q_c(z) − p_c|` over the closed rectangle.
fn coordinate_lower_bound(
    poly: &[Complex64],
    fiber: usize,
    c: usize,
    p: Complex64,
    region: &StripRegion,
) -> f64 {
    match degree(poly, fiber, c) {
        None => p.norm(),
        Some(0) => (poly[c] - p).norm(),
        Some(1) => {
            let alpha = poly[fiber + c];
            alpha.norm() * rect_distance((p - poly[c]) / alpha, region)
        }
        Some(_) => 0.0,
    }
}

pub(crate) struct BallSearch<'a> {
    model: &'a SectionModel,
    center: Vec<Complex64>,
    center_exact: GVector,
    radius: f64,
    bound: i64,
    region: StripRegion,
    columns: Vec<Vec<Complex64>>,
    /// Lattice coordinates in enumeration order.
    order: Vec<usize>,
    /// Fiber coordinates that become fixed after each enumeration depth.
    fixed_after: Vec<Vec<usize>>,
}

impl<'a> BallSearch<'a> {
    pub fn new(
        model: &'a SectionModel,
        center_exact: &GVector,
        radius: f64,
        bound: i64,
        region: StripRegion,
    ) -> Self {
        let columns = model.columns();
        let fiber = model.fiber_dim();
        let rank = model.rank();
        let len = model.degree() + 1;
        let deps: Vec<Vec<usize>> = (0..fiber)
            .map(|c| {
                (0..rank)
                    .filter(|&j| {
                        (0..len).any(|l| columns[j][l * fiber + c] != Complex64::new(0.0, 0.0))
                    })
                    .collect()
            })
            .collect();
        let poly_degree = |c: usize| -> usize {
            (0..rank)
                .filter_map(|j| degree(&columns[j], fiber, c))
                .max()
                .unwrap_or(0)
        };
        // Cheap coordinates first: low degree, few lattice dependencies.
        let mut coords: Vec<usize> = (0..fiber).collect();
        coords.sort_by_key(|&c| (poly_degree(c), deps[c].len(), c));
        let mut order = Vec::with_capacity(rank);
        for &c in &coords {
            for &j in &deps[c] {
                if !order.contains(&j) {
                    order.push(j);
                }
            }
        }
        for j in 0..rank {
            if !order.contains(&j) {
                order.push(j);
            }
        }
        let mut fixed_after = vec![Vec::new(); rank + 1];
        for c in 0..fiber {
            let at = deps[c]
                .iter()
                .map(|j| order.iter().position(|o| o == j).unwrap() + 1)
                .max()
                .unwrap_or(0);
            fixed_after[at].push(c);
        }
        BallSearch {
            model,
            center: center_exact.to_complex(),
            center_exact: center_exact.clone(),
            radius,
            bound,
            region,
            columns,
            order,
            fixed_after,
        }
    }

    fn distance(&self, poly: &[Complex64], z: Complex64) -> f64 {
        let fiber = self.model.fiber_dim();
        eval_poly(poly, fiber, z)
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b).norm())
            .sum()
    }

    fn prune_level(&self, poly: &[Complex64], depth: usize) -> f64 {
        let fiber = self.model.fiber_dim();
        self.fixed_after[depth]
            .iter()
            .map(|&c| coordinate_lower_bound(poly, fiber, c, self.center[c], &self.region))
            .sum()
    }

    fn cut(&self, lower: f64) -> bool {
        lower > self.radius * (1.0 + 1e-9) + 1e-12
    }

    pub fn run(&self) -> BallScan {
        let rank = self.model.rank();
        let width = self.columns.first().map_or(0, Vec::len);
        let base = vec![Complex64::new(0.0, 0.0); width];
        let lower0 = self.prune_level(&base, 0);
        if self.cut(lower0) || rank == 0 {
            return BallScan {
                pruned: 1,
                ..BallScan::default()
            };
        }
        (-self.bound..=self.bound)
            .into_par_iter()
            .map(|first| {
                let mut out = BallScan::default();
                let mut h = vec![0i64; rank];
                let mut poly = base.clone();
                self.descend(0, first, lower0, &mut h, &mut poly, &mut out);
                out
            })
            .reduce(BallScan::default, BallScan::merge)
    }

    fn descend(
        &self,
        depth: usize,
        value: i64,
        lower: f64,
        h: &mut Vec<i64>,
        poly: &mut Vec<Complex64>,
        out: &mut BallScan,
    ) {
        let j = self.order[depth];
        h[j] = value;
        let col = &self.columns[j];
        for (p, c) in poly.iter_mut().zip(col) {
            *p += c * value as f64;
        }
        let lower = lower + self.prune_level(poly, depth + 1);
        if self.cut(lower) {
            out.pruned += 1;
        } else if depth + 1 == h.len() {
            self.leaf(h, poly, lower, out);
        } else {
            for next in -self.bound..=self.bound {
                self.descend(depth + 1, next, lower, h, poly, out);
            }
        }
        for (p, c) in poly.iter_mut().zip(col) {
            *p -= c * value as f64;
        }
        h[j] = 0;
    }

    fn leaf(&self, h: &[i64], poly: &[Complex64], lower: f64, out: &mut BallScan) {
        out.leaves += 1;
        let fiber = self.model.fiber_dim();
        let deg = (0..fiber).filter_map(|c| degree(poly, fiber, c)).max();
        if deg.unwrap_or(0) == 0 && self.passes_through_center(h) {
            out.through_center.push(h.to_vec());
            return;
        }
        let mut candidates = vec![clamp_to_strip(
            Complex64::new(0.5, (self.region.r + self.region.y_max) / 2.0),
            &self.region,
        )];
        for c in 0..fiber {
            if degree(poly, fiber, c) == Some(1) {
                let root = (self.center[c] - poly[c]) / poly[fiber + c];
                candidates.push(clamp_to_strip(root, &self.region));
            }
        }
        let (mut best_z, mut best) = (candidates[0], f64::INFINITY);
        for z in candidates {
            let d = self.distance(poly, z);
            if d < best {
                best = d;
                best_z = z;
            }
        }
        if best >= self.radius && deg.unwrap_or(0) <= 1 && lower < self.radius {
            // Sum of moduli of affine functions: convex, so nested ternary
            // search finds the minimum.
            let (z, d) = self.convex_minimum(poly);
            if d < best {
                best = d;
                best_z = z;
            }
        } else if best >= self.radius && deg.unwrap_or(0) >= 2 {
            let (z, d) = self.sampled_minimum(poly);
            if d < best {
                best = d;
                best_z = z;
            }
            if best >= self.radius {
                out.unresolved.push(h.to_vec());
                return;
            }
        }
        if best < self.radius {
            out.hits.push(BallHit {
                h: h.to_vec(),
                z: best_z,
                distance: best,
            });
        }
    }

    fn passes_through_center(&self, h: &[i64]) -> bool {
        let coeffs = self.model.poly_exact(h);
        coeffs.iter().skip(1).all(GVector::is_zero) && coeffs[0] == self.center_exact
    }

    fn convex_minimum(&self, poly: &[Complex64]) -> (Complex64, f64) {
        let region = self.region;
        let along_x = |y: f64| -> (f64, f64) {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..80 {
                let a = lo + (hi - lo) / 3.0;
                let b = hi - (hi - lo) / 3.0;
                if self.distance(poly, Complex64::new(a, y))
                    <= self.distance(poly, Complex64::new(b, y))
                {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            let x = ((lo + hi) / 2.0).min(1.0 - f64::EPSILON);
            (x, self.distance(poly, Complex64::new(x, y)))
        };
        let (mut lo, mut hi) = (region.r, region.y_max);
        for _ in 0..80 {
            let a = lo + (hi - lo) / 3.0;
            let b = hi - (hi - lo) / 3.0;
            if along_x(a).1 <= along_x(b).1 {
                hi = b;
            } else {
                lo = a;
            }
        }
        let z = clamp_to_strip(Complex64::new(0.0, (lo + hi) / 2.0), &region);
        let (x, d) = along_x(z.im);
        (Complex64::new(x, z.im), d)
    }

    fn sampled_minimum(&self, poly: &[Complex64]) -> (Complex64, f64) {
        let region = self.region;
        let (nx, ny) = (64, 96);
        let mut best = (Complex64::new(0.0, region.y_max), f64::INFINITY);
        for j in 0..ny {
            let y = region.r * (region.y_max / region.r).powf(j as f64 / (ny - 1) as f64);
            for i in 0..nx {
                let z = clamp_to_strip(Complex64::new(i as f64 / nx as f64, y), &region);
                let d = self.distance(poly, z);
                if d < best.1 {
                    best = (z, d);
                }
            }
        }
        // pattern search around the best sample
        let (mut z, mut d) = best;
        let (mut sx, mut sy) = (1.0 / nx as f64, z.im * 0.1);
        for _ in 0..200 {
            let mut moved = false;
            for (dx, dy) in [(sx, 0.0), (-sx, 0.0), (0.0, sy), (0.0, -sy)] {
                let w = clamp_to_strip(z + Complex64::new(dx, dy), &region);
                let e = self.distance(poly, w);
                if e < d {
                    z = w;
                    d = e;
                    moved = true;
                }
            }
            if !moved {
                sx /= 2.0;
                sy /= 2.0;
            }
        }
        (z, d)
    }
}

/// Exact value `φ(h; z) − p` at the root of the linear fiber coordinate
/// with the largest leading coefficient, when that root lies in the strip.
pub(crate) fn exact_root_residual(
    model: &SectionModel,
    h: &[i64],
    center: &GVector,
    region: &StripRegion,
) -> Option<(GScalar, GVector)> {
    let coeffs = model.poly_exact(h);
    let fiber = model.fiber_dim();
    let c = (0..fiber)
        .filter(|&c| {
            coeffs.len() >= 2
                && !coeffs[1][c].is_zero()
                && coeffs.iter().skip(2).all(|v| v[c].is_zero())
        })
        .max_by(|&a, &b| {
            coeffs[1][a]
                .to_complex()
                .norm()
                .total_cmp(&coeffs[1][b].to_complex().norm())
                .then(b.cmp(&a))
        })?;
    let z = &(&center[c] - &coeffs[0][c]) / &coeffs[1][c];
    if !region.contains(z.to_complex()) {
        return None;
    }
    let residual = model.phi_exact(h, &z).sub(center);
    Some((z, residual))
}
