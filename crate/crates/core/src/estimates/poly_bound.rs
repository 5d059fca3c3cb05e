//! Randomized search for polynomials violating the bound `A(f, z0) <= C`
//! under the derivative smallness conditions at `z0`.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::EstimateError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolyBoundParams {
    /// Degree bound.
    pub n: usize,
    /// Number of conditions on `f` and on `f̄`.
    pub n1: usize,
    pub n2: usize,
    pub a: Complex64,
    pub a_prime: Complex64,
    pub eps: f64,
    pub r: f64,
    pub y_max: f64,
    pub trials: usize,
    pub seed: u64,
    /// Random coefficients are drawn with `|c_k| k! y0^k <= coeff_box`.
    pub coeff_box: f64,
}

impl PolyBoundParams {
    pub fn new(n: usize, n1: usize, n2: usize, seed: u64) -> Self {
        PolyBoundParams {
            n,
            n1,
            n2,
            a: Complex64::new(1.0, 0.0),
            a_prime: Complex64::new(1.0, 0.0),
            eps: 1.0 / 64.0,
            r: 2.0,
            y_max: 512.0,
            trials: 10_000,
            seed,
            coeff_box: 4.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyBoundSample {
    pub coefficients: Vec<Complex64>,
    pub z0: Complex64,
    pub a_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyBoundReport {
    pub params: PolyBoundParams,
    /// Samples satisfying both sets of conditions, per half.
    pub calibration_satisfying: usize,
    pub validation_satisfying: usize,
    pub calibration_max: f64,
    pub validation_max: f64,
    /// `1.1` times the calibration maximum.
    pub fitted_c: f64,
    /// Validation samples with `A > fitted_c`.
    pub violations: usize,
    pub worst: Option<PolyBoundSample>,
    /// `C(k)` for `k = 0..=n`.
    pub c_constants: Vec<String>,
}

/// `C(k) = Σ_l l! binom(k, l) 2^(k−l)`: with `|z0| <= 2 y0`,
/// `A((z − z0)^k, z0) <= C(k) y0^k`.
pub fn c_constant(k: usize) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut binom = BigUint::one();
    let mut fact = BigUint::one();
    for l in 0..=k {
        if l > 0 {
            binom = binom * BigUint::from(k - l + 1) / BigUint::from(l);
            fact *= BigUint::from(l);
        }
        total += &fact * &binom * (BigUint::one() << (k - l));
    }
    total
}

/// `A(f, z0) = Σ_k |f^(k)(0)| y0^k` for `f = Σ c_k z^k`.
pub fn a_poly(coeffs: &[Complex64], y0: f64) -> f64 {
    let mut fact = 1.0;
    let mut yk = 1.0;
    let mut total = 0.0;
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        total += fact * c.norm() * yk;
        yk *= y0;
    }
    total
}

/// `f^(k)(z0)`.
pub fn derivative_at(coeffs: &[Complex64], k: usize, z0: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for l in (k..coeffs.len()).rev() {
        let falling: f64 = ((l - k + 1)..=l).map(|x| x as f64).product();
        acc = acc * z0 + coeffs[l] * falling;
    }
    acc
}

/// Both sets of smallness conditions at `z0`.
pub fn conditions_hold(p: &PolyBoundParams, coeffs: &[Complex64], z0: Complex64) -> bool {
    let y0 = z0.im;
    let a = a_poly(coeffs, y0);
    let conj: Vec<Complex64> = coeffs.iter().map(|c| c.conj()).collect();
    let check = |cs: &[Complex64], shift: Complex64, count: usize| {
        let mut yk = 1.0;
        for k in 0..count {
            let mut d = derivative_at(cs, k, z0);
            if k == 0 {
                d -= shift;
            }
            if d.norm() > p.eps * a / yk {
                return false;
            }
            yk *= y0;
        }
        true
    };
    check(coeffs, p.a, p.n1) && check(&conj, p.a_prime, p.n2)
}

fn random_z0(p: &PolyBoundParams, rng: &mut ChaCha8Rng) -> Complex64 {
    let x: f64 = rng.gen_range(0.0..1.0);
    let u: f64 = rng.gen_range(0.0..1.0);
    let y = p.r * (p.y_max / p.r).powf(u);
    Complex64::new(x, y.max(p.r * (1.0 + 1e-12)))
}

fn random_direction(p: &PolyBoundParams, y0: f64, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut fact = 1.0;
    (0..=p.n)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            c * (p.coeff_box / (fact * y0.powi(k as i32)))
        })
        .collect()
}

fn base(p: &PolyBoundParams) -> Vec<Complex64> {
    let mut b = vec![Complex64::new(0.0, 0.0); p.n + 1];
    b[0] = p.a;
    b
}

/// Walks from the constant `a` along `dir` and returns the last point
/// (found by doubling, then bisection) where the conditions still hold.
fn boundary(p: &PolyBoundParams, dir: &[Complex64], z0: Complex64) -> Option<Vec<Complex64>> {
    let base = base(p);
    if !conditions_hold(p, &base, z0) {
        return None;
    }
    let at = |t: f64| -> Vec<Complex64> { base.iter().zip(dir).map(|(b, d)| b + d * t).collect() };
    let (mut good, mut bad) = (0.0, None);
    let mut t = 1.0 / 64.0;
    for _ in 0..40 {
        if conditions_hold(p, &at(t), z0) {
            good = t;
            t *= 2.0;
        } else {
            bad = Some(t);
            break;
        }
    }
    if let Some(mut hi) = bad {
        for _ in 0..48 {
            let mid = (good + hi) / 2.0;
            if conditions_hold(p, &at(mid), z0) {
                good = mid;
            } else {
                hi = mid;
            }
        }
    }
    Some(at(good))
}

fn sample_at(p: &PolyBoundParams, dir: &[Complex64], z0: Complex64) -> Option<PolyBoundSample> {
    boundary(p, dir, z0).map(|c| PolyBoundSample {
        a_value: a_poly(&c, z0.im),
        coefficients: c,
        z0,
    })
}

/// Hill climb over ray directions and base points, staying on the
/// boundary of the condition set.
fn climb(
    p: &PolyBoundParams,
    start: PolyBoundSample,
    rng: &mut ChaCha8Rng,
    steps: usize,
) -> PolyBoundSample {
    let mut dir: Vec<Complex64> = start
        .coefficients
        .iter()
        .zip(base(p))
        .map(|(c, b)| c - b)
        .collect();
    let mut best = match sample_at(p, &dir, start.z0) {
        Some(s) if s.a_value >= start.a_value => s,
        _ => start,
    };
    let mut sigma = 0.3;
    let mut failures = 0;
    for step in 0..steps {
        let y0 = best.z0.im;
        let z0 = if step % 3 == 2 {
            let x = (best.z0.re + sigma * rng.gen_range(-0.5..0.5)).clamp(0.0, 1.0 - f64::EPSILON);
            let y = (y0 * (sigma * rng.gen_range(-1.0..1.0f64)).exp())
                .clamp(p.r * (1.0 + 1e-12), p.y_max);
            Complex64::new(x, y)
        } else {
            best.z0
        };
        let size = a_poly(&dir, y0).max(f64::MIN_POSITIVE);
        let noise = random_direction(p, y0, rng);
        let noise_size = a_poly(&noise, y0).max(f64::MIN_POSITIVE);
        let cand: Vec<Complex64> = if step % 3 == 2 {
            dir.clone()
        } else {
            dir.iter()
                .zip(&noise)
                .map(|(d, e)| d + e * (sigma * size / noise_size))
                .collect()
        };
        match sample_at(p, &cand, z0) {
            Some(s) if s.a_value > best.a_value => {
                best = s;
                dir = cand;
                failures = 0;
                sigma = (sigma * 1.5).min(0.5);
            }
            _ => {
                failures += 1;
                if failures >= 20 {
                    sigma = (sigma * 0.5).max(1e-4);
                    failures = 0;
                }
            }
        }
    }
    best
}

#[derive(Default)]
struct Half {
    satisfying: usize,
    best: Option<PolyBoundSample>,
    samples: Vec<PolyBoundSample>,
}

impl Half {
    fn push(&mut self, s: PolyBoundSample) {
        self.satisfying += 1;
        if self.best.as_ref().map_or(true, |b| s.a_value > b.a_value) {
            self.best = Some(s.clone());
        }
        self.samples.push(s);
    }
}

pub fn poly_bound_harness(p: &PolyBoundParams) -> Result<PolyBoundReport, EstimateError> {
    if p.n1 + p.n2 <= p.n {
        return Err(EstimateError::InvalidParameter(format!(
            "need n1 + n2 > n, got {} + {} <= {}",
            p.n1, p.n2, p.n
        )));
    }
    if !(p.r > 1.0) || !(p.y_max > p.r) || !(p.eps > 0.0) || p.trials == 0 || !(p.coeff_box > 0.0) {
        return Err(EstimateError::InvalidParameter(
            "need r > 1, y_max > r, eps > 0, trials >= 1 and coeff_box > 0".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut halves = [Half::default(), Half::default()];
    for trial in 0..p.trials {
        let z0 = random_z0(p, &mut rng);
        let coeffs = match trial % 3 {
            0 => {
                let mut c = random_direction(p, z0.im, &mut rng);
                c[0] += p.a;
                Some(c)
            }
            1 => {
                // perturb the constant a by a term vanishing to order n1 at z0
                let mut c = base(p);
                let g = rng.gen_range(-1.0..1.0) * p.coeff_box / z0.im.powi(p.n as i32);
                // (z − z0)^n1 z^(n − n1) expanded
                let mut prod = vec![Complex64::new(1.0, 0.0)];
                for _ in 0..p.n1.min(p.n) {
                    let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                    for (i, x) in prod.iter().enumerate() {
                        next[i + 1] += x;
                        next[i] -= x * z0;
                    }
                    prod = next;
                }
                let shift = p.n - p.n1.min(p.n);
                for (i, x) in prod.iter().enumerate() {
                    c[i + shift] += x * g;
                }
                Some(c)
            }
            _ => {
                let d = random_direction(p, z0.im, &mut rng);
                boundary(p, &d, z0)
            }
        };
        if let Some(c) = coeffs {
            if conditions_hold(p, &c, z0) {
                let a_value = a_poly(&c, z0.im);
                halves[trial % 2].push(PolyBoundSample {
                    coefficients: c,
                    z0,
                    a_value,
                });
            }
        }
    }
    // Push the largest samples of each half toward the supremum.
    for half in halves.iter_mut() {
        half.samples.sort_by(|a, b| {
            b.a_value
                .total_cmp(&a.a_value)
                .then(a.z0.im.total_cmp(&b.z0.im))
        });
        let top: Vec<PolyBoundSample> = half.samples.iter().take(16).cloned().collect();
        for s in top {
            let s = climb(p, s, &mut rng, 3000);
            if half.best.as_ref().map_or(true, |b| s.a_value > b.a_value) {
                half.best = Some(s.clone());
            }
            half.samples.push(s);
        }
    }
    let [cal, val] = halves;
    let calibration_max = cal.best.as_ref().map_or(0.0, |b| b.a_value);
    let validation_max = val.best.as_ref().map_or(0.0, |b| b.a_value);
    let fitted_c = 1.1 * calibration_max;
    let violations = val.samples.iter().filter(|s| s.a_value > fitted_c).count();
    Ok(PolyBoundReport {
        params: *p,
        calibration_satisfying: cal.satisfying,
        validation_satisfying: val.satisfying,
        calibration_max,
        validation_max,
        fitted_c,
        violations,
        worst: val.best,
        c_constants: (0..=p.n).map(|k| c_constant(k).to_string()).collect(),
    })
}
