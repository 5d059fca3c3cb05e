use num_complex::Complex64;
use serde::Serialize;

use super::EstimateError;

/// The strip `{z : 0 <= Re z < 1, r < Im z}`, cut off at `y_max` for
/// scanning.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StripRegion {
    pub r: f64,
    pub y_max: f64,
}

impl StripRegion {
    pub fn new(r: f64, y_max: f64) -> Result<Self, EstimateError> {
        if !(r > 1.0) || !r.is_finite() {
            return Err(EstimateError::InvalidParameter(format!(
                "r must be > 1, got {r}"
            )));
        }
        if !(y_max > r) || !y_max.is_finite() {
            return Err(EstimateError::InvalidParameter(format!(
                "y_max must exceed r = {r}, got {y_max}"
            )));
        }
        Ok(StripRegion { r, y_max })
    }

    /// Membership with the scanning ceiling, `r < Im z <= y_max`.
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= 0.0 && z.re < 1.0 && z.im > self.r && z.im <= self.y_max
    }
}

/// An evaluation point in the strip.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StripSample {
    pub index: usize,
    pub z: Complex64,
}

impl StripSample {
    pub fn y(&self) -> f64 {
        self.z.im
    }

    /// `t = exp(2πi z)`.
    pub fn t1(&self) -> Complex64 {
        (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * self.z).exp()
    }
}

/// Uniform in `Re z`, geometric in `Im z`: `x_i = i / re_steps` and
/// `y_j = r (y_max / r)^(j / (y_levels - 1))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StripGrid {
    pub region: StripRegion,
    pub re_steps: usize,
    pub y_levels: usize,
}

impl StripGrid {
    pub fn new(
        region: StripRegion,
        re_steps: usize,
        y_levels: usize,
    ) -> Result<Self, EstimateError> {
        if re_steps == 0 || y_levels < 2 {
            return Err(EstimateError::InvalidParameter(
                "grid needs at least 1 step in Re z and 2 levels in Im z".into(),
            ));
        }
        Ok(StripGrid {
            region,
            re_steps,
            y_levels,
        })
    }

    /// Default ceiling `r 2^(y_levels - 1)`: levels `y = r 2^j`.
    pub fn dyadic(r: f64, re_steps: usize, y_levels: usize) -> Result<Self, EstimateError> {
        let y_max = r * 2f64.powi(y_levels.saturating_sub(1) as i32);
        StripGrid::new(StripRegion::new(r, y_max)?, re_steps, y_levels)
    }

    pub fn ys(&self) -> Vec<f64> {
        let (r, top) = (self.region.r, self.region.y_max);
        (0..self.y_levels)
            .map(|j| {
                if j + 1 == self.y_levels {
                    top
                } else {
                    r * (top / r).powf(j as f64 / (self.y_levels - 1) as f64)
                }
            })
            .collect()
    }

    /// All samples, `y` outer and `x` inner.
    pub fn samples(&self) -> Vec<StripSample> {
        let mut out = Vec::with_capacity(self.re_steps * self.y_levels);
        for y in self.ys() {
            for i in 0..self.re_steps {
                out.push(StripSample {
                    index: out.len(),
                    z: Complex64::new(i as f64 / self.re_steps as f64, y),
                });
            }
        }
        out
    }
}
