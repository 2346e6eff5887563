//! Gaussian kernel density estimate on the real line, used only to monitor how far
//! generator samples are from the target during 1D training.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::density::Density1D;
use crate::error::{Error, Result};
use crate::math::log_sum_exp;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKde {
    points: Vec<f64>,
    bandwidth: f64,
}

impl GaussianKde {
    /// KDE with Silverman's rule-of-thumb bandwidth
    /// `0.9 · min(sd, IQR / 1.34) · n^(-1/5)`.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        let bandwidth = silverman_bandwidth(&points)?;
        Self::with_bandwidth(points, bandwidth)
    }

    pub fn with_bandwidth(points: Vec<f64>, bandwidth: f64) -> Result<Self> {
        if points.is_empty() || points.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("kde", "needs at least one finite sample"));
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::domain("kde", format!("bandwidth {bandwidth} must be positive")));
        }
        Ok(GaussianKde { points, bandwidth })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

/// Silverman's bandwidth. Falls back to the standard deviation alone when the
/// interquartile range is zero, and to 1 when every sample is identical.
pub fn silverman_bandwidth(points: &[f64]) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(Error::domain("silverman_bandwidth", format!("needs two samples, got {n}")));
    }
    let mean = points.iter().sum::<f64>() / n as f64;
    let var = points.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    if !(spread > 0.0) {
        return Ok(1.0);
    }
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

impl Density1D for GaussianKde {
    fn ln_pdf(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let terms = self.points.iter().map(move |c| -0.5 * ((x - c) / h).powi(2));
        log_sum_exp(terms) - (self.points.len() as f64).ln() - h.ln() - LN_SQRT_2PI
    }

    fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let c = self.points[rng.random_range(0..self.points.len())];
        let z: f64 = StandardNormal.sample(rng);
        c + self.bandwidth * z
    }

    fn envelope(&self) -> (f64, f64, f64) {
        let lo = self.points.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi, self.bandwidth)
    }
}
