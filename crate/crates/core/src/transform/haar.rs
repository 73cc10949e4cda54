use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{ensure_finite, Error, Result};
use crate::filterbank::daubechies_filter;
use crate::transform::{Mode, TransformConfig, TransformState};

/// Online Haar hard-threshold denoiser.
///
/// Each step runs the Haar NDWT forward step, zeroes every detail with
/// `|d| < lambda`, then inverts the orthonormal 2x2 Haar step from the
/// coarsest smooth down to the input scale:
///
/// ```text
/// c[l-1, t] = (c[l, t] - d[l, t]) / sqrt(2)
/// ```
///
/// Only the Haar filter admits this per-step inversion; longer filters
/// lead to singular or non-orthonormal systems (see
/// [`online_invertibility_report`](crate::transform::online_invertibility_report)).
#[derive(Debug, Clone)]
pub struct HaarDenoiser {
    state: TransformState,
    lambda: f64,
}

impl HaarDenoiser {
    pub fn new(levels: usize, lambda: f64) -> Result<Self> {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "threshold must be >= 0, got {lambda}"
            )));
        }
        let haar = daubechies_filter(1)?;
        let config = TransformConfig::new(haar, levels, Mode::Ndwt)?;
        Ok(HaarDenoiser {
            state: TransformState::new(config),
            lambda,
        })
    }

    pub fn push(&mut self, y: f64) -> Result<f64> {
        let frame = self.state.push(y)?;
        let levels = self.state.config().levels();
        let mut c = frame.smooth(levels).unwrap_or_default();
        for level in (1..=levels).rev() {
            let d = frame.detail(level).unwrap_or_default();
            let d = if d.abs() < self.lambda { 0.0 } else { d };
            c = (c - d) * FRAC_1_SQRT_2;
        }
        Ok(c)
    }
}

/// Denoises a whole series with [`HaarDenoiser`].
pub fn haar_threshold_denoise(series: &[f64], levels: usize, lambda: f64) -> Result<Vec<f64>> {
    ensure_finite(series)?;
    let mut denoiser = HaarDenoiser::new(levels, lambda)?;
    series.iter().map(|&y| denoiser.push(y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_threshold_reconstructs() {
        let y: Vec<f64> = (0..200).map(|i| ((i * 37) % 17) as f64 - 3.25).collect();
        for levels in 1..=6 {
            let out = haar_threshold_denoise(&y, levels, 0.0).unwrap();
            for (a, b) in out.iter().zip(&y) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn infinite_threshold_keeps_running_average() {
        let out = haar_threshold_denoise(&[1.0, 2.0, 3.0, 4.0], 1, f64::INFINITY).unwrap();
        let expected = [1.0, 1.5, 2.5, 3.5];
        for (a, b) in out.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn constant_series_unchanged() {
        let out = haar_threshold_denoise(&[2.5; 40], 4, 10.0).unwrap();
        assert!(out.iter().all(|v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(haar_threshold_denoise(&[1.0], 1, -1.0).is_err());
        assert!(haar_threshold_denoise(&[1.0, f64::NAN], 1, 0.0).is_err());
    }
}
