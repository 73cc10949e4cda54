//! Simulated test signals with optional Gaussian noise.
//!
//! Noiseless curves are sampled on `t_i = i / T`, `i = 1..=T`:
//!
//! * bumps: `sum_j a_j (1 + |(t - p_j) / w_j|)^-4` over eleven fixed
//!   positions `p_j`, heights `a_j` and widths `w_j`
//! * doppler: `sqrt(t (1 - t)) sin(2 pi 1.05 / (t + 0.05))`
//! * heavisine: `4 sin(4 pi t) - sgn(t - 0.3) - sgn(0.72 - t)`
//!
//! Noise sample `i` (zero-based) is standard normal, built by Box-Muller
//! from two counter-based SplitMix64 draws. With `pair = i / 2`:
//!
//! ```text
//! u1 = unit(mix(seed + (2 pair + 1) * 0x9E3779B97F4A7C15))
//! u2 = unit(mix(seed + (2 pair + 2) * 0x9E3779B97F4A7C15))
//! z  = sqrt(-2 ln u1) * (cos(2 pi u2) if i even else sin(2 pi u2))
//! ```
//!
//! where `mix` is the SplitMix64 finaliser and `unit(x) = ((x >> 11) + 1)
//! / 2^53`, which lies in `(0, 1]`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalKind {
    Bumps,
    Doppler,
    Heavisine,
}

impl SignalKind {
    pub const ALL: [SignalKind; 3] = [SignalKind::Bumps, SignalKind::Doppler, SignalKind::Heavisine];

    pub fn as_str(self) -> &'static str {
        match self {
            SignalKind::Bumps => "bumps",
            SignalKind::Doppler => "doppler",
            SignalKind::Heavisine => "heavisine",
        }
    }

    /// Noiseless value at `t` in `[0, 1]`.
    pub fn eval(self, t: f64) -> f64 {
        match self {
            SignalKind::Bumps => bumps(t),
            SignalKind::Doppler => (t * (1.0 - t)).sqrt() * (2.0 * PI * 1.05 / (t + 0.05)).sin(),
            SignalKind::Heavisine => 4.0 * (4.0 * PI * t).sin() - sgn(t - 0.3) - sgn(0.72 - t),
        }
    }
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bumps" => Ok(SignalKind::Bumps),
            "doppler" => Ok(SignalKind::Doppler),
            "heavisine" => Ok(SignalKind::Heavisine),
            other => Err(Error::InvalidArgument(format!(
                "unknown signal kind '{other}' (expected bumps, doppler or heavisine)"
            ))),
        }
    }
}

const BUMP_POS: [f64; 11] = [0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81];
const BUMP_HEIGHT: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
const BUMP_WIDTH: [f64; 11] = [
    0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005,
];

fn bumps(t: f64) -> f64 {
    BUMP_POS
        .iter()
        .zip(&BUMP_HEIGHT)
        .zip(&BUMP_WIDTH)
        .map(|((p, a), w)| a * (1.0 + ((t - p) / w).abs()).powi(-4))
        .sum()
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSpec {
    pub kind: SignalKind,
    pub length: usize,
    pub noise_sd: f64,
    pub seed: u64,
}

impl SignalSpec {
    pub fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return Err(Error::InsufficientLength {
                needed: 2,
                got: self.length,
            });
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "noise sd must be finite and >= 0, got {}",
                self.noise_sd
            )));
        }
        Ok(())
    }
}

/// Samples the signal and adds seeded Gaussian noise.
pub fn generate(spec: &SignalSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.length as f64;
    let noise = GaussianStream::new(spec.seed);
    Ok((1..=spec.length)
        .map(|i| {
            let base = spec.kind.eval(i as f64 / n);
            if spec.noise_sd > 0.0 {
                base + spec.noise_sd * noise.sample(i as u64 - 1)
            } else {
                base
            }
        })
        .collect())
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based standard normal sequence; sample `i` is addressable
/// directly.
#[derive(Debug, Clone, Copy)]
pub struct GaussianStream {
    seed: u64,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        GaussianStream { seed }
    }

    fn uniform(&self, counter: u64) -> f64 {
        let x = splitmix_mix(self.seed.wrapping_add(counter.wrapping_mul(GOLDEN_GAMMA)));
        ((x >> 11) + 1) as f64 / (1u64 << 53) as f64
    }

    pub fn sample(&self, i: u64) -> f64 {
        let pair = i / 2;
        let u1 = self.uniform(2 * pair + 1);
        let u2 = self.uniform(2 * pair + 2);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        if i % 2 == 0 {
            r * theta.cos()
        } else {
            r * theta.sin()
        }
    }
}
