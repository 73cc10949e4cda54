use crate::error::{ensure_finite, Error, Result};
use crate::filterbank::FilterPair;

/// Decimated wavelet pyramid. Index `l - 1` holds level `l` (1 = finest),
/// which has `len / 2^l` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    pub details: Vec<Vec<f64>>,
    pub smooths: Vec<Vec<f64>>,
}

impl Pyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn detail(&self, level: usize) -> &[f64] {
        &self.details[level - 1]
    }

    pub fn smooth(&self, level: usize) -> &[f64] {
        &self.smooths[level - 1]
    }
}

/// Classical decimated DWT of a dyadic-length series.
///
/// Uses the same causal tap alignment and constant-end extension as the
/// streaming transform, so coefficient `k` (one-based) at level `l`
/// coincides with the streaming value at `t = 2^l * k` whenever no
/// extension is involved.
pub fn batch_dwt(series: &[f64], filter: &FilterPair, levels: usize) -> Result<Pyramid> {
    let n = series.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NonDyadic(n));
    }
    let depth = n.trailing_zeros() as usize;
    if levels == 0 || levels > depth {
        return Err(Error::InvalidArgument(format!(
            "levels must be in 1..={depth} for length {n}, got {levels}"
        )));
    }
    ensure_finite(series)?;

    let h = filter.low_pass();
    let g = filter.high_pass();
    let w = h.len();
    let mut details = Vec::with_capacity(levels);
    let mut smooths = Vec::with_capacity(levels);
    let mut parent = series.to_vec();
    for _ in 0..levels {
        let half = parent.len() / 2;
        let mut d = Vec::with_capacity(half);
        let mut c = Vec::with_capacity(half);
        for k in 1..=half {
            let (mut dk, mut ck) = (0.0, 0.0);
            for i in 0..w {
                // One-based parent index 2k - (W - 1) + i.
                let idx = 2 * k as isize - (w as isize - 1) + i as isize;
                let x = if idx <= 0 { parent[0] } else { parent[idx as usize - 1] };
                dk += g[i] * x;
                ck += h[i] * x;
            }
            d.push(dk);
            c.push(ck);
        }
        details.push(d);
        smooths.push(c.clone());
        parent = c;
    }
    Ok(Pyramid { details, smooths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::daubechies_filter;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn haar_worked_example() {
        let haar = daubechies_filter(1).unwrap();
        let p = batch_dwt(&[1.0, 2.0, 3.0, 4.0], &haar, 2).unwrap();
        // Detail signs are flipped relative to (y[2k] - y[2k-1]) / sqrt(2).
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(p.detail(1), &[-FRAC_1_SQRT_2, -FRAC_1_SQRT_2]));
        assert!(close(p.smooth(1), &[3.0 * FRAC_1_SQRT_2, 7.0 * FRAC_1_SQRT_2]));
        assert!(close(p.detail(2), &[-2.0]));
        assert!(close(p.smooth(2), &[5.0]));

        let energy: f64 = p
            .details
            .iter()
            .flatten()
            .chain(p.smooth(2))
            .map(|v| v * v)
            .sum();
        assert!((energy - 30.0).abs() < 1e-12);
    }

    #[test]
    fn constant_input_has_zero_details() {
        for number in 1..=10 {
            let f = daubechies_filter(number).unwrap();
            let p = batch_dwt(&[3.5; 64], &f, 6).unwrap();
            for d in p.details.iter().flatten() {
                assert!(d.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let haar = daubechies_filter(1).unwrap();
        assert_eq!(batch_dwt(&[1.0; 6], &haar, 1), Err(Error::NonDyadic(6)));
        assert!(batch_dwt(&[1.0; 8], &haar, 4).is_err());
        assert!(batch_dwt(&[1.0; 8], &haar, 0).is_err());
    }
}
