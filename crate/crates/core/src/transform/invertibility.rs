use nalgebra::DMatrix;

use crate::error::Result;
use crate::filterbank::daubechies_filter;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvertibilityReport {
    pub width: usize,
    pub det_magnitude: f64,
    pub orthonormal: bool,
}

/// Square banded matrix of `W - 1` interleaved (h, g) row pairs, each pair
/// shifted one column right of the previous. Size `2(W - 1)`; for `W = 4`
/// this is the 6x6 one-level online forward system.
pub fn banded_transform_matrix(h: &[f64], g: &[f64]) -> DMatrix<f64> {
    let w = h.len();
    let size = 2 * (w - 1);
    let mut m = DMatrix::zeros(size, size);
    for pair in 0..w - 1 {
        for n in 0..w {
            m[(2 * pair, pair + n)] = h[n];
            m[(2 * pair + 1, pair + n)] = g[n];
        }
    }
    m
}

/// Determinant magnitude and row orthonormality of the online forward
/// system for the Daubechies filter with `number` vanishing moments.
pub fn online_invertibility_report(number: u32) -> Result<InvertibilityReport> {
    let filter = daubechies_filter(number)?;
    let m = banded_transform_matrix(filter.low_pass(), filter.high_pass());
    let det_magnitude = m.clone().lu().determinant().abs();
    let gram = &m * m.transpose();
    let identity = DMatrix::<f64>::identity(m.nrows(), m.nrows());
    let orthonormal = (gram - identity).amax() < 1e-10;
    Ok(InvertibilityReport {
        width: filter.width(),
        det_magnitude,
        orthonormal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_an_orthonormal_rotation() {
        let r = online_invertibility_report(1).unwrap();
        assert_eq!(r.width, 2);
        assert!(r.orthonormal);
        assert!((r.det_magnitude - 1.0).abs() < 1e-12);
    }

    #[test]
    fn db2_system_shrinks_volume() {
        let r = online_invertibility_report(2).unwrap();
        assert_eq!(r.width, 4);
        assert!(r.det_magnitude < 1.0);
        assert!(!r.orthonormal);
    }

    #[test]
    fn determinant_matches_eigenvalue_product() {
        for number in 1..=10 {
            let f = daubechies_filter(number).unwrap();
            let m = banded_transform_matrix(f.low_pass(), f.high_pass());
            let eig = m.clone().complex_eigenvalues();
            let product: f64 = eig.iter().map(|z| z.norm()).product();
            let r = online_invertibility_report(number).unwrap();
            assert!(
                (product - r.det_magnitude).abs() < 1e-8,
                "N={number}: {product} vs {}",
                r.det_magnitude
            );
        }
    }
}
