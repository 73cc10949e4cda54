use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::FeatureMatrix;
use crate::error::{Error, Result};

/// Principal axes fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaModel {
    pub input_names: Vec<String>,
    pub means: Vec<f64>,
    /// `loadings[c][j]`: weight of input column `j` in component `c`.
    pub loadings: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub explained_ratio: Vec<f64>,
}

impl PcaModel {
    pub fn project(&self, x: &FeatureMatrix) -> Result<FeatureMatrix> {
        let data = x.data();
        let k = self.loadings.len();
        let scores = DMatrix::from_fn(data.nrows(), k, |i, c| {
            self.loadings[c]
                .iter()
                .enumerate()
                .map(|(j, w)| w * (data[(i, j)] - self.means[j]))
                .sum()
        });
        let names = (1..=k).map(|c| format!("pca.c{c}")).collect();
        x.with_columns(names, scores)
    }
}

/// Leading `k` principal components of the first `train_rows` rows.
///
/// Works on the `p x p` covariance, or on the `n x n` Gram matrix when
/// there are fewer rows than columns. Each component is oriented so its
/// largest-magnitude loading is positive.
pub fn pca_topk(x: &FeatureMatrix, train_rows: usize, k: usize) -> Result<(FeatureMatrix, PcaModel)> {
    let p = x.ncols();
    let n = train_rows;
    if n > x.nrows() {
        return Err(Error::InsufficientLength {
            needed: n,
            got: x.nrows(),
        });
    }
    if k == 0 || k > n.min(p) {
        return Err(Error::InvalidArgument(format!(
            "cannot extract {k} components from {n} rows x {p} columns"
        )));
    }
    if n < 2 {
        return Err(Error::InsufficientLength { needed: 2, got: n });
    }
    let mut xc = x.data().rows(0, n).into_owned();
    let means: Vec<f64> = xc.column_iter().map(|c| c.sum() / n as f64).collect();
    for (j, mut col) in xc.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    let denom = (n - 1) as f64;

    let (eigenvalues, vectors, total) = if n >= p {
        let cov = xc.tr_mul(&xc) / denom;
        let total = cov.trace();
        let eig = SymmetricEigen::new(cov);
        let order = descending(eig.eigenvalues.as_slice());
        let values: Vec<f64> = order[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors: Vec<Vec<f64>> = order[..k]
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        (values, vectors, total)
    } else {
        let gram = &xc * xc.transpose() / denom;
        let total = gram.trace();
        let eig = SymmetricEigen::new(gram);
        let order = descending(eig.eigenvalues.as_slice());
        let lambda_max = eig.eigenvalues[order[0]].max(0.0);
        let mut values = Vec::with_capacity(k);
        let mut vectors = Vec::with_capacity(k);
        for &i in &order[..k] {
            let lambda = eig.eigenvalues[i];
            if lambda <= 1e-12 * lambda_max || lambda <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "component {} has zero variance; reduce k",
                    values.len() + 1
                )));
            }
            // v = X' u / sqrt((n - 1) lambda)
            let u = eig.eigenvectors.column(i);
            let v = xc.tr_mul(&u) / (denom * lambda).sqrt();
            values.push(lambda);
            vectors.push(v.iter().copied().collect());
        }
        (values, vectors, total)
    };

    let loadings: Vec<Vec<f64>> = vectors.into_iter().map(orient).collect();
    let explained_ratio = eigenvalues
        .iter()
        .map(|l| if total > 0.0 { l / total } else { 0.0 })
        .collect();
    let model = PcaModel {
        input_names: x.names().to_vec(),
        means,
        loadings,
        eigenvalues,
        explained_ratio,
    };
    let scores = model.project(x)?;
    Ok((scores, model))
}

fn descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

fn orient(mut v: Vec<f64>) -> Vec<f64> {
    let mut pivot = 0;
    for (j, w) in v.iter().enumerate() {
        if w.abs() > v[pivot].abs() {
            pivot = j;
        }
    }
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|w| *w = -*w);
    }
    v
}
