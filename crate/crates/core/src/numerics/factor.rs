//! Principal-axis factor extraction from the sample correlation matrix,
//! unrotated, with regression-method score coefficients.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Retained eigenvalues below this fraction of the largest make the score
/// coefficients undefined.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FactorModel {
    /// `p x m` loadings, row per variable. Empty when only score
    /// coefficients are known.
    pub loadings: Vec<Vec<f64>>,
    /// `p x m` coefficients mapping a standardized row to factor scores.
    pub score_coef: Vec<Vec<f64>>,
    pub m: usize,
    /// All eigenvalues of the correlation matrix, non-increasing.
    pub eigenvalues: Vec<f64>,
}

impl FactorModel {
    pub fn variables(&self) -> usize {
        self.score_coef.len()
    }

    /// Factor scores `z^T * score_coef` for one standardized row.
    pub fn scores(&self, z: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|f| self.score_coef.iter().zip(z).map(|(row, v)| row[f] * v).sum())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invariant(alloc::format!("factor model: {m}")));
        let p = self.score_coef.len();
        if self.m == 0 || self.m > p {
            return bad("factor count must be in 1..=variables");
        }
        if self.score_coef.iter().any(|r| r.len() != self.m) {
            return bad("score coefficient rows must have m entries");
        }
        if !self.loadings.is_empty() && (self.loadings.len() != p || self.loadings.iter().any(|r| r.len() != self.m)) {
            return bad("loadings must be variables x m");
        }
        if self.eigenvalues.windows(2).any(|w| w[1] > w[0]) {
            return bad("eigenvalues must be non-increasing");
        }
        let all = self.score_coef.iter().chain(&self.loadings).flatten().chain(&self.eigenvalues);
        if all.clone().any(|v| !v.is_finite()) {
            return bad("non-finite entry");
        }
        Ok(())
    }
}

/// Sample correlation matrix of the columns of `z`.
pub fn correlation_matrix<R: AsRef<[f64]>>(z: &[R]) -> Result<DMatrix<f64>> {
    let n = z.len();
    if n < 2 {
        return Err(Error::InvalidArgument("correlation needs at least 2 rows".into()));
    }
    let p = z[0].as_ref().len();
    if z.iter().any(|r| r.as_ref().len() != p) {
        return Err(Error::InvalidArgument("ragged data matrix".into()));
    }
    let data = DMatrix::from_fn(n, p, |i, j| z[i].as_ref()[j]);
    let mut centered = data.clone();
    for j in 0..p {
        let mean = data.column(j).mean();
        centered.column_mut(j).add_scalar_mut(-mean);
    }
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let sd: Vec<f64> = (0..p).map(|j| libm::sqrt(cov[(j, j)])).collect();
    if sd.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::Singular {
            condition: f64::INFINITY,
        });
    }
    Ok(DMatrix::from_fn(p, p, |i, j| {
        if i == j {
            1.0
        } else {
            cov[(i, j)] / (sd[i] * sd[j])
        }
    }))
}

/// Eigenpairs of a symmetric matrix sorted by decreasing eigenvalue. Each
/// eigenvector is signed so that its largest-magnitude entry is positive.
pub fn sorted_eigen(r: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(r.clone());
    let p = r.nrows();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(p, p);
    for (col, &i) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let pivot = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(col, &(v * sign));
    }
    (values, vectors)
}

/// Extracts `m` factors from standardized data `z` (`n x p`, `n > p`).
///
/// Loadings are `v_j * sqrt(lambda_j)` for the `m` largest eigenpairs of the
/// correlation matrix `R`. Score coefficients are `R^-1 * loadings`, computed
/// in the eigenbasis as `v_j / sqrt(lambda_j)`.
pub fn factor_fit<R: AsRef<[f64]>>(z: &[R], m: usize) -> Result<FactorModel> {
    let n = z.len();
    let p = z.first().map_or(0, |r| r.as_ref().len());
    if n <= p {
        return Err(Error::InvalidArgument(alloc::format!(
            "factor analysis needs more rows ({n}) than variables ({p})"
        )));
    }
    if m == 0 || m > p {
        return Err(Error::InvalidArgument(alloc::format!("factor count {m} outside 1..={p}")));
    }
    let r = correlation_matrix(z)?;
    let (values, vectors) = sorted_eigen(&r);
    let largest = values[0];
    let smallest = values[p - 1];
    if !(values[m - 1] > RANK_TOLERANCE * largest) {
        return Err(Error::Singular {
            condition: if smallest > 0.0 { largest / smallest } else { f64::INFINITY },
        });
    }
    let loadings = (0..p)
        .map(|i| (0..m).map(|j| vectors[(i, j)] * libm::sqrt(values[j])).collect())
        .collect();
    let score_coef = (0..p)
        .map(|i| (0..m).map(|j| vectors[(i, j)] / libm::sqrt(values[j])).collect())
        .collect();
    Ok(FactorModel {
        loadings,
        score_coef,
        m,
        eigenvalues: values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        let z: Vec<[f64; 3]> = (0..3).map(|i| [i as f64, (i * i) as f64, 1.0 - i as f64]).collect();
        assert!(factor_fit(&z, 1).is_err());
        let z: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, (i * i) as f64]).collect();
        assert!(factor_fit(&z, 0).is_err());
        assert!(factor_fit(&z, 3).is_err());
        assert!(factor_fit(&z, 2).is_ok());
    }

    #[test]
    fn singular_retained_space_errors() {
        // third column duplicates the first
        let z: Vec<[f64; 3]> = (0..10)
            .map(|i| [i as f64, ((i * 7) % 5) as f64, i as f64])
            .collect();
        assert!(factor_fit(&z, 2).is_ok());
        assert!(matches!(factor_fit(&z, 3), Err(Error::Singular { .. })));
    }

    #[test]
    fn validate_catches_ragged_coefficients() {
        let z: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, ((i * 3) % 4) as f64]).collect();
        let mut f = factor_fit(&z, 1).unwrap();
        f.validate().unwrap();
        f.score_coef[0].push(1.0);
        assert!(f.validate().is_err());
    }
}
