//! L1-penalized least squares by cyclic coordinate descent.
//!
//! Minimizes `(1/2n) * ||y - b0 - X b||^2 + alpha * ||b||_1` with the
//! intercept unpenalized. Columns are centered internally; scaling is the
//! caller's job.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 10_000;
pub const TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LassoModel {
    pub intercept: f64,
    pub coef: Vec<f64>,
    pub alpha: f64,
}

impl LassoModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.intercept + self.coef.iter().zip(x).map(|(b, v)| b * v).sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) || !self.intercept.is_finite() || self.coef.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invariant("lasso: alpha must be >= 0 and coefficients finite".into()));
        }
        Ok(())
    }
}

fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

pub fn lasso_fit<R: AsRef<[f64]>>(x: &[R], y: &[f64], alpha: f64) -> Result<LassoModel> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::LengthMismatch { left: n, right: y.len() });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("lasso needs at least 2 observations".into()));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!("alpha must be >= 0, got {alpha}")));
    }
    let p = x[0].as_ref().len();
    if x.iter().any(|r| r.as_ref().len() != p) {
        return Err(Error::InvalidArgument("ragged design matrix".into()));
    }
    if x.iter().flat_map(|r| r.as_ref()).chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite input".into()));
    }

    let nf = n as f64;
    let x_mean: Vec<f64> = (0..p)
        .map(|j| x.iter().map(|r| r.as_ref()[j]).sum::<f64>() / nf)
        .collect();
    let y_mean = y.iter().sum::<f64>() / nf;
    // column-major centered design
    let cols: Vec<Vec<f64>> = (0..p)
        .map(|j| x.iter().map(|r| r.as_ref()[j] - x_mean[j]).collect())
        .collect();
    let sq: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>() / nf)
        .collect();

    let mut coef = vec![0.0; p];
    let mut resid: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
    for _ in 0..MAX_SWEEPS {
        let mut max_change = 0.0f64;
        for j in 0..p {
            if sq[j] == 0.0 {
                continue;
            }
            let col = &cols[j];
            let rho = col.iter().zip(&resid).map(|(a, r)| a * r).sum::<f64>() / nf + sq[j] * coef[j];
            let new = soft_threshold(rho, alpha) / sq[j];
            let change = new - coef[j];
            if change != 0.0 {
                for (r, a) in resid.iter_mut().zip(col) {
                    *r -= a * change;
                }
                coef[j] = new;
                max_change = max_change.max(change.abs());
            }
        }
        if max_change < TOLERANCE {
            break;
        }
    }
    let intercept = y_mean - coef.iter().zip(&x_mean).map(|(b, m)| b * m).sum::<f64>();
    Ok(LassoModel {
        intercept,
        coef,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_at_zero_penalty() {
        let m = lasso_fit(&[[-1.0], [0.0], [1.0]], &[-2.0, 0.0, 2.0], 0.0).unwrap();
        assert!(m.intercept.abs() < 1e-12);
        assert!((m.coef[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn large_penalty_kills_coefficients() {
        let x = [[-1.0, 0.5], [0.0, -1.0], [1.0, 0.5]];
        let y = [-2.0, 1.0, 4.0];
        // max |x_j^T (y - ybar)| / n
        let ybar = 1.0;
        let kill = (0..2)
            .map(|j| x.iter().zip(&y).map(|(r, v)| r[j] * (v - ybar)).sum::<f64>().abs() / 3.0)
            .fold(0.0, f64::max);
        let m = lasso_fit(&x, &y, kill).unwrap();
        assert_eq!(m.coef, [0.0, 0.0]);
        assert!((m.intercept - ybar).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(lasso_fit(&[[1.0], [2.0]], &[1.0, 2.0], -0.1).is_err());
        assert!(lasso_fit(&[[1.0], [f64::NAN]], &[1.0, 2.0], 0.1).is_err());
        assert!(lasso_fit(&[[1.0]], &[1.0], 0.1).is_err());
        assert!(lasso_fit(&[[1.0], [2.0]], &[1.0], 0.1).is_err());
    }

    #[test]
    fn constant_column_stays_zero() {
        let m = lasso_fit(&[[1.0, 3.0], [2.0, 3.0], [3.0, 3.0]], &[1.0, 2.0, 3.0], 0.0).unwrap();
        assert_eq!(m.coef[1], 0.0);
        assert!((m.coef[0] - 1.0).abs() < 1e-12);
    }
}
