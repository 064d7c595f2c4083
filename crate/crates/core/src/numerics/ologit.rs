//! Proportional-odds (ordered logistic) regression.
//!
//! `P(level <= j | f) = logistic(theta_j - beta^T f)` for `j = 1..k-1`, with
//! no separate intercept: the cutpoints absorb it. Fitted by damped Newton
//! iterations on the exact log-likelihood Hessian.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 100;
pub const GRADIENT_TOLERANCE: f64 = 1e-8;
/// Coefficient magnitude treated as divergence to infinity.
pub const SEPARATION_BOUND: f64 = 1e3;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrdLogitModel {
    pub beta: Vec<f64>,
    pub cutpoints: Vec<f64>,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrdLogitFit {
    pub model: OrdLogitModel,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub iterations: usize,
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

impl OrdLogitModel {
    pub fn new(beta: Vec<f64>, cutpoints: Vec<f64>) -> Result<Self> {
        let model = OrdLogitModel {
            k: cutpoints.len() + 1,
            beta,
            cutpoints,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invariant(alloc::format!("ordered logit: {m}")));
        if self.k < 2 || self.cutpoints.len() != self.k - 1 {
            return bad("need k >= 2 levels and k - 1 cutpoints");
        }
        if self.cutpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("cutpoints must be strictly increasing");
        }
        if self.beta.iter().chain(&self.cutpoints).any(|v| !v.is_finite()) {
            return bad("non-finite parameter");
        }
        Ok(())
    }

    /// Linear predictor `beta^T f`.
    pub fn linear(&self, f: &[f64]) -> f64 {
        self.beta.iter().zip(f).map(|(b, x)| b * x).sum()
    }

    /// Level for a linear predictor value. A value equal to a cutpoint goes
    /// to the lower level.
    pub fn level_for(&self, y: f64) -> usize {
        1 + self.cutpoints.iter().filter(|&&c| c < y).count()
    }

    pub fn classify(&self, f: &[f64]) -> (usize, f64) {
        let y = self.linear(f);
        (self.level_for(y), y)
    }

    /// Probability of each level 1..=k.
    pub fn probabilities(&self, f: &[f64]) -> Vec<f64> {
        let y = self.linear(f);
        let mut out = Vec::with_capacity(self.k);
        let mut prev = 0.0;
        for c in &self.cutpoints {
            let cum = logistic(c - y);
            out.push((cum - prev).max(0.0));
            prev = cum;
        }
        out.push((1.0 - prev).max(0.0));
        out
    }

    pub fn log_likelihood<R: AsRef<[f64]>>(&self, f: &[R], labels: &[usize]) -> f64 {
        f.iter()
            .zip(labels)
            .map(|(row, &l)| libm::log(self.probabilities(row.as_ref())[l - 1].max(f64::MIN_POSITIVE)))
            .sum()
    }

    pub fn parameter_count(&self) -> usize {
        self.beta.len() + self.cutpoints.len()
    }
}

/// `(AIC, BIC)` for a log-likelihood.
pub fn information_criteria(log_likelihood: f64, params: usize, n: usize) -> (f64, f64) {
    let p = params as f64;
    (2.0 * p - 2.0 * log_likelihood, p * libm::log(n as f64) - 2.0 * log_likelihood)
}

struct Evaluation {
    ll: f64,
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

/// Log-likelihood with gradient and Hessian over `[cutpoints..., beta...]`.
fn evaluate<R: AsRef<[f64]>>(params: &[f64], k: usize, f: &[R], labels: &[usize]) -> Option<Evaluation> {
    let c = k - 1;
    let dim = params.len();
    let (theta, beta) = params.split_at(c);
    let mut ll = 0.0;
    let mut grad = DVector::zeros(dim);
    let mut hess = DMatrix::zeros(dim, dim);
    let mut a_hi = DVector::zeros(dim);
    let mut a_lo = DVector::zeros(dim);
    for (row, &level) in f.iter().zip(labels) {
        let x = row.as_ref();
        let eta: f64 = beta.iter().zip(x).map(|(b, v)| b * v).sum();
        // upper bound theta_level, lower bound theta_{level-1}
        let upper = (level <= c).then(|| theta[level - 1] - eta);
        let lower = (level >= 2).then(|| theta[level - 2] - eta);
        let cdf = |u: Option<f64>, default: f64| u.map_or(default, logistic);
        let (fu, fl) = (cdf(upper, 1.0), cdf(lower, 0.0));
        let p = fu - fl;
        if !(p > 0.0) {
            return None;
        }
        ll += libm::log(p);

        // d(u)/d(params): +1 on its cutpoint, -x on beta
        let fill = |a: &mut DVector<f64>, cut: Option<usize>| {
            a.fill(0.0);
            if let Some(j) = cut {
                a[j] = 1.0;
            }
            for (m, v) in x.iter().enumerate() {
                a[c + m] = -v;
            }
        };
        fill(&mut a_hi, (level <= c).then(|| level - 1));
        fill(&mut a_lo, (level >= 2).then(|| level - 2));
        let dens = |u: Option<f64>| u.map_or(0.0, |u| { let s = logistic(u); s * (1.0 - s) });
        let slope = |u: Option<f64>| u.map_or(0.0, |u| { let s = logistic(u); s * (1.0 - s) * (1.0 - 2.0 * s) });
        let (du, dl) = (dens(upper), dens(lower));
        let (su, sl) = (slope(upper), slope(lower));

        // grad p and hess p, then log-transform
        let gp = &a_hi * du - &a_lo * dl;
        grad += &gp / p;
        let hp = &a_hi * a_hi.transpose() * su - &a_lo * a_lo.transpose() * sl;
        hess += hp / p - &gp * gp.transpose() / (p * p);
    }
    Some(Evaluation { ll, grad, hess })
}

fn cutpoints_increasing(params: &[f64], c: usize) -> bool {
    params[..c].windows(2).all(|w| w[0] < w[1])
}

/// Maximum-likelihood fit. `labels` are 1-based and every level in `1..=k`
/// must occur, where `k` is the largest label.
pub fn ologit_fit<R: AsRef<[f64]>>(f: &[R], labels: &[usize]) -> Result<OrdLogitFit> {
    let n = f.len();
    if n != labels.len() {
        return Err(Error::LengthMismatch { left: n, right: labels.len() });
    }
    let k = labels.iter().copied().max().unwrap_or(0);
    if k < 2 {
        return Err(Error::InvalidArgument("need at least two levels".into()));
    }
    let mut counts = vec![0usize; k];
    for &l in labels {
        if l == 0 {
            return Err(Error::InvalidArgument("levels are 1-based".into()));
        }
        counts[l - 1] += 1;
    }
    if let Some(missing) = counts.iter().position(|&c| c == 0) {
        return Err(Error::InvalidArgument(alloc::format!("level {} has no observations", missing + 1)));
    }
    let m = f[0].as_ref().len();
    if f.iter().any(|r| r.as_ref().len() != m) {
        return Err(Error::InvalidArgument("ragged factor matrix".into()));
    }
    if f.iter().flat_map(|r| r.as_ref()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite factor score".into()));
    }

    let c = k - 1;
    // start from the marginal cumulative logits with beta = 0
    let mut params = vec![0.0; c + m];
    let mut cum = 0usize;
    for j in 0..c {
        cum += counts[j];
        let q = cum as f64 / n as f64;
        params[j] = libm::log(q / (1.0 - q));
    }

    let mut trace = Vec::new();
    let mut current = evaluate(&params, k, f, labels).expect("interior start has positive likelihood");
    for iteration in 0..=MAX_ITERATIONS {
        let gnorm = current.grad.amax();
        trace.push(gnorm);
        if gnorm < GRADIENT_TOLERANCE {
            let model = OrdLogitModel {
                cutpoints: params[..c].to_vec(),
                beta: params[c..].to_vec(),
                k,
            };
            model.validate()?;
            let (aic, bic) = information_criteria(current.ll, c + m, n);
            return Ok(OrdLogitFit {
                model,
                log_likelihood: current.ll,
                aic,
                bic,
                iterations: iteration,
            });
        }
        if iteration == MAX_ITERATIONS {
            break;
        }
        let neg_hess = -current.hess.clone();
        let step = match neg_hess.clone().cholesky() {
            Some(ch) => ch.solve(&current.grad),
            None => match neg_hess.lu().solve(&current.grad) {
                Some(s) => s,
                None => return Err(separation(iteration, &params[c..], trace)),
            },
        };

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = params.iter().zip(step.iter()).map(|(p, s)| p + t * s).collect();
            if cutpoints_increasing(&trial, c) {
                if let Some(e) = evaluate(&trial, k, f, labels) {
                    if e.ll >= current.ll - 1e-12 * current.ll.abs() {
                        accepted = Some((trial, e));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        let Some((next, eval)) = accepted else {
            return Err(Error::NonConvergence {
                iterations: iteration,
                trace,
            });
        };
        params = next;
        current = eval;
        if params[c..].iter().any(|b| b.abs() > SEPARATION_BOUND) {
            return Err(separation(iteration + 1, &params[c..], trace));
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS,
        trace,
    })
}

fn separation(iterations: usize, beta: &[f64], trace: Vec<f64>) -> Error {
    Error::Separation {
        iterations,
        beta_norm: beta.iter().fold(0.0f64, |m, b| m.max(b.abs())),
        trace,
    }
}
