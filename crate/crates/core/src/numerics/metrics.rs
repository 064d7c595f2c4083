use alloc::vec::Vec;

use crate::distribution::{GuessDistribution, BINS};
use crate::error::{Error, Result};

fn same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    Ok(())
}

/// Per-word MSE over the seven percent-scale bins.
pub fn distribution_mse(pred: &GuessDistribution, actual: &GuessDistribution) -> f64 {
    pred.bins()
        .iter()
        .zip(actual.bins())
        .map(|(p, a)| (p - a) * (p - a))
        .sum::<f64>()
        / BINS as f64
}

/// Per-word MSE averaged over words.
pub fn average_distribution_mse(pred: &[GuessDistribution], actual: &[GuessDistribution]) -> Result<f64> {
    same_len(pred.len(), actual.len())?;
    if pred.is_empty() {
        return Err(Error::InvalidArgument("no distributions to compare".into()));
    }
    Ok(pred.iter().zip(actual).map(|(p, a)| distribution_mse(p, a)).sum::<f64>() / pred.len() as f64)
}

pub fn mean_squared_error(pred: &[f64], actual: &[f64]) -> Result<f64> {
    same_len(pred.len(), actual.len())?;
    if pred.is_empty() {
        return Err(Error::InvalidArgument("no values to compare".into()));
    }
    Ok(pred.iter().zip(actual).map(|(p, a)| (p - a) * (p - a)).sum::<f64>() / pred.len() as f64)
}

pub fn accuracy(pred: &[usize], actual: &[usize]) -> Result<f64> {
    same_len(pred.len(), actual.len())?;
    if pred.is_empty() {
        return Err(Error::InvalidArgument("no labels to compare".into()));
    }
    let hits = pred.iter().zip(actual).filter(|(p, a)| p == a).count();
    Ok(hits as f64 / pred.len() as f64)
}

/// Area under the ROC curve via the rank-sum statistic; ties count half.
/// `None` when either class is empty.
pub fn binary_auc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scores[idx[j + 1]] == scores[idx[i]] {
            j += 1;
        }
        // average of 1-based ranks i+1..=j+1
        let avg = (i + j + 2) as f64 / 2.0;
        rank_sum += idx[i..=j].iter().filter(|&&t| positive[t]).count() as f64 * avg;
        i = j + 1;
    }
    let n_pos = positive.iter().filter(|&&p| p).count() as f64;
    let n_neg = positive.len() as f64 - n_pos;
    if n_pos == 0.0 || n_neg == 0.0 {
        return None;
    }
    Some((rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg))
}

/// Unweighted mean of one-vs-rest AUCs. `probs[i][j]` is the score of
/// observation `i` for level `j + 1`. Levels lacking positives or negatives
/// are skipped.
pub fn macro_auc(probs: &[Vec<f64>], labels: &[usize]) -> Result<f64> {
    same_len(probs.len(), labels.len())?;
    let k = probs.first().map_or(0, |p| p.len());
    let mut aucs = Vec::new();
    for level in 1..=k {
        let scores: Vec<f64> = probs.iter().map(|p| p[level - 1]).collect();
        let pos: Vec<bool> = labels.iter().map(|&l| l == level).collect();
        if let Some(a) = binary_auc(&scores, &pos) {
            aucs.push(a);
        }
    }
    if aucs.is_empty() {
        return Err(Error::InvalidArgument("no level has both positives and negatives".into()));
    }
    Ok(aucs.iter().sum::<f64>() / aucs.len() as f64)
}

/// Per-observation level probabilities that put all mass on the given labels.
pub fn one_hot(labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    labels
        .iter()
        .map(|&l| (1..=k).map(|j| if j == l { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    same_len(x.len(), y.len())?;
    if x.len() < 2 {
        return Err(Error::InvalidArgument("correlation needs at least 2 pairs".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidArgument("correlation undefined for a constant series".into()));
    }
    Ok(sxy / libm::sqrt(sxx * syy))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    pub average_mse: f64,
    pub accuracy: f64,
    pub macro_auc: f64,
    pub pearson_r: Option<f64>,
}

/// Distribution error, classification accuracy, macro AUC and (when the
/// paired series are non-empty) their Pearson correlation.
pub fn metrics(
    pred: &[GuessDistribution],
    actual: &[GuessDistribution],
    pred_labels: &[usize],
    actual_labels: &[usize],
    level_probs: &[Vec<f64>],
    paired: (&[f64], &[f64]),
) -> Result<MetricsReport> {
    let average_mse = average_distribution_mse(pred, actual)?;
    let acc = accuracy(pred_labels, actual_labels)?;
    let auc = macro_auc(level_probs, actual_labels)?;
    let pearson_r = if paired.0.is_empty() && paired.1.is_empty() {
        None
    } else {
        Some(pearson(paired.0, paired.1)?)
    };
    Ok(MetricsReport {
        average_mse,
        accuracy: acc,
        macro_auc: auc,
        pearson_r,
    })
}
