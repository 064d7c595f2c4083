//! Clustering of scalar values into ordered difficulty levels.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Linkage {
    #[default]
    Ward,
    Average,
}

struct Cluster {
    members: Vec<usize>,
    sum: f64,
}

impl Cluster {
    fn mean(&self) -> f64 {
        self.sum / self.members.len() as f64
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(alloc::format!(
            "cluster count {k} outside [2, {n}]"
        )));
    }
    Ok(())
}

/// Agglomerative clustering of 1-D values down to `k` clusters. Labels run
/// 1..=k in increasing order of cluster mean.
pub fn hcluster(values: &[f64], k: usize, linkage: Linkage) -> Result<Vec<usize>> {
    let n = values.len();
    check_k(n, k)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut clusters: Vec<Cluster> = order
        .iter()
        .map(|&i| Cluster {
            members: vec![i],
            sum: values[i],
        })
        .collect();

    // average linkage keeps a pairwise matrix updated by Lance-Williams
    let mut avg: Vec<Vec<f64>> = match linkage {
        Linkage::Average => order
            .iter()
            .map(|&a| order.iter().map(|&b| (values[a] - values[b]).abs()).collect())
            .collect(),
        Linkage::Ward => Vec::new(),
    };

    while clusters.len() > k {
        let mut best = (f64::INFINITY, 0, 1);
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let cost = match linkage {
                    Linkage::Ward => {
                        let (na, nb) = (clusters[i].members.len() as f64, clusters[j].members.len() as f64);
                        let diff = clusters[i].mean() - clusters[j].mean();
                        na * nb / (na + nb) * diff * diff
                    }
                    Linkage::Average => avg[i][j],
                };
                if cost < best.0 {
                    best = (cost, i, j);
                }
            }
        }
        let (_, i, j) = best;
        if linkage == Linkage::Average {
            let (ni, nj) = (clusters[i].members.len() as f64, clusters[j].members.len() as f64);
            for m in 0..clusters.len() {
                let merged = (ni * avg[i][m] + nj * avg[j][m]) / (ni + nj);
                avg[i][m] = merged;
                avg[m][i] = merged;
            }
            avg[i][i] = 0.0;
            avg.remove(j);
            for row in avg.iter_mut() {
                row.remove(j);
            }
        }
        let absorbed = clusters.remove(j);
        clusters[i].sum += absorbed.sum;
        clusters[i].members.extend(absorbed.members);
    }
    Ok(labels_by_mean(n, &clusters))
}

fn labels_by_mean(n: usize, clusters: &[Cluster]) -> Vec<usize> {
    let mut rank: Vec<usize> = (0..clusters.len()).collect();
    rank.sort_by(|&a, &b| clusters[a].mean().total_cmp(&clusters[b].mean()));
    let mut labels = vec![0; n];
    for (level, &c) in rank.iter().enumerate() {
        for &m in &clusters[c].members {
            labels[m] = level + 1;
        }
    }
    labels
}

/// Lloyd's algorithm on scalars with `restarts` random initializations;
/// keeps the lowest within-cluster sum of squares. Labels ordered by mean.
pub fn kmeans(values: &[f64], k: usize, restarts: usize, seed: u64) -> Result<Vec<usize>> {
    let n = values.len();
    check_k(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..restarts.max(1) {
        // k distinct starting points
        let mut picks: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.random_range(i..n);
            picks.swap(i, j);
        }
        let mut centers: Vec<f64> = picks[..k].iter().map(|&i| values[i]).collect();
        let mut assign = vec![0usize; n];
        for _ in 0..1000 {
            let mut changed = false;
            for (a, v) in assign.iter_mut().zip(values) {
                let mut c_best = 0;
                for c in 1..k {
                    if (v - centers[c]).abs() < (v - centers[c_best]).abs() {
                        c_best = c;
                    }
                }
                if *a != c_best {
                    *a = c_best;
                    changed = true;
                }
            }
            for (c, center) in centers.iter_mut().enumerate() {
                let (s, m) = assign
                    .iter()
                    .zip(values)
                    .filter(|(a, _)| **a == c)
                    .fold((0.0, 0usize), |(s, m), (_, v)| (s + v, m + 1));
                if m > 0 {
                    *center = s / m as f64;
                }
            }
            if !changed {
                break;
            }
        }
        let sse: f64 = assign
            .iter()
            .zip(values)
            .map(|(&a, v)| (v - centers[a]) * (v - centers[a]))
            .sum();
        if best.as_ref().is_none_or(|(b, _)| sse < *b) {
            best = Some((sse, assign));
        }
    }
    let (_, assign) = best.expect("at least one restart");
    let mut clusters: Vec<Cluster> = (0..k)
        .map(|_| Cluster {
            members: Vec::new(),
            sum: 0.0,
        })
        .collect();
    for (i, &a) in assign.iter().enumerate() {
        clusters[a].members.push(i);
        clusters[a].sum += values[i];
    }
    clusters.retain(|c| !c.members.is_empty());
    Ok(labels_by_mean(n, &clusters))
}

/// Mean silhouette over all points, with singleton clusters scoring 0.
pub fn silhouette(values: &[f64], labels: &[usize]) -> Result<f64> {
    if values.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: labels.len(),
        });
    }
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (&v, &l) in values.iter().zip(labels) {
        groups.entry(l).or_default().push(v);
    }
    if groups.len() < 2 {
        return Err(Error::InvalidArgument("silhouette needs at least 2 clusters".into()));
    }
    let mut total = 0.0;
    for (&v, &l) in values.iter().zip(labels) {
        let own = &groups[&l];
        if own.len() == 1 {
            continue;
        }
        let a = own.iter().map(|o| (v - o).abs()).sum::<f64>() / (own.len() - 1) as f64;
        let b = groups
            .iter()
            .filter(|(g, _)| **g != l)
            .map(|(_, m)| m.iter().map(|o| (v - o).abs()).sum::<f64>() / m.len() as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_pairs() {
        let v = [1.0, 5.0, 1.01, 5.02];
        for l in [Linkage::Ward, Linkage::Average] {
            assert_eq!(hcluster(&v, 2, l).unwrap(), [1, 2, 1, 2]);
        }
        assert_eq!(kmeans(&v, 2, 50, 1).unwrap(), [1, 2, 1, 2]);
    }

    #[test]
    fn k_equals_n_orders_by_value() {
        let v = [3.0, -1.0, 2.0, 10.0];
        assert_eq!(hcluster(&v, 4, Linkage::Ward).unwrap(), [3, 1, 2, 4]);
        assert_eq!(hcluster(&v, 4, Linkage::Average).unwrap(), [3, 1, 2, 4]);
    }

    #[test]
    fn bad_k() {
        assert!(hcluster(&[1.0, 2.0], 1, Linkage::Ward).is_err());
        assert!(hcluster(&[1.0, 2.0], 3, Linkage::Ward).is_err());
        assert!(kmeans(&[1.0, 2.0], 3, 5, 0).is_err());
    }

    #[test]
    fn silhouette_examples() {
        let s = silhouette(&[0.0, 0.001, 100.0, 100.001], &[1, 1, 2, 2]).unwrap();
        assert!(s > 0.999);
        assert_eq!(silhouette(&[1.0, 2.0, 3.0], &[1, 2, 3]).unwrap(), 0.0);
        assert!(silhouette(&[1.0, 2.0], &[1, 1]).is_err());
        assert!(silhouette(&[1.0, 2.0], &[1]).is_err());
    }

    #[test]
    fn linkage_examples() {
        let v = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 12.0];
        let ward = hcluster(&v, 2, Linkage::Ward).unwrap();
        let avg = hcluster(&v, 2, Linkage::Average).unwrap();
        assert_eq!(avg, [1, 1, 1, 1, 1, 1, 2]);
        assert_eq!(ward, [1, 1, 1, 1, 1, 1, 2]);
        let v = [0.0, 0.1, 0.2, 3.0, 3.1, 6.0, 6.1, 6.2, 6.3];
        let labels = hcluster(&v, 3, Linkage::Ward).unwrap();
        assert_eq!(labels, [1, 1, 1, 2, 2, 3, 3, 3, 3]);
    }
}
