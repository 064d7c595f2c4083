//! Slow, independent reference implementations used to check the fast
//! paths. Shared with the acceptance suite in the command-line crate.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use wordle_difficulty_core::feedback::{Feedback, Mark};
use wordle_difficulty_core::lexicon::Word;

/// Two-pass feedback written against strings, kept deliberately naive.
pub fn feedback_by_hand(guess: &str, solution: &str) -> String {
    let g: Vec<char> = guess.chars().collect();
    let mut s: Vec<Option<char>> = solution.chars().map(Some).collect();
    let mut out = vec!['X'; 5];
    for i in 0..5 {
        if Some(g[i]) == s[i] {
            out[i] = 'G';
            s[i] = None;
        }
    }
    for i in 0..5 {
        if out[i] == 'G' {
            continue;
        }
        if let Some(j) = (0..5).find(|&j| out[j] != 'G' && s[j] == Some(g[i])) {
            out[i] = 'Y';
            s[j] = None;
        }
    }
    out.into_iter().collect()
}

pub fn feedback_string(f: &Feedback) -> String {
    f.cells()
        .iter()
        .map(|m| match m {
            Mark::Green => 'G',
            Mark::Yellow => 'Y',
            Mark::Gray => 'X',
        })
        .collect()
}

/// Textbook Levenshtein distance over byte strings.
pub fn levenshtein(a: &[u8], b: &[u8]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, cb) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(ca != cb)).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

pub fn word(s: &str) -> Word {
    s.parse().unwrap()
}

pub struct QpOracle {
    pub delta: [f64; 7],
    pub objective: f64,
    pub active: Vec<usize>,
}

/// Enumerates all 2^7 choices of bins pinned at their lower bound, solves
/// the KKT system of each remaining equality-constrained problem with a
/// dense LU factorization, and keeps the feasible minimizer.
pub fn qp_brute_force(d: &[f64; 7], w: &[f64; 7], target: f64) -> Option<QpOracle> {
    let mut best: Option<QpOracle> = None;
    for mask in 0u32..128 {
        let pinned: Vec<usize> = (0..7).filter(|i| mask & (1 << i) != 0).collect();
        let free: Vec<usize> = (0..7).filter(|i| mask & (1 << i) == 0).collect();
        if free.len() < 2 {
            continue;
        }
        let nf = free.len();
        // rows: stationarity for each free bin, then the two equalities
        let mut k = DMatrix::<f64>::zeros(nf + 2, nf + 2);
        let mut rhs = DVector::<f64>::zeros(nf + 2);
        for (r, &i) in free.iter().enumerate() {
            k[(r, r)] = 2.0 * w[i];
            k[(r, nf)] = -1.0;
            k[(r, nf + 1)] = -((i + 1) as f64);
            k[(nf, r)] = 1.0;
            k[(nf + 1, r)] = (i + 1) as f64;
        }
        let pinned_sum: f64 = pinned.iter().map(|&i| -d[i]).sum();
        let pinned_moment: f64 = pinned.iter().map(|&i| -d[i] * (i + 1) as f64).sum();
        rhs[nf] = -pinned_sum;
        rhs[nf + 1] = target - pinned_moment;
        let Some(sol) = k.lu().solve(&rhs) else { continue };
        let mut delta = [0.0; 7];
        for &i in &pinned {
            delta[i] = -d[i];
        }
        for (r, &i) in free.iter().enumerate() {
            delta[i] = sol[r];
        }
        let feasible = (0..7).all(|i| delta[i] >= -d[i] - 1e-9)
            && delta.iter().sum::<f64>().abs() < 1e-7
            && (delta.iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).sum::<f64>() - target).abs() < 1e-7;
        if !feasible {
            continue;
        }
        let objective: f64 = (0..7).map(|i| w[i] * delta[i] * delta[i]).sum();
        if best.as_ref().is_none_or(|b| objective < b.objective) {
            best = Some(QpOracle {
                delta,
                objective,
                active: pinned.iter().map(|i| i + 1).collect(),
            });
        }
    }
    best
}

/// Least squares with intercept via the normal equations.
pub fn ols(x: &[Vec<f64>], y: &[f64]) -> (f64, Vec<f64>) {
    let n = x.len();
    let p = x[0].len();
    let a = DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { x[i][j - 1] });
    let b = DVector::from_column_slice(y);
    let sol = (a.transpose() * &a).lu().solve(&(a.transpose() * b)).expect("full rank");
    (sol[0], sol.iter().skip(1).copied().collect())
}

/// Largest violation of the lasso subgradient conditions
/// `(1/n) x_j^T r = alpha * sign(b_j)` (or within `[-alpha, alpha]` at zero),
/// plus the intercept condition `sum r = 0`.
pub fn lasso_kkt_violation(x: &[Vec<f64>], y: &[f64], intercept: f64, coef: &[f64], alpha: f64) -> f64 {
    let n = x.len() as f64;
    let resid: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(row, yi)| yi - intercept - row.iter().zip(coef).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    let mut worst = (resid.iter().sum::<f64>() / n).abs();
    for j in 0..coef.len() {
        let g: f64 = x.iter().zip(&resid).map(|(row, r)| row[j] * r).sum::<f64>() / n;
        let v = if coef[j] > 0.0 {
            (g - alpha).abs()
        } else if coef[j] < 0.0 {
            (g + alpha).abs()
        } else {
            (g.abs() - alpha).max(0.0)
        };
        worst = worst.max(v);
    }
    worst
}

/// Total within-cluster sum of squares of a labeling.
pub fn within_ss(values: &[f64], labels: &[usize]) -> f64 {
    let mut groups: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for (v, l) in values.iter().zip(labels) {
        groups.entry(*l).or_default().push(*v);
    }
    groups
        .values()
        .map(|g| {
            let m = g.iter().sum::<f64>() / g.len() as f64;
            g.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
        })
        .sum()
}

/// Greedy agglomeration that scores every candidate merge by recomputing the
/// total within-cluster sum of squares from scratch. Ties go to the first
/// pair in (i, j) order over clusters kept in sorted-value order.
pub fn ward_replay(values: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut clusters: Vec<Vec<usize>> = order.into_iter().map(|i| vec![i]).collect();
    let ss = |c: &[usize]| {
        let m = c.iter().map(|&i| values[i]).sum::<f64>() / c.len() as f64;
        c.iter().map(|&i| (values[i] - m) * (values[i] - m)).sum::<f64>()
    };
    while clusters.len() > k {
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let merged: Vec<usize> = clusters[i].iter().chain(&clusters[j]).copied().collect();
                let cost = ss(&merged) - ss(&clusters[i]) - ss(&clusters[j]);
                if cost < best.0 - 1e-12 {
                    best = (cost, i, j);
                }
            }
        }
        let (_, i, j) = best;
        let taken = clusters.remove(j);
        clusters[i].extend(taken);
    }
    relabel_by_mean(values, &clusters)
}

fn relabel_by_mean(values: &[f64], clusters: &[Vec<usize>]) -> Vec<usize> {
    let mean = |c: &Vec<usize>| c.iter().map(|&i| values[i]).sum::<f64>() / c.len() as f64;
    let mut idx: Vec<usize> = (0..clusters.len()).collect();
    idx.sort_by(|&a, &b| mean(&clusters[a]).total_cmp(&mean(&clusters[b])));
    let mut labels = vec![0; values.len()];
    for (rank, &c) in idx.iter().enumerate() {
        for &i in &clusters[c] {
            labels[i] = rank + 1;
        }
    }
    labels
}

/// Smallest within-cluster sum of squares over all partitions of the
/// sorted values into `k` contiguous runs.
pub fn best_contiguous_ss(values: &[f64], k: usize) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    fn go(v: &[f64], k: usize) -> f64 {
        let ss = |s: &[f64]| {
            let m = s.iter().sum::<f64>() / s.len() as f64;
            s.iter().map(|x| (x - m) * (x - m)).sum::<f64>()
        };
        if k == 1 {
            return ss(v);
        }
        (1..=v.len() - (k - 1))
            .map(|cut| ss(&v[..cut]) + go(&v[cut..], k - 1))
            .fold(f64::INFINITY, f64::min)
    }
    go(&v, k)
}

/// Silhouette straight from the definition.
pub fn silhouette_reference(values: &[f64], labels: &[usize]) -> f64 {
    let n = values.len();
    let mut total = 0.0;
    for i in 0..n {
        let same: Vec<usize> = (0..n).filter(|&j| j != i && labels[j] == labels[i]).collect();
        if same.is_empty() {
            continue;
        }
        let a = same.iter().map(|&j| (values[i] - values[j]).abs()).sum::<f64>() / same.len() as f64;
        let mut others: Vec<usize> = labels.iter().copied().filter(|&l| l != labels[i]).collect();
        others.sort();
        others.dedup();
        let b = others
            .iter()
            .map(|&l| {
                let m: Vec<usize> = (0..n).filter(|&j| labels[j] == l).collect();
                m.iter().map(|&j| (values[i] - values[j]).abs()).sum::<f64>() / m.len() as f64
            })
            .fold(f64::INFINITY, f64::min);
        if a.max(b) > 0.0 {
            total += (b - a) / a.max(b);
        }
    }
    total / n as f64
}

/// Binary logistic regression `P(y=1) = logistic(b0 + b^T x)` by iteratively
/// reweighted least squares.
pub fn binary_logit(x: &[Vec<f64>], y: &[bool]) -> (f64, Vec<f64>) {
    let n = x.len();
    let p = x[0].len();
    let a = DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { x[i][j - 1] });
    let t = DVector::from_fn(n, |i, _| if y[i] { 1.0 } else { 0.0 });
    let mut b = DVector::zeros(p + 1);
    for _ in 0..100 {
        let eta = &a * &b;
        let mu = eta.map(|e| 1.0 / (1.0 + (-e).exp()));
        let wts = mu.map(|m| m * (1.0 - m));
        let mut aw = a.clone();
        for i in 0..n {
            aw.row_mut(i).scale_mut(wts[i]);
        }
        let step = (a.transpose() * aw).lu().solve(&(a.transpose() * (&t - &mu))).unwrap();
        b += &step;
        if step.amax() < 1e-13 {
            break;
        }
    }
    (b[0], b.iter().skip(1).copied().collect())
}
