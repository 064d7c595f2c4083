use alloc::format;

use crate::error::{Error, Result};

/// Number of outcome bins: solved in 1..=6 tries, then failure.
pub const BINS: usize = 7;

const SUM_TOLERANCE: f64 = 1e-9;

/// Guess-count distribution in percent. Bin `i` (0-based) is the share of
/// games solved in `i + 1` tries; the last bin is failure, valued at 7 tries.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "[f64; BINS]", into = "[f64; BINS]"))]
pub struct GuessDistribution {
    bins: [f64; BINS],
}

impl GuessDistribution {
    pub fn new(bins: [f64; BINS]) -> Result<Self> {
        if let Some(b) = bins.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite bin {b}")));
        }
        let sum: f64 = bins.iter().sum();
        if (sum - 100.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("bins sum to {sum}, not 100")));
        }
        Ok(GuessDistribution { bins })
    }

    /// Rescales rounded percentages so they sum to exactly 100. Raw sums
    /// outside `[95, 105]` are rejected.
    pub fn renormalized(raw: [f64; BINS]) -> Result<Self> {
        if let Some(b) = raw.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite bin {b}")));
        }
        let sum: f64 = raw.iter().sum();
        if !(95.0..=105.0).contains(&sum) {
            return Err(Error::InvalidDistribution(format!(
                "percentages sum to {sum}, outside [95, 105]"
            )));
        }
        let scale = 100.0 / sum;
        let mut bins = raw.map(|b| b * scale);
        // push the rounding residue into the largest bin
        let residue = 100.0 - bins.iter().sum::<f64>();
        let largest = argmax(&bins);
        bins[largest] += residue;
        GuessDistribution::new(bins)
    }

    /// Builds a distribution from outcome counts.
    pub fn from_counts(counts: &[u64; BINS]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("no outcomes counted".into()));
        }
        let bins = counts.map(|c| 100.0 * c as f64 / total as f64);
        GuessDistribution::renormalized(bins)
    }

    pub fn bins(&self) -> &[f64; BINS] {
        &self.bins
    }

    /// Expected number of tries, failure counted as 7.
    pub fn expectation(&self) -> f64 {
        expectation(&self.bins)
    }
}

impl TryFrom<[f64; BINS]> for GuessDistribution {
    type Error = Error;

    fn try_from(bins: [f64; BINS]) -> Result<Self> {
        GuessDistribution::new(bins)
    }
}

impl From<GuessDistribution> for [f64; BINS] {
    fn from(d: GuessDistribution) -> Self {
        d.bins
    }
}

/// `(1/100) * sum_i i * bins[i]` with `i` running 1..=7.
pub fn expectation(bins: &[f64; BINS]) -> f64 {
    bins.iter()
        .enumerate()
        .map(|(i, b)| (i + 1) as f64 * b)
        .sum::<f64>()
        / 100.0
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectation_examples() {
        let d = GuessDistribution::new([100.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(d.expectation(), 1.0);
        let d = GuessDistribution::new([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 100.0]).unwrap();
        assert_eq!(d.expectation(), 7.0);
        // EERIE simulated row
        let d = GuessDistribution::new([0.0, 1.0, 11.0, 33.0, 39.0, 14.0, 2.0]).unwrap();
        assert!((d.expectation() - 4.60).abs() < 1e-12);
    }

    #[test]
    fn renormalizes_rounded_rows() {
        let raw = [1.0, 5.0, 23.0, 39.0, 24.0, 8.0, 1.0];
        assert_eq!(raw.iter().sum::<f64>(), 101.0);
        let d = GuessDistribution::renormalized(raw).unwrap();
        assert!((d.bins().iter().sum::<f64>() - 100.0).abs() < 1e-12);
        assert!((d.bins()[1] - 500.0 / 101.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_corrupt_rows() {
        assert!(GuessDistribution::renormalized([10.0, 10.0, 20.0, 20.0, 10.0, 5.0, 5.0]).is_err());
        assert!(GuessDistribution::renormalized([-1.0, 10.0, 30.0, 31.0, 20.0, 5.0, 5.0]).is_err());
        assert!(GuessDistribution::new([50.0, 50.0, 0.0, 0.0, 0.0, 0.0, 1.0]).is_err());
    }
}
