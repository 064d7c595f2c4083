//! Lexical attributes of a word relative to the dictionary.

use alloc::vec::Vec;

use crate::associativity::{associativity, MarkovModel};
use crate::error::{Error, Result};
use crate::lexicon::{FrequencyTable, Lexicon, Word, WORD_LEN};

pub const FEATURE_COUNT: usize = 10;

/// Column names in feature-vector order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "FREQ", "Orth", "N1_C", "N2_C", "N3_C", "UN1_C", "UN2_C", "UN3_C", "MARKOV", "DISTANCE",
];

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[allow(non_snake_case)]
pub struct FeatureVector {
    pub FREQ: f64,
    pub Orth: u32,
    pub N1_C: f64,
    pub N2_C: f64,
    pub N3_C: f64,
    pub UN1_C: f64,
    pub UN2_C: f64,
    pub UN3_C: f64,
    pub MARKOV: f64,
    pub DISTANCE: f64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.FREQ,
            self.Orth as f64,
            self.N1_C,
            self.N2_C,
            self.N3_C,
            self.UN1_C,
            self.UN2_C,
            self.UN3_C,
            self.MARKOV,
            self.DISTANCE,
        ]
    }
}

/// How per-window string counts combine into one number per word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum WindowAggregate {
    #[default]
    Sum,
    Mean,
    Max,
}

/// Other words differing from `w` in exactly one position.
pub fn orth_neighbors(w: &Word, lex: &Lexicon) -> u32 {
    lex.words().iter().filter(|o| hamming(w, o) == 1).count() as u32
}

fn hamming(a: &Word, b: &Word) -> usize {
    a.letters()
        .iter()
        .zip(b.letters())
        .filter(|(x, y)| x != y)
        .count()
}

/// Counts, for each contiguous `x`-letter window of `w`, the other words that
/// share it (at the same offset when `constrained`, anywhere otherwise), and
/// aggregates over the `6 - x` windows.
pub fn string_count(
    w: &Word,
    x: usize,
    constrained: bool,
    lex: &Lexicon,
    aggregate: WindowAggregate,
) -> Result<f64> {
    if !(1..=3).contains(&x) {
        return Err(Error::InvalidArgument(alloc::format!(
            "window length must be 1, 2 or 3, got {x}"
        )));
    }
    let letters = w.letters();
    let windows = WORD_LEN - x + 1;
    let mut per_window = [0u32; WORD_LEN];
    for other in lex.words().iter().filter(|o| *o != w) {
        let o = other.letters();
        for (start, count) in per_window.iter_mut().enumerate().take(windows) {
            let pat = &letters[start..start + x];
            let hit = if constrained {
                &o[start..start + x] == pat
            } else {
                o.windows(x).any(|win| win == pat)
            };
            if hit {
                *count += 1;
            }
        }
    }
    let counts = &per_window[..windows];
    Ok(match aggregate {
        WindowAggregate::Sum => counts.iter().map(|&c| c as f64).sum(),
        WindowAggregate::Mean => counts.iter().map(|&c| c as f64).sum::<f64>() / windows as f64,
        WindowAggregate::Max => counts.iter().copied().max().unwrap_or(0) as f64,
    })
}

/// Levenshtein distance between two words.
pub fn edit_distance(a: &Word, b: &Word) -> usize {
    let (a, b) = (a.letters(), b.letters());
    let mut prev: [usize; WORD_LEN + 1] = core::array::from_fn(|j| j);
    for i in 0..WORD_LEN {
        let mut cur = [0usize; WORD_LEN + 1];
        cur[0] = i + 1;
        for j in 0..WORD_LEN {
            let sub = prev[j] + usize::from(a[i] != b[j]);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[WORD_LEN]
}

/// Mean edit distance from `w` to every other lexicon word.
pub fn mean_edit_distance(w: &Word, lex: &Lexicon) -> Result<f64> {
    let (sum, n) = lex
        .words()
        .iter()
        .filter(|o| *o != w)
        .fold((0usize, 0usize), |(s, n), o| (s + edit_distance(w, o), n + 1));
    if n == 0 {
        return Err(Error::NoOtherWords(alloc::string::ToString::to_string(w)));
    }
    Ok(sum as f64 / n as f64)
}

pub fn feature_vector(
    w: &Word,
    lex: &Lexicon,
    freq: &FrequencyTable,
    markov: &MarkovModel,
    aggregate: WindowAggregate,
) -> Result<FeatureVector> {
    let count = |x, constrained| string_count(w, x, constrained, lex, aggregate);
    Ok(FeatureVector {
        FREQ: freq.get(w),
        Orth: orth_neighbors(w, lex),
        N1_C: count(1, true)?,
        N2_C: count(2, true)?,
        N3_C: count(3, true)?,
        UN1_C: count(1, false)?,
        UN2_C: count(2, false)?,
        UN3_C: count(3, false)?,
        MARKOV: associativity(markov, w).log_raw,
        DISTANCE: mean_edit_distance(w, lex)?,
    })
}

/// Column means and sample standard deviations. FREQ is taken as
/// `ln(1 + FREQ)` before scaling.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Standardization {
    pub mean: [f64; FEATURE_COUNT],
    pub sd: [f64; FEATURE_COUNT],
}

fn transform(raw: &[f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
    let mut t = *raw;
    t[0] = libm::log1p(t[0]);
    t
}

impl Standardization {
    pub fn apply(&self, fv: &FeatureVector) -> [f64; FEATURE_COUNT] {
        self.apply_array(&fv.to_array())
    }

    pub fn apply_array(&self, raw: &[f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
        let t = transform(raw);
        core::array::from_fn(|j| (t[j] - self.mean[j]) / self.sd[j])
    }

    /// Maps z-scores back to raw feature values.
    pub fn invert(&self, z: &[f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
        let mut raw: [f64; FEATURE_COUNT] = core::array::from_fn(|j| z[j] * self.sd[j] + self.mean[j]);
        raw[0] = libm::expm1(raw[0]);
        raw
    }

    pub fn validate(&self) -> Result<()> {
        if self.sd.iter().any(|s| !(*s > 0.0) || !s.is_finite()) || self.mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::Invariant("standardization needs finite means and positive sds".into()));
        }
        Ok(())
    }
}

/// Z-scores each column (population mean, sample sd).
pub fn standardize(rows: &[FeatureVector]) -> Result<(Vec<[f64; FEATURE_COUNT]>, Standardization)> {
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("standardization needs at least 2 rows".into()));
    }
    let t: Vec<[f64; FEATURE_COUNT]> = rows.iter().map(|r| transform(&r.to_array())).collect();
    let n = t.len() as f64;
    let mut mean = [0.0; FEATURE_COUNT];
    let mut sd = [0.0; FEATURE_COUNT];
    for j in 0..FEATURE_COUNT {
        mean[j] = t.iter().map(|r| r[j]).sum::<f64>() / n;
        let ss: f64 = t.iter().map(|r| (r[j] - mean[j]) * (r[j] - mean[j])).sum();
        sd[j] = libm::sqrt(ss / (n - 1.0));
        if !(sd[j] > 1e-12 * mean[j].abs().max(1.0)) {
            return Err(Error::ZeroVariance {
                column: FEATURE_NAMES[j],
            });
        }
    }
    let s = Standardization { mean, sd };
    let z = rows.iter().map(|r| s.apply(r)).collect();
    Ok((z, s))
}
