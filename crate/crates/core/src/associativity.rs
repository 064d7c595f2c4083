//! First-order letter chain over the dictionary: a first-letter
//! distribution and a letter-to-letter transition matrix. A word's
//! associativity is the probability that the chain spells it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, Word, ALPHABET};

/// Floor applied before taking the log of a zero-probability word.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarkovModel {
    pub first: Vec<f64>,
    pub trans: Vec<Vec<f64>>,
    pub smoothing: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociativityScore {
    pub raw: f64,
    /// Natural log of `max(raw, 1e-300)`.
    pub log_raw: f64,
}

impl MarkovModel {
    /// Fits the chain on sequences over an alphabet of `alphabet` symbols
    /// with add-`smoothing` counts. Every sequence is weighted equally.
    pub fn fit_sequences<S: AsRef<[u8]>>(alphabet: usize, sequences: &[S], smoothing: f64) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        if !(smoothing >= 0.0) || !smoothing.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "smoothing must be non-negative, got {smoothing}"
            )));
        }
        let mut first = vec![0.0; alphabet];
        let mut pairs = vec![vec![0.0; alphabet]; alphabet];
        for seq in sequences {
            let seq = seq.as_ref();
            if let Some(&s) = seq.iter().find(|&&s| s as usize >= alphabet) {
                return Err(Error::InvalidArgument(format!("symbol {s} outside alphabet")));
            }
            if let Some(&s0) = seq.first() {
                first[s0 as usize] += 1.0;
            }
            for w in seq.windows(2) {
                pairs[w[0] as usize][w[1] as usize] += 1.0;
            }
        }
        let k = smoothing;
        let total = sequences.len() as f64 + alphabet as f64 * k;
        let first = first.iter().map(|c| (c + k) / total).collect();
        let trans = pairs
            .iter()
            .map(|row| {
                let denom = row.iter().sum::<f64>() + alphabet as f64 * k;
                if denom == 0.0 {
                    vec![0.0; alphabet]
                } else {
                    row.iter().map(|c| (c + k) / denom).collect()
                }
            })
            .collect();
        Ok(MarkovModel {
            first,
            trans,
            smoothing,
        })
    }

    /// Probability of generating `seq` under the chain.
    pub fn sequence_probability(&self, seq: &[u8]) -> f64 {
        match seq.split_first() {
            None => 1.0,
            Some((&s0, _)) => {
                let mut p = self.first[s0 as usize];
                for w in seq.windows(2) {
                    p *= self.trans[w[0] as usize][w[1] as usize];
                }
                p
            }
        }
    }

    /// Checks shape and normalization (used when loading persisted models).
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invariant(format!("markov: {m}")));
        let n = self.first.len();
        if self.trans.len() != n || self.trans.iter().any(|r| r.len() != n) {
            return bad("transition matrix is not square with the first-letter vector");
        }
        if !(self.smoothing >= 0.0) {
            return bad("negative smoothing");
        }
        let all = self.first.iter().chain(self.trans.iter().flatten());
        if all.clone().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return bad("negative or non-finite probability");
        }
        if (self.first.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return bad("first-letter probabilities do not sum to 1");
        }
        for row in &self.trans {
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-12 && s != 0.0 {
                return bad("transition row does not sum to 1");
            }
        }
        Ok(())
    }
}

pub fn build_markov(lex: &Lexicon, smoothing: f64) -> Result<MarkovModel> {
    let seqs: Vec<&[u8]> = lex.words().iter().map(|w| &w.letters()[..]).collect();
    MarkovModel::fit_sequences(ALPHABET, &seqs, smoothing)
}

pub fn associativity(model: &MarkovModel, w: &Word) -> AssociativityScore {
    let raw = model.sequence_probability(w.letters());
    AssociativityScore {
        raw,
        log_raw: libm::log(raw.max(LOG_FLOOR)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(words: &[&str]) -> Lexicon {
        Lexicon::from_words(words.iter().map(|w| w.parse().unwrap())).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    const A: usize = 0;
    const B: usize = 1;

    #[test]
    fn single_word() {
        let m = build_markov(&lex(&["aaaaa"]), 0.0).unwrap();
        assert_eq!(m.first[A], 1.0);
        assert_eq!(m.trans[A][A], 1.0);
        assert_eq!(m.first.iter().sum::<f64>(), 1.0);
        assert_eq!(m.trans.iter().flatten().sum::<f64>(), 1.0);
        assert_eq!(associativity(&m, &w("aaaaa")).raw, 1.0);
        m.validate().unwrap();
    }

    #[test]
    fn hand_counted_pairs() {
        let m = build_markov(&lex(&["aabbb", "bbaaa"]), 0.0).unwrap();
        assert_eq!((m.first[A], m.first[B]), (0.5, 0.5));
        assert_eq!((m.trans[A][A], m.trans[A][B]), (0.75, 0.25));
        assert_eq!((m.trans[B][B], m.trans[B][A]), (0.75, 0.25));
        let s = associativity(&m, &w("aabbb"));
        assert!((s.raw - 0.052734375).abs() < 1e-12);
        assert!((s.log_raw - libm::log(0.052734375)).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_is_floored() {
        let m = build_markov(&lex(&["aabbb", "bbaaa"]), 0.0).unwrap();
        let s = associativity(&m, &w("ccccc"));
        assert_eq!(s.raw, 0.0);
        assert_eq!(s.log_raw, libm::log(1e-300));
        // unseen row letters leave an all-zero row
        assert!(m.trans[2].iter().all(|&p| p == 0.0));
        m.validate().unwrap();
    }

    #[test]
    fn smoothing_lifts_unseen_transitions() {
        let l = lex(&["aabbb", "bbaaa", "crane"]);
        let word = w("abcde");
        let unsmoothed = associativity(&build_markov(&l, 0.0).unwrap(), &word).raw;
        assert_eq!(unsmoothed, 0.0);
        for k in [0.01, 0.1, 0.5, 1.0] {
            let m = build_markov(&l, k).unwrap();
            m.validate().unwrap();
            assert!(associativity(&m, &word).raw > unsmoothed);
        }
    }

    #[test]
    fn exhaustive_mass_on_three_letters() {
        let seqs: [&[u8]; 4] = [&[0, 1, 2], &[2, 2, 0], &[1, 0, 0], &[0, 2, 1]];
        let m = MarkovModel::fit_sequences(3, &seqs, 0.5).unwrap();
        let mut total = 0.0;
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    total += m.sequence_probability(&[a, b, c]);
                }
            }
        }
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn letter_relabeling_permutes_scores() {
        let words = ["crane", "abbey", "there", "eerie", "watch", "latch"];
        // rotate the alphabet by 7
        let rot = |s: &str| -> Word {
            let letters: [u8; 5] = core::array::from_fn(|i| (s.as_bytes()[i] - b'a' + 7) % 26);
            Word::from_letters(letters).unwrap()
        };
        let m1 = build_markov(&lex(&words), 0.0).unwrap();
        let l2 = Lexicon::from_words(words.iter().map(|s| rot(s))).unwrap();
        let m2 = build_markov(&l2, 0.0).unwrap();
        for s in words {
            assert_eq!(associativity(&m1, &w(s)).raw, associativity(&m2, &rot(s)).raw);
        }
    }

    #[test]
    fn validate_rejects_bad_rows() {
        let mut m = build_markov(&lex(&["aabbb", "bbaaa"]), 0.0).unwrap();
        m.trans[0][0] = 0.5;
        assert!(m.validate().is_err());
        let mut m = build_markov(&lex(&["aabbb"]), 0.0).unwrap();
        m.first.pop();
        assert!(m.validate().is_err());
    }
}
