//! Monte Carlo model of a player who guesses uniformly at random among the
//! words still consistent with every hint so far.
//!
//! Each word's games run on their own ChaCha8 stream seeded from
//! `(master seed, lexicon ordinal)`, so results do not depend on batch order
//! or on how work is spread across threads.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{GuessDistribution, BINS};
use crate::error::{Error, Result};
use crate::feedback::{compute_feedback, filter_candidates};
use crate::lexicon::{Lexicon, Word};

pub const MAX_TRIES: u8 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved(u8),
    Failed,
}

impl Outcome {
    /// Distribution bin index (0-based; failure is the last bin).
    pub fn bin(self) -> usize {
        match self {
            Outcome::Solved(t) => t as usize - 1,
            Outcome::Failed => BINS - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationReport {
    pub word: Word,
    pub reps: u64,
    pub raw: GuessDistribution,
    pub expectation: f64,
    /// Set when the word was not in the lexicon and was appended to the
    /// candidate list.
    pub out_of_vocabulary: bool,
}

/// SplitMix64 finalizer over the master seed and a word ordinal.
pub fn substream_seed(seed: u64, ordinal: u64) -> u64 {
    let mut z = seed ^ ordinal.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn word_rng(seed: u64, ordinal: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream_seed(seed, ordinal as u64))
}

/// Plays one game directly on [`Word`] lists. This is the reference path;
/// [`Simulator`] gives identical outcomes for the same random stream.
pub fn play_random_game<R: Rng + ?Sized>(
    solution: &Word,
    lex: &Lexicon,
    allow_oov: bool,
    rng: &mut R,
) -> Result<Outcome> {
    let mut candidates = candidate_universe(solution, lex, allow_oov)?;
    Ok(play_on_list(solution, &mut candidates, rng, &mut |_| {}))
}

fn candidate_universe(solution: &Word, lex: &Lexicon, allow_oov: bool) -> Result<Vec<Word>> {
    let mut words = lex.words().to_vec();
    if !lex.contains(solution) {
        if !allow_oov {
            return Err(Error::UnknownWord(alloc::string::ToString::to_string(solution)));
        }
        words.push(*solution);
    }
    Ok(words)
}

fn play_on_list<R: Rng + ?Sized>(
    solution: &Word,
    candidates: &mut Vec<Word>,
    rng: &mut R,
    on_round: &mut dyn FnMut(&[Word]),
) -> Outcome {
    for round in 1..=MAX_TRIES {
        on_round(candidates);
        let guess = candidates[rng.random_range(0..candidates.len())];
        if guess == *solution {
            return Outcome::Solved(round);
        }
        let observed = compute_feedback(&guess, solution);
        *candidates = filter_candidates(candidates, &guess, &observed);
    }
    Outcome::Failed
}

/// Precomputes the full guess-by-solution feedback table so that filtering
/// is a byte comparison per candidate.
pub struct Simulator {
    lex: Lexicon,
    table: Vec<u8>,
}

impl Simulator {
    pub fn new(lex: &Lexicon) -> Self {
        let words = lex.words();
        let n = words.len();
        let mut table = Vec::with_capacity(n * n);
        for g in words {
            table.extend(words.iter().map(|s| compute_feedback(g, s).code()));
        }
        Simulator {
            lex: lex.clone(),
            table,
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lex
    }

    /// Plays one game for the word at ordinal `solution`. `buf` is scratch.
    pub fn play<R: Rng + ?Sized>(&self, solution: usize, rng: &mut R, buf: &mut Vec<u32>) -> Outcome {
        let n = self.lex.len();
        buf.clear();
        for round in 1..=MAX_TRIES {
            let guess = if round == 1 {
                rng.random_range(0..n)
            } else {
                buf[rng.random_range(0..buf.len())] as usize
            };
            if guess == solution {
                return Outcome::Solved(round);
            }
            let row = &self.table[guess * n..(guess + 1) * n];
            let code = row[solution];
            if round == 1 {
                buf.extend((0..n as u32).filter(|&c| row[c as usize] == code));
            } else {
                buf.retain(|&c| row[c as usize] == code);
            }
        }
        Outcome::Failed
    }

    /// Runs `reps` games for `solution` on its own substream.
    pub fn simulate_word(
        &self,
        solution: &Word,
        reps: u64,
        seed: u64,
        allow_oov: bool,
    ) -> Result<SimulationReport> {
        if reps == 0 {
            return Err(Error::InvalidArgument("reps must be at least 1".into()));
        }
        match self.lex.ordinal(solution) {
            Some(ordinal) => Ok(self.run(solution, ordinal, reps, seed, false)),
            None if allow_oov => {
                let extended =
                    Lexicon::from_words(self.lex.words().iter().copied().chain([*solution]))?;
                let sim = Simulator::new(&extended);
                Ok(sim.run(solution, extended.len() - 1, reps, seed, true))
            }
            None => Err(Error::UnknownWord(alloc::string::ToString::to_string(solution))),
        }
    }

    fn run(&self, solution: &Word, ordinal: usize, reps: u64, seed: u64, oov: bool) -> SimulationReport {
        let mut rng = word_rng(seed, ordinal);
        let mut buf = Vec::with_capacity(self.lex.len());
        let mut counts = [0u64; BINS];
        for _ in 0..reps {
            counts[self.play(ordinal, &mut rng, &mut buf).bin()] += 1;
        }
        let raw = GuessDistribution::from_counts(&counts).expect("reps > 0");
        SimulationReport {
            word: *solution,
            reps,
            expectation: raw.expectation(),
            raw,
            out_of_vocabulary: oov,
        }
    }

    /// Sequential corpus run. Per-word failures are returned in place rather
    /// than aborting the batch.
    pub fn simulate_corpus(
        &self,
        words: &[Word],
        reps: u64,
        seed: u64,
        allow_oov: bool,
    ) -> Vec<Result<SimulationReport>> {
        words
            .iter()
            .map(|w| self.simulate_word(w, reps, seed, allow_oov))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feedback::compute_feedback;

    fn lex(words: &[&str]) -> Lexicon {
        Lexicon::from_words(words.iter().map(|w| w.parse().unwrap())).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    const SMALL: &[&str] = &[
        "crane", "abbey", "there", "eerie", "babes", "watch", "catch", "match", "batch", "latch",
        "hatch", "patch", "water", "later", "eater", "hater", "cater", "tread", "bread", "dread",
    ];

    #[test]
    fn single_word_lexicon_always_one_try() {
        let l = lex(&["crane"]);
        let sim = Simulator::new(&l);
        let r = sim.simulate_word(&w("crane"), 50, 7, false).unwrap();
        assert_eq!(r.raw.bins(), &[100.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.expectation, 1.0);
    }

    #[test]
    fn two_word_lexicon_splits_evenly() {
        let l = lex(&["aaaaa", "bbbbb"]);
        let sim = Simulator::new(&l);
        let r = sim.simulate_word(&w("aaaaa"), 10_000, 42, false).unwrap();
        let b = r.raw.bins();
        assert!((b[0] - 50.0).abs() <= 2.0, "{b:?}");
        assert!((b[1] - 50.0).abs() <= 2.0, "{b:?}");
        assert_eq!(b[0] + b[1], 100.0);
        assert!((r.expectation - 1.5).abs() < 0.02);
    }

    #[test]
    fn fast_path_matches_reference_path() {
        let l = lex(SMALL);
        let sim = Simulator::new(&l);
        let mut buf = Vec::new();
        for (ordinal, sol) in l.words().iter().enumerate() {
            let mut a = word_rng(99, ordinal);
            let mut b = word_rng(99, ordinal);
            for _ in 0..200 {
                let fast = sim.play(ordinal, &mut a, &mut buf);
                let slow = play_random_game(sol, &l, false, &mut b).unwrap();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn candidates_shrink_and_keep_solution() {
        let l = lex(SMALL);
        for (ordinal, sol) in l.words().iter().enumerate() {
            let mut rng = word_rng(3, ordinal);
            for _ in 0..50 {
                let mut cands = l.words().to_vec();
                let mut sizes = Vec::new();
                let out = play_on_list(sol, &mut cands, &mut rng, &mut |c| {
                    assert!(c.contains(sol));
                    sizes.push(c.len());
                });
                assert!(sizes.windows(2).all(|s| s[1] < s[0]), "{sizes:?}");
                if let Outcome::Solved(t) = out {
                    assert!(t as usize == sizes.len() && t <= MAX_TRIES);
                } else {
                    assert_eq!(sizes.len(), MAX_TRIES as usize);
                }
            }
        }
    }

    #[test]
    fn deterministic_and_order_independent() {
        let l = lex(SMALL);
        let sim = Simulator::new(&l);
        let words: Vec<Word> = l.words().to_vec();
        let a = sim.simulate_corpus(&words, 300, 11, false);
        let mut rev = words.clone();
        rev.reverse();
        let mut b = sim.simulate_corpus(&rev, 300, 11, false);
        b.reverse();
        assert_eq!(a, b);
        assert!(sim.simulate_corpus(&[], 300, 11, false).is_empty());
    }

    #[test]
    fn unknown_solution_needs_opt_in() {
        let l = lex(&["crane", "abbey"]);
        let sim = Simulator::new(&l);
        assert!(matches!(
            sim.simulate_word(&w("there"), 10, 1, false),
            Err(Error::UnknownWord(_))
        ));
        let r = sim.simulate_word(&w("there"), 100, 1, true).unwrap();
        assert!(r.out_of_vocabulary);
        assert!((r.raw.bins().iter().sum::<f64>() - 100.0).abs() < 1e-9);
        let mut rng = word_rng(1, 0);
        assert!(play_random_game(&w("there"), &l, false, &mut rng).is_err());
        assert!(play_random_game(&w("there"), &l, true, &mut rng).is_ok());
        // batch keeps going past a bad word
        let out = sim.simulate_corpus(&[w("there"), w("crane")], 10, 1, false);
        assert!(out[0].is_err() && out[1].is_ok());
    }

    #[test]
    fn zero_reps_rejected() {
        let l = lex(&["crane"]);
        assert!(Simulator::new(&l).simulate_word(&w("crane"), 0, 1, false).is_err());
    }

    #[test]
    fn table_matches_feedback() {
        let l = lex(SMALL);
        let sim = Simulator::new(&l);
        let n = l.len();
        for (i, g) in l.words().iter().enumerate() {
            for (j, s) in l.words().iter().enumerate() {
                assert_eq!(sim.table[i * n + j], compute_feedback(g, s).code());
            }
        }
    }
}
