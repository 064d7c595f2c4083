//! Tile feedback for a guess against a solution, using the official
//! duplicate-letter rule: greens consume solution letters first, then
//! yellows are awarded left to right while unconsumed copies remain.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::lexicon::{Word, ALPHABET, WORD_LEN};

/// Number of distinct feedback patterns (3^5).
pub const PATTERNS: usize = 243;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Gray = 0,
    Yellow = 1,
    Green = 2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Feedback([Mark; WORD_LEN]);

impl Feedback {
    pub const ALL_GREEN: Feedback = Feedback([Mark::Green; WORD_LEN]);

    pub fn new(cells: [Mark; WORD_LEN]) -> Self {
        Feedback(cells)
    }

    pub fn cells(&self) -> &[Mark; WORD_LEN] {
        &self.0
    }

    /// Base-3 code, first cell most significant.
    pub fn code(&self) -> u8 {
        self.0.iter().fold(0u8, |acc, &m| acc * 3 + m as u8)
    }

    pub fn from_code(code: u8) -> Result<Self> {
        if code as usize >= PATTERNS {
            return Err(Error::InvalidArgument(alloc::format!(
                "feedback code {code} out of range"
            )));
        }
        let mut cells = [Mark::Gray; WORD_LEN];
        let mut c = code;
        for cell in cells.iter_mut().rev() {
            *cell = match c % 3 {
                0 => Mark::Gray,
                1 => Mark::Yellow,
                _ => Mark::Green,
            };
            c /= 3;
        }
        Ok(Feedback(cells))
    }

    pub fn is_win(&self) -> bool {
        *self == Self::ALL_GREEN
    }
}

/// `G`, `Y`, `X` per cell, e.g. `YXYXG`.
impl fmt::Display for Feedback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            let c = match m {
                Mark::Green => 'G',
                Mark::Yellow => 'Y',
                Mark::Gray => 'X',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Feedback {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(alloc::format!("bad feedback string {s:?}"));
        if s.len() != WORD_LEN {
            return Err(bad());
        }
        let mut cells = [Mark::Gray; WORD_LEN];
        for (cell, ch) in cells.iter_mut().zip(s.chars()) {
            *cell = match ch.to_ascii_uppercase() {
                'G' => Mark::Green,
                'Y' => Mark::Yellow,
                'X' => Mark::Gray,
                _ => return Err(bad()),
            };
        }
        Ok(Feedback(cells))
    }
}

pub fn compute_feedback(guess: &Word, solution: &Word) -> Feedback {
    let g = guess.letters();
    let s = solution.letters();
    let mut cells = [Mark::Gray; WORD_LEN];
    let mut unconsumed = [0u8; ALPHABET];
    for i in 0..WORD_LEN {
        if g[i] == s[i] {
            cells[i] = Mark::Green;
        } else {
            unconsumed[s[i] as usize] += 1;
        }
    }
    for i in 0..WORD_LEN {
        if cells[i] == Mark::Green {
            continue;
        }
        let slot = &mut unconsumed[g[i] as usize];
        if *slot > 0 {
            *slot -= 1;
            cells[i] = Mark::Yellow;
        }
    }
    Feedback(cells)
}

/// Whether `candidate` could be the solution given that `guess` produced
/// `observed`.
pub fn is_consistent(candidate: &Word, guess: &Word, observed: &Feedback) -> bool {
    compute_feedback(guess, candidate) == *observed
}

/// Keeps the consistent candidates, preserving order.
pub fn filter_candidates(candidates: &[Word], guess: &Word, observed: &Feedback) -> Vec<Word> {
    candidates
        .iter()
        .filter(|c| is_consistent(c, guess, observed))
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn fb(s: &str) -> Feedback {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(compute_feedback(&w("crane"), &w("crane")), Feedback::ALL_GREEN);
        assert_eq!(compute_feedback(&w("babes"), &w("abbey")), fb("YYGGX"));
        assert_eq!(compute_feedback(&w("eerie"), &w("there")), fb("YXYXG"));
    }

    #[test]
    fn consistency_examples() {
        let (guess, sol) = (w("crane"), w("abbey"));
        assert!(is_consistent(&sol, &guess, &compute_feedback(&guess, &sol)));
        assert!(!is_consistent(&guess, &guess, &fb("XXYXY")));
        assert!(is_consistent(&w("abbey"), &w("crane"), &fb("XXYXY")));
        assert_eq!(
            filter_candidates(&[w("abbey"), w("crane")], &w("crane"), &fb("XXYXY")),
            [w("abbey")]
        );
        assert!(filter_candidates(&[w("crane")], &w("crane"), &fb("XXXXX")).is_empty());
    }

    #[test]
    fn text_form() {
        assert_eq!(fb("YXYXG").to_string(), "YXYXG");
        assert!("YXYX".parse::<Feedback>().is_err());
        assert!("YXYXQ".parse::<Feedback>().is_err());
        assert!(Feedback::from_code(243).is_err());
    }

    fn word() -> impl Strategy<Value = Word> {
        // a small alphabet makes repeated letters common
        proptest::array::uniform5(0u8..6).prop_map(|l| Word::from_letters(l).unwrap())
    }

    proptest! {
        #[test]
        fn self_feedback_is_all_green(a in word()) {
            prop_assert!(compute_feedback(&a, &a).is_win());
        }

        #[test]
        fn marks_never_exceed_multiplicity(g in word(), s in word()) {
            let f = compute_feedback(&g, &s);
            for letter in 0..ALPHABET as u8 {
                let marked = (0..WORD_LEN)
                    .filter(|&i| g.letter(i) == letter && f.cells()[i] != Mark::Gray)
                    .count();
                let mult = s.letters().iter().filter(|&&l| l == letter).count();
                prop_assert!(marked <= mult);
            }
        }

        #[test]
        fn filtering_keeps_solution_as_subsequence(
            cands in proptest::collection::vec(word(), 0..20),
            g in word(),
            s in word(),
        ) {
            let mut cands = cands;
            cands.push(s);
            let out = filter_candidates(&cands, &g, &compute_feedback(&g, &s));
            prop_assert!(out.contains(&s));
            let mut it = cands.iter();
            for x in &out {
                prop_assert!(it.any(|c| c == x));
            }
        }

        #[test]
        fn code_round_trips(code in 0u8..243) {
            let f = Feedback::from_code(code).unwrap();
            prop_assert_eq!(f.code(), code);
            prop_assert_eq!(Feedback::from_code(f.code()).unwrap(), f);
        }
    }
}
