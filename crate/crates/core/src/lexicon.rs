//! Words, the dictionary, frequency tables and observed daily results.
//!
//! Everything here is plain data plus text-level validation; reading files
//! is left to the caller.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::distribution::GuessDistribution;
use crate::error::{Error, Result};

pub const WORD_LEN: usize = 5;
pub const ALPHABET: usize = 26;

/// A five-letter lowercase word stored as letter indices (`0 = 'a'`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word([u8; WORD_LEN]);

impl Word {
    pub fn from_letters(letters: [u8; WORD_LEN]) -> Result<Self> {
        if letters.iter().any(|&l| l as usize >= ALPHABET) {
            return Err(Error::InvalidWord {
                token: alloc::format!("{letters:?}"),
                reason: "letter index out of range",
            });
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[u8; WORD_LEN] {
        &self.0
    }

    pub fn letter(&self, pos: usize) -> u8 {
        self.0[pos]
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses a token, lowercasing ASCII first.
    fn from_str(s: &str) -> Result<Self> {
        let invalid = |reason| Error::InvalidWord {
            token: s.to_string(),
            reason,
        };
        if s.chars().count() != WORD_LEN {
            return Err(invalid("length is not 5"));
        }
        let mut letters = [0u8; WORD_LEN];
        for (slot, b) in letters.iter_mut().zip(s.bytes()) {
            let b = b.to_ascii_lowercase();
            if !b.is_ascii_lowercase() {
                return Err(invalid("non-letter character"));
            }
            *slot = b - b'a';
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", (b'a' + l) as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The ordered word universe. Ordinals are positions in the source list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    words: Vec<Word>,
    index: BTreeMap<Word, usize>,
}

impl Lexicon {
    /// Builds a lexicon from already-validated words. Line numbers in
    /// duplicate errors are 1-based positions in `words`.
    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Result<Self> {
        let mut lex = Lexicon {
            words: Vec::new(),
            index: BTreeMap::new(),
        };
        for (i, w) in words.into_iter().enumerate() {
            lex.push(w, i + 1, &|pos| pos + 1)?;
        }
        Ok(lex)
    }

    /// Parses dictionary text: one token per nonempty line, LF or CRLF.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = Lexicon {
            words: Vec::new(),
            index: BTreeMap::new(),
        };
        // line number for each pushed word, to report duplicates
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let token = raw.trim_end_matches('\r').trim();
            if token.is_empty() {
                continue;
            }
            let word: Word = token.parse().map_err(|e| Error::Parse {
                line,
                message: alloc::format!("{e}"),
            })?;
            lex.push(word, line, &|pos| lines[pos])?;
            lines.push(line);
        }
        Ok(lex)
    }

    fn push(&mut self, w: Word, line: usize, line_of: &dyn Fn(usize) -> usize) -> Result<()> {
        if let Some(&pos) = self.index.get(&w) {
            return Err(Error::DuplicateWord {
                word: w.to_string(),
                first_line: line_of(pos),
                second_line: line,
            });
        }
        self.index.insert(w, self.words.len());
        self.words.push(w);
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.words.len() * (WORD_LEN + 1));
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn ordinal(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.index.contains_key(w)
    }
}

/// Occurrences per million; words absent from the table read as 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyTable {
    freq: BTreeMap<Word, f64>,
}

impl FrequencyTable {
    /// Restricts `entries` to words of `lex`. Returns the table and the lexicon
    /// words that had no entry (they default to 0).
    pub fn from_entries<I>(lex: &Lexicon, entries: I) -> Result<(Self, Vec<Word>)>
    where
        I: IntoIterator<Item = (Word, f64)>,
    {
        let mut freq = BTreeMap::new();
        for (w, f) in entries {
            if !(f >= 0.0) || !f.is_finite() {
                return Err(Error::InvalidArgument(alloc::format!(
                    "frequency of {w} must be a non-negative number, got {f}"
                )));
            }
            if lex.contains(&w) {
                freq.insert(w, f);
            }
        }
        let missing = lex
            .words()
            .iter()
            .filter(|w| !freq.contains_key(*w))
            .copied()
            .collect();
        Ok((FrequencyTable { freq }, missing))
    }

    pub fn get(&self, w: &Word) -> f64 {
        self.freq.get(w).copied().unwrap_or(0.0)
    }

    pub fn insert(&mut self, w: Word, f: f64) {
        self.freq.insert(w, f);
    }
}

/// Calendar date, ordered chronologically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CalendarDate {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

impl CalendarDate {
    pub fn new(year: i32, month: u8, day: u8) -> Result<Self> {
        let leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        let days = match month {
            1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
            4 | 6 | 9 | 11 => 30,
            2 if leap => 29,
            2 => 28,
            _ => 0,
        };
        if day == 0 || day > days {
            return Err(Error::InvalidArgument(alloc::format!(
                "invalid date {year:04}-{month:02}-{day:02}"
            )));
        }
        Ok(CalendarDate { year, month, day })
    }
}

impl FromStr for CalendarDate {
    type Err = Error;

    /// ISO-8601 `YYYY-MM-DD`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(alloc::format!("expected YYYY-MM-DD, got {s:?}"));
        let b = s.as_bytes();
        if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
            return Err(bad());
        }
        let year = s[0..4].parse().map_err(|_| bad())?;
        let month = s[5..7].parse().map_err(|_| bad())?;
        let day = s[8..10].parse().map_err(|_| bad())?;
        CalendarDate::new(year, month, day)
    }
}

impl fmt::Display for CalendarDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

/// One day of reported results.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedRecord {
    pub date: CalendarDate,
    pub word: Word,
    pub reported: u64,
    pub dist: GuessDistribution,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parses_in_file_order() {
        let lex = Lexicon::parse("crane\nabbey\n").unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.ordinal(&w("crane")), Some(0));
        assert_eq!(lex.ordinal(&w("abbey")), Some(1));
    }

    #[test]
    fn rejects_long_token_with_line() {
        let err = Lexicon::parse("cranes\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn rejects_duplicates_citing_both_lines() {
        let err = Lexicon::parse("crane\ncrane\n").unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateWord {
                word: "crane".into(),
                first_line: 1,
                second_line: 2
            }
        );
        // blank lines still count toward line numbers
        let err = Lexicon::parse("crane\n\nabbey\r\nCRANE\r\n").unwrap_err();
        assert!(matches!(
            err,
            Error::DuplicateWord {
                first_line: 1,
                second_line: 4,
                ..
            }
        ));
    }

    #[test]
    fn lowercases_and_rejects_non_letters() {
        assert_eq!(w("CrAnE"), w("crane"));
        assert!("cr4ne".parse::<Word>().is_err());
        assert!("crané".parse::<Word>().is_err());
        assert!("abcd".parse::<Word>().is_err());
    }

    #[test]
    fn text_round_trip() {
        let lex = Lexicon::parse("crane\r\nabbey\n\nthere").unwrap();
        assert_eq!(Lexicon::parse(&lex.to_text()).unwrap(), lex);
    }

    #[test]
    fn frequencies_default_to_zero() {
        let lex = Lexicon::parse("crane\nabbey\n").unwrap();
        let (table, missing) =
            FrequencyTable::from_entries(&lex, [(w("crane"), 20.5), (w("there"), 3.0)]).unwrap();
        assert_eq!(table.get(&w("crane")), 20.5);
        assert_eq!(table.get(&w("abbey")), 0.0);
        assert_eq!(table.get(&w("there")), 0.0);
        assert_eq!(missing, [w("abbey")]);
        assert!(FrequencyTable::from_entries(&lex, [(w("crane"), -1.0)]).is_err());
    }

    #[test]
    fn dates() {
        let d: CalendarDate = "2022-01-07".parse().unwrap();
        assert_eq!(d.to_string(), "2022-01-07");
        assert!("2022-02-29".parse::<CalendarDate>().is_err());
        assert!("2024-02-29".parse::<CalendarDate>().is_ok());
        assert!("2022-1-07".parse::<CalendarDate>().is_err());
        assert!(d < "2022-12-31".parse().unwrap());
    }
}
