//! Dictionary, frequency and results files, plus the shipped data.

use std::path::Path;

use wordle_difficulty_core::{CalendarDate, FrequencyTable, GuessDistribution, Lexicon, ObservedRecord, Word, BINS};

use crate::error::{Failure, Result};

/// Stands for the shipped dictionary or frequency list wherever a path is expected.
pub const BUILTIN: &str = "builtin";

pub const BUILTIN_DICTIONARY: &str = include_str!("../data/dictionary.txt");
pub const BUILTIN_FREQUENCIES: &str = include_str!("../data/frequencies.csv");

pub const FREQUENCY_HEADER: [&str; 2] = ["word", "freq_per_million"];
pub const RESULTS_HEADER: [&str; 10] = ["date", "word", "reported", "p1", "p2", "p3", "p4", "p5", "p6", "px"];

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn source(spec: &str, builtin: &'static str) -> Result<String> {
    if spec == BUILTIN {
        Ok(builtin.to_owned())
    } else {
        read_text(Path::new(spec))
    }
}

pub fn load_dictionary(spec: &str) -> Result<Lexicon> {
    let text = source(spec, BUILTIN_DICTIONARY)?;
    Ok(Lexicon::parse(&text).map_err(|e| Failure::from(e).context(spec))?)
}

/// Returns the table and the dictionary words that had no row (frequency 0).
pub fn load_frequencies(spec: &str, lex: &Lexicon) -> Result<(FrequencyTable, Vec<Word>)> {
    let text = source(spec, BUILTIN_FREQUENCIES)?;
    parse_frequencies(&text, lex).map_err(|e| e.context(spec))
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let got = rdr.headers()?;
    if got.iter().map(str::trim).ne(expected.iter().copied()) {
        return Err(Failure::Data(format!(
            "line 1: expected header {:?}, got {:?}",
            expected.join(","),
            got.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

pub fn parse_frequencies(text: &str, lex: &Lexicon) -> Result<(FrequencyTable, Vec<Word>)> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &FREQUENCY_HEADER)?;
    let mut entries = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let bad = |m: String| Failure::Data(format!("line {line}: {m}"));
        let word: Word = rec[0].parse().map_err(|e| bad(format!("{e}")))?;
        let f: f64 = rec[1].parse().map_err(|_| bad(format!("frequency {:?} is not a number", &rec[1])))?;
        if !(f >= 0.0) || !f.is_finite() {
            return Err(bad(format!("frequency must be a non-negative number, got {f}")));
        }
        entries.push((word, f));
    }
    Ok(FrequencyTable::from_entries(lex, entries)?)
}

pub fn load_observed_results(path: &Path, lex: &Lexicon, allow_oov: bool) -> Result<Vec<ObservedRecord>> {
    parse_observed_results(&read_text(path)?, lex, allow_oov).map_err(|e| e.context(path.display()))
}

/// Rows are renormalized to sum to 100 and returned in date order.
pub fn parse_observed_results(text: &str, lex: &Lexicon, allow_oov: bool) -> Result<Vec<ObservedRecord>> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &RESULTS_HEADER)?;
    let mut out: Vec<ObservedRecord> = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let bad = |m: String| Failure::Data(format!("line {line}: {m}"));
        let date: CalendarDate = rec[0].parse().map_err(|e| bad(format!("{e}")))?;
        let word: Word = rec[1].parse().map_err(|e| bad(format!("{e}")))?;
        let reported: u64 = rec[2]
            .parse()
            .map_err(|_| bad(format!("reported count {:?} is not a non-negative integer", &rec[2])))?;
        let mut raw = [0.0; BINS];
        for (i, slot) in raw.iter_mut().enumerate() {
            let field = &rec[3 + i];
            *slot = field.parse().map_err(|_| bad(format!("{} {field:?} is not a number", RESULTS_HEADER[3 + i])))?;
        }
        let dist = GuessDistribution::renormalized(raw).map_err(|e| bad(format!("{e}")))?;
        if !lex.contains(&word) && !allow_oov {
            return Err(bad(format!("{word} is not in the dictionary (pass --allow-oov to admit it)")));
        }
        if let Some(first) = seen.insert(word, line) {
            return Err(bad(format!("{word} already appeared on line {first}")));
        }
        out.push(ObservedRecord { date, word, reported, dist });
    }
    out.sort_by_key(|r| r.date);
    Ok(out)
}

/// Parses a comma-separated word list from the command line.
pub fn parse_words(tokens: &[String]) -> Result<Vec<Word>> {
    tokens
        .iter()
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|e| Failure::Data(format!("{e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::parse("crane\nabbey\neerie\n").unwrap()
    }

    #[test]
    fn frequency_rows() {
        let (t, missing) = parse_frequencies("word,freq_per_million\ncrane,20.5\nzzzzz,3\n", &lex()).unwrap();
        assert_eq!(t.get(&"crane".parse().unwrap()), 20.5);
        assert_eq!(missing.len(), 2);
        let e = parse_frequencies("word,freq_per_million\ncrane,-1\n", &lex()).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_frequencies("word,freq\ncrane,1\n", &lex()).is_err());
        let e = parse_frequencies("word,freq_per_million\ncrane,1\nabbey\n", &lex()).unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    const HEAD: &str = "date,word,reported,p1,p2,p3,p4,p5,p6,px\n";

    #[test]
    fn results_are_renormalized_and_sorted() {
        let text = format!("{HEAD}2022-02-01,crane,100,1,5,24,38,24,8,1\n2022-01-31,abbey,90,0,2,17,37,29,12,2\n");
        let recs = parse_observed_results(&text, &lex(), false).unwrap();
        assert_eq!(recs[0].word.to_string(), "abbey");
        assert_eq!(recs[0].reported, 90);
        let sum: f64 = recs[1].dist.bins().iter().sum();
        assert!((sum - 100.0).abs() < 1e-9);
        assert!((recs[1].dist.bins()[3] - 38.0 * 100.0 / 101.0).abs() < 1e-12);
    }

    #[test]
    fn results_rejections() {
        let low = format!("{HEAD}2022-02-01,crane,100,1,5,24,38,4,8,0\n");
        assert!(parse_observed_results(&low, &lex(), false).unwrap_err().to_string().contains("line 2"));
        let oov = format!("{HEAD}2022-02-01,tangy,100,1,5,24,38,24,8,0\n");
        assert!(parse_observed_results(&oov, &lex(), false).is_err());
        assert_eq!(parse_observed_results(&oov, &lex(), true).unwrap().len(), 1);
        let dup = format!("{HEAD}2022-02-01,crane,1,1,5,24,38,24,8,0\n2022-02-02,crane,1,1,5,24,38,24,8,0\n");
        assert!(parse_observed_results(&dup, &lex(), false).is_err());
        let date = format!("{HEAD}2022-02-30,crane,1,1,5,24,38,24,8,0\n");
        assert!(parse_observed_results(&date, &lex(), false).is_err());
    }

    #[test]
    fn builtin_data_loads() {
        let lex = load_dictionary(BUILTIN).unwrap();
        assert_eq!(lex.len(), 4082);
        let (_, missing) = load_frequencies(BUILTIN, &lex).unwrap();
        assert!(missing.is_empty());
    }
}
