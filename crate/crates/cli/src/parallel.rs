//! Per-word work spread over a rayon pool. Every word draws from its own
//! random stream, so results do not depend on the thread count.

use rayon::prelude::*;
use wordle_difficulty_core::{
    feature_vector, FeatureVector, FrequencyTable, Lexicon, MarkovModel, Result, SimulationReport, Simulator,
    WindowAggregate, Word,
};

use crate::error::Failure;

/// `None` uses the available parallelism; `Some(1)` runs serially.
pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start worker threads: {e}")))
}

pub fn simulate_corpus(
    pool: &rayon::ThreadPool,
    sim: &Simulator,
    words: &[Word],
    reps: u64,
    seed: u64,
    allow_oov: bool,
) -> Vec<Result<SimulationReport>> {
    pool.install(|| words.par_iter().map(|w| sim.simulate_word(w, reps, seed, allow_oov)).collect())
}

pub fn feature_table(
    pool: &rayon::ThreadPool,
    words: &[Word],
    lex: &Lexicon,
    freq: &FrequencyTable,
    markov: &MarkovModel,
    aggregate: WindowAggregate,
) -> Vec<Result<FeatureVector>> {
    pool.install(|| {
        words
            .par_iter()
            .map(|w| feature_vector(w, lex, freq, markov, aggregate))
            .collect()
    })
}

/// Collects per-word results, failing on the first error with the word named.
pub fn all_ok<T>(words: &[Word], results: Vec<Result<T>>) -> Result<Vec<T>, Failure> {
    words
        .iter()
        .zip(results)
        .map(|(w, r)| r.map_err(|e| Failure::from(e).context(w)))
        .collect()
}
