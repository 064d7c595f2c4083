//! Word-difficulty modeling for five-letter Wordle solutions.
//!
//! Simulates a random-but-consistent player to get a raw guess-count
//! distribution, scores how easily a word comes to mind with a letter chain,
//! corrects the simulated distribution toward a predicted expectation, and
//! assigns an ordinal difficulty level from lexical attributes.
//!
//! The crate is `no_std` and needs only `alloc`; file formats, threading and
//! the command line live in the companion `wordle-difficulty` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod associativity;
pub mod distribution;
pub mod error;
pub mod features;
pub mod feedback;
pub mod lexicon;
pub mod numerics;
pub mod pipeline;
pub mod simulator;

pub use associativity::{associativity, build_markov, AssociativityScore, MarkovModel};
pub use distribution::{GuessDistribution, BINS};
pub use error::{Error, Result};
pub use features::{feature_vector, standardize, FeatureVector, Standardization, WindowAggregate};
pub use feedback::{compute_feedback, filter_candidates, is_consistent, Feedback, Mark};
pub use lexicon::{CalendarDate, FrequencyTable, Lexicon, ObservedRecord, Word};
pub use simulator::{play_random_game, Outcome, SimulationReport, Simulator};
