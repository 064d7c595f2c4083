//! File formats, model bundles, parallel corpus runs and the command line
//! for Wordle word-difficulty modeling.

pub mod bundle;
pub mod cli;
pub mod error;
pub mod formats;
pub mod parallel;

pub use bundle::ModelBundle;
pub use error::Failure;
