//! The persisted model: everything needed to predict and classify without
//! refitting.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wordle_difficulty_core::pipeline::{reference_level_model, DeviationModel, LevelModel, DEFAULT_ALPHA};
use wordle_difficulty_core::{build_markov, pipeline, standardize, FrequencyTable, Lexicon, MarkovModel, WindowAggregate};

use crate::error::{Failure, Result};
use crate::formats;
use crate::parallel;

pub const SCHEMA_VERSION: u32 = 1;

/// Name that `--bundle` resolves to the shipped published model.
pub const REFERENCE: &str = "reference";
pub const REFERENCE_BUNDLE_JSON: &str = include_str!("../data/reference_bundle.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// SHA-256 of the dictionary, one lowercase word per line.
    pub dictionary_digest: String,
    pub seed: Option<u64>,
    pub reps: Option<u64>,
    pub created: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub schema_version: u32,
    pub markov: MarkovModel,
    pub deviation: DeviationModel,
    pub level: LevelModel,
    pub metadata: Metadata,
}

pub fn dictionary_digest(lex: &Lexicon) -> String {
    Sha256::digest(lex.to_text().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

impl ModelBundle {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Failure::Data(format!(
                "bundle schema version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.markov.validate()?;
        self.deviation.validate()?;
        self.level.validate()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let version = value
            .get("schema_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Failure::Data("bundle has no schema_version".into()))?;
        if version > SCHEMA_VERSION as u64 {
            return Err(Failure::Data(format!(
                "bundle was written with schema version {version}; this build reads up to {SCHEMA_VERSION}"
            )));
        }
        let bundle: ModelBundle = serde_json::from_value(value)?;
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&formats::read_text(path)?).map_err(|e| e.context(path.display()))
    }

    /// A path, or `reference` for the shipped published model.
    pub fn resolve(spec: &str) -> Result<Self> {
        if spec == REFERENCE {
            Self::from_json(REFERENCE_BUNDLE_JSON).map_err(|e| e.context("shipped reference bundle"))
        } else {
            Self::load(Path::new(spec))
        }
    }

    /// A warning when the bundle was built on another dictionary.
    pub fn digest_warning(&self, lex: &Lexicon) -> Option<String> {
        let digest = dictionary_digest(lex);
        (digest != self.metadata.dictionary_digest).then(|| {
            format!(
                "dictionary digest {} differs from the bundle's {}",
                &digest[..12],
                &self.metadata.dictionary_digest[..self.metadata.dictionary_digest.len().min(12)]
            )
        })
    }
}

/// A deviation model that predicts zero, scaled on the whole dictionary.
pub fn zero_deviation(lex: &Lexicon, markov: &MarkovModel, freq: &FrequencyTable) -> Result<DeviationModel> {
    let inputs: Vec<[f64; 2]> = lex.words().iter().map(|w| pipeline::deviation_inputs(w, markov, freq)).collect();
    // a lasso fit to an all-zero response has zero coefficients
    Ok(pipeline::fit_deviation_inputs(&inputs, &vec![0.0; inputs.len()], DEFAULT_ALPHA)?)
}

/// The published level model, with feature scaling fitted on the dictionary.
pub fn reference_levels(
    pool: &rayon::ThreadPool,
    lex: &Lexicon,
    markov: &MarkovModel,
    freq: &FrequencyTable,
) -> Result<LevelModel> {
    let words = lex.words();
    let rows = parallel::all_ok(
        words,
        parallel::feature_table(pool, words, lex, freq, markov, WindowAggregate::Sum),
    )?;
    let (_, standardization) = standardize(&rows)?;
    Ok(reference_level_model(standardization)?)
}

/// Rebuilds the shipped reference bundle from the shipped dictionary and
/// frequencies. `created` is left empty so regeneration is reproducible.
pub fn build_reference_bundle(pool: &rayon::ThreadPool) -> Result<ModelBundle> {
    let lex = formats::load_dictionary(formats::BUILTIN)?;
    let (freq, _) = formats::load_frequencies(formats::BUILTIN, &lex)?;
    let markov = build_markov(&lex, 0.0)?;
    let bundle = ModelBundle {
        schema_version: SCHEMA_VERSION,
        deviation: zero_deviation(&lex, &markov, &freq)?,
        level: reference_levels(pool, &lex, &markov, &freq)?,
        markov,
        metadata: Metadata {
            dictionary_digest: dictionary_digest(&lex),
            seed: None,
            reps: None,
            created: String::new(),
        },
    };
    bundle.validate()?;
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_reference_bundle_loads() {
        let b = ModelBundle::resolve(REFERENCE).unwrap();
        assert_eq!(b.level.ologit.beta, [1.343, 0.823, 0.732, 0.687]);
        assert_eq!(b.level.ologit.cutpoints, [-2.20, -0.32, 2.00]);
        let lex = formats::load_dictionary(formats::BUILTIN).unwrap();
        assert_eq!(b.digest_warning(&lex), None);
    }

    #[test]
    fn round_trip_is_exact() {
        let b = ModelBundle::resolve(REFERENCE).unwrap();
        let again = ModelBundle::from_json(&b.to_json().unwrap()).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn rejects_newer_schema_and_bad_cutpoints() {
        let mut v: serde_json::Value = serde_json::from_str(REFERENCE_BUNDLE_JSON).unwrap();
        v["schema_version"] = 2.into();
        let e = ModelBundle::from_json(&v.to_string()).unwrap_err();
        assert!(e.to_string().contains("schema version 2"), "{e}");
        let mut v: serde_json::Value = serde_json::from_str(REFERENCE_BUNDLE_JSON).unwrap();
        v["level"]["ologit"]["cutpoints"] = serde_json::json!([-2.2, 2.0, -0.32]);
        let e = ModelBundle::from_json(&v.to_string()).unwrap_err();
        assert!(e.to_string().contains("cutpoints"), "{e}");
    }
}
